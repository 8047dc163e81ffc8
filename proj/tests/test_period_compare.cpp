/*
 * Copyright 2026 The Procurisk Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "procurisk/period_compare.hpp"
#include "support/synth.hpp"

using namespace procurisk;

TEST(Boxplot, OutlierFixture) {
  const BoxplotSummary b = boxplot_summary({1, 2, 3, 4, 100});
  EXPECT_EQ(b.q1, 2.0);
  EXPECT_EQ(b.median, 3.0);
  EXPECT_EQ(b.q3, 4.0);
  EXPECT_EQ(b.lower_whisker, 1.0);
  EXPECT_EQ(b.upper_whisker, 4.0);
}

TEST(Boxplot, TypeSevenInterpolation) {
  const BoxplotSummary b = boxplot_summary({6, 5, 4, 3, 2, 1});
  EXPECT_DOUBLE_EQ(b.q1, 2.25);
  EXPECT_DOUBLE_EQ(b.q3, 4.75);
  EXPECT_DOUBLE_EQ(b.median, 3.5);
}

TEST(Boxplot, ConstantAndErrors) {
  const BoxplotSummary b = boxplot_summary({0.3, 0.3, 0.3});
  for (double v : {b.q1, b.median, b.q3, b.lower_whisker, b.upper_whisker}) {
    EXPECT_EQ(v, 0.3);
  }
  EXPECT_THROW(boxplot_summary({1.0}), DomainError);
  const BoxplotSummary raw = boxplot_summary({1, 2, 3, 4, 100}, 1.5, FenceMode::RawMinMax);
  EXPECT_EQ(raw.upper_whisker, 100.0);
}

TEST(Boxplot, WhiskersAreDataAndOrdered) {
  std::mt19937_64 rng(4);
  std::cauchy_distribution<double> heavy;
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> v(2 + t % 12);
    for (auto& x : v) x = heavy(rng);
    const BoxplotSummary b = boxplot_summary(v);
    ASSERT_NE(std::find(v.begin(), v.end(), b.lower_whisker), v.end());
    ASSERT_NE(std::find(v.begin(), v.end(), b.upper_whisker), v.end());
    const double iqr = b.q3 - b.q1;
    double lo = INFINITY, hi = -INFINITY;
    for (double x : v) {
      if (x >= b.q1 - 1.5 * iqr) lo = std::min(lo, x);
      if (x <= b.q3 + 1.5 * iqr) hi = std::max(hi, x);
    }
    ASSERT_EQ(b.lower_whisker, lo);
    ASSERT_EQ(b.upper_whisker, hi);
    ASSERT_LE(b.q1, b.median);
    ASSERT_LE(b.median, b.q3);
    // Interpolated quartiles can pass the last in-fence point on tiny samples.
    const auto reaches = [&](double from, double to) {
      return std::any_of(v.begin(), v.end(), [&](double x) { return x >= from && x <= to; });
    };
    if (reaches(b.q3, b.q3 + 1.5 * iqr)) {
      ASSERT_LE(b.q3, b.upper_whisker);
    }
    if (reaches(b.q1 - 1.5 * iqr, b.q1)) {
      ASSERT_LE(b.lower_whisker, b.q1);
    }
  }
}

TEST(Boxplot, WhiskerInsideBoxOnTinySample) {
  const BoxplotSummary b = boxplot_summary({0, 0, 0, 1});
  EXPECT_EQ(b.q3, 0.25);
  EXPECT_EQ(b.upper_whisker, 0.0);
}

TEST(DummyVerdict, Examples) {
  const std::vector<double> first{0.2, 0.21, 0.19, 0.22, 0.2, 0.18};
  EXPECT_EQ(dummy_period_verdict(first, 0.9).verdict, Verdict::Different);
  EXPECT_EQ(dummy_period_verdict(first, 0.20).verdict, Verdict::Similar);
  const BoxplotSummary b = boxplot_summary(first);
  EXPECT_EQ(dummy_period_verdict(first, b.upper_whisker).verdict, Verdict::Similar);
  EXPECT_EQ(dummy_period_verdict(first, b.lower_whisker).verdict, Verdict::Similar);
  EXPECT_EQ(dummy_period_verdict(first, std::nextafter(b.upper_whisker, 1.0)).verdict,
            Verdict::Different);
}

TEST(CiBand, MultiplierForSixCurves) {
  EXPECT_NEAR(ci_multiplier(0.99, 6), 4.0321, 0.0005);
  EXPECT_THROW(ci_multiplier(0.99, 1), DomainError);
  EXPECT_THROW(ci_multiplier(1.0, 6), DomainError);
}

TEST(CiBand, IdenticalCurvesGiveZeroWidth) {
  const std::vector<double> curve{0.0, 0.25, 0.5, 1.0};
  const CdfBand band = pointwise_ci_band(std::vector(6, curve), {1, 2, 3, 4});
  for (std::size_t k = 0; k < curve.size(); ++k) {
    EXPECT_EQ(band.lower[k], curve[k]);
    EXPECT_EQ(band.upper[k], curve[k]);
  }
  EXPECT_EQ(cdf_coverage(curve, band), 0.0);
}

TEST(CiBand, HandComputedBounds) {
  // Values 0.1, 0.2, 0.3 at one point: mean 0.2, sd 0.1.
  const CdfBand band = pointwise_ci_band({{0.1}, {0.2}, {0.3}}, {0.0}, 0.95);
  const double half = 4.302652729749464 * 0.1 / std::sqrt(3.0);
  EXPECT_NEAR(band.mean[0], 0.2, 1e-15);
  EXPECT_NEAR(band.lower[0], 0.0, 1e-15);  // clamped
  EXPECT_NEAR(band.upper[0], 0.2 + half, 1e-12);
}

TEST(CiBand, PropertiesOnRandomCurves) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> n01;
  for (int t = 0; t < 100; ++t) {
    std::vector<EmpiricalCdf> curves;
    std::vector<double> pooled;
    for (int y = 0; y < 6; ++y) {
      std::vector<double> s(20 + t);
      for (auto& v : s) v = n01(rng) + 0.2 * y;
      pooled.insert(pooled.end(), s.begin(), s.end());
      curves.emplace_back(std::move(s));
    }
    const auto grid = quantile_grid(pooled, 50);
    ASSERT_TRUE(std::is_sorted(grid.begin(), grid.end()));
    const CdfBand wide = pointwise_ci_band(std::span<const EmpiricalCdf>(curves), grid, 0.99);
    const CdfBand narrow = pointwise_ci_band(std::span<const EmpiricalCdf>(curves), grid, 0.95);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      ASSERT_LE(wide.lower[k], wide.mean[k]);
      ASSERT_LE(wide.mean[k], wide.upper[k]);
      ASSERT_GE(wide.lower[k], 0.0);
      ASSERT_LE(wide.upper[k], 1.0);
      ASSERT_LE(wide.lower[k], narrow.lower[k]);
      ASSERT_GE(wide.upper[k], narrow.upper[k]);
    }
    ASSERT_EQ(cdf_coverage(wide.mean, wide), 0.0);
    for (const auto& c : curves) {
      const double cov = cdf_coverage(c, wide);
      ASSERT_GE(cov, 0.0);
      ASSERT_LE(cov, 1.0);
    }
  }
}

TEST(Coverage, Examples) {
  CdfBand band;
  for (int k = 0; k < 100; ++k) {
    band.grid.push_back(k);
    band.mean.push_back(0.5);
    band.lower.push_back(0.4);
    band.upper.push_back(0.6);
  }
  std::vector<double> above(100, 0.61);
  EXPECT_EQ(cdf_coverage(above, band), 1.0);
  std::vector<double> partial(100, 0.5);
  for (int k = 0; k < 30; ++k) partial[k] = 0.9;
  const double cov = cdf_coverage(partial, band);
  EXPECT_DOUBLE_EQ(cov, 0.30);
  EXPECT_EQ(verdict_for_coverage(cov), Verdict::Different);
  EXPECT_EQ(verdict_for_coverage(0.25), Verdict::Different);
  EXPECT_EQ(verdict_for_coverage(0.2499), Verdict::Similar);
  std::vector<double> edge(100, 0.6);
  EXPECT_EQ(cdf_coverage(edge, band), 0.0);
  EXPECT_THROW(cdf_coverage(std::vector<double>(3, 0.5), band), DomainError);
}

TEST(Coverage, GridRefinementStability) {
  // Step curves that only jump at integers, compared on an integer grid and
  // on the grid with midpoints added.
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> pt(0, 39);
  for (int t = 0; t < 200; ++t) {
    std::vector<EmpiricalCdf> curves;
    for (int y = 0; y < 6; ++y) {
      std::vector<double> s(15);
      for (auto& v : s) v = pt(rng);
      curves.emplace_back(std::move(s));
    }
    std::vector<double> probe(15);
    for (auto& v : probe) v = pt(rng) + (t % 3);
    const EmpiricalCdf second(probe);
    std::vector<double> coarse, fine;
    for (int k = 0; k < 40; ++k) {
      coarse.push_back(k);
      fine.push_back(k);
      if (k + 1 < 40) fine.push_back(k + 0.5);
    }
    const auto span = std::span<const EmpiricalCdf>(curves);
    const double a = cdf_coverage(second, pointwise_ci_band(span, coarse));
    const double b = cdf_coverage(second, pointwise_ci_band(span, fine));
    ASSERT_LE(std::fabs(a - b), 1.0 / 40.0 + 1e-15);
  }
}

TEST(YearlyFractions, ExamplesAndOmission) {
  std::vector<AnnotatedContract> cs(4);
  for (int i = 0; i < 4; ++i) {
    cs[i].contract.year = i < 2 ? 2015 : 2014;
    cs[i].contract.pt = ProcedureType::AD;
    cs[i].contract.size = SupplierSize::MED;
  }
  const std::vector<int> years{2014, 2015, 2016};
  Diagnostics diag;
  const auto ad = yearly_dummy_fractions(cs, find_dummy("PT.AD"), years, &diag);
  EXPECT_EQ(ad.at(2015), 1.0);
  EXPECT_EQ(ad.count(2016), 0u);
  EXPECT_EQ(diag.warnings.size(), 1u);
  const auto mic = yearly_dummy_fractions(cs, find_dummy("S.MIC"), years);
  EXPECT_EQ(mic.at(2014), 0.0);
}

TEST(ComparePeriods, PlantedVariablesDetected) {
  for (std::uint64_t seed : {11u, 12u}) {
    synth::PlantedOptions opt;
    opt.first_contracts = 2000;
    opt.second_contracts = 4000;
    const auto planted = synth::planted_corpus(seed, opt);
    const ContractView view = select(planted.contracts, [](const auto&) { return true; });
    const PeriodComparison pc =
        compare_periods(view, PeriodConfig{}, all_dummy_variables(), all_numeric_variables());
    ASSERT_EQ(pc.dummies.size(), dummy_variables().size());
    ASSERT_EQ(pc.numerics.size(), numeric_variables().size());
    for (const auto& panel : pc.dummies) {
      ASSERT_EQ(panel.verdicts.size(), 2u);
      if (panel.variable == planted.planted_dummy) {
        for (const auto& v : panel.verdicts) EXPECT_EQ(v.verdict, Verdict::Different);
      }
    }
    for (const auto& panel : pc.numerics) {
      ASSERT_EQ(panel.band.grid.size(), 200u);
      if (panel.variable == planted.planted_numeric) {
        for (const auto& v : panel.verdicts) {
          EXPECT_EQ(v.verdict, Verdict::Different);
          EXPECT_GT(v.coverage_outside, 0.5);
        }
      }
    }
  }
}
