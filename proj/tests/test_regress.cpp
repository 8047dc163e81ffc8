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

#include <cmath>
#include <random>
#include <sstream>

#include "procurisk/regress.hpp"
#include "support/oracles.hpp"

using namespace procurisk;

namespace {

struct Dataset {
  std::vector<std::vector<double>> x;  // row-major
  std::vector<double> y;
  std::vector<double> w;

  std::vector<YearlyObservation> observations() const {
    std::vector<YearlyObservation> out;
    for (std::size_t i = 0; i < y.size(); ++i) {
      out.push_back({2000 + static_cast<int>(i), x[i], y[i], w[i]});
    }
    return out;
  }
  std::vector<double> column(std::size_t j) const {
    std::vector<double> c;
    for (const auto& row : x) c.push_back(row[j]);
    return c;
  }
};

Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> wt(1.0, 200.0);
  std::normal_distribution<double> noise(0.0, 0.05);
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row;
    double y = 0.3;
    for (std::size_t j = 0; j < p; ++j) {
      row.push_back(u(rng));
      y += (j % 2 ? -0.7 : 1.3) * row.back();
    }
    d.x.push_back(row);
    d.y.push_back(y + noise(rng));
    d.w.push_back(std::round(wt(rng)));
  }
  return d;
}

double weighted_corr(const std::vector<double>& a, const std::vector<double>& b,
                     const std::vector<double>& w) {
  const double ma = oracle::weighted_mean(a, w);
  const double mb = oracle::weighted_mean(b, w);
  long double s = 0, sw = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += w[i] * (a[i] - ma) * (b[i] - mb);
    sw += w[i];
  }
  return static_cast<double>(s / sw) /
         std::sqrt(oracle::weighted_var(a, w) * oracle::weighted_var(b, w));
}

void expect_rel(double actual, double expected, double scale, double tol = 1e-10) {
  EXPECT_LE(std::fabs(actual - expected), tol * std::max(1.0, scale))
      << actual << " vs " << expected;
}

}  // namespace

TEST(WlsFit, TwoPointsInterpolate) {
  const FitResult f = wls_fit({{1, {0.0}, 1.0, 3.0}, {2, {1.0}, 3.0, 5.0}});
  EXPECT_NEAR(f.coefficients[0], 1.0, 1e-14);
  EXPECT_NEAR(f.coefficients[1], 2.0, 1e-14);
  EXPECT_DOUBLE_EQ(f.r_squared, 1.0);
  EXPECT_EQ(f.df, 0);
  EXPECT_TRUE(std::isnan(f.std_errors[1]));
}

TEST(WlsFit, IdentityData) {
  std::vector<YearlyObservation> obs;
  for (int i = 0; i < 6; ++i) obs.push_back({2013 + i, {0.1 * i}, 0.1 * i, 1.0 + i});
  const FitResult f = wls_fit(obs);
  EXPECT_NEAR(f.coefficients[0], 0.0, 1e-14);
  EXPECT_NEAR(f.coefficients[1], 1.0, 1e-13);
  EXPECT_NEAR(f.standardized[0], 1.0, 1e-13);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-13);
  EXPECT_EQ(f.mean_vif, 1.0);
  EXPECT_EQ(f.names[0], "(Intercept)");
}

TEST(WlsFit, EqualWeightsMatchOrdinaryLeastSquares) {
  // OLS by hand: x = 1..5, y = {2, 4, 5, 4, 5}; slope 0.6, intercept 2.2.
  std::vector<YearlyObservation> obs;
  const double ys[] = {2, 4, 5, 4, 5};
  for (int i = 0; i < 5; ++i) obs.push_back({i, {double(i + 1)}, ys[i], 7.0});
  const FitResult f = wls_fit(obs);
  EXPECT_NEAR(f.coefficients[0], 2.2, 1e-13);
  EXPECT_NEAR(f.coefficients[1], 0.6, 1e-13);
  EXPECT_NEAR(f.r_squared, 0.6, 1e-13);
  // Residual variance 2.4/3, Sxx = 10.
  EXPECT_NEAR(f.std_errors[1], std::sqrt(0.8 / 10.0), 1e-13);
  EXPECT_EQ(f.df, 3);
  EXPECT_GT(f.p_values[1], 0.0);
  EXPECT_LT(f.p_values[1], 1.0);
}

TEST(WlsFit, Errors) {
  std::vector<YearlyObservation> constant;
  for (int i = 0; i < 5; ++i) constant.push_back({i, {0.5}, 0.1 * i, 1.0});
  EXPECT_THROW(wls_fit(constant), SingularDesignError);
  std::vector<YearlyObservation> bad_weight{{0, {0.1}, 0.1, 1.0}, {1, {0.2}, 0.3, 0.0},
                                            {2, {0.4}, 0.2, 1.0}};
  EXPECT_THROW(wls_fit(bad_weight), DomainError);
  EXPECT_THROW(wls_fit({{0, {0.1}, 0.1, 1.0}}), DomainError);
  EXPECT_THROW(wls_fit({}), DomainError);
}

TEST(WlsFit, NormalEquationOracle) {
  std::mt19937_64 rng(404);
  for (int t = 0; t < 100; ++t) {
    const std::size_t p = 1 + t % 3;
    const Dataset d = random_dataset(rng, 8 + t % 20, p);
    const FitResult f = wls_fit(d.observations());
    const auto beta = oracle::wls_normal_equations(d.x, d.y, d.w);
    double scale = 0;
    for (double b : beta) scale = std::max(scale, std::fabs(b));
    for (std::size_t j = 0; j <= p; ++j) expect_rel(f.coefficients[j], beta[j], scale);
    expect_rel(f.r_squared, oracle::weighted_r2(d.x, d.y, d.w, beta), 1.0);
    const double sy = std::sqrt(oracle::weighted_var(d.y, d.w));
    for (std::size_t j = 0; j < p; ++j) {
      const double sx = std::sqrt(oracle::weighted_var(d.column(j), d.w));
      expect_rel(f.standardized[j], beta[j + 1] * sx / sy, std::fabs(beta[j + 1] * sx / sy));
    }
    EXPECT_GE(f.r_squared, 0.0);
    EXPECT_LE(f.r_squared, 1.0);
    EXPECT_GE(f.mean_vif, 1.0);
    for (double pv : f.p_values) {
      EXPECT_GE(pv, 0.0);
      EXPECT_LE(pv, 1.0);
    }
  }
}

TEST(WlsFit, WeightScalingInvariance) {
  std::mt19937_64 rng(55);
  for (int t = 0; t < 50; ++t) {
    Dataset d = random_dataset(rng, 10, 2);
    const FitResult a = wls_fit(d.observations());
    for (auto& w : d.w) w *= 37.5;
    const FitResult b = wls_fit(d.observations());
    for (std::size_t j = 0; j < a.coefficients.size(); ++j) {
      expect_rel(b.coefficients[j], a.coefficients[j], std::fabs(a.coefficients[j]), 1e-11);
      expect_rel(b.std_errors[j], a.std_errors[j], std::fabs(a.std_errors[j]), 1e-10);
    }
    for (std::size_t j = 0; j < a.standardized.size(); ++j) {
      expect_rel(b.standardized[j], a.standardized[j], 1.0, 1e-11);
    }
    expect_rel(b.r_squared, a.r_squared, 1.0, 1e-11);
    expect_rel(b.mean_vif, a.mean_vif, a.mean_vif, 1e-11);
  }
}

TEST(WlsFit, StandardizedSlopeIsWeightedCorrelation) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const Dataset d = random_dataset(rng, 8, 1);
    const FitResult f = wls_fit(d.observations());
    const double r = weighted_corr(d.column(0), d.y, d.w);
    EXPECT_NEAR(f.standardized[0], r, 1e-12);
    EXPECT_NEAR(weighted_correlation(d.column(0), d.y, d.w), r, 1e-12);
    EXPECT_NEAR(f.r_squared, r * r, 1e-12);
  }
}

TEST(WlsFit, ResidualOrthogonality) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    const Dataset d = random_dataset(rng, 12, 2);
    const FitResult f = wls_fit(d.observations());
    long double sum_r = 0, sum_rx0 = 0, sum_rx1 = 0, sw = 0;
    for (std::size_t i = 0; i < d.y.size(); ++i) {
      const double r = d.y[i] - (f.coefficients[0] + f.coefficients[1] * d.x[i][0] +
                                 f.coefficients[2] * d.x[i][1]);
      sum_r += d.w[i] * r;
      sum_rx0 += d.w[i] * r * d.x[i][0];
      sum_rx1 += d.w[i] * r * d.x[i][1];
      sw += d.w[i];
    }
    EXPECT_LE(std::fabs(double(sum_r / sw)), 1e-9);
    EXPECT_LE(std::fabs(double(sum_rx0 / sw)), 1e-9);
    EXPECT_LE(std::fabs(double(sum_rx1 / sw)), 1e-9);
  }
}

TEST(Vif, Examples) {
  const std::vector<double> w(4, 1.0);
  EXPECT_NEAR(mean_vif({{1, -1, 1, -1}, {1, 1, -1, -1}}, w).mean, 1.0, 1e-14);
  EXPECT_EQ(mean_vif({{1, 2, 3, 4}}, w).mean, 1.0);
  const VifResult collinear = mean_vif({{1, 2, 3, 4}, {2, 4, 6, 8}}, w);
  EXPECT_TRUE(collinear.infinite);
  EXPECT_TRUE(std::isinf(collinear.mean));
  // x2 = x1 + e with Var(x1) = 1 and Var(e) = 1/3 gives r^2 = 0.75.
  const std::vector<double> x1{1, -1, 1, -1, 1, -1};
  const double e = std::sqrt(1.0 / 3.0);
  const std::vector<double> x2{1 + e, -1 + e, 1 - e, -1 - e, 1, -1};
  // e has zero mean and is orthogonal to x1; its variance is 4e^2/6 = 2/9.
  const double r2 = 1.0 / (1.0 + 2.0 / 9.0);
  EXPECT_NEAR(mean_vif({x1, x2}, std::vector<double>(6, 1.0)).mean, 1.0 / (1.0 - r2), 1e-12);
}

TEST(Vif, TwoPredictorsMatchCorrelation) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 100; ++t) {
    const Dataset d = random_dataset(rng, 8 + t % 10, 2);
    const double r = weighted_corr(d.column(0), d.column(1), d.w);
    const double vif = mean_vif({d.column(0), d.column(1)}, d.w).mean;
    EXPECT_LE(std::fabs(vif - 1.0 / (1.0 - r * r)), 1e-10 * vif);
  }
}

TEST(Screening, VifCutoff) {
  auto model = [](double vif, bool inf = false) {
    NamedModel m;
    m.fit.mean_vif = vif;
    m.fit.vif_infinite = inf;
    return m;
  };
  const auto kept = screening_report({model(4.39), model(6.0), model(5.0),
                                      model(INFINITY, true), model(1.0)});
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].fit.mean_vif, 4.39);
  EXPECT_EQ(kept[1].fit.mean_vif, 1.0);
  EXPECT_TRUE(screening_report({}).empty());
}

TEST(Screening, WideTableShape) {
  NamedModel m;
  m.predictors = {"RAD>=0.5", "CT.ADQ"};
  m.fit.standardized = {0.81, -0.2};
  m.fit.standardized_std_errors = {0.1, 0.05};
  m.fit.r_squared = 0.7;
  m.fit.mean_vif = 1.5;
  std::ostringstream out;
  write_model_table(out, {m});
  EXPECT_EQ(out.str(),
            "Variable,1\nRAD>=0.5,0.81 (0.100)\nCT.ADQ,-0.20 (0.050)\nR2,0.70\nVIF,1.50\n");
}

namespace {

AnnotatedContract contract(int year, ClassLabel label, bool ad, double rad) {
  AnnotatedContract a;
  a.contract.year = year;
  a.contract.pt = ad ? ProcedureType::AD : ProcedureType::LP;
  a.label = label;
  a.factors.rad = rad;
  return a;
}

}  // namespace

TEST(YearlyDataset, WeightsAndExclusion) {
  std::vector<AnnotatedContract> cs;
  for (int year = 2013; year <= 2020; ++year) {
    // Class contracts all have high RAD; one of four is single-bidder.
    for (int i = 0; i < 40; ++i) cs.push_back(contract(year, ClassLabel::EFOS, i % 4 == 0, 0.9));
    for (int i = 0; i < 10; ++i) cs.push_back(contract(year, ClassLabel::NC, false, i < 3 ? 0.6 : 0.1));
  }
  const auto reg = factor_regressor(FactorPredicate::single(Factor::RAD, 0.5));
  EXPECT_EQ(reg.name, "RAD>=0.5");
  const auto with = build_yearly_dataset(cs, ClassLabel::EFOS, find_dummy("PT.AD"), {reg});
  ASSERT_EQ(with.size(), 8u);
  for (const auto& o : with) {
    EXPECT_EQ(o.weight, 40.0);
    EXPECT_EQ(o.y, 0.25);
    EXPECT_DOUBLE_EQ(o.x[0], 0.3);
  }
  const auto without =
      build_yearly_dataset(cs, ClassLabel::EFOS, find_dummy("PT.AD"), {reg}, false);
  EXPECT_DOUBLE_EQ(without[0].x[0], 43.0 / 50.0);
}

TEST(YearlyDataset, TooFewYears) {
  std::vector<AnnotatedContract> cs;
  for (int year = 2013; year <= 2014; ++year) {
    cs.push_back(contract(year, ClassLabel::EFOS, true, 0.9));
    cs.push_back(contract(year, ClassLabel::NC, true, 0.9));
  }
  const auto reg = factor_regressor(FactorPredicate::single(Factor::RAD, 0.5));
  EXPECT_THROW(build_yearly_dataset(cs, ClassLabel::EFOS, find_dummy("PT.AD"), {reg}),
               DomainError);
  // A third year with only class contracts is dropped with a warning.
  cs.push_back(contract(2015, ClassLabel::EFOS, true, 0.9));
  Diagnostics diag;
  EXPECT_THROW(build_yearly_dataset(cs, ClassLabel::EFOS, find_dummy("PT.AD"), {reg}, true, &diag),
               DomainError);
  EXPECT_EQ(diag.warnings.size(), 1u);
}

TEST(Regressors, JointName) {
  EXPECT_EQ(factor_regressor(FactorPredicate::joint(5, 10000)).name, "CPW>=5&SPW>=10000");
  EXPECT_EQ(dummy_regressor(find_dummy("S.MIC")).name, "S.MIC");
}
