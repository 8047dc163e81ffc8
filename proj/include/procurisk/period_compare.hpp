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

// Between-period comparison of one contract class.
//
// Dummy variables: the yearly fractions of the first period are summarized
// by a boxplot; a second-period year is Different when its fraction falls
// strictly outside the whiskers.
//
// Numeric variables: the yearly empirical CDFs of the first period are
// evaluated on a grid and a pointwise Student-t interval
// mean +- t_{(1+level)/2, n-1} * sd / sqrt(n) is formed across years. A
// second-period year is Different when at least 25% of its grid values lie
// strictly outside that band.
//
// The grid is the set of empirical quantiles of the pooled first-period
// sample at evenly spaced probabilities k / (G - 1), k = 0..G-1, so
// coverage is weighted by where observations live.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "procurisk/classify.hpp"
#include "procurisk/error.hpp"
#include "procurisk/stats.hpp"
#include "procurisk/sum.hpp"
#include "procurisk/variables.hpp"

namespace procurisk {

// Linear interpolation between order statistics: h = (n - 1) p.
inline double quantile_type7(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

enum class FenceMode { Whisker, RawMinMax };

struct BoxplotSummary {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double lower_whisker = 0.0;
  double upper_whisker = 0.0;
  double range_coefficient = 1.5;
};

inline BoxplotSummary boxplot_summary(std::vector<double> values,
                                      double range_coefficient = 1.5,
                                      FenceMode mode = FenceMode::Whisker) {
  if (values.size() < 2) throw DomainError("boxplot needs at least 2 values");
  std::sort(values.begin(), values.end());
  BoxplotSummary b;
  b.range_coefficient = range_coefficient;
  b.q1 = quantile_type7(values, 0.25);
  b.median = quantile_type7(values, 0.5);
  b.q3 = quantile_type7(values, 0.75);
  if (mode == FenceMode::RawMinMax) {
    b.lower_whisker = values.front();
    b.upper_whisker = values.back();
    return b;
  }
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - range_coefficient * iqr;
  const double hi_fence = b.q3 + range_coefficient * iqr;
  b.lower_whisker = *std::lower_bound(values.begin(), values.end(), lo_fence);
  b.upper_whisker = *(std::upper_bound(values.begin(), values.end(), hi_fence) - 1);
  return b;
}

enum class Verdict { Similar, Different };

constexpr std::string_view to_string(Verdict v) {
  return v == Verdict::Different ? "Different" : "Similar";
}

inline constexpr double kCoverageCutoff = 0.25;

struct PeriodVerdict {
  std::string variable;
  int year = 0;
  double coverage_outside = 0.0;
  Verdict verdict = Verdict::Similar;
};

inline Verdict verdict_for_coverage(double coverage_outside,
                                    double cutoff = kCoverageCutoff) {
  return coverage_outside >= cutoff ? Verdict::Different : Verdict::Similar;
}

// Whisker equality counts as inside.
inline PeriodVerdict dummy_period_verdict(std::span<const double> first_period,
                                          double second_fraction,
                                          FenceMode mode = FenceMode::Whisker,
                                          double range_coefficient = 1.5) {
  const BoxplotSummary b = boxplot_summary(
      std::vector<double>(first_period.begin(), first_period.end()),
      range_coefficient, mode);
  PeriodVerdict v;
  const bool outside =
      second_fraction < b.lower_whisker || second_fraction > b.upper_whisker;
  v.coverage_outside = outside ? 1.0 : 0.0;
  v.verdict = outside ? Verdict::Different : Verdict::Similar;
  return v;
}

// Two-sided Student-t multiplier for `n` curves at confidence `level`.
inline double ci_multiplier(double level, std::size_t n) {
  if (n < 2) throw DomainError("confidence band needs at least 2 curves");
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("confidence level must lie in (0, 1)");
  }
  boost::math::students_t dist(static_cast<double>(n - 1));
  return boost::math::quantile(dist, 0.5 + level / 2.0);
}

struct CdfBand {
  std::vector<double> grid;
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
  double level = 0.99;
  std::size_t curves = 0;
};

// `curve_values[c][g]` is curve c evaluated at grid point g.
inline CdfBand pointwise_ci_band(const std::vector<std::vector<double>>& curve_values,
                                 std::vector<double> grid, double level = 0.99) {
  const std::size_t n = curve_values.size();
  const double t = ci_multiplier(level, n);
  CdfBand band;
  band.level = level;
  band.curves = n;
  const std::size_t g = grid.size();
  band.mean.resize(g);
  band.lower.resize(g);
  band.upper.resize(g);
  for (const auto& curve : curve_values) {
    if (curve.size() != g) throw DomainError("curve not evaluated on the grid");
  }
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k < g; ++k) {
    CompensatedSum sum;
    for (const auto& curve : curve_values) sum.add(curve[k]);
    const double mean = sum.value() / nn;
    CompensatedSum sq;
    for (const auto& curve : curve_values) {
      const double d = curve[k] - mean;
      sq.add(d * d);
    }
    const double sd = std::sqrt(sq.value() / (nn - 1.0));
    const double half = t * sd / std::sqrt(nn);
    band.mean[k] = mean;
    band.lower[k] = std::clamp(mean - half, 0.0, 1.0);
    band.upper[k] = std::clamp(mean + half, 0.0, 1.0);
  }
  band.grid = std::move(grid);
  return band;
}

inline std::vector<double> evaluate_on(const EmpiricalCdf& cdf,
                                       std::span<const double> grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double x : grid) out.push_back(cdf(x));
  return out;
}

inline CdfBand pointwise_ci_band(std::span<const EmpiricalCdf> curves,
                                 std::vector<double> grid, double level = 0.99) {
  std::vector<std::vector<double>> values;
  values.reserve(curves.size());
  for (const auto& c : curves) values.push_back(evaluate_on(c, grid));
  return pointwise_ci_band(values, std::move(grid), level);
}

// Fraction of grid points where the curve lies strictly outside the band.
inline double cdf_coverage(std::span<const double> curve_values,
                           const CdfBand& band) {
  if (curve_values.size() != band.grid.size()) {
    throw DomainError("curve not evaluated on the band grid");
  }
  if (band.grid.empty()) return 0.0;
  std::size_t outside = 0;
  for (std::size_t k = 0; k < curve_values.size(); ++k) {
    if (curve_values[k] < band.lower[k] || curve_values[k] > band.upper[k]) {
      ++outside;
    }
  }
  return static_cast<double>(outside) / static_cast<double>(band.grid.size());
}

inline double cdf_coverage(const EmpiricalCdf& curve, const CdfBand& band) {
  const std::vector<double> values = evaluate_on(curve, band.grid);
  return cdf_coverage(values, band);
}

// Empirical type-7 quantiles of `pooled` at k / (size - 1).
inline std::vector<double> quantile_grid(std::vector<double> pooled,
                                         std::size_t size) {
  if (pooled.empty()) throw DomainError("grid from an empty sample");
  if (size < 2) throw DomainError("grid needs at least 2 points");
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> grid;
  grid.reserve(size);
  for (std::size_t k = 0; k < size; ++k) {
    grid.push_back(quantile_type7(
        pooled, static_cast<double>(k) / static_cast<double>(size - 1)));
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Per-class driver.

struct PeriodCompareOptions {
  double ci_level = 0.99;
  std::size_t grid_size = 200;
  double coverage_cutoff = kCoverageCutoff;
  FenceMode fence = FenceMode::Whisker;
  double range_coefficient = 1.5;
};

// Fraction of contracts per year with the dummy present. Years in `years`
// without contracts are omitted with a warning.
template <typename Range>
std::map<int, double> yearly_dummy_fractions(const Range& contracts,
                                             const DummyVariable& var,
                                             std::span<const int> years,
                                             Diagnostics* diag = nullptr) {
  std::map<int, std::pair<std::size_t, std::size_t>> counts;
  for (const AnnotatedContract& a : contracts) {
    auto& [k, n] = counts[a.contract.year];
    ++n;
    if (var.present(a.contract)) ++k;
  }
  std::map<int, double> out;
  for (int year : years) {
    auto it = counts.find(year);
    if (it == counts.end() || it->second.second == 0) {
      if (diag) {
        diag->warn(std::string(var.name) + ": no contracts in " +
                   std::to_string(year) + "; year omitted");
      }
      continue;
    }
    out[year] = static_cast<double>(it->second.first) /
                static_cast<double>(it->second.second);
  }
  return out;
}

struct DummyPeriodPanel {
  std::string variable;
  std::map<int, double> fractions;  // all years with data
  BoxplotSummary box;
  std::vector<PeriodVerdict> verdicts;  // one per second-period year
};

struct NumericPeriodPanel {
  std::string variable;
  CdfBand band;
  std::map<int, std::vector<double>> second_curves;  // year -> values on grid
  std::vector<PeriodVerdict> verdicts;
};

struct PeriodComparison {
  std::vector<DummyPeriodPanel> dummies;
  std::vector<NumericPeriodPanel> numerics;
};

inline std::vector<int> years_of(const YearRange& r) {
  std::vector<int> out;
  for (int y = r.first; y <= r.last; ++y) out.push_back(y);
  return out;
}

// Compares the second period against the first for one class.
inline PeriodComparison compare_periods(
    const ContractView& class_contracts, const PeriodConfig& periods,
    const std::vector<const DummyVariable*>& dummy_vars,
    const std::vector<const NumericVariable*>& numeric_vars,
    const PeriodCompareOptions& opt = {}, Diagnostics* diag = nullptr,
    std::string_view label = "class") {
  const std::vector<int> first_years = years_of(periods.first);
  const std::vector<int> second_years = years_of(periods.second);

  std::map<int, ContractView> by_year;
  for (const AnnotatedContract& a : class_contracts) {
    by_year[a.contract.year].push_back(std::cref(a));
  }

  PeriodComparison out;
  for (const DummyVariable* var : dummy_vars) {
    std::vector<int> all_years = first_years;
    all_years.insert(all_years.end(), second_years.begin(), second_years.end());
    DummyPeriodPanel panel;
    panel.variable = std::string(var->name);
    panel.fractions = yearly_dummy_fractions(class_contracts, *var, all_years, diag);
    std::vector<double> first;
    for (int y : first_years) {
      if (auto it = panel.fractions.find(y); it != panel.fractions.end()) {
        first.push_back(it->second);
      }
    }
    if (first.size() < 2) {
      if (diag) {
        diag->warn(std::string(label) + " " + panel.variable +
                   ": fewer than 2 first-period years; skipped");
      }
      continue;
    }
    panel.box = boxplot_summary(first, opt.range_coefficient, opt.fence);
    for (int y : second_years) {
      auto it = panel.fractions.find(y);
      if (it == panel.fractions.end()) continue;
      PeriodVerdict v = dummy_period_verdict(first, it->second, opt.fence,
                                             opt.range_coefficient);
      v.variable = panel.variable;
      v.year = y;
      panel.verdicts.push_back(std::move(v));
    }
    out.dummies.push_back(std::move(panel));
  }

  for (const NumericVariable* var : numeric_vars) {
    std::vector<EmpiricalCdf> first_curves;
    std::vector<double> pooled;
    for (int y : first_years) {
      auto it = by_year.find(y);
      if (it == by_year.end() || it->second.empty()) continue;
      std::vector<double> sample = sample_numeric(it->second, *var);
      pooled.insert(pooled.end(), sample.begin(), sample.end());
      first_curves.emplace_back(std::move(sample));
    }
    if (first_curves.size() < 2) {
      if (diag) {
        diag->warn(std::string(label) + " " + std::string(var->name) +
                   ": fewer than 2 first-period years; skipped");
      }
      continue;
    }
    NumericPeriodPanel panel;
    panel.variable = std::string(var->name);
    panel.band = pointwise_ci_band(std::span<const EmpiricalCdf>(first_curves),
                                   quantile_grid(std::move(pooled), opt.grid_size),
                                   opt.ci_level);
    for (int y : second_years) {
      auto it = by_year.find(y);
      if (it == by_year.end() || it->second.empty()) continue;
      const EmpiricalCdf curve(sample_numeric(it->second, *var));
      std::vector<double> values = evaluate_on(curve, panel.band.grid);
      PeriodVerdict v;
      v.variable = panel.variable;
      v.year = y;
      v.coverage_outside = cdf_coverage(values, panel.band);
      v.verdict = verdict_for_coverage(v.coverage_outside, opt.coverage_cutoff);
      panel.verdicts.push_back(std::move(v));
      panel.second_curves.emplace(y, std::move(values));
    }
    out.numerics.push_back(std::move(panel));
  }
  return out;
}

}  // namespace procurisk
