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

// Two-sample tests used to contrast contract classes:
//   * pooled two-proportion z-test for dummy variables ("B-Test"),
//   * two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov
//     p-value for numeric variables,
// plus the empirical CDF they are built on.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "procurisk/error.hpp"
#include "procurisk/variables.hpp"

namespace procurisk {

struct ZTest {
  double z = 0.0;
  double p_value = 1.0;
};

// Two-sided standard normal tail probability.
inline double normal_two_sided_p(double z) {
  return std::erfc(std::fabs(z) / std::numbers::sqrt2);
}

inline ZTest two_proportion_z_test(std::int64_t k_a, std::int64_t n_a,
                                   std::int64_t k_b, std::int64_t n_b) {
  if (n_a < 1 || n_b < 1) {
    throw DomainError("two-proportion test needs non-empty samples");
  }
  if (k_a < 0 || k_a > n_a || k_b < 0 || k_b > n_b) {
    throw DomainError("two-proportion test: successes outside [0, n]");
  }
  const double na = static_cast<double>(n_a);
  const double nb = static_cast<double>(n_b);
  const double pooled = static_cast<double>(k_a + k_b) / (na + nb);
  if (pooled <= 0.0 || pooled >= 1.0) return {};
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb));
  const double z = (static_cast<double>(k_a) / na - static_cast<double>(k_b) / nb) / se;
  return {z, normal_two_sided_p(z)};
}

// Right-continuous step function F(x) = #{points <= x} / n.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> sample) : points_(std::move(sample)) {
    if (points_.empty()) throw DomainError("ecdf of an empty sample");
    std::sort(points_.begin(), points_.end());
  }

  double operator()(double x) const {
    const auto it = std::upper_bound(points_.begin(), points_.end(), x);
    return static_cast<double>(it - points_.begin()) /
           static_cast<double>(points_.size());
  }

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<double> points_;
};

inline EmpiricalCdf ecdf(std::vector<double> sample) {
  return EmpiricalCdf(std::move(sample));
}

// Kolmogorov survival function Q(lambda) = 2 sum_{k>=1} (-1)^{k-1}
// exp(-2 k^2 lambda^2), Q(0) = 1, clamped to [0, 1].
inline double kolmogorov_q(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 0.2) {
    // The alternating series needs O(1/lambda) terms near zero; use the
    // equivalent theta-function form 1 - sqrt(2 pi)/lambda
    // sum exp(-(2k-1)^2 pi^2 / (8 lambda^2)).
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double tail = 0.0;
    for (int k = 1; k < 50; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * pi2 / (8.0 * lambda * lambda));
      tail += term;
      if (term < 1e-300) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * tail,
                      0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1;; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

inline double asymptotic_ks_pvalue(double d, std::size_t n, std::size_t m) {
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return kolmogorov_q(d * std::sqrt(nn * mm / (nn + mm)));
}

struct KsTest {
  double d = 0.0;
  double p_value = 1.0;
};

// Both spans must be sorted ascending.
inline KsTest ks_two_sample_sorted(std::span<const double> x,
                                   std::span<const double> y) {
  if (x.empty() || y.empty()) throw DomainError("KS test of an empty sample");
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  std::size_t i = 0;
  std::size_t j = 0;
  std::uint64_t best = 0;  // max |i*m - j*n|
  while (i < n && j < m) {
    const double v = std::min(x[i], y[j]);
    while (i < n && x[i] <= v) ++i;
    while (j < m && y[j] <= v) ++j;
    const std::uint64_t a = std::uint64_t{i} * m;
    const std::uint64_t b = std::uint64_t{j} * n;
    best = std::max(best, a > b ? a - b : b - a);
  }
  const double d = static_cast<double>(best) /
                   (static_cast<double>(n) * static_cast<double>(m));
  return {d, asymptotic_ks_pvalue(d, n, m)};
}

inline KsTest ks_two_sample(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return ks_two_sample_sorted(x, y);
}

// Cutoffs for calling a class difference significant.
struct SignificanceGates {
  double p_max = 0.05;
  double min_fraction_diff = 0.1;
  double min_d = 0.1;
};

struct DummyTestResult {
  std::string variable;
  double f_a = 0.0;
  double f_b = 0.0;
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
  double z = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

struct KsTestResult {
  std::string variable;
  double d = 0.0;
  double p_value = 1.0;
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
  bool significant = false;
};

inline bool dummy_significant(double p, double f_a, double f_b,
                              const SignificanceGates& g = {}) {
  return p <= g.p_max && std::fabs(f_a - f_b) >= g.min_fraction_diff;
}

inline bool ks_significant(double d, double p, const SignificanceGates& g = {}) {
  return d >= g.min_d && p <= g.p_max;
}

inline DummyTestResult dummy_test(std::string variable, std::int64_t k_a,
                                  std::int64_t n_a, std::int64_t k_b,
                                  std::int64_t n_b,
                                  const SignificanceGates& g = {}) {
  const ZTest t = two_proportion_z_test(k_a, n_a, k_b, n_b);
  DummyTestResult r;
  r.variable = std::move(variable);
  r.f_a = static_cast<double>(k_a) / static_cast<double>(n_a);
  r.f_b = static_cast<double>(k_b) / static_cast<double>(n_b);
  r.n_a = n_a;
  r.n_b = n_b;
  r.z = t.z;
  r.p_value = t.p_value;
  r.significant = dummy_significant(r.p_value, r.f_a, r.f_b, g);
  return r;
}

inline KsTestResult ks_test(std::string variable, std::vector<double> a,
                            std::vector<double> b,
                            const SignificanceGates& g = {}) {
  KsTestResult r;
  r.variable = std::move(variable);
  r.n_a = static_cast<std::int64_t>(a.size());
  r.n_b = static_cast<std::int64_t>(b.size());
  const KsTest t = ks_two_sample(std::move(a), std::move(b));
  r.d = t.d;
  r.p_value = t.p_value;
  r.significant = ks_significant(r.d, r.p_value, g);
  return r;
}

// One row of a class-pair comparison table.
struct ComparisonFinding {
  std::string variable;
  VariableType type = VariableType::Contract;
  bool dummy = true;
  double f_a = 0.0;  // dummy only
  double f_b = 0.0;  // dummy only
  double d = 0.0;    // numeric only
  double statistic = 0.0;  // z for dummies, D for numerics
  double p_value = 1.0;
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
  bool significant = false;

  double effect() const { return dummy ? std::fabs(f_a - f_b) : d; }
};

// Runs the z-test on every dummy and the KS test on every numeric variable.
// Findings are ordered by effect size (|f_a - f_b| or D), largest first.
inline std::vector<ComparisonFinding> class_pair_comparison(
    std::string_view name_a, const ContractView& a, std::string_view name_b,
    const ContractView& b, const std::vector<const DummyVariable*>& dummy_vars,
    const std::vector<const NumericVariable*>& numeric_vars,
    const SignificanceGates& gates = {}) {
  if (a.empty()) {
    throw DomainError("class " + std::string(name_a) + " has no contracts");
  }
  if (b.empty()) {
    throw DomainError("class " + std::string(name_b) + " has no contracts");
  }
  std::vector<ComparisonFinding> out;
  const auto n_a = static_cast<std::int64_t>(a.size());
  const auto n_b = static_cast<std::int64_t>(b.size());
  for (const DummyVariable* var : dummy_vars) {
    const auto k_a = static_cast<std::int64_t>(count_present(a, *var));
    const auto k_b = static_cast<std::int64_t>(count_present(b, *var));
    const DummyTestResult r =
        dummy_test(std::string(var->name), k_a, n_a, k_b, n_b, gates);
    ComparisonFinding f;
    f.variable = r.variable;
    f.type = VariableType::Contract;
    f.dummy = true;
    f.f_a = r.f_a;
    f.f_b = r.f_b;
    f.statistic = r.z;
    f.p_value = r.p_value;
    f.n_a = r.n_a;
    f.n_b = r.n_b;
    f.significant = r.significant;
    out.push_back(std::move(f));
  }
  for (const NumericVariable* var : numeric_vars) {
    const KsTestResult r = ks_test(std::string(var->name), sample_numeric(a, *var),
                                   sample_numeric(b, *var), gates);
    ComparisonFinding f;
    f.variable = r.variable;
    f.type = var->type;
    f.dummy = false;
    f.d = r.d;
    f.statistic = r.d;
    f.p_value = r.p_value;
    f.n_a = r.n_a;
    f.n_b = r.n_b;
    f.significant = r.significant;
    out.push_back(std::move(f));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ComparisonFinding& x, const ComparisonFinding& y) {
                     return x.effect() > y.effect();
                   });
  return out;
}

}  // namespace procurisk
