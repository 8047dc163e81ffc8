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

// Risk factors as descriptors and identifiers of a corrupt class.
//
// Descriptor (recall):     P(flagged | class), useful when > 0.5.
// Identifier (precision):  P(class | flagged), useful when above the
//                          base rate P(class) over the whole corpus.
// All predicates are closed thresholds (value >= t).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "procurisk/contract.hpp"
#include "procurisk/derive.hpp"
#include "procurisk/error.hpp"

namespace procurisk {

enum class Factor { RAD, Fav, CPW, SPW };

constexpr std::string_view to_string(Factor f) {
  switch (f) {
    case Factor::RAD: return "RAD";
    case Factor::Fav: return "Fav";
    case Factor::CPW: return "CPW";
    case Factor::SPW: return "SPW";
  }
  return "RAD";
}

inline double factor_value(const RiskFactors& r, Factor f) {
  switch (f) {
    case Factor::RAD: return r.rad;
    case Factor::Fav: return r.fav;
    case Factor::CPW: return r.cpw;
    case Factor::SPW: return r.spw;
  }
  return r.rad;
}

inline constexpr double kJointSpwPerContract = 2000.0;  // USD PPP

// Either `factor >= threshold`, or the joint contract-splitting predicate
// CPW >= c and SPW >= s, where c = threshold and s defaults to 2c * 1000
// USD PPP.
struct FactorPredicate {
  enum class Kind { Single, JointCpwSpw };

  Kind kind = Kind::Single;
  Factor factor = Factor::RAD;
  double threshold = 0.0;
  double spw_threshold = 0.0;  // joint only

  static FactorPredicate single(Factor f, double t) {
    return {Kind::Single, f, t, 0.0};
  }
  static FactorPredicate joint(double c) {
    return {Kind::JointCpwSpw, Factor::CPW, c, kJointSpwPerContract * c};
  }
  static FactorPredicate joint(double c, double spw) {
    return {Kind::JointCpwSpw, Factor::CPW, c, spw};
  }

  bool matches(const RiskFactors& r) const {
    if (kind == Kind::JointCpwSpw) {
      return r.cpw >= threshold && r.spw >= spw_threshold;
    }
    return factor_value(r, factor) >= threshold;
  }

  std::string name() const {
    if (kind == Kind::JointCpwSpw) return "CPW_SPW_joint";
    return std::string(to_string(factor));
  }
};

struct PrPoint {
  double threshold = 0.0;
  std::optional<double> precision;  // absent when nothing is flagged
  double recall = 0.0;
  std::int64_t flagged_count = 0;
  std::int64_t class_count = 0;
  std::int64_t hits = 0;  // class and flagged
  double baseline = 0.0;  // P(class) over the corpus
};

struct DescriptorResult {
  double recall = 0.0;
  std::int64_t hits = 0;
  std::int64_t class_count = 0;
  bool useful = false;  // recall > 0.5
};

struct IdentifierResult {
  std::optional<double> precision;
  double baseline = 0.0;
  std::int64_t hits = 0;
  std::int64_t flagged_count = 0;
  bool useful = false;  // precision > baseline
};

inline constexpr double kDescriptorCutoff = 0.5;

template <typename Range>
DescriptorResult recall_given_class(const Range& contracts,
                                           ClassLabel cls,
                                           const FactorPredicate& pred) {
  DescriptorResult r;
  for (const AnnotatedContract& a : contracts) {
    if (a.label != cls) continue;
    ++r.class_count;
    if (pred.matches(a.factors)) ++r.hits;
  }
  if (r.class_count == 0) {
    throw DomainError("class " + std::string(to_string(cls)) + " has no contracts");
  }
  r.recall = static_cast<double>(r.hits) / static_cast<double>(r.class_count);
  r.useful = r.recall > kDescriptorCutoff;
  return r;
}

template <typename Range>
double class_baseline(const Range& contracts,
                             ClassLabel cls) {
  if (contracts.empty()) return 0.0;
  const auto n = std::count_if(contracts.begin(), contracts.end(),
                               [&](const AnnotatedContract& a) { return a.label == cls; });
  return static_cast<double>(n) / static_cast<double>(contracts.size());
}

template <typename Range>
IdentifierResult precision_given_flag(const Range& contracts,
                                             ClassLabel cls,
                                             const FactorPredicate& pred) {
  IdentifierResult r;
  r.baseline = class_baseline(contracts, cls);
  for (const AnnotatedContract& a : contracts) {
    if (!pred.matches(a.factors)) continue;
    ++r.flagged_count;
    if (a.label == cls) ++r.hits;
  }
  if (r.flagged_count > 0) {
    r.precision = static_cast<double>(r.hits) / static_cast<double>(r.flagged_count);
    r.useful = *r.precision > r.baseline;
  }
  return r;
}

namespace detail {

inline PrPoint make_point(double threshold, std::int64_t flagged, std::int64_t hits,
                          std::int64_t class_count, double baseline) {
  PrPoint p;
  p.threshold = threshold;
  p.flagged_count = flagged;
  p.hits = hits;
  p.class_count = class_count;
  p.baseline = baseline;
  p.recall = class_count > 0
                 ? static_cast<double>(hits) / static_cast<double>(class_count)
                 : 0.0;
  if (flagged > 0) {
    p.precision = static_cast<double>(hits) / static_cast<double>(flagged);
  }
  return p;
}

}  // namespace detail

// One point per threshold of `factor >= t`. Thresholds must be ascending.
template <typename Range>
std::vector<PrPoint> pr_curve(const Range& contracts,
                                     ClassLabel cls, Factor factor,
                                     std::span<const double> thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw DomainError("PR thresholds must be sorted ascending");
  }
  std::vector<double> all;
  std::vector<double> in_class;
  all.reserve(contracts.size());
  for (const AnnotatedContract& a : contracts) {
    const double v = factor_value(a.factors, factor);
    all.push_back(v);
    if (a.label == cls) in_class.push_back(v);
  }
  std::sort(all.begin(), all.end());
  std::sort(in_class.begin(), in_class.end());
  const double baseline =
      all.empty() ? 0.0
                  : static_cast<double>(in_class.size()) / static_cast<double>(all.size());
  auto at_least = [](const std::vector<double>& sorted, double t) {
    return static_cast<std::int64_t>(
        sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), t));
  };
  std::vector<PrPoint> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    out.push_back(detail::make_point(t, at_least(all, t), at_least(in_class, t),
                                     static_cast<std::int64_t>(in_class.size()),
                                     baseline));
  }
  return out;
}

template <typename Range>
std::vector<PrPoint> joint_cpw_spw_points(const Range& contracts, ClassLabel cls,
    std::span<const double> c_values) {
  const double baseline = class_baseline(contracts, cls);
  std::int64_t class_count = 0;
  for (const AnnotatedContract& a : contracts) {
    if (a.label == cls) ++class_count;
  }
  std::vector<PrPoint> out;
  for (double c : c_values) {
    const FactorPredicate pred = FactorPredicate::joint(c);
    std::int64_t flagged = 0;
    std::int64_t hits = 0;
    for (const AnnotatedContract& a : contracts) {
      if (!pred.matches(a.factors)) continue;
      ++flagged;
      if (a.label == cls) ++hits;
    }
    out.push_back(detail::make_point(c, flagged, hits, class_count, baseline));
  }
  return out;
}

// Default sweep grids.
inline std::vector<double> default_threshold_grid(Factor f) {
  std::vector<double> g;
  switch (f) {
    case Factor::RAD:
      for (int i = 0; i <= 20; ++i) g.push_back(i / 20.0);
      break;
    case Factor::Fav:
      for (int i = 0; i <= 19; ++i) g.push_back(i / 20.0);
      g.push_back(0.99);
      break;
    case Factor::CPW:
      for (int i = 1; i <= 20; ++i) g.push_back(i);
      break;
    case Factor::SPW:
      for (int e = 4; e <= 14; ++e) g.push_back(std::pow(10.0, e / 2.0));
      break;
  }
  return g;
}

}  // namespace procurisk
