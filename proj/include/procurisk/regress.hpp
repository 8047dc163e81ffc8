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

// Weighted least squares on yearly class aggregates.
//
// A yearly observation pairs the fraction of a class's contracts with some
// dummy (typically PT.AD) against fractions of the *other* contracts of the
// same year that satisfy a risk predicate or control dummy. Excluding the
// class from the independent side avoids trivial autocorrelation. Each year
// is weighted by the class's contract count.

#pragma once

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "procurisk/contract.hpp"
#include "procurisk/csv.hpp"
#include "procurisk/error.hpp"
#include "procurisk/format.hpp"
#include "procurisk/risk_eval.hpp"
#include "procurisk/variables.hpp"

namespace procurisk {

struct YearlyObservation {
  int year = 0;
  std::vector<double> x;
  double y = 0.0;
  double weight = 0.0;
};

// Independent variable: fraction of (non-class) contracts for which
// `indicator` holds.
struct Regressor {
  std::string name;
  std::function<bool(const AnnotatedContract&)> indicator;
};

inline Regressor factor_regressor(const FactorPredicate& pred) {
  std::string name = pred.name();
  if (pred.kind == FactorPredicate::Kind::JointCpwSpw) {
    name = "CPW>=" + format_exact(pred.threshold) + "&SPW>=" + format_exact(pred.spw_threshold);
  } else {
    name += ">=" + format_exact(pred.threshold);
  }
  return {name, [pred](const AnnotatedContract& a) { return pred.matches(a.factors); }};
}

inline Regressor dummy_regressor(const DummyVariable& var) {
  return {std::string(var.name),
          [&var](const AnnotatedContract& a) { return var.present(a.contract); }};
}

inline std::vector<YearlyObservation> build_yearly_dataset(
    const std::vector<AnnotatedContract>& contracts, ClassLabel cls,
    const DummyVariable& dependent, const std::vector<Regressor>& regressors,
    bool exclude_class_from_independent = true, Diagnostics* diag = nullptr) {
  struct YearAcc {
    std::int64_t class_n = 0;
    std::int64_t class_k = 0;
    std::int64_t other_n = 0;
    std::vector<std::int64_t> other_k;
  };
  std::map<int, YearAcc> years;
  for (const auto& a : contracts) {
    YearAcc& acc = years[a.contract.year];
    if (acc.other_k.empty()) acc.other_k.assign(regressors.size(), 0);
    if (a.label == cls) {
      ++acc.class_n;
      if (dependent.present(a.contract)) ++acc.class_k;
      if (exclude_class_from_independent) continue;
    }
    ++acc.other_n;
    for (std::size_t j = 0; j < regressors.size(); ++j) {
      if (regressors[j].indicator(a)) ++acc.other_k[j];
    }
  }
  std::vector<YearlyObservation> out;
  for (const auto& [year, acc] : years) {
    if (acc.class_n == 0) continue;
    if (acc.other_n == 0) {
      if (diag) {
        diag->warn("year " + std::to_string(year) +
                   " has no contracts outside the class; omitted from regression");
      }
      continue;
    }
    YearlyObservation obs;
    obs.year = year;
    obs.y = static_cast<double>(acc.class_k) / static_cast<double>(acc.class_n);
    obs.weight = static_cast<double>(acc.class_n);
    for (std::int64_t k : acc.other_k) {
      obs.x.push_back(static_cast<double>(k) / static_cast<double>(acc.other_n));
    }
    out.push_back(std::move(obs));
  }
  if (out.size() < 3) {
    throw DomainError("class " + std::string(to_string(cls)) + " has contracts in " +
                      std::to_string(out.size()) +
                      " usable years; at least 3 are needed");
  }
  return out;
}

struct VifResult {
  double mean = 1.0;
  bool infinite = false;  // perfectly collinear predictors
};

struct FitResult {
  std::vector<std::string> names;     // "(Intercept)", then predictors
  std::vector<double> coefficients;   // intercept first
  std::vector<double> std_errors;
  std::vector<double> t_values;
  std::vector<double> p_values;
  std::vector<double> standardized;           // slopes only
  std::vector<double> standardized_std_errors;  // slopes only
  double r_squared = 0.0;
  double mean_vif = 1.0;
  bool vif_infinite = false;
  std::size_t n = 0;
  int df = 0;  // n - p - 1
};

namespace detail {

struct WeightedMoments {
  double mean = 0.0;
  double sd = 0.0;  // sqrt(sum w (v - mean)^2 / sum w)
};

inline WeightedMoments weighted_moments(const Eigen::VectorXd& v,
                                        const Eigen::VectorXd& w) {
  const double sw = w.sum();
  WeightedMoments m;
  m.mean = w.dot(v) / sw;
  m.sd = std::sqrt(w.dot((v.array() - m.mean).square().matrix()) / sw);
  return m;
}

struct CoreFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd residuals;
  double rss = 0.0;
  double r_squared = 0.0;
};

// Design includes the intercept column. Throws SingularDesignError when
// the weighted design is rank deficient.
inline CoreFit wls_core(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& w) {
  const Eigen::VectorXd sw = w.array().sqrt();
  const Eigen::MatrixXd xs = sw.asDiagonal() * design;
  const Eigen::VectorXd ys = sw.asDiagonal() * y;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
  qr.setThreshold(1e-12);
  if (qr.rank() < design.cols()) {
    throw SingularDesignError("regression design is singular (constant or "
                              "collinear predictor)");
  }
  CoreFit fit;
  fit.beta = qr.solve(ys);
  fit.residuals = y - design * fit.beta;
  fit.rss = w.dot(fit.residuals.array().square().matrix());
  const WeightedMoments my = weighted_moments(y, w);
  const double tss = w.dot((y.array() - my.mean).square().matrix());
  fit.r_squared = tss > 0.0 ? 1.0 - fit.rss / tss : 1.0;
  return fit;
}

inline void check_weights(const Eigen::VectorXd& w) {
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0)) throw DomainError("regression weights must be positive");
  }
}

}  // namespace detail

// Mean variance inflation factor of the predictor columns under weights.
inline VifResult mean_vif(const std::vector<std::vector<double>>& predictors,
                          const std::vector<double>& weights) {
  const std::size_t p = predictors.size();
  if (p <= 1) return {};
  const auto n = static_cast<Eigen::Index>(weights.size());
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights.data(), n);
  detail::check_weights(w);
  double total = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    Eigen::MatrixXd design(n, static_cast<Eigen::Index>(p));
    design.col(0).setOnes();
    Eigen::Index col = 1;
    for (std::size_t k = 0; k < p; ++k) {
      if (k == j) continue;
      design.col(col++) = Eigen::Map<const Eigen::VectorXd>(predictors[k].data(), n);
    }
    const Eigen::VectorXd target =
        Eigen::Map<const Eigen::VectorXd>(predictors[j].data(), n);
    double r2 = 0.0;
    try {
      r2 = detail::wls_core(design, target, w).r_squared;
    } catch (const SingularDesignError&) {
      return {std::numeric_limits<double>::infinity(), true};
    }
    if (r2 >= 1.0 - 1e-12) return {std::numeric_limits<double>::infinity(), true};
    total += 1.0 / (1.0 - r2);
  }
  return {total / static_cast<double>(p), false};
}

inline FitResult wls_fit(const std::vector<YearlyObservation>& observations,
                         std::vector<std::string> predictor_names = {}) {
  if (observations.empty()) throw DomainError("regression without observations");
  const std::size_t p = observations.front().x.size();
  if (p == 0) throw DomainError("regression needs at least one predictor");
  const auto n = static_cast<Eigen::Index>(observations.size());
  const auto k = static_cast<Eigen::Index>(p + 1);
  if (n < k) {
    throw DomainError("regression with " + std::to_string(p) + " predictor(s) needs at least " +
                      std::to_string(k) + " observations");
  }
  Eigen::MatrixXd design(n, k);
  Eigen::VectorXd y(n);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& obs = observations[static_cast<std::size_t>(i)];
    if (obs.x.size() != p) throw DomainError("ragged predictor vectors");
    design(i, 0) = 1.0;
    for (std::size_t j = 0; j < p; ++j) design(i, static_cast<Eigen::Index>(j + 1)) = obs.x[j];
    y[i] = obs.y;
    w[i] = obs.weight;
  }
  detail::check_weights(w);
  const detail::CoreFit core = detail::wls_core(design, y, w);

  FitResult r;
  r.n = observations.size();
  r.df = static_cast<int>(n - k);
  r.r_squared = core.r_squared;
  r.names.push_back("(Intercept)");
  for (std::size_t j = 0; j < p; ++j) {
    r.names.push_back(j < predictor_names.size() ? predictor_names[j]
                                                 : "x" + std::to_string(j + 1));
  }

  const Eigen::VectorXd sw = w.array().sqrt();
  const Eigen::MatrixXd xs = sw.asDiagonal() * design;
  const Eigen::MatrixXd xtwx_inv =
      (xs.transpose() * xs).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double sigma2 = r.df > 0 ? core.rss / r.df : nan;
  std::optional<boost::math::students_t> tdist;
  if (r.df > 0) tdist.emplace(static_cast<double>(r.df));

  for (Eigen::Index j = 0; j < k; ++j) {
    const double b = core.beta[j];
    const double se = std::sqrt(sigma2 * xtwx_inv(j, j));
    const double t = b / se;
    double pv = nan;
    if (tdist && std::isfinite(t)) {
      pv = 2.0 * boost::math::cdf(boost::math::complement(*tdist, std::fabs(t)));
    }
    r.coefficients.push_back(b);
    r.std_errors.push_back(se);
    r.t_values.push_back(t);
    r.p_values.push_back(pv);
  }

  const detail::WeightedMoments my = detail::weighted_moments(y, w);
  std::vector<std::vector<double>> columns;
  for (Eigen::Index j = 1; j < k; ++j) {
    const Eigen::VectorXd xj = design.col(j);
    const detail::WeightedMoments mx = detail::weighted_moments(xj, w);
    const double scale = my.sd > 0.0 ? mx.sd / my.sd : nan;
    r.standardized.push_back(r.coefficients[static_cast<std::size_t>(j)] * scale);
    r.standardized_std_errors.push_back(r.std_errors[static_cast<std::size_t>(j)] * scale);
    columns.emplace_back(xj.data(), xj.data() + xj.size());
  }
  const VifResult vif =
      mean_vif(columns, std::vector<double>(w.data(), w.data() + w.size()));
  r.mean_vif = vif.mean;
  r.vif_infinite = vif.infinite;
  return r;
}

inline double weighted_correlation(const std::vector<double>& a,
                                   const std::vector<double>& b,
                                   const std::vector<double>& weights) {
  const auto n = static_cast<Eigen::Index>(weights.size());
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights.data(), n);
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(a.data(), n);
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(b.data(), n);
  const detail::WeightedMoments mx = detail::weighted_moments(x, w);
  const detail::WeightedMoments my = detail::weighted_moments(y, w);
  const double cov =
      w.dot(((x.array() - mx.mean) * (y.array() - my.mean)).matrix()) / w.sum();
  return cov / (mx.sd * my.sd);
}

// A fitted model plus what is needed to report and plot it.
struct NamedModel {
  std::string label;
  ClassLabel cls = ClassLabel::EFOS;
  std::string dependent;
  std::vector<std::string> predictors;
  std::vector<YearlyObservation> data;
  FitResult fit;
};

inline constexpr double kVifCutoff = 5.0;

// Models whose mean VIF is below the cutoff, in input order.
inline std::vector<NamedModel> screening_report(const std::vector<NamedModel>& models,
                                                double vif_cutoff = kVifCutoff) {
  std::vector<NamedModel> kept;
  for (const auto& m : models) {
    if (!m.fit.vif_infinite && m.fit.mean_vif < vif_cutoff) kept.push_back(m);
  }
  return kept;
}

// Wide table: one column per model; a row per predictor with
// "standardized (se)", then R2 and VIF rows. `lead` is always the first row.
inline void write_model_table(std::ostream& out, const std::vector<NamedModel>& models,
                              const std::string& lead = "RAD>=0.5") {
  std::vector<std::string> rows{lead};
  for (const auto& m : models) {
    for (const auto& name : m.predictors) {
      if (std::find(rows.begin(), rows.end(), name) == rows.end()) rows.push_back(name);
    }
  }
  std::vector<std::string> header{"Variable"};
  for (std::size_t i = 0; i < models.size(); ++i) header.push_back(std::to_string(i + 1));
  csv::write_row(out, header);
  for (const auto& row : rows) {
    std::vector<std::string> cells{row};
    for (const auto& m : models) {
      std::string cell;
      for (std::size_t j = 0; j < m.predictors.size(); ++j) {
        if (m.predictors[j] == row) {
          cell = format_fixed(m.fit.standardized[j], 2) + " (" +
                 format_fixed(m.fit.standardized_std_errors[j], 3) + ")";
        }
      }
      cells.push_back(cell);
    }
    csv::write_row(out, cells);
  }
  std::vector<std::string> r2{"R2"};
  std::vector<std::string> vif{"VIF"};
  for (const auto& m : models) {
    r2.push_back(format_fixed(m.fit.r_squared, 2));
    vif.push_back(format_fixed(m.fit.mean_vif, 2));
  }
  csv::write_row(out, r2);
  csv::write_row(out, vif);
}

}  // namespace procurisk
