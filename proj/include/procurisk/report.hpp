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

// Report tables: yearly context (budget ratio, class shares), per-class
// descriptive statistics and sample sizes, and delimited writers for the
// comparison, period, risk and regression results.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "procurisk/classify.hpp"
#include "procurisk/contract.hpp"
#include "procurisk/csv.hpp"
#include "procurisk/error.hpp"
#include "procurisk/format.hpp"
#include "procurisk/period_compare.hpp"
#include "procurisk/regress.hpp"
#include "procurisk/risk_eval.hpp"
#include "procurisk/stats.hpp"
#include "procurisk/sum.hpp"
#include "procurisk/variables.hpp"

namespace procurisk {

// ---------------------------------------------------------------------------
// Context table.

struct ContextYear {
  int year = 0;
  std::optional<double> federal_budget;
  double total_spending = 0.0;
  std::int64_t total_contracts = 0;
  std::optional<double> ts_fb_ratio;
};

struct ContextClassYear {
  ClassLabel cls = ClassLabel::NC;
  int year = 0;
  std::int64_t contracts = 0;
  double spending = 0.0;
  double pct_contracts = 0.0;  // %TC
  double pct_spending = 0.0;   // %TS, 0 when the year has no spending
};

struct ContextTable {
  std::vector<ContextYear> years;
  std::vector<ContextClassYear> classes;  // year-major, then class order
};

inline double ts_fb_ratio(double total_spending, double federal_budget) {
  if (!(federal_budget > 0.0)) throw DomainError("federal budget must be positive");
  return total_spending / federal_budget;
}

template <typename Range>
ContextTable context_table(const Range& contracts,
                           const std::map<int, double>* budgets = nullptr) {
  struct Acc {
    std::int64_t n = 0;
    CompensatedSum spending;
  };
  std::map<int, std::array<Acc, 3>> acc;
  for (const auto& item : contracts) {
    const CuratedContract& c = contract_of(item);
    Acc& a = acc[c.year][static_cast<std::size_t>(item.label)];
    ++a.n;
    a.spending.add(c.spending_usd_ppp);
  }
  ContextTable t;
  for (const auto& [year, per_class] : acc) {
    ContextYear y;
    y.year = year;
    CompensatedSum total;
    for (const Acc& a : per_class) {
      y.total_contracts += a.n;
      total.add(a.spending.value());
    }
    y.total_spending = total.value();
    if (budgets) {
      auto it = budgets->find(year);
      if (it == budgets->end()) {
        throw ConfigError("budget table has no entry for year " + std::to_string(year));
      }
      y.federal_budget = it->second;
      y.ts_fb_ratio = ts_fb_ratio(y.total_spending, it->second);
    }
    for (ClassLabel cls : kAllClasses) {
      const Acc& a = per_class[static_cast<std::size_t>(cls)];
      ContextClassYear row;
      row.cls = cls;
      row.year = year;
      row.contracts = a.n;
      row.spending = a.spending.value();
      row.pct_contracts = 100.0 * static_cast<double>(a.n) /
                          static_cast<double>(y.total_contracts);
      row.pct_spending =
          y.total_spending > 0.0 ? 100.0 * row.spending / y.total_spending : 0.0;
      t.classes.push_back(row);
    }
    t.years.push_back(y);
  }
  return t;
}

inline std::map<int, double> load_budgets(std::istream& in) {
  csv::Reader reader(in, ',', '#');
  csv::Record rec;
  std::map<int, double> out;
  while (reader.next(rec)) {
    if (rec.fields.size() == 1 && rec.fields[0].find(';') != std::string::npos) {
      // semicolon-delimited file read with ','
      const std::string line = rec.fields[0];
      const auto pos = line.find(';');
      rec.fields = {line.substr(0, pos), line.substr(pos + 1)};
    }
    if (rec.fields.size() < 2) {
      throw ConfigError("budget line " + std::to_string(rec.line) + ": need year,budget");
    }
    const auto year = parse_int<int>(rec.fields[0]);
    const auto value = parse_double(rec.fields[1]);
    if (!year || !value) {
      if (out.empty() && !year) continue;  // header
      throw ConfigError("budget line " + std::to_string(rec.line) + ": bad value");
    }
    if (*value <= 0.0) {
      throw ConfigError("budget for " + std::to_string(*year) + " must be positive");
    }
    out[*year] = *value;
  }
  return out;
}

inline void write_context_years(std::ostream& out, const ContextTable& t) {
  csv::write_row(out, {"year", "federal_budget", "total_spending", "ts_fb_ratio",
                       "total_contracts"});
  for (const auto& y : t.years) {
    csv::write_row(out, {std::to_string(y.year),
                         y.federal_budget ? format_fixed(*y.federal_budget, 2) : "NA",
                         format_fixed(y.total_spending, 2),
                         y.ts_fb_ratio ? format_fixed(*y.ts_fb_ratio, 2) : "NA",
                         std::to_string(y.total_contracts)});
  }
}

inline void write_context_classes(std::ostream& out, const ContextTable& t) {
  csv::write_row(out, {"class", "year", "contracts", "spending", "pct_tc", "pct_ts"});
  for (ClassLabel cls : kAllClasses) {
    for (const auto& r : t.classes) {
      if (r.cls != cls) continue;
      csv::write_row(out, {std::string(to_string(cls)), std::to_string(r.year),
                           std::to_string(r.contracts), format_fixed(r.spending, 2),
                           format_fixed(r.pct_contracts, 2),
                           format_fixed(r.pct_spending, 2)});
    }
  }
}

// ---------------------------------------------------------------------------
// Descriptive statistics and sample sizes.

struct DescriptiveRow {
  std::string variable;
  VariableType type = VariableType::Contract;
  bool dummy = true;
  std::size_t n = 0;
  double fraction = 0.0;  // dummies
  double mean = 0.0;      // numerics from here on
  double sd = 0.0;        // n - 1 denominator; NA for a single value
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

template <typename Range>
std::vector<DescriptiveRow> descriptive_stats(const Range& contracts, ClassLabel cls) {
  ContractView in_class;
  for (const AnnotatedContract& a : contracts) {
    if (a.label == cls) in_class.push_back(std::cref(a));
  }
  if (in_class.empty()) {
    throw DomainError("class " + std::string(to_string(cls)) + " has no contracts");
  }
  std::vector<DescriptiveRow> out;
  const double n = static_cast<double>(in_class.size());
  for (const auto& var : dummy_variables()) {
    DescriptiveRow r;
    r.variable = std::string(var.name);
    r.n = in_class.size();
    r.fraction = static_cast<double>(count_present(in_class, var)) / n;
    out.push_back(std::move(r));
  }
  for (const auto& var : numeric_variables()) {
    std::vector<double> v = sample_numeric(in_class, var);
    std::sort(v.begin(), v.end());
    DescriptiveRow r;
    r.variable = std::string(var.name);
    r.type = var.type;
    r.dummy = false;
    r.n = v.size();
    CompensatedSum s;
    for (double x : v) s.add(x);
    r.mean = s.value() / static_cast<double>(v.size());
    if (v.size() > 1) {
      CompensatedSum ss;
      for (double x : v) ss.add((x - r.mean) * (x - r.mean));
      r.sd = std::sqrt(ss.value() / static_cast<double>(v.size() - 1));
    } else {
      r.sd = std::numeric_limits<double>::quiet_NaN();
    }
    r.min = v.front();
    r.q1 = quantile_type7(v, 0.25);
    r.median = quantile_type7(v, 0.5);
    r.q3 = quantile_type7(v, 0.75);
    r.max = v.back();
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_descriptive_header(std::ostream& out) {
  csv::write_row(out, {"class", "variable", "type", "n", "fraction", "mean", "sd",
                       "min", "q1", "median", "q3", "max"});
}

inline void write_descriptive_rows(std::ostream& out, ClassLabel cls,
                                   const std::vector<DescriptiveRow>& rows) {
  for (const auto& r : rows) {
    if (r.dummy) {
      csv::write_row(out, {std::string(to_string(cls)), r.variable, "dummy",
                           std::to_string(r.n), format_fixed(r.fraction, 4), "", "",
                           "", "", "", "", ""});
    } else {
      csv::write_row(out, {std::string(to_string(cls)), r.variable,
                           std::string(to_string(r.type)), std::to_string(r.n), "",
                           format_fixed(r.mean, 4), format_fixed(r.sd, 4),
                           format_fixed(r.min, 4), format_fixed(r.q1, 4),
                           format_fixed(r.median, 4), format_fixed(r.q3, 4),
                           format_fixed(r.max, 4)});
    }
  }
}

struct SampleSizeRow {
  ClassLabel cls = ClassLabel::NC;
  std::string period;  // "1", "2" or "all"
  std::size_t contracts = 0;
  std::size_t buyer_years = 0;  // observations of type ii) variables
};

template <typename Range>
std::vector<SampleSizeRow> sample_sizes(const Range& contracts, const PeriodConfig& periods) {
  std::vector<SampleSizeRow> out;
  const NumericVariable& buyer_var = find_numeric("T.Cont.Max");
  for (ClassLabel cls : kAllClasses) {
    for (std::string_view p : {"1", "2", "all"}) {
      ContractView sel;
      for (const AnnotatedContract& a : contracts) {
        if (a.label != cls) continue;
        const Period per = period_of(a.contract.year, periods);
        if (p == "all" || to_string(per) == p) sel.push_back(std::cref(a));
      }
      out.push_back({cls, std::string(p), sel.size(),
                     sample_numeric(sel, buyer_var).size()});
    }
  }
  return out;
}

inline void write_sample_sizes(std::ostream& out, const std::vector<SampleSizeRow>& rows) {
  csv::write_row(out, {"class", "period", "contracts", "buyer_years"});
  for (const auto& r : rows) {
    csv::write_row(out, {std::string(to_string(r.cls)), r.period,
                         std::to_string(r.contracts), std::to_string(r.buyer_years)});
  }
}

// ---------------------------------------------------------------------------
// Class comparisons.

struct ComparisonBlock {
  ClassLabel a = ClassLabel::EFOS;
  ClassLabel b = ClassLabel::PCS;
  std::string period;
  std::vector<ComparisonFinding> findings;
};

inline void write_comparisons(std::ostream& out, const std::vector<ComparisonBlock>& blocks) {
  csv::write_row(out, {"class_a", "class_b", "period", "variable", "type", "test", "f_a",
                       "f_b", "d", "statistic", "p_value", "n_a", "n_b", "significant"});
  for (const auto& blk : blocks) {
    for (const auto& f : blk.findings) {
      csv::write_row(
          out, {std::string(to_string(blk.a)), std::string(to_string(blk.b)), blk.period,
                f.variable, f.dummy ? "dummy" : std::string(to_string(f.type)),
                f.dummy ? "z" : "ks", f.dummy ? format_fixed(f.f_a, 4) : "",
                f.dummy ? format_fixed(f.f_b, 4) : "", f.dummy ? "" : format_fixed(f.d, 4),
                format_fixed(f.statistic, 4), format_exact(f.p_value),
                std::to_string(f.n_a), std::to_string(f.n_b),
                f.significant ? "yes" : "no"});
    }
  }
}

// ---------------------------------------------------------------------------
// Period comparison.

inline void write_period_verdicts(std::ostream& out, ClassLabel cls,
                                  const PeriodComparison& pc, bool header) {
  if (header) {
    csv::write_row(out, {"class", "variable", "kind", "year", "value", "lower_fence",
                         "upper_fence", "coverage_outside", "verdict"});
  }
  const std::string c(to_string(cls));
  for (const auto& panel : pc.dummies) {
    for (const auto& v : panel.verdicts) {
      csv::write_row(out, {c, v.variable, "dummy", std::to_string(v.year),
                           format_fixed(panel.fractions.at(v.year), 4),
                           format_fixed(panel.box.lower_whisker, 4),
                           format_fixed(panel.box.upper_whisker, 4),
                           format_fixed(v.coverage_outside, 4),
                           std::string(to_string(v.verdict))});
    }
  }
  for (const auto& panel : pc.numerics) {
    for (const auto& v : panel.verdicts) {
      csv::write_row(out, {c, v.variable, "numeric", std::to_string(v.year), "", "", "",
                           format_fixed(v.coverage_outside, 4),
                           std::string(to_string(v.verdict))});
    }
  }
}

// Columns: grid_x, mean, lower, upper, one per second-period year.
inline void write_cdf_plot(std::ostream& out, const NumericPeriodPanel& panel) {
  std::vector<std::string> row{"grid_x", "mean", "lower", "upper"};
  for (const auto& [year, values] : panel.second_curves) {
    row.push_back("year_" + std::to_string(year) + "_curve");
  }
  csv::write_row(out, row);
  const CdfBand& b = panel.band;
  for (std::size_t i = 0; i < b.grid.size(); ++i) {
    row = {format_exact(b.grid[i]), format_fixed(b.mean[i], 6),
           format_fixed(b.lower[i], 6), format_fixed(b.upper[i], 6)};
    for (const auto& [year, values] : panel.second_curves) {
      row.push_back(format_fixed(values[i], 6));
    }
    csv::write_row(out, row);
  }
}

inline void write_dummy_plot(std::ostream& out, const PeriodComparison& pc) {
  csv::write_row(out, {"variable", "year", "fraction", "q1", "median", "q3",
                       "lower_fence", "upper_fence"});
  for (const auto& panel : pc.dummies) {
    for (const auto& [year, f] : panel.fractions) {
      csv::write_row(out, {panel.variable, std::to_string(year), format_fixed(f, 6),
                           format_fixed(panel.box.q1, 6), format_fixed(panel.box.median, 6),
                           format_fixed(panel.box.q3, 6),
                           format_fixed(panel.box.lower_whisker, 6),
                           format_fixed(panel.box.upper_whisker, 6)});
    }
  }
}

// ---------------------------------------------------------------------------
// Risk evaluation.

struct PrCurveBlock {
  ClassLabel cls = ClassLabel::EFOS;
  std::string predicate;  // factor name or the joint predicate
  std::vector<PrPoint> points;
};

inline void write_pr_curves(std::ostream& out, const std::vector<PrCurveBlock>& blocks) {
  csv::write_row(out, {"class", "predicate", "threshold", "precision", "recall",
                       "baseline", "flagged", "hits", "class_count"});
  for (const auto& blk : blocks) {
    for (const auto& p : blk.points) {
      csv::write_row(out, {std::string(to_string(blk.cls)), blk.predicate,
                           format_exact(p.threshold),
                           p.precision ? format_fixed(*p.precision, 6) : "NA",
                           format_fixed(p.recall, 6), format_fixed(p.baseline, 6),
                           std::to_string(p.flagged_count), std::to_string(p.hits),
                           std::to_string(p.class_count)});
    }
  }
}

struct RiskVerdict {
  ClassLabel cls = ClassLabel::EFOS;
  std::string predicate;
  double threshold = 0.0;
  DescriptorResult descriptor;
  IdentifierResult identifier;
};

inline void write_risk_verdicts(std::ostream& out, const std::vector<RiskVerdict>& rows) {
  csv::write_row(out, {"class", "predicate", "threshold", "recall", "descriptor",
                       "precision", "baseline", "identifier", "flagged", "hits"});
  for (const auto& r : rows) {
    csv::write_row(out,
                   {std::string(to_string(r.cls)), r.predicate, format_exact(r.threshold),
                    format_fixed(r.descriptor.recall, 4),
                    r.descriptor.useful ? "pass" : "fail",
                    r.identifier.precision ? format_fixed(*r.identifier.precision, 4) : "NA",
                    format_fixed(r.identifier.baseline, 4),
                    r.identifier.useful ? "pass" : "fail",
                    std::to_string(r.identifier.flagged_count),
                    std::to_string(r.identifier.hits)});
  }
}

// ---------------------------------------------------------------------------
// Regression.

inline void write_model_rows(std::ostream& out, const std::vector<NamedModel>& models) {
  csv::write_row(out, {"model", "class", "dependent", "term", "coefficient", "std_error",
                       "t_value", "p_value", "standardized", "standardized_se",
                       "r_squared", "mean_vif", "df", "n"});
  for (const auto& m : models) {
    const FitResult& f = m.fit;
    for (std::size_t j = 0; j < f.coefficients.size(); ++j) {
      const bool slope = j > 0;
      csv::write_row(out, {m.label, std::string(to_string(m.cls)), m.dependent,
                           f.names[j], format_exact(f.coefficients[j]),
                           format_exact(f.std_errors[j]), format_exact(f.t_values[j]),
                           format_exact(f.p_values[j]),
                           slope ? format_exact(f.standardized[j - 1]) : "",
                           slope ? format_exact(f.standardized_std_errors[j - 1]) : "",
                           format_exact(f.r_squared),
                           f.vif_infinite ? "Inf" : format_exact(f.mean_vif),
                           std::to_string(f.df), std::to_string(f.n)});
    }
  }
}

// Scatter and fitted line for single-predictor models.
inline void write_regression_plot(std::ostream& out, const std::vector<NamedModel>& models) {
  csv::write_row(out, {"model", "year", "x", "y", "weight", "fitted"});
  for (const auto& m : models) {
    if (m.predictors.size() != 1) continue;
    for (const auto& obs : m.data) {
      const double fitted = m.fit.coefficients[0] + m.fit.coefficients[1] * obs.x[0];
      csv::write_row(out, {m.label, std::to_string(obs.year), format_exact(obs.x[0]),
                           format_exact(obs.y), format_exact(obs.weight),
                           format_exact(fitted)});
    }
  }
}

}  // namespace procurisk
