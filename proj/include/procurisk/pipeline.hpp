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

// Stage orchestration. Every stage reads the previous stage's artifact from
// the output directory unless it already holds the data in memory, so a run
// can be resumed stage by stage or executed end to end by run_all().

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "procurisk/artifacts.hpp"
#include "procurisk/classify.hpp"
#include "procurisk/derive.hpp"
#include "procurisk/digest.hpp"
#include "procurisk/error.hpp"
#include "procurisk/ingest.hpp"
#include "procurisk/period_compare.hpp"
#include "procurisk/regress.hpp"
#include "procurisk/report.hpp"
#include "procurisk/risk_eval.hpp"
#include "procurisk/stats.hpp"
#include "procurisk/variables.hpp"

namespace procurisk {

struct RunConfig {
  std::string input;
  std::string efos;
  std::string pcs;
  std::string ppp;
  std::string budgets;  // optional
  std::string out_dir = "out";
  ColumnSchema schema = ColumnSchema::defaults();
  PeriodConfig periods;
  RiskThresholds thresholds;
  double ci_level = 0.99;
  std::size_t grid_size = 200;
  char delimiter = '\0';  // auto-detect
  bool dedup = false;
  FenceMode fence = FenceMode::Whisker;
  std::optional<std::string> period;  // "1", "2" or "all"
  std::uint64_t seed = 0;             // reserved for sampling; unused by the stages

  void validate() const {
    periods.validate();
    thresholds.validate();
    if (!(ci_level > 0.0 && ci_level < 1.0)) {
      throw ConfigError("CI level must lie in (0, 1)");
    }
    if (grid_size < 10) throw ConfigError("grid size must be at least 10");
    if (period && *period != "1" && *period != "2" && *period != "all") {
      throw ConfigError("--period must be 1, 2 or all");
    }
    if (out_dir.empty()) throw ConfigError("output directory is empty");
  }

  // Canonical text of every setting that affects results; paths excluded
  // because inputs are identified by content hash.
  std::string canonical() const {
    std::ostringstream s;
    for (std::size_t i = 0; i < kFieldCount; ++i) {
      s << kFieldNames[i] << '=' << schema.columns[i].value_or("") << '\n';
    }
    s << "periods=" << periods.first.first << '-' << periods.first.last << ','
      << periods.second.first << '-' << periods.second.last << '\n'
      << "rad=" << format_exact(thresholds.rad_min) << '\n'
      << "fav=" << format_exact(thresholds.fav_min) << '\n'
      << "cpw=" << format_exact(thresholds.cpw_min) << '\n'
      << "spw=" << format_exact(thresholds.spw_min) << '\n'
      << "ci_level=" << format_exact(ci_level) << '\n'
      << "grid=" << grid_size << '\n'
      << "delimiter=" << (delimiter == '\0' ? std::string("auto") : std::string(1, delimiter))
      << '\n'
      << "dedup=" << dedup << '\n'
      << "fence=" << (fence == FenceMode::Whisker ? "whisker" : "raw-min-max") << '\n'
      << "period=" << period.value_or("default") << '\n'
      << "seed=" << seed << '\n';
    return s.str();
  }
};

inline RiskThresholds parse_thresholds(std::string_view spec) {
  RiskThresholds t;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto end = std::min(spec.find(',', start), spec.size());
    const std::string_view item = trim(spec.substr(start, end - start));
    start = end + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("threshold '" + std::string(item) + "' is not key=value");
    }
    const std::string_view key = trim(item.substr(0, eq));
    const auto value = parse_double(item.substr(eq + 1));
    if (!value) throw ConfigError("threshold '" + std::string(item) + "' has a bad value");
    if (key == "rad") t.rad_min = *value;
    else if (key == "fav") t.fav_min = *value;
    else if (key == "cpw") t.cpw_min = *value;
    else if (key == "spw") t.spw_min = *value;
    else throw ConfigError("unknown threshold '" + std::string(key) + "'");
  }
  t.validate();
  return t;
}

struct RunCounts {
  std::size_t input_lines = 0;
  std::size_t curated = 0;
  std::size_t rejected = 0;
  std::size_t duplicates_removed = 0;
  std::size_t relations = 0;
  std::size_t conflicts = 0;
};

class Pipeline {
 public:
  explicit Pipeline(RunConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    std::filesystem::create_directories(cfg_.out_dir);
  }

  const RunConfig& config() const { return cfg_; }
  const RunCounts& counts() const { return counts_; }
  const Diagnostics& diagnostics() const { return diag_; }
  const std::vector<AnnotatedContract>& annotated() const { return annotated_; }

  // -------------------------------------------------------------------------
  void ingest() {
    require(cfg_.input, "--input");
    require(cfg_.ppp, "--ppp");
    PppTable table = [&] {
      std::ifstream in = open_input(cfg_.ppp);
      return load_ppp_table(in);
    }();
    std::ifstream in = open_input(cfg_.input);
    std::vector<CuratedContract> curated;
    std::vector<RejectionRecord> rejections;
    counts_.input_lines = for_each_contract_row(
        in, cfg_.schema,
        [&](ParsedRow&& parsed) {
          if (auto* rej = std::get_if<RejectionRecord>(&parsed)) {
            rejections.push_back(*rej);
            return;
          }
          auto result = curate(std::get<RawContractRow>(parsed), table);
          if (auto* c = std::get_if<CuratedContract>(&result)) {
            curated.push_back(std::move(*c));
          } else {
            rejections.push_back(std::get<RejectionRecord>(result));
          }
        },
        cfg_.delimiter);
    counts_.rejected = rejections.size();
    if (cfg_.dedup) counts_.duplicates_removed = deduplicate(curated);
    counts_.curated = curated.size();

    {
      std::ofstream out = open_output("rejections.csv");
      write_rejections(out, rejections);
    }
    if (curated.empty()) {
      std::map<std::string, std::size_t> by_reason;
      for (const auto& r : rejections) ++by_reason[r.reason()];
      std::string summary;
      for (const auto& [reason, n] : by_reason) {
        summary += "\n  " + reason + ": " + std::to_string(n);
      }
      throw DataError("no contract survived curation (" +
                      std::to_string(counts_.input_lines) + " input rows, " +
                      std::to_string(rejections.size()) + " rejected)" + summary);
    }
    std::ofstream out = open_output("curated.csv");
    write_curated(out, curated);
    curated_ = std::move(curated);
    have_curated_ = true;
  }

  // -------------------------------------------------------------------------
  void classify() {
    load_curated();
    require(cfg_.efos, "--efos");
    require(cfg_.pcs, "--pcs");
    SupplierSet efos;
    SupplierSet pcs;
    {
      std::ifstream in = open_input(cfg_.efos);
      efos = load_blocklist(in, &diag_, "EFOS list");
    }
    {
      std::ifstream in = open_input(cfg_.pcs);
      pcs = load_blocklist(in, &diag_, "PCS list");
    }
    ConflictLog conflicts;
    classified_ = classify_all(std::move(curated_), efos, pcs, &conflicts);
    curated_.clear();
    have_curated_ = false;
    have_classified_ = true;
    counts_.conflicts = conflicts.suppliers().size();
    for (const auto& s : conflicts.suppliers()) {
      diag_.warn("supplier '" + s + "' is on both lists; labelled EFOS");
    }
    {
      std::ofstream out = open_output("conflicts.csv");
      csv::write_row(out, {"supplier_id", "resolved_class"});
      for (const auto& s : conflicts.suppliers()) csv::write_row(out, {s, "EFOS"});
    }
    std::ofstream out = open_output("classified.csv");
    write_classified(out, classified_);
  }

  // -------------------------------------------------------------------------
  void derive() {
    load_classified();
    RelationTable table = derive_relations(classified_);
    counts_.relations = table.relations().size();
    {
      std::ofstream out = open_output("relations.csv");
      write_relations(out, table.relations());
    }
    {
      std::ofstream out = open_output("buyers.csv");
      write_buyers(out, table.buyers());
    }
    annotated_ = annotate_contracts(std::move(classified_), table);
    classified_.clear();
    have_classified_ = false;
    have_annotated_ = true;
    std::ofstream out = open_output("annotated.csv");
    write_annotated(out, annotated_);
  }

  // -------------------------------------------------------------------------
  // Pairwise class comparison on the characteristic variables, one block
  // per period (both periods unless --period selects one).
  void compare_classes() {
    load_annotated();
    const auto dummies = all_dummy_variables();
    const auto numerics = characteristic_numeric_variables();
    std::vector<std::string> selections{"1", "2"};
    if (cfg_.period) selections = {*cfg_.period};
    comparisons_.clear();
    static constexpr std::array<std::pair<ClassLabel, ClassLabel>, 3> kPairs = {
        std::pair{ClassLabel::EFOS, ClassLabel::PCS},
        std::pair{ClassLabel::EFOS, ClassLabel::NC},
        std::pair{ClassLabel::PCS, ClassLabel::NC}};
    for (const auto& sel : selections) {
      for (const auto& [a, b] : kPairs) {
        const ContractView va = select_class(a, sel);
        const ContractView vb = select_class(b, sel);
        try {
          comparisons_.push_back(
              {a, b, sel,
               class_pair_comparison(to_string(a), va, to_string(b), vb, dummies,
                                     numerics)});
        } catch (const DomainError& e) {
          diag_.warn("compare " + std::string(to_string(a)) + " vs " +
                     std::string(to_string(b)) + " (period " + sel + "): " + e.what());
        }
      }
    }
    std::ofstream out = open_output("comparisons.csv");
    write_comparisons(out, comparisons_);
  }

  // -------------------------------------------------------------------------
  void compare_periods() {
    load_annotated();
    PeriodCompareOptions opt;
    opt.ci_level = cfg_.ci_level;
    opt.grid_size = cfg_.grid_size;
    opt.fence = cfg_.fence;
    const auto dummies = all_dummy_variables();
    const auto numerics = all_numeric_variables();
    period_results_.clear();
    std::ofstream verdicts = open_output("period_verdicts.csv");
    bool header = true;
    for (ClassLabel cls : kAllClasses) {
      const ContractView view = select_class(cls, "all");
      if (view.empty()) {
        diag_.warn(std::string(to_string(cls)) + " has no contracts; period comparison skipped");
        continue;
      }
      PeriodComparison pc = procurisk::compare_periods(view, cfg_.periods, dummies, numerics, opt,
                                            &diag_, to_string(cls));
      write_period_verdicts(verdicts, cls, pc, header);
      header = false;
      {
        std::ofstream out =
            open_output("period_dummies_" + std::string(to_string(cls)) + ".csv");
        write_dummy_plot(out, pc);
      }
      for (const auto& panel : pc.numerics) {
        std::ofstream out = open_output("period_cdf_" + std::string(to_string(cls)) +
                                        "_" + panel.variable + ".csv");
        write_cdf_plot(out, panel);
      }
      period_results_.emplace_back(cls, std::move(pc));
    }
    if (header) {
      csv::write_row(verdicts, {"class", "variable", "kind", "year", "value",
                                "lower_fence", "upper_fence", "coverage_outside",
                                "verdict"});
    }
  }

  // -------------------------------------------------------------------------
  void risk_eval() {
    load_annotated();
    const std::string sel = cfg_.period.value_or("all");
    const ContractView corpus = select_period(sel);
    pr_blocks_.clear();
    risk_verdicts_.clear();
    const RiskThresholds& t = cfg_.thresholds;
    const std::vector<FactorPredicate> headline = {
        FactorPredicate::single(Factor::RAD, t.rad_min),
        FactorPredicate::single(Factor::Fav, t.fav_min),
        FactorPredicate::single(Factor::CPW, t.cpw_min),
        FactorPredicate::single(Factor::SPW, t.spw_min),
        FactorPredicate::joint(t.cpw_min, t.spw_min)};
    std::vector<double> joint_c{3.0, 4.0, 5.0};
    if (std::find(joint_c.begin(), joint_c.end(), t.cpw_min) == joint_c.end()) {
      joint_c.push_back(t.cpw_min);
      std::sort(joint_c.begin(), joint_c.end());
    }
    for (ClassLabel cls : {ClassLabel::EFOS, ClassLabel::PCS}) {
      const bool present = std::any_of(corpus.begin(), corpus.end(),
                                       [&](const AnnotatedContract& a) { return a.label == cls; });
      if (!present) {
        diag_.warn(std::string(to_string(cls)) + " has no contracts in period " + sel +
                   "; risk evaluation skipped");
        continue;
      }
      for (const auto& pred : headline) {
        RiskVerdict v;
        v.cls = cls;
        v.predicate = pred.kind == FactorPredicate::Kind::JointCpwSpw
                          ? "CPW&SPW"
                          : pred.name();
        v.threshold = pred.threshold;
        v.descriptor = recall_given_class(corpus, cls, pred);
        v.identifier = precision_given_flag(corpus, cls, pred);
        risk_verdicts_.push_back(std::move(v));
      }
      for (Factor f : {Factor::RAD, Factor::Fav, Factor::CPW, Factor::SPW}) {
        const std::vector<double> grid = default_threshold_grid(f);
        pr_blocks_.push_back({cls, std::string(to_string(f)),
                              pr_curve(corpus, cls, f, grid)});
      }
      pr_blocks_.push_back({cls, "CPW_SPW_joint",
                            joint_cpw_spw_points(corpus, cls, joint_c)});
    }
    {
      std::ofstream out = open_output("pr_curves.csv");
      write_pr_curves(out, pr_blocks_);
    }
    std::ofstream out = open_output("risk_verdicts.csv");
    write_risk_verdicts(out, risk_verdicts_);
  }

  // -------------------------------------------------------------------------
  void regress() {
    load_annotated();
    models_.clear();
    retained_.clear();
    const RiskThresholds& t = cfg_.thresholds;
    const DummyVariable& dependent = find_dummy("PT.AD");
    const Regressor rad = factor_regressor(FactorPredicate::single(Factor::RAD, t.rad_min));
    const Regressor fav = factor_regressor(FactorPredicate::single(Factor::Fav, t.fav_min));
    const Regressor joint =
        factor_regressor(FactorPredicate::joint(t.cpw_min, t.spw_min));
    std::vector<Regressor> controls;
    for (const auto& v : dummy_variables()) {
      const std::string_view n = v.name;
      if (n.starts_with("PC.") || n.starts_with("CT.") || n.starts_with("S.")) {
        controls.push_back(dummy_regressor(v));
      }
    }
    controls.push_back(joint);
    controls.push_back(fav);

    for (ClassLabel cls : {ClassLabel::EFOS, ClassLabel::PCS}) {
      std::vector<NamedModel> pair_models;
      auto fit = [&](std::vector<Regressor> regs) -> std::optional<NamedModel> {
        NamedModel m;
        m.cls = cls;
        m.dependent = std::string(dependent.name);
        for (const auto& r : regs) m.predictors.push_back(r.name);
        m.label = std::string(to_string(cls)) + ":";
        for (std::size_t i = 0; i < regs.size(); ++i) {
          m.label += (i ? "+" : "") + regs[i].name;
        }
        try {
          m.data = build_yearly_dataset(annotated_, cls, dependent, regs, true, &diag_);
          m.fit = wls_fit(m.data, m.predictors);
        } catch (const DomainError& e) {
          diag_.warn("model " + m.label + ": " + e.what());
          return std::nullopt;
        }
        return m;
      };
      for (const Regressor& single : {rad, fav}) {
        if (auto m = fit({single})) models_.push_back(std::move(*m));
      }
      for (const Regressor& c : controls) {
        if (auto m = fit({rad, c})) pair_models.push_back(std::move(*m));
      }
      std::vector<NamedModel> kept = screening_report(pair_models);
      {
        std::ofstream out =
            open_output("regression_table_" + std::string(to_string(cls)) + ".csv");
        write_model_table(out, kept, rad.name);
      }
      for (auto& m : kept) retained_.push_back(m.label);
      for (auto& m : pair_models) models_.push_back(std::move(m));
    }
    {
      std::ofstream out = open_output("regression_models.csv");
      write_model_rows(out, models_);
    }
    std::ofstream out = open_output("regression_plot.csv");
    write_regression_plot(out, models_);
  }

  // -------------------------------------------------------------------------
  void context_reports() {
    load_annotated();
    std::optional<std::map<int, double>> budgets;
    if (!cfg_.budgets.empty()) {
      std::ifstream in = open_input(cfg_.budgets);
      budgets = load_budgets(in);
    }
    context_ = context_table(annotated_, budgets ? &*budgets : nullptr);
    {
      std::ofstream out = open_output("context_years.csv");
      write_context_years(out, *context_);
    }
    {
      std::ofstream out = open_output("context_classes.csv");
      write_context_classes(out, *context_);
    }
    {
      std::ofstream out = open_output("descriptive_stats.csv");
      write_descriptive_header(out);
      for (ClassLabel cls : kAllClasses) {
        try {
          write_descriptive_rows(out, cls, descriptive_stats(annotated_, cls));
        } catch (const DomainError& e) {
          diag_.warn(e.what());
        }
      }
    }
    std::ofstream out = open_output("sample_sizes.csv");
    write_sample_sizes(out, sample_sizes(annotated_, cfg_.periods));
  }

  // -------------------------------------------------------------------------
  void write_summary() {
    using nlohmann::ordered_json;
    ordered_json j;
    j["toolkit"] = std::string(kToolkitVersion);
    ordered_json prov = ordered_json::object();
    for (const auto& [label, hash] : provenance().inputs) prov[label] = hash;
    j["inputs_sha256"] = prov;
    j["config_sha256"] = provenance().config_digest;
    j["counts"] = {{"input_rows", counts_.input_lines},
                   {"curated", counts_.curated},
                   {"rejected", counts_.rejected},
                   {"duplicates_removed", counts_.duplicates_removed},
                   {"relations", counts_.relations},
                   {"list_conflicts", counts_.conflicts}};
    ordered_json classes = ordered_json::object();
    for (ClassLabel cls : kAllClasses) {
      classes[std::string(to_string(cls))] = std::count_if(
          annotated_.begin(), annotated_.end(),
          [&](const AnnotatedContract& a) { return a.label == cls; });
    }
    j["class_sizes"] = classes;

    ordered_json comp = ordered_json::array();
    for (const auto& blk : comparisons_) {
      ordered_json sig = ordered_json::array();
      for (const auto& f : blk.findings) {
        if (f.significant) sig.push_back(f.variable);
      }
      comp.push_back({{"class_a", to_string(blk.a)},
                      {"class_b", to_string(blk.b)},
                      {"period", blk.period},
                      {"significant", sig}});
    }
    j["class_comparisons"] = comp;

    ordered_json periods = ordered_json::array();
    for (const auto& [cls, pc] : period_results_) {
      ordered_json different = ordered_json::array();
      auto add = [&](const std::vector<PeriodVerdict>& vs) {
        for (const auto& v : vs) {
          if (v.verdict == Verdict::Different) {
            different.push_back({{"variable", v.variable}, {"year", v.year}});
          }
        }
      };
      for (const auto& p : pc.dummies) add(p.verdicts);
      for (const auto& p : pc.numerics) add(p.verdicts);
      periods.push_back({{"class", to_string(cls)}, {"different", different}});
    }
    j["period_comparison"] = {
        {"coverage_definition",
         "fraction of quantile-grid points of the pooled first-period sample "
         "where the yearly CDF lies strictly outside the pointwise band"},
        {"ci_level", cfg_.ci_level},
        {"grid_size", cfg_.grid_size},
        {"classes", periods}};

    ordered_json risk = ordered_json::array();
    for (const auto& v : risk_verdicts_) {
      risk.push_back({{"class", to_string(v.cls)},
                      {"predicate", v.predicate},
                      {"threshold", v.threshold},
                      {"recall", v.descriptor.recall},
                      {"descriptor", v.descriptor.useful},
                      {"precision", v.identifier.precision
                                        ? ordered_json(*v.identifier.precision)
                                        : ordered_json(nullptr)},
                      {"baseline", v.identifier.baseline},
                      {"identifier", v.identifier.useful}});
    }
    j["risk_factors"] = risk;

    ordered_json models = ordered_json::array();
    for (const auto& m : models_) {
      models.push_back({{"model", m.label},
                        {"r_squared", m.fit.r_squared},
                        {"mean_vif", m.fit.vif_infinite ? ordered_json(nullptr)
                                                        : ordered_json(m.fit.mean_vif)},
                        {"df", m.fit.df},
                        {"retained", std::find(retained_.begin(), retained_.end(),
                                               m.label) != retained_.end()}});
    }
    j["regression"] = models;
    j["warnings"] = diag_.warnings;

    std::ofstream out(path("summary.json"), std::ios::binary);
    if (!out) throw ConfigError("cannot write summary.json");
    out << j.dump(2) << '\n';
  }

  void run_all() {
    ingest();
    classify();
    derive();
    compare_classes();
    compare_periods();
    risk_eval();
    regress();
    context_reports();
    write_summary();
  }

 private:
  static void require(const std::string& value, std::string_view flag) {
    if (value.empty()) throw ConfigError(std::string(flag) + " is required for this stage");
  }

  static std::ifstream open_input(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + p + "'");
    return in;
  }

  std::string path(std::string_view name) const {
    return (std::filesystem::path(cfg_.out_dir) / name).string();
  }

  // Output file with its provenance header already written.
  std::ofstream open_output(std::string_view name) {
    std::ofstream out(path(name), std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path(name) + "'");
    write_provenance(out, provenance());
    return out;
  }

  const Provenance& provenance() {
    if (!provenance_) {
      Provenance p;
      const std::pair<const char*, const std::string*> inputs[] = {
          {"contracts", &cfg_.input}, {"efos", &cfg_.efos}, {"pcs", &cfg_.pcs},
          {"ppp", &cfg_.ppp},         {"budgets", &cfg_.budgets}};
      for (const auto& [label, file] : inputs) {
        if (!file->empty() && std::filesystem::exists(*file)) {
          p.inputs.emplace_back(label, sha256_file(*file));
        }
      }
      p.config_digest = sha256_hex(cfg_.canonical());
      provenance_ = std::move(p);
    }
    return *provenance_;
  }

  std::ifstream open_artifact(std::string_view name, std::string_view stage) {
    std::ifstream in(path(name), std::ios::binary);
    if (!in) {
      throw ConfigError("missing " + path(name) + "; run the '" + std::string(stage) +
                        "' stage first");
    }
    return in;
  }

  void load_curated() {
    if (have_curated_) return;
    std::ifstream in = open_artifact("curated.csv", "ingest");
    curated_ = read_curated(in);
    have_curated_ = true;
  }

  void load_classified() {
    if (have_classified_) return;
    std::ifstream in = open_artifact("classified.csv", "classify");
    classified_ = read_classified(in);
    have_classified_ = true;
  }

  void load_annotated() {
    if (have_annotated_) return;
    std::ifstream in = open_artifact("annotated.csv", "derive");
    annotated_ = read_annotated(in);
    have_annotated_ = true;
  }

  bool in_selection(int year, std::string_view sel) const {
    if (sel == "all") return period_of(year, cfg_.periods) != Period::OutOfRange;
    return to_string(period_of(year, cfg_.periods)) == sel;
  }

  ContractView select_class(ClassLabel cls, std::string_view sel) const {
    return select(annotated_, [&](const AnnotatedContract& a) {
      return a.label == cls && in_selection(a.contract.year, sel);
    });
  }

  ContractView select_period(std::string_view sel) const {
    return select(annotated_, [&](const AnnotatedContract& a) {
      return in_selection(a.contract.year, sel);
    });
  }

  RunConfig cfg_;
  Diagnostics diag_;
  RunCounts counts_;
  std::optional<Provenance> provenance_;

  std::vector<CuratedContract> curated_;
  std::vector<ClassifiedContract> classified_;
  std::vector<AnnotatedContract> annotated_;
  bool have_curated_ = false;
  bool have_classified_ = false;
  bool have_annotated_ = false;

  std::vector<ComparisonBlock> comparisons_;
  std::vector<std::pair<ClassLabel, PeriodComparison>> period_results_;
  std::vector<PrCurveBlock> pr_blocks_;
  std::vector<RiskVerdict> risk_verdicts_;
  std::vector<NamedModel> models_;
  std::vector<std::string> retained_;
  std::optional<ContextTable> context_;
};

}  // namespace procurisk
