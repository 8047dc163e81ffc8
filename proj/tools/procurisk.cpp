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

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "procurisk/pipeline.hpp"

namespace {

using namespace procurisk;

char parse_delimiter(const std::string& s) {
  if (s.empty() || s == "auto") return '\0';
  if (s == "tab" || s == "\\t") return '\t';
  if (s.size() == 1 && (s == "," || s == ";" || s == "|" || s == "\t")) return s[0];
  throw ConfigError("unsupported delimiter '" + s + "'");
}

void apply_columns(ColumnSchema& schema, const std::vector<std::string>& specs) {
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--column expects field=Header, got '" + spec + "'");
    }
    const auto field = parse_field(trim(std::string_view(spec).substr(0, eq)));
    if (!field) throw ConfigError("unknown field in --column '" + spec + "'");
    schema.set(*field, spec.substr(eq + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Procurement-integrity analytics"};
  app.fallthrough();
  app.require_subcommand(1, 1);

  RunConfig cfg;
  std::string periods = "2013-2018,2019-2020";
  std::string thresholds;
  std::string delimiter = "auto";
  std::string fence = "whisker";
  std::string period;
  std::vector<std::string> columns;

  app.add_option("--input", cfg.input, "Contract file (delimited text with header)");
  app.add_option("--efos", cfg.efos, "EFOS supplier list, one name per line");
  app.add_option("--pcs", cfg.pcs, "PCS supplier list, one name per line");
  app.add_option("--ppp", cfg.ppp, "year,rate table (local currency per USD PPP)");
  app.add_option("--budgets", cfg.budgets, "year,federal_budget table (optional)");
  app.add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
  app.add_option("--periods", periods, "First and second period, A-B,C-D")
      ->capture_default_str();
  app.add_option("--ci-level", cfg.ci_level, "Confidence level of the CDF bands")
      ->capture_default_str();
  app.add_option("--grid", cfg.grid_size, "CDF evaluation grid size")->capture_default_str();
  app.add_option("--thresholds", thresholds, "rad=0.5,fav=0.9,cpw=5,spw=10000");
  app.add_option("--delimiter", delimiter, "auto, ',', ';', '|' or tab")
      ->capture_default_str();
  app.add_flag("--dedup", cfg.dedup, "Drop exact duplicate curated contracts");
  app.add_option("--fence", fence, "whisker or raw-min-max")->capture_default_str();
  app.add_option("--period", period, "1, 2 or all");
  app.add_option("--column", columns, "Map a field to an input header, field=Header");
  app.add_option("--seed", cfg.seed, "Recorded in the config digest; no stage samples at present")->capture_default_str();

  struct Stage {
    const char* name;
    const char* help;
    void (Pipeline::*run)();
  };
  const Stage stages[] = {
      {"ingest", "Parse, curate and convert the contract file", &Pipeline::ingest},
      {"classify", "Label contracts EFOS, PCS or NC", &Pipeline::classify},
      {"derive", "Relation aggregates and risk factors", &Pipeline::derive},
      {"compare-classes", "Pairwise class tests per period", &Pipeline::compare_classes},
      {"compare-periods", "Second period against the first, per class",
       &Pipeline::compare_periods},
      {"risk-eval", "Risk factors as descriptors and identifiers", &Pipeline::risk_eval},
      {"regress", "Yearly weighted regressions", &Pipeline::regress},
      {"report-all", "Run every stage and write all reports", &Pipeline::run_all},
  };
  for (const auto& s : stages) app.add_subcommand(s.name, s.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.periods = PeriodConfig::parse(periods);
    if (!thresholds.empty()) cfg.thresholds = parse_thresholds(thresholds);
    cfg.delimiter = parse_delimiter(delimiter);
    if (fence == "whisker") {
      cfg.fence = FenceMode::Whisker;
    } else if (fence == "raw-min-max") {
      cfg.fence = FenceMode::RawMinMax;
    } else {
      throw ConfigError("--fence must be whisker or raw-min-max");
    }
    if (!period.empty()) cfg.period = period;
    apply_columns(cfg.schema, columns);

    Pipeline pipeline(cfg);
    const std::string chosen = app.get_subcommands().front()->get_name();
    for (const auto& s : stages) {
      if (chosen == s.name) (pipeline.*s.run)();
    }
    for (const auto& w : pipeline.diagnostics().warnings) {
      std::cerr << "warning: " << w << '\n';
    }
    const RunCounts& n = pipeline.counts();
    if (n.input_lines > 0) {
      std::cerr << n.input_lines << " rows read, " << n.curated << " curated, "
                << n.rejected << " rejected\n";
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
