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

// On-disk stage artifacts. Each file starts with '#' provenance lines,
// followed by a header row and the canonical curated columns; later stages
// append their own columns.

#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "procurisk/contract.hpp"
#include "procurisk/csv.hpp"
#include "procurisk/error.hpp"
#include "procurisk/format.hpp"
#include "procurisk/ingest.hpp"

namespace procurisk {

inline constexpr std::string_view kToolkitVersion = "procurisk 1.0.0";

struct Provenance {
  std::vector<std::pair<std::string, std::string>> inputs;  // label, sha256
  std::string config_digest;
};

inline void write_provenance(std::ostream& out, const Provenance& p) {
  out << "# " << kToolkitVersion << '\n';
  for (const auto& [label, hash] : p.inputs) {
    out << "# input " << label << " sha256=" << hash << '\n';
  }
  out << "# config sha256=" << p.config_digest << '\n';
}

inline void write_classified(std::ostream& out,
                             const std::vector<ClassifiedContract>& contracts) {
  std::vector<std::string> fields(kCuratedColumns.begin(), kCuratedColumns.end());
  fields.emplace_back("class");
  csv::write_row(out, fields);
  for (const auto& c : contracts) {
    fields.clear();
    append_curated_fields(c.contract, fields);
    fields.emplace_back(to_string(c.label));
    csv::write_row(out, fields);
  }
}

inline constexpr std::array<std::string_view, 7> kAnnotationColumns = {
    "class", "rad", "fav", "cpw", "spw", "t_cont_max", "t_spending_max"};

inline void write_annotated(std::ostream& out,
                            const std::vector<AnnotatedContract>& contracts) {
  std::vector<std::string> fields(kCuratedColumns.begin(), kCuratedColumns.end());
  fields.insert(fields.end(), kAnnotationColumns.begin(), kAnnotationColumns.end());
  csv::write_row(out, fields);
  for (const auto& a : contracts) {
    fields.clear();
    append_curated_fields(a.contract, fields);
    fields.emplace_back(to_string(a.label));
    fields.push_back(format_exact(a.factors.rad));
    fields.push_back(format_exact(a.factors.fav));
    fields.push_back(format_exact(a.factors.cpw));
    fields.push_back(format_exact(a.factors.spw));
    fields.push_back(std::to_string(a.buyer.t_cont_max));
    fields.push_back(format_exact(a.buyer.t_spending_max));
    csv::write_row(out, fields);
  }
}

namespace detail {

template <typename Fn>
void read_artifact(std::istream& in, std::size_t min_columns, std::string_view what,
                   Fn&& row) {
  csv::Reader reader(in, ',', '#');
  csv::Record rec;
  bool header = true;
  while (reader.next(rec)) {
    if (header) {
      header = false;
      if (rec.fields.size() < min_columns || rec.fields[0] != kCuratedColumns[0]) {
        throw DataError(std::string(what) + " file lacks the expected header");
      }
      continue;
    }
    if (rec.fields.size() < min_columns) {
      throw DataError(std::string(what) + " record on line " +
                      std::to_string(rec.line) + ": bad column count");
    }
    row(rec);
  }
}

inline ClassLabel label_field(const csv::Record& rec, std::size_t i) {
  const auto label = parse_class(rec.fields[i]);
  if (!label) {
    throw DataError("line " + std::to_string(rec.line) + ": bad class '" +
                    rec.fields[i] + "'");
  }
  return *label;
}

inline double number_field(const csv::Record& rec, std::size_t i) {
  const auto v = parse_double(rec.fields[i]);
  if (!v) {
    throw DataError("line " + std::to_string(rec.line) + ": bad number '" +
                    rec.fields[i] + "'");
  }
  return *v;
}

}  // namespace detail

inline std::vector<ClassifiedContract> read_classified(std::istream& in) {
  std::vector<ClassifiedContract> out;
  const std::size_t n = kCuratedColumns.size();
  detail::read_artifact(in, n + 1, "classified", [&](const csv::Record& rec) {
    out.push_back({curated_from_fields(rec.fields, 0, rec.line),
                   detail::label_field(rec, n)});
  });
  return out;
}

inline std::vector<AnnotatedContract> read_annotated(std::istream& in) {
  std::vector<AnnotatedContract> out;
  const std::size_t n = kCuratedColumns.size();
  detail::read_artifact(
      in, n + kAnnotationColumns.size(), "annotated", [&](const csv::Record& rec) {
        AnnotatedContract a;
        a.contract = curated_from_fields(rec.fields, 0, rec.line);
        a.label = detail::label_field(rec, n);
        a.factors.rad = detail::number_field(rec, n + 1);
        a.factors.fav = detail::number_field(rec, n + 2);
        a.factors.cpw = detail::number_field(rec, n + 3);
        a.factors.spw = detail::number_field(rec, n + 4);
        a.buyer.t_cont_max =
            static_cast<std::int64_t>(detail::number_field(rec, n + 5));
        a.buyer.t_spending_max = detail::number_field(rec, n + 6);
        out.push_back(std::move(a));
      });
  return out;
}

}  // namespace procurisk
