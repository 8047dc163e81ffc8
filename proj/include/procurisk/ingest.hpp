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

// Raw contract parsing, curation and USD PPP conversion.

#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "procurisk/contract.hpp"
#include "procurisk/csv.hpp"
#include "procurisk/error.hpp"
#include "procurisk/format.hpp"
#include "procurisk/normalize.hpp"

namespace procurisk {

enum class Field : std::uint8_t {
  buyer,
  supplier,
  government_order,
  procedure_character,
  contract_type,
  procedure_type,
  supplier_size,
  year,
  beginning_week,
  eb_weeks,
  spending_amount,
  spending_currency,
};

inline constexpr std::size_t kFieldCount = 12;

inline constexpr std::array<std::string_view, kFieldCount> kFieldNames = {
    "buyer",          "supplier",        "government_order",
    "procedure_character", "contract_type", "procedure_type",
    "supplier_size",  "year",            "beginning_week",
    "eb_weeks",       "spending_amount", "spending_currency"};

constexpr std::string_view to_string(Field f) {
  return kFieldNames[static_cast<std::size_t>(f)];
}

inline std::optional<Field> parse_field(std::string_view s) {
  for (std::size_t i = 0; i < kFieldCount; ++i) {
    if (s == kFieldNames[i]) return static_cast<Field>(i);
  }
  return std::nullopt;
}

// Maps each contract variable to an input column name. The currency column
// is optional; without it every amount is in local currency.
struct ColumnSchema {
  std::array<std::optional<std::string>, kFieldCount> columns;

  static ColumnSchema defaults() {
    ColumnSchema s;
    for (std::size_t i = 0; i < kFieldCount; ++i) {
      s.columns[i] = std::string(kFieldNames[i]);
    }
    return s;
  }

  void set(Field f, std::string column) {
    columns[static_cast<std::size_t>(f)] = std::move(column);
  }
  const std::optional<std::string>& column(Field f) const {
    return columns[static_cast<std::size_t>(f)];
  }
  static constexpr bool required(Field f) {
    return f != Field::spending_currency;
  }
};

struct RawContractRow {
  std::size_t source_line = 0;
  std::string buyer_name;
  std::string supplier_name;
  std::string government_order;
  std::string procedure_character;
  std::string contract_type;
  std::string procedure_type;
  std::string supplier_size;
  int year = 0;
  int beginning_week = 0;
  int eb_weeks = 0;
  double spending_amount = 0.0;
  std::string spending_currency;
};

enum class RejectKind : std::uint8_t {
  MissingField,
  BadEnum,
  BadNumber,
  UnknownYear,
  NegativeSpending,
};

struct RejectionRecord {
  std::size_t source_line = 0;
  RejectKind kind = RejectKind::MissingField;
  Field field = Field::buyer;
  std::string value;  // offending token, BadEnum only

  // Stable reason code, e.g. "MissingField(supplier)".
  std::string reason() const {
    const std::string name(to_string(field));
    switch (kind) {
      case RejectKind::MissingField: return "MissingField(" + name + ")";
      case RejectKind::BadEnum: return "BadEnum(" + name + "," + value + ")";
      case RejectKind::BadNumber: return "BadNumber(" + name + ")";
      case RejectKind::UnknownYear: return "UnknownYear";
      case RejectKind::NegativeSpending: return "NegativeSpending";
    }
    return "Unknown";
  }
};

// Local currency units per USD PPP, by year.
class PppTable {
 public:
  PppTable() = default;
  explicit PppTable(std::map<int, double> rates) : rates_(std::move(rates)) {
    for (const auto& [year, rate] : rates_) {
      if (!(rate > 0.0)) {
        throw ConfigError("PPP rate for " + std::to_string(year) +
                          " must be positive");
      }
    }
  }

  std::optional<double> rate(int year) const {
    auto it = rates_.find(year);
    if (it == rates_.end()) return std::nullopt;
    return it->second;
  }
  const std::map<int, double>& rates() const { return rates_; }

 private:
  std::map<int, double> rates_;
};

// Two-column `year,rate` file; a header row is optional.
inline PppTable load_ppp_table(std::istream& in) {
  std::map<int, double> rates;
  std::string line;
  std::size_t line_no = 0;
  char delimiter = '\0';
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (delimiter == '\0') delimiter = csv::detect_delimiter(view);
    const auto cut = view.find(delimiter);
    if (cut == std::string_view::npos) {
      throw ConfigError("PPP table line " + std::to_string(line_no) +
                        ": expected year" + delimiter + "rate");
    }
    const auto year = parse_int<int>(view.substr(0, cut));
    const auto rate = parse_double(view.substr(cut + 1));
    if (!year || !rate) {
      if (rates.empty() && !year) continue;  // header
      throw ConfigError("PPP table line " + std::to_string(line_no) +
                        ": cannot parse '" + std::string(view) + "'");
    }
    if (!rates.emplace(*year, *rate).second) {
      throw ConfigError("PPP table lists year " + std::to_string(*year) +
                        " twice");
    }
  }
  return PppTable(std::move(rates));
}

inline bool is_usd_ppp(std::string_view currency) {
  const std::string c = normalize_name(currency);
  return c == "USDPPP" || c == "USD PPP";
}

using ConversionResult = std::variant<double, RejectKind>;

inline ConversionResult convert_to_usd_ppp(double amount,
                                           std::string_view currency,
                                           int year, const PppTable& table) {
  if (amount < 0.0) return RejectKind::NegativeSpending;
  // The table also defines which years the corpus covers.
  const auto rate = table.rate(year);
  if (!rate) return RejectKind::UnknownYear;
  if (is_usd_ppp(currency)) return amount;
  return amount / *rate;
}

namespace detail {

struct ColumnIndex {
  std::array<std::optional<std::size_t>, kFieldCount> index;
};

inline ColumnIndex resolve_columns(const csv::Record& header,
                                   const ColumnSchema& schema) {
  ColumnIndex idx;
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    const auto& name = schema.columns[f];
    if (!name) {
      if (ColumnSchema::required(static_cast<Field>(f))) {
        throw ConfigError("schema does not map required variable '" +
                          std::string(kFieldNames[f]) + "'");
      }
      continue;
    }
    for (std::size_t c = 0; c < header.fields.size(); ++c) {
      if (trim(header.fields[c]) == *name) {
        idx.index[f] = c;
        break;
      }
    }
    if (!idx.index[f] && ColumnSchema::required(static_cast<Field>(f))) {
      throw ConfigError("input header has no column '" + *name +
                        "' (mapped from " + std::string(kFieldNames[f]) +
                        ")");
    }
  }
  return idx;
}

}  // namespace detail

using ParsedRow = std::variant<RawContractRow, RejectionRecord>;

// Streams rows to `sink` (callable with ParsedRow&&). Returns the number of
// data records seen. A zero `delimiter` auto-detects from the header.
template <typename Sink>
std::size_t for_each_contract_row(std::istream& in, const ColumnSchema& schema,
                                  Sink&& sink, char delimiter = '\0') {
  std::string header_line;
  std::size_t header_line_no = 0;
  while (std::getline(in, header_line)) {
    ++header_line_no;
    if (!trim(header_line).empty()) break;
  }
  if (trim(header_line).empty()) {
    throw ConfigError("contract input has no header row");
  }
  if (header_line.starts_with("\xEF\xBB\xBF")) header_line.erase(0, 3);
  if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
  if (delimiter == '\0') delimiter = csv::detect_delimiter(header_line);

  csv::Record header;
  {
    std::istringstream hs(header_line);
    csv::Reader hr(hs, delimiter);
    hr.next(header);
  }
  const detail::ColumnIndex idx = detail::resolve_columns(header, schema);

  csv::Reader reader(in, delimiter);
  csv::Record rec;
  std::size_t count = 0;
  while (reader.next(rec)) {
    ++count;
    const std::size_t line = rec.line + header_line_no;
    auto get = [&](Field f) -> std::optional<std::string_view> {
      const auto& col = idx.index[static_cast<std::size_t>(f)];
      if (!col) return std::nullopt;
      if (*col >= rec.fields.size()) return std::string_view{};
      return trim(rec.fields[*col]);
    };
    auto reject = [&](RejectKind kind, Field f) {
      RejectionRecord r;
      r.source_line = line;
      r.kind = kind;
      r.field = f;
      sink(ParsedRow(std::move(r)));
    };

    bool missing = false;
    for (std::size_t f = 0; f < kFieldCount; ++f) {
      const auto field = static_cast<Field>(f);
      if (!ColumnSchema::required(field)) continue;
      // An empty size means "no assigned size" (S.NA), not an omission.
      if (field == Field::supplier_size) continue;
      const auto v = get(field);
      if (v && v->empty()) {
        reject(RejectKind::MissingField, field);
        missing = true;
        break;
      }
    }
    if (missing) continue;

    RawContractRow row;
    row.source_line = line;
    row.buyer_name = *get(Field::buyer);
    row.supplier_name = *get(Field::supplier);
    row.government_order = *get(Field::government_order);
    row.procedure_character = *get(Field::procedure_character);
    row.contract_type = *get(Field::contract_type);
    row.procedure_type = *get(Field::procedure_type);
    row.supplier_size = *get(Field::supplier_size);
    if (auto cur = get(Field::spending_currency)) row.spending_currency = *cur;

    const auto year = parse_int<int>(*get(Field::year));
    if (!year) { reject(RejectKind::BadNumber, Field::year); continue; }
    const auto week = parse_int<int>(*get(Field::beginning_week));
    if (!week) { reject(RejectKind::BadNumber, Field::beginning_week); continue; }
    const auto eb = parse_int<int>(*get(Field::eb_weeks));
    if (!eb) { reject(RejectKind::BadNumber, Field::eb_weeks); continue; }
    const auto amount = parse_double(*get(Field::spending_amount));
    if (!amount) { reject(RejectKind::BadNumber, Field::spending_amount); continue; }
    row.year = *year;
    row.beginning_week = *week;
    row.eb_weeks = *eb;
    row.spending_amount = *amount;
    sink(ParsedRow(std::move(row)));
  }
  return count;
}

struct ParseOutput {
  std::vector<RawContractRow> rows;
  std::vector<RejectionRecord> rejections;
  std::size_t line_count = 0;
};

inline ParseOutput parse_contract_rows(std::istream& in,
                                       const ColumnSchema& schema,
                                       char delimiter = '\0') {
  ParseOutput out;
  out.line_count = for_each_contract_row(
      in, schema,
      [&](ParsedRow&& parsed) {
        if (auto* row = std::get_if<RawContractRow>(&parsed)) {
          out.rows.push_back(std::move(*row));
        } else {
          out.rejections.push_back(std::get<RejectionRecord>(std::move(parsed)));
        }
      },
      delimiter);
  return out;
}

using CurationResult = std::variant<CuratedContract, RejectionRecord>;

inline CurationResult curate(const RawContractRow& row, const PppTable& table) {
  auto reject = [&](RejectKind kind, Field f,
                    std::string value = {}) -> CurationResult {
    RejectionRecord r;
    r.source_line = row.source_line;
    r.kind = kind;
    r.field = f;
    r.value = std::move(value);
    return r;
  };

  CuratedContract c;
  c.buyer_id = normalize_name(row.buyer_name);
  if (c.buyer_id.empty()) return reject(RejectKind::MissingField, Field::buyer);
  c.supplier_id = normalize_name(row.supplier_name);
  if (c.supplier_id.empty()) {
    return reject(RejectKind::MissingField, Field::supplier);
  }

  const auto go = parse_enum<GovernmentOrder>(row.government_order);
  if (!go) {
    return reject(RejectKind::BadEnum, Field::government_order,
                  row.government_order);
  }
  const auto pc = parse_enum<ProcedureCharacter>(row.procedure_character);
  if (!pc) {
    return reject(RejectKind::BadEnum, Field::procedure_character,
                  row.procedure_character);
  }
  const auto ct = parse_enum<ContractType>(row.contract_type);
  if (!ct) {
    return reject(RejectKind::BadEnum, Field::contract_type, row.contract_type);
  }
  const auto pt = parse_enum<ProcedureType>(row.procedure_type);
  if (!pt) {
    return reject(RejectKind::BadEnum, Field::procedure_type,
                  row.procedure_type);
  }
  std::optional<SupplierSize> size = SupplierSize::NA;
  if (!trim(row.supplier_size).empty()) {
    size = parse_enum<SupplierSize>(row.supplier_size);
    if (!size) {
      return reject(RejectKind::BadEnum, Field::supplier_size,
                    row.supplier_size);
    }
  }

  // Some registries number weeks from 0.
  int week = row.beginning_week == 0 ? 1 : row.beginning_week;
  if (week < 1 || week > 53) {
    return reject(RejectKind::BadNumber, Field::beginning_week);
  }
  if (row.eb_weeks < 0) return reject(RejectKind::BadNumber, Field::eb_weeks);

  const ConversionResult usd = convert_to_usd_ppp(
      row.spending_amount, row.spending_currency, row.year, table);
  if (const auto* kind = std::get_if<RejectKind>(&usd)) {
    return reject(*kind, *kind == RejectKind::UnknownYear
                             ? Field::year
                             : Field::spending_amount);
  }

  c.go = *go;
  c.pc = *pc;
  c.ct = *ct;
  c.pt = *pt;
  c.size = *size;
  c.year = row.year;
  c.beginning_week = week;
  c.eb_weeks = row.eb_weeks;
  c.spending_usd_ppp = std::get<double>(usd);
  return c;
}

// ---------------------------------------------------------------------------
// Canonical curated file.

inline constexpr std::array<std::string_view, 11> kCuratedColumns = {
    "buyer_id", "supplier_id", "go", "pc", "ct", "pt", "size",
    "year", "beginning_week", "eb_weeks", "spending_usd_ppp"};

inline void append_curated_fields(const CuratedContract& c,
                                  std::vector<std::string>& out) {
  out.push_back(c.buyer_id);
  out.push_back(c.supplier_id);
  out.emplace_back(to_string(c.go));
  out.emplace_back(to_string(c.pc));
  out.emplace_back(to_string(c.ct));
  out.emplace_back(to_string(c.pt));
  out.emplace_back(to_string(c.size));
  out.push_back(std::to_string(c.year));
  out.push_back(std::to_string(c.beginning_week));
  out.push_back(std::to_string(c.eb_weeks));
  out.push_back(format_exact(c.spending_usd_ppp));
}

// Reads the canonical columns starting at `offset` within `fields`.
inline CuratedContract curated_from_fields(const std::vector<std::string>& f,
                                           std::size_t offset,
                                           std::size_t line) {
  auto fail = [&](std::string_view what) -> DataError {
    return DataError("curated record on line " + std::to_string(line) +
                     ": bad " + std::string(what));
  };
  if (f.size() < offset + kCuratedColumns.size()) throw fail("column count");
  CuratedContract c;
  c.buyer_id = f[offset + 0];
  c.supplier_id = f[offset + 1];
  auto go = parse_enum<GovernmentOrder>(f[offset + 2]);
  auto pc = parse_enum<ProcedureCharacter>(f[offset + 3]);
  auto ct = parse_enum<ContractType>(f[offset + 4]);
  auto pt = parse_enum<ProcedureType>(f[offset + 5]);
  auto size = parse_enum<SupplierSize>(f[offset + 6]);
  auto year = parse_int<int>(f[offset + 7]);
  auto week = parse_int<int>(f[offset + 8]);
  auto eb = parse_int<int>(f[offset + 9]);
  auto spend = parse_double(f[offset + 10]);
  if (c.buyer_id.empty() || c.supplier_id.empty()) throw fail("identifier");
  if (!go || !pc || !ct || !pt || !size) throw fail("category");
  if (!year || !week || !eb || !spend) throw fail("number");
  c.go = *go;
  c.pc = *pc;
  c.ct = *ct;
  c.pt = *pt;
  c.size = *size;
  c.year = *year;
  c.beginning_week = *week;
  c.eb_weeks = *eb;
  c.spending_usd_ppp = *spend;
  return c;
}

inline void write_curated(std::ostream& out,
                          const std::vector<CuratedContract>& contracts) {
  csv::write_row(out, kCuratedColumns);
  std::vector<std::string> fields;
  for (const auto& c : contracts) {
    fields.clear();
    append_curated_fields(c, fields);
    csv::write_row(out, fields);
  }
}

inline std::vector<CuratedContract> read_curated(std::istream& in) {
  csv::Reader reader(in, ',', '#');
  csv::Record rec;
  std::vector<CuratedContract> out;
  bool header = true;
  while (reader.next(rec)) {
    if (header) {
      header = false;
      if (rec.fields.empty() || rec.fields[0] != kCuratedColumns[0]) {
        throw DataError("curated file lacks the canonical header");
      }
      continue;
    }
    out.push_back(curated_from_fields(rec.fields, 0, rec.line));
  }
  return out;
}

inline void write_rejections(std::ostream& out,
                             const std::vector<RejectionRecord>& rejections) {
  csv::write_row(out, {"source_line", "reason"});
  for (const auto& r : rejections) {
    csv::write_row(out, {std::to_string(r.source_line), r.reason()});
  }
}

// Keeps the first occurrence of each exactly repeated curated contract.
inline std::size_t deduplicate(std::vector<CuratedContract>& contracts) {
  std::unordered_set<std::string> seen;
  seen.reserve(contracts.size());
  std::vector<std::string> fields;
  std::size_t removed = 0;
  std::vector<CuratedContract> kept;
  kept.reserve(contracts.size());
  for (auto& c : contracts) {
    fields.clear();
    append_curated_fields(c, fields);
    std::string key;
    for (const auto& f : fields) {
      key += f;
      key.push_back('\x1f');
    }
    if (seen.insert(std::move(key)).second) {
      kept.push_back(std::move(c));
    } else {
      ++removed;
    }
  }
  contracts = std::move(kept);
  return removed;
}

}  // namespace procurisk
