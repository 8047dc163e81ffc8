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

#pragma once

#include <functional>
#include <cstdint>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "procurisk/contract.hpp"
#include "procurisk/error.hpp"
#include "procurisk/format.hpp"
#include "procurisk/normalize.hpp"

namespace procurisk {

// Normalized supplier identifiers from one blocklist snapshot.
class SupplierSet {
 public:
  SupplierSet() = default;

  // Normalizes `name`; empty results are ignored.
  void add(std::string_view name) {
    std::string id = normalize_name(name);
    if (!id.empty()) ids_.insert(std::move(id));
  }
  bool contains(std::string_view normalized_id) const {
    return ids_.find(normalized_id) != ids_.end();
  }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_set<std::string, Hash, std::equal_to<>> ids_;
};

inline SupplierSet load_blocklist(std::istream& in, Diagnostics* diag = nullptr,
                                  std::string_view label = "blocklist") {
  SupplierSet set;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    set.add(line);
  }
  if (set.empty() && diag) {
    diag->warn(std::string(label) + " is empty; no contract gets that label");
  }
  return set;
}

// Suppliers found on both lists; they are labelled EFOS.
class ConflictLog {
 public:
  void record(std::string_view supplier_id) {
    suppliers_.emplace(supplier_id);
  }
  const std::set<std::string>& suppliers() const { return suppliers_; }

 private:
  std::set<std::string> suppliers_;
};

inline ClassLabel classify_contract(const CuratedContract& c,
                                    const SupplierSet& efos,
                                    const SupplierSet& pcs,
                                    ConflictLog* conflicts = nullptr) {
  const bool in_efos = efos.contains(c.supplier_id);
  const bool in_pcs = pcs.contains(c.supplier_id);
  if (in_efos && in_pcs && conflicts) conflicts->record(c.supplier_id);
  if (in_efos) return ClassLabel::EFOS;
  if (in_pcs) return ClassLabel::PCS;
  return ClassLabel::NC;
}

struct YearRange {
  int first = 0;
  int last = 0;

  bool contains(int year) const { return year >= first && year <= last; }
  friend bool operator==(const YearRange&, const YearRange&) = default;
};

enum class Period : std::uint8_t { First, Second, OutOfRange };

constexpr std::string_view to_string(Period p) {
  switch (p) {
    case Period::First: return "1";
    case Period::Second: return "2";
    case Period::OutOfRange: return "out";
  }
  return "out";
}

struct PeriodConfig {
  YearRange first{2013, 2018};
  YearRange second{2019, 2020};

  void validate() const {
    if (first.first > first.last || second.first > second.last) {
      throw ConfigError("period year ranges must be non-empty");
    }
    if (first.first <= second.last && second.first <= first.last) {
      throw ConfigError("period year ranges overlap");
    }
  }

  const YearRange& range(Period p) const {
    return p == Period::First ? first : second;
  }

  // Parses "2013-2018,2019-2020".
  static PeriodConfig parse(std::string_view spec) {
    auto range = [&](std::string_view part) {
      part = trim(part);
      const auto dash = part.find('-', 1);
      if (dash == std::string_view::npos) {
        const auto y = parse_int<int>(part);
        if (!y) throw ConfigError("bad period range '" + std::string(part) + "'");
        return YearRange{*y, *y};
      }
      const auto lo = parse_int<int>(part.substr(0, dash));
      const auto hi = parse_int<int>(part.substr(dash + 1));
      if (!lo || !hi) {
        throw ConfigError("bad period range '" + std::string(part) + "'");
      }
      return YearRange{*lo, *hi};
    };
    const auto comma = spec.find(',');
    if (comma == std::string_view::npos) {
      throw ConfigError("--periods needs two ranges, e.g. 2013-2018,2019-2020");
    }
    PeriodConfig cfg{range(spec.substr(0, comma)), range(spec.substr(comma + 1))};
    cfg.validate();
    return cfg;
  }
};

inline Period period_of(int year, const PeriodConfig& cfg) {
  if (cfg.first.contains(year)) return Period::First;
  if (cfg.second.contains(year)) return Period::Second;
  return Period::OutOfRange;
}

inline std::vector<ClassifiedContract> classify_all(
    std::vector<CuratedContract> contracts, const SupplierSet& efos,
    const SupplierSet& pcs, ConflictLog* conflicts = nullptr) {
  std::vector<ClassifiedContract> out;
  out.reserve(contracts.size());
  for (auto& c : contracts) {
    const ClassLabel label = classify_contract(c, efos, pcs, conflicts);
    out.push_back({std::move(c), label});
  }
  return out;
}

}  // namespace procurisk
