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

// Buyer-supplier relation aggregates, buyer maxima and the four relation
// risk factors:
//
//   RAD = T.AD / T.Cont
//   Fav = 0.33 * T.Cont / T.Cont.Max + 0.66 * T.Spending / T.Spending.Max
//   CPW = T.Cont / ActiveWeeks
//   SPW = T.Spending / ActiveWeeks
//
// All quantities are per calendar year. ActiveWeeks counts the distinct
// beginning weeks of the relation's contracts. Fav tops out at 0.99, which
// a supplier reaches when it is the buyer's maximum in both contracts and
// spending. A buyer whose yearly spending maximum is zero gets a zero
// spending term.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "procurisk/contract.hpp"
#include "procurisk/csv.hpp"
#include "procurisk/error.hpp"
#include "procurisk/format.hpp"
#include "procurisk/sum.hpp"

namespace procurisk {

inline constexpr double kFavContractWeight = 0.33;
inline constexpr double kFavSpendingWeight = 0.66;

struct RiskThresholds {
  double rad_min = 0.5;
  double fav_min = 0.9;
  double cpw_min = 5.0;
  double spw_min = 10000.0;  // USD PPP per active week

  void validate() const {
    if (!(rad_min > 0.0 && rad_min <= 1.0)) {
      throw ConfigError("rad threshold must lie in (0, 1]");
    }
    if (!(fav_min > 0.0 && fav_min <= 0.99)) {
      throw ConfigError("fav threshold must lie in (0, 0.99]");
    }
    if (!(cpw_min > 0.0) || !(spw_min > 0.0)) {
      throw ConfigError("cpw and spw thresholds must be positive");
    }
  }
};

struct RelationStats {
  std::string buyer_id;
  std::string supplier_id;
  int year = 0;
  std::int64_t t_cont = 0;
  std::int64_t t_ad = 0;
  double t_spending = 0.0;
  std::int64_t active_weeks = 0;
  double rad = 0.0;
  double fav = std::numeric_limits<double>::quiet_NaN();  // set by apply_favoritism
  double cpw = 0.0;
  double spw = 0.0;
};

struct BuyerStats {
  std::string buyer_id;
  int year = 0;
  std::int64_t t_cont_max = 0;
  double t_spending_max = 0.0;
};

inline const CuratedContract& contract_of(const CuratedContract& c) { return c; }
inline const CuratedContract& contract_of(const ClassifiedContract& c) {
  return c.contract;
}
inline const CuratedContract& contract_of(const AnnotatedContract& c) {
  return c.contract;
}

namespace detail {

struct RelationKey {
  std::string_view buyer;
  std::string_view supplier;
  int year;

  friend bool operator==(const RelationKey&, const RelationKey&) = default;
};

struct RelationKeyHash {
  std::size_t operator()(const RelationKey& k) const noexcept {
    std::size_t h = std::hash<std::string_view>{}(k.buyer);
    h ^= std::hash<std::string_view>{}(k.supplier) + 0x9e3779b97f4a7c15ULL +
         (h << 6) + (h >> 2);
    h ^= std::hash<int>{}(k.year) + 0x9e3779b97f4a7c15ULL + (h << 6) +
         (h >> 2);
    return h;
  }
};

struct BuyerKey {
  std::string_view buyer;
  int year;

  friend bool operator==(const BuyerKey&, const BuyerKey&) = default;
};

struct BuyerKeyHash {
  std::size_t operator()(const BuyerKey& k) const noexcept {
    return std::hash<std::string_view>{}(k.buyer) ^
           (std::hash<int>{}(k.year) * 0x9e3779b97f4a7c15ULL);
  }
};

}  // namespace detail

// Groups contracts by (buyer, supplier, year). Output is sorted by that key;
// fav stays NaN until apply_favoritism.
template <typename Range>
std::vector<RelationStats> aggregate_relations(const Range& contracts) {
  struct Accumulator {
    std::int64_t t_cont = 0;
    std::int64_t t_ad = 0;
    CompensatedSum spending;
    std::uint64_t weeks = 0;  // bit w set when week w had a contract
  };
  std::unordered_map<detail::RelationKey, std::size_t, detail::RelationKeyHash>
      index;
  std::vector<detail::RelationKey> keys;
  std::vector<Accumulator> acc;
  for (const auto& item : contracts) {
    const CuratedContract& c = contract_of(item);
    const detail::RelationKey key{c.buyer_id, c.supplier_id, c.year};
    auto [it, inserted] = index.try_emplace(key, acc.size());
    if (inserted) {
      keys.push_back(key);
      acc.emplace_back();
    }
    Accumulator& a = acc[it->second];
    ++a.t_cont;
    if (c.pt == ProcedureType::AD) ++a.t_ad;
    a.spending.add(c.spending_usd_ppp);
    a.weeks |= std::uint64_t{1} << c.beginning_week;
  }

  std::vector<std::size_t> order(keys.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(keys[a].buyer, keys[a].supplier, keys[a].year) <
           std::tie(keys[b].buyer, keys[b].supplier, keys[b].year);
  });

  std::vector<RelationStats> out;
  out.reserve(order.size());
  for (std::size_t i : order) {
    const Accumulator& a = acc[i];
    RelationStats r;
    r.buyer_id = std::string(keys[i].buyer);
    r.supplier_id = std::string(keys[i].supplier);
    r.year = keys[i].year;
    r.t_cont = a.t_cont;
    r.t_ad = a.t_ad;
    r.t_spending = a.spending.value();
    r.active_weeks = std::popcount(a.weeks);
    r.rad = static_cast<double>(r.t_ad) / static_cast<double>(r.t_cont);
    r.cpw = static_cast<double>(r.t_cont) / static_cast<double>(r.active_weeks);
    r.spw = r.t_spending / static_cast<double>(r.active_weeks);
    out.push_back(std::move(r));
  }
  return out;
}

// Per (buyer, year) maxima over suppliers, sorted by (buyer, year).
inline std::vector<BuyerStats> buyer_maxima(
    const std::vector<RelationStats>& relations) {
  std::unordered_map<detail::BuyerKey, std::size_t, detail::BuyerKeyHash> index;
  std::vector<BuyerStats> out;
  for (const auto& r : relations) {
    auto [it, inserted] =
        index.try_emplace(detail::BuyerKey{r.buyer_id, r.year}, out.size());
    if (inserted) {
      out.push_back({r.buyer_id, r.year, r.t_cont, r.t_spending});
    } else {
      BuyerStats& b = out[it->second];
      b.t_cont_max = std::max(b.t_cont_max, r.t_cont);
      b.t_spending_max = std::max(b.t_spending_max, r.t_spending);
    }
  }
  std::sort(out.begin(), out.end(), [](const BuyerStats& a, const BuyerStats& b) {
    return std::tie(a.buyer_id, a.year) < std::tie(b.buyer_id, b.year);
  });
  return out;
}

inline double favoritism(const RelationStats& rel, const BuyerStats& b) {
  if (rel.buyer_id != b.buyer_id || rel.year != b.year) {
    throw InternalError("favoritism: buyer record " + b.buyer_id + "/" +
                        std::to_string(b.year) + " does not match relation " +
                        rel.buyer_id + "/" + std::to_string(rel.year));
  }
  if (b.t_cont_max < 1) throw InternalError("favoritism: t_cont_max < 1");
  const double contract_share =
      static_cast<double>(rel.t_cont) / static_cast<double>(b.t_cont_max);
  const double spending_share =
      b.t_spending_max > 0.0 ? rel.t_spending / b.t_spending_max : 0.0;
  return kFavContractWeight * contract_share +
         kFavSpendingWeight * spending_share;
}

// Lookup structure over finished relations and buyer maxima.
class RelationTable {
 public:
  RelationTable() = default;
  RelationTable(std::vector<RelationStats> relations,
                std::vector<BuyerStats> buyers)
      : relations_(std::move(relations)), buyers_(std::move(buyers)) {
    reindex();
  }

  RelationTable(const RelationTable&) = delete;
  RelationTable& operator=(const RelationTable&) = delete;
  RelationTable(RelationTable&& other) noexcept { *this = std::move(other); }
  RelationTable& operator=(RelationTable&& other) noexcept {
    relations_ = std::move(other.relations_);
    buyers_ = std::move(other.buyers_);
    reindex();
    return *this;
  }

  const std::vector<RelationStats>& relations() const { return relations_; }
  const std::vector<BuyerStats>& buyers() const { return buyers_; }

  const RelationStats* find(std::string_view buyer, std::string_view supplier,
                            int year) const {
    auto it = relation_index_.find({buyer, supplier, year});
    return it == relation_index_.end() ? nullptr : &relations_[it->second];
  }
  const BuyerStats* find_buyer(std::string_view buyer, int year) const {
    auto it = buyer_index_.find({buyer, year});
    return it == buyer_index_.end() ? nullptr : &buyers_[it->second];
  }

 private:
  // Keys view into the owned vectors; rebuilt whenever storage moves.
  void reindex() {
    relation_index_.clear();
    buyer_index_.clear();
    relation_index_.reserve(relations_.size());
    for (std::size_t i = 0; i < relations_.size(); ++i) {
      const auto& r = relations_[i];
      relation_index_.emplace(
          detail::RelationKey{r.buyer_id, r.supplier_id, r.year}, i);
    }
    for (std::size_t i = 0; i < buyers_.size(); ++i) {
      buyer_index_.emplace(detail::BuyerKey{buyers_[i].buyer_id, buyers_[i].year},
                           i);
    }
  }

  std::vector<RelationStats> relations_;
  std::vector<BuyerStats> buyers_;
  std::unordered_map<detail::RelationKey, std::size_t, detail::RelationKeyHash>
      relation_index_;
  std::unordered_map<detail::BuyerKey, std::size_t, detail::BuyerKeyHash>
      buyer_index_;
};

inline void apply_favoritism(std::vector<RelationStats>& relations,
                             const std::vector<BuyerStats>& buyers) {
  std::unordered_map<detail::BuyerKey, std::size_t, detail::BuyerKeyHash> index;
  for (std::size_t i = 0; i < buyers.size(); ++i) {
    index.emplace(detail::BuyerKey{buyers[i].buyer_id, buyers[i].year}, i);
  }
  for (auto& r : relations) {
    auto it = index.find({r.buyer_id, r.year});
    if (it == index.end()) {
      throw InternalError("no buyer maxima for " + r.buyer_id + "/" +
                          std::to_string(r.year));
    }
    r.fav = favoritism(r, buyers[it->second]);
  }
}

// Aggregation, maxima and favoritism in one pass over the corpus.
template <typename Range>
RelationTable derive_relations(const Range& contracts) {
  std::vector<RelationStats> relations = aggregate_relations(contracts);
  std::vector<BuyerStats> buyers = buyer_maxima(relations);
  apply_favoritism(relations, buyers);
  return RelationTable(std::move(relations), std::move(buyers));
}

inline std::vector<AnnotatedContract> annotate_contracts(
    std::vector<ClassifiedContract> contracts, const RelationTable& table) {
  std::vector<AnnotatedContract> out;
  out.reserve(contracts.size());
  for (auto& item : contracts) {
    const CuratedContract& c = item.contract;
    const RelationStats* rel = table.find(c.buyer_id, c.supplier_id, c.year);
    const BuyerStats* buyer = table.find_buyer(c.buyer_id, c.year);
    if (rel == nullptr || buyer == nullptr) {
      throw InternalError("contract " + c.buyer_id + " / " + c.supplier_id +
                          " / " + std::to_string(c.year) +
                          " has no aggregated relation");
    }
    AnnotatedContract a;
    a.factors = {rel->rad, rel->fav, rel->cpw, rel->spw};
    a.buyer = {buyer->t_cont_max, buyer->t_spending_max};
    a.label = item.label;
    a.contract = std::move(item.contract);
    out.push_back(std::move(a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Delimited exports.

inline void write_relations(std::ostream& out,
                            const std::vector<RelationStats>& relations) {
  csv::write_row(out, {"buyer_id", "supplier_id", "year", "t_cont", "t_ad",
                       "t_spending", "active_weeks", "rad", "fav", "cpw",
                       "spw"});
  for (const auto& r : relations) {
    csv::write_row(out, {r.buyer_id, r.supplier_id, std::to_string(r.year),
                         std::to_string(r.t_cont), std::to_string(r.t_ad),
                         format_exact(r.t_spending),
                         std::to_string(r.active_weeks), format_exact(r.rad),
                         format_exact(r.fav), format_exact(r.cpw),
                         format_exact(r.spw)});
  }
}

inline void write_buyers(std::ostream& out,
                         const std::vector<BuyerStats>& buyers) {
  csv::write_row(out, {"buyer_id", "year", "t_cont_max", "t_spending_max"});
  for (const auto& b : buyers) {
    csv::write_row(out, {b.buyer_id, std::to_string(b.year),
                         std::to_string(b.t_cont_max),
                         format_exact(b.t_spending_max)});
  }
}

}  // namespace procurisk
