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

// Catalog of the contract variables the comparisons run over.
//
// Type i)   contract variables (dummies and BeginningWeek, EBWeeks,
//           Spending), one observation per contract.
// Type ii)  buyer features T.Cont.Max and T.Spending.Max, one observation
//           per distinct (buyer, year) among the selected contracts.
// Type iii) relation risk factors CPW, SPW, Fav, RAD, one observation per
//           contract.

#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "procurisk/contract.hpp"
#include "procurisk/error.hpp"

namespace procurisk {

// Non-owning selection of contracts (one class, one period, ...).
using ContractView = std::vector<std::reference_wrapper<const AnnotatedContract>>;

template <typename Pred>
ContractView select(const std::vector<AnnotatedContract>& contracts,
                    Pred&& keep) {
  ContractView out;
  for (const auto& a : contracts) {
    if (keep(a)) out.push_back(std::cref(a));
  }
  return out;
}

enum class VariableType { Contract, Buyer, Relation };

constexpr std::string_view to_string(VariableType t) {
  switch (t) {
    case VariableType::Contract: return "i";
    case VariableType::Buyer: return "ii";
    case VariableType::Relation: return "iii";
  }
  return "i";
}

struct DummyVariable {
  std::string_view name;
  bool (*present)(const CuratedContract&);
};

struct NumericVariable {
  std::string_view name;
  VariableType type;
  double (*value)(const AnnotatedContract&);
};

inline const std::vector<DummyVariable>& dummy_variables() {
  static const std::vector<DummyVariable> kVars = {
      {"GO.APF", [](const CuratedContract& c) { return c.go == GovernmentOrder::APF; }},
      {"GO.GE", [](const CuratedContract& c) { return c.go == GovernmentOrder::GE; }},
      {"GO.GM", [](const CuratedContract& c) { return c.go == GovernmentOrder::GM; }},
      {"PC.N", [](const CuratedContract& c) { return c.pc == ProcedureCharacter::N; }},
      {"PC.I", [](const CuratedContract& c) { return c.pc == ProcedureCharacter::I; }},
      {"PC.ITLC", [](const CuratedContract& c) { return c.pc == ProcedureCharacter::ITLC; }},
      {"CT.OP", [](const CuratedContract& c) { return c.ct == ContractType::OP; }},
      {"CT.S", [](const CuratedContract& c) { return c.ct == ContractType::S; }},
      {"CT.ADQ", [](const CuratedContract& c) { return c.ct == ContractType::ADQ; }},
      {"CT.AR", [](const CuratedContract& c) { return c.ct == ContractType::AR; }},
      {"CT.SLAOP", [](const CuratedContract& c) { return c.ct == ContractType::SLAOP; }},
      {"PT.AD", [](const CuratedContract& c) { return c.pt == ProcedureType::AD; }},
      {"PT.I3P", [](const CuratedContract& c) { return c.pt == ProcedureType::I3P; }},
      {"PT.LP", [](const CuratedContract& c) { return c.pt == ProcedureType::LP; }},
      {"S.NOM", [](const CuratedContract& c) { return c.size == SupplierSize::NOM; }},
      {"S.MED", [](const CuratedContract& c) { return c.size == SupplierSize::MED; }},
      {"S.PEQ", [](const CuratedContract& c) { return c.size == SupplierSize::PEQ; }},
      {"S.MIC", [](const CuratedContract& c) { return c.size == SupplierSize::MIC; }},
      {"S.NA", [](const CuratedContract& c) { return c.size == SupplierSize::NA; }},
  };
  return kVars;
}

inline const std::vector<NumericVariable>& numeric_variables() {
  static const std::vector<NumericVariable> kVars = {
      {"BeginningWeek", VariableType::Contract,
       [](const AnnotatedContract& a) { return double(a.contract.beginning_week); }},
      {"EBWeeks", VariableType::Contract,
       [](const AnnotatedContract& a) { return double(a.contract.eb_weeks); }},
      {"Spending", VariableType::Contract,
       [](const AnnotatedContract& a) { return a.contract.spending_usd_ppp; }},
      {"T.Cont.Max", VariableType::Buyer,
       [](const AnnotatedContract& a) { return double(a.buyer.t_cont_max); }},
      {"T.Spending.Max", VariableType::Buyer,
       [](const AnnotatedContract& a) { return a.buyer.t_spending_max; }},
      {"CPW", VariableType::Relation,
       [](const AnnotatedContract& a) { return a.factors.cpw; }},
      {"SPW", VariableType::Relation,
       [](const AnnotatedContract& a) { return a.factors.spw; }},
      {"Fav", VariableType::Relation,
       [](const AnnotatedContract& a) { return a.factors.fav; }},
      {"RAD", VariableType::Relation,
       [](const AnnotatedContract& a) { return a.factors.rad; }},
  };
  return kVars;
}

inline const DummyVariable& find_dummy(std::string_view name) {
  for (const auto& v : dummy_variables()) {
    if (v.name == name) return v;
  }
  throw ConfigError("unknown dummy variable '" + std::string(name) + "'");
}

inline const NumericVariable& find_numeric(std::string_view name) {
  for (const auto& v : numeric_variables()) {
    if (v.name == name) return v;
  }
  throw ConfigError("unknown numeric variable '" + std::string(name) + "'");
}

// Dummy and numeric variables of types i) and ii), the characteristic
// variables used when contrasting classes.
inline std::vector<const NumericVariable*> characteristic_numeric_variables() {
  std::vector<const NumericVariable*> out;
  for (const auto& v : numeric_variables()) {
    if (v.type != VariableType::Relation) out.push_back(&v);
  }
  return out;
}

inline std::vector<const DummyVariable*> all_dummy_variables() {
  std::vector<const DummyVariable*> out;
  for (const auto& v : dummy_variables()) out.push_back(&v);
  return out;
}

inline std::vector<const NumericVariable*> all_numeric_variables() {
  std::vector<const NumericVariable*> out;
  for (const auto& v : numeric_variables()) out.push_back(&v);
  return out;
}

// Observations of `var` over `contracts`; buyer features are taken once per
// distinct (buyer, year).
template <typename Range>
std::vector<double> sample_numeric(const Range& contracts,
                                   const NumericVariable& var) {
  std::vector<double> out;
  if (var.type != VariableType::Buyer) {
    for (const AnnotatedContract& a : contracts) out.push_back(var.value(a));
    return out;
  }
  std::unordered_set<std::string> seen;
  for (const AnnotatedContract& a : contracts) {
    std::string key = a.contract.buyer_id;
    key.push_back('\x1f');
    key += std::to_string(a.contract.year);
    if (seen.insert(std::move(key)).second) out.push_back(var.value(a));
  }
  return out;
}

template <typename Range>
std::size_t count_present(const Range& contracts, const DummyVariable& var) {
  std::size_t k = 0;
  for (const AnnotatedContract& a : contracts) {
    if (var.present(a.contract)) ++k;
  }
  return k;
}

}  // namespace procurisk
