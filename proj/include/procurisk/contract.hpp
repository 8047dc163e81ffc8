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

// Contract record types shared by every pipeline stage.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "procurisk/normalize.hpp"

namespace procurisk {

enum class GovernmentOrder : std::uint8_t { APF, GE, GM };
enum class ProcedureCharacter : std::uint8_t { N, I, ITLC };
enum class ContractType : std::uint8_t { OP, S, ADQ, AR, SLAOP };
enum class ProcedureType : std::uint8_t { AD, LP, I3P };
enum class SupplierSize : std::uint8_t { MIC, PEQ, MED, NOM, NA };

struct EnumAlias {
  std::string_view text;  // already normalized
  std::uint8_t value;
};

template <typename E>
struct EnumTraits;

template <>
struct EnumTraits<GovernmentOrder> {
  static constexpr std::string_view kFamily = "GO";
  static constexpr std::array<std::string_view, 3> kNames = {"APF", "GE",
                                                             "GM"};
  static constexpr std::array<EnumAlias, 5> kAliases = {{
      {"FEDERAL", 0},
      {"ESTATAL", 1},
      {"GOBIERNO ESTATAL", 1},
      {"MUNICIPAL", 2},
      {"GOBIERNO MUNICIPAL", 2},
  }};
};

template <>
struct EnumTraits<ProcedureCharacter> {
  static constexpr std::string_view kFamily = "PC";
  static constexpr std::array<std::string_view, 3> kNames = {"N", "I",
                                                             "ITLC"};
  static constexpr std::array<EnumAlias, 4> kAliases = {{
      {"NACIONAL", 0},
      {"INTERNACIONAL", 1},
      {"INTERNACIONAL BAJO TLC", 2},
      {"INTERNACIONAL BAJO TRATADOS", 2},
  }};
};

template <>
struct EnumTraits<ContractType> {
  static constexpr std::string_view kFamily = "CT";
  static constexpr std::array<std::string_view, 5> kNames = {"OP", "S", "ADQ",
                                                             "AR", "SLAOP"};
  static constexpr std::array<EnumAlias, 6> kAliases = {{
      {"OBRA PUBLICA", 0},
      {"SERVICIOS", 1},
      {"ADQUISICIONES", 2},
      {"ARRENDAMIENTOS", 3},
      {"SERVICIOS RELACIONADOS CON LA OP", 4},
      {"SERVICIOS RELACIONADOS CON LA OBRA PUBLICA", 4},
  }};
};

template <>
struct EnumTraits<ProcedureType> {
  static constexpr std::string_view kFamily = "PT";
  static constexpr std::array<std::string_view, 3> kNames = {"AD", "LP",
                                                             "I3P"};
  static constexpr std::array<EnumAlias, 3> kAliases = {{
      {"ADJUDICACION DIRECTA", 0},
      {"LICITACION PUBLICA", 1},
      {"INVITACION A CUANDO MENOS 3 PERSONAS", 2},
  }};
};

template <>
struct EnumTraits<SupplierSize> {
  static constexpr std::string_view kFamily = "S";
  static constexpr std::array<std::string_view, 5> kNames = {"MIC", "PEQ",
                                                             "MED", "NOM",
                                                             "NA"};
  static constexpr std::array<EnumAlias, 5> kAliases = {{
      {"MICRO", 0},
      {"PEQUENA", 1},
      {"MEDIANA", 2},
      {"NO MIPYME", 3},
      {"GRANDE", 3},
  }};
};

template <typename E>
constexpr std::string_view to_string(E value) {
  return EnumTraits<E>::kNames[static_cast<std::size_t>(value)];
}

// Accepts the bare code ("AD"), the dummy form ("PT.AD", "PT-AD") in any
// case, or one of the registry's long labels.
template <typename E>
std::optional<E> parse_enum(std::string_view token) {
  using Traits = EnumTraits<E>;
  const std::string norm = normalize_name(token);
  auto match_code = [](std::string_view s) -> std::optional<E> {
    for (std::size_t i = 0; i < Traits::kNames.size(); ++i) {
      if (s == Traits::kNames[i]) return static_cast<E>(i);
    }
    return std::nullopt;
  };
  if (auto code = match_code(norm)) return code;

  // "PT.AD" normalizes to "PTAD"; "PT AD" keeps the space.
  std::string_view rest = norm;
  if (rest.starts_with(Traits::kFamily)) {
    rest.remove_prefix(Traits::kFamily.size());
    if (rest.starts_with(' ')) rest.remove_prefix(1);
    if (auto code = match_code(rest)) return code;
  }
  for (const auto& alias : Traits::kAliases) {
    if (norm == alias.text) return static_cast<E>(alias.value);
  }
  return std::nullopt;
}

struct CuratedContract {
  std::string buyer_id;
  std::string supplier_id;
  GovernmentOrder go = GovernmentOrder::APF;
  ProcedureCharacter pc = ProcedureCharacter::N;
  ContractType ct = ContractType::ADQ;
  ProcedureType pt = ProcedureType::AD;
  SupplierSize size = SupplierSize::NA;
  int year = 0;
  int beginning_week = 1;
  int eb_weeks = 0;
  double spending_usd_ppp = 0.0;

  friend bool operator==(const CuratedContract&,
                         const CuratedContract&) = default;
};

enum class ClassLabel : std::uint8_t { EFOS, PCS, NC };

inline constexpr std::array<ClassLabel, 3> kAllClasses = {
    ClassLabel::EFOS, ClassLabel::PCS, ClassLabel::NC};

constexpr std::string_view to_string(ClassLabel label) {
  switch (label) {
    case ClassLabel::EFOS: return "EFOS";
    case ClassLabel::PCS: return "PCS";
    case ClassLabel::NC: return "NC";
  }
  return "NC";
}

inline std::optional<ClassLabel> parse_class(std::string_view s) {
  for (ClassLabel c : kAllClasses) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

struct ClassifiedContract {
  CuratedContract contract;
  ClassLabel label = ClassLabel::NC;
};

// Relation-level factors, shared by every contract of the same
// (buyer, supplier, year).
struct RiskFactors {
  double rad = 0.0;
  double fav = 0.0;
  double cpw = 0.0;
  double spw = 0.0;
};

// Buyer-level maxima for the contract's (buyer, year).
struct BuyerFeatures {
  std::int64_t t_cont_max = 0;
  double t_spending_max = 0.0;
};

struct AnnotatedContract {
  CuratedContract contract;
  ClassLabel label = ClassLabel::NC;
  RiskFactors factors;
  BuyerFeatures buyer;
};

}  // namespace procurisk
