// Copyright 2026 The planqubo Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace planqubo {

/// DIMACS-style literal: +v / -v for variable v-1 (variables are 0-based
/// internally, literals 1-based so that the sign is always meaningful).
using Literal = std::int32_t;
using Clause = std::vector<Literal>;

constexpr std::uint32_t literal_var(Literal lit) { return static_cast<std::uint32_t>((lit < 0 ? -lit : lit) - 1); }
constexpr bool literal_positive(Literal lit) { return lit > 0; }
constexpr Literal make_literal(std::uint32_t var, bool positive) {
  return positive ? static_cast<Literal>(var + 1) : -static_cast<Literal>(var + 1);
}

struct CnfFormula {
  std::size_t num_vars = 0;
  std::vector<Clause> clauses;
  /// Human-readable meaning of each variable (may be empty).
  std::vector<std::string> var_names;
  /// Set when an empty clause was derived.
  bool unsatisfiable = false;

  bool satisfied_by(const std::vector<std::uint8_t>& assignment) const;
  std::size_t violated_count(const std::vector<std::uint8_t>& assignment) const;
};

/// Writes `p cnf V C`, one clause per line terminated by 0, names as `c` lines.
void write_dimacs(const CnfFormula& cnf, std::ostream& out);
/// Tolerant DIMACS reader: comments anywhere, clauses may span lines.
/// Throws InputError on malformed input.
CnfFormula read_dimacs(std::istream& in);

}  // namespace planqubo
