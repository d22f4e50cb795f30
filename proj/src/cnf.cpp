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

#include "planqubo/cnf.hpp"

#include <sstream>

#include "planqubo/errors.hpp"

namespace planqubo {

bool CnfFormula::satisfied_by(const std::vector<std::uint8_t>& assignment) const {
  return !unsatisfiable && violated_count(assignment) == 0;
}

std::size_t CnfFormula::violated_count(const std::vector<std::uint8_t>& assignment) const {
  std::size_t violated = 0;
  for (const auto& clause : clauses) {
    bool sat = false;
    for (Literal lit : clause) {
      if ((assignment[literal_var(lit)] != 0) == literal_positive(lit)) {
        sat = true;
        break;
      }
    }
    if (!sat) ++violated;
  }
  return violated;
}

void write_dimacs(const CnfFormula& cnf, std::ostream& out) {
  for (std::size_t v = 0; v < cnf.var_names.size(); ++v) {
    out << "c var " << (v + 1) << ' ' << cnf.var_names[v] << '\n';
  }
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& clause : cnf.clauses) {
    for (Literal lit : clause) out << lit << ' ';
    out << "0\n";
  }
}

CnfFormula read_dimacs(std::istream& in) {
  CnfFormula cnf;
  bool have_header = false;
  std::size_t declared_clauses = 0;
  std::string line;
  Clause current;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == 'c' || line[start] == '%') {
      std::istringstream ls(line.substr(start + 1));
      std::string tag;
      std::size_t var = 0;
      std::string name;
      if (ls >> tag >> var >> name && tag == "var" && var >= 1) {
        if (cnf.var_names.size() < var) cnf.var_names.resize(var);
        cnf.var_names[var - 1] = name;
      }
      continue;
    }
    if (line[start] == 'p') {
      std::istringstream ls(line.substr(start + 1));
      std::string fmt;
      if (!(ls >> fmt >> cnf.num_vars >> declared_clauses) || fmt != "cnf") {
        throw InputError("malformed DIMACS header: " + line);
      }
      have_header = true;
      continue;
    }
    if (!have_header) throw InputError("DIMACS clause before header");
    std::istringstream ls(line);
    long long lit = 0;
    while (ls >> lit) {
      if (lit == 0) {
        if (current.empty()) cnf.unsatisfiable = true;
        cnf.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      const auto var = static_cast<std::size_t>(lit < 0 ? -lit : lit);
      if (var > cnf.num_vars) throw InputError("literal exceeds declared variable count");
      current.push_back(static_cast<Literal>(lit));
    }
    if (!ls.eof()) throw InputError("unexpected token in DIMACS clause line: " + line);
  }
  if (!have_header) throw InputError("missing DIMACS header");
  if (!current.empty()) cnf.clauses.push_back(std::move(current));
  if (cnf.var_names.size() > cnf.num_vars) throw InputError("variable name beyond declared count");
  if (!cnf.var_names.empty()) cnf.var_names.resize(cnf.num_vars);
  return cnf;
}

}  // namespace planqubo
