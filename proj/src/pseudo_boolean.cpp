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

#include "planqubo/pseudo_boolean.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "planqubo/errors.hpp"

namespace planqubo {

namespace {

constexpr double kZero = 1e-12;

void normalize_monomial(Monomial& m) {
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
}

Monomial merge(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool contains(const Monomial& m, VarId v) { return std::binary_search(m.begin(), m.end(), v); }

}  // namespace

// ---------------------------------------------------------------------------
// PseudoBooleanPolynomial

PseudoBooleanPolynomial PseudoBooleanPolynomial::constant(double c, std::size_t num_vars) {
  PseudoBooleanPolynomial p(num_vars);
  p.add_term({}, c);
  return p;
}

PseudoBooleanPolynomial PseudoBooleanPolynomial::variable(VarId v, std::size_t num_vars) {
  PseudoBooleanPolynomial p(std::max<std::size_t>(num_vars, v + 1));
  p.add_term({v}, 1.0);
  return p;
}

PseudoBooleanPolynomial PseudoBooleanPolynomial::negated(VarId v, std::size_t num_vars) {
  PseudoBooleanPolynomial p(std::max<std::size_t>(num_vars, v + 1));
  p.add_term({}, 1.0);
  p.add_term({v}, -1.0);
  return p;
}

void PseudoBooleanPolynomial::add_term(Monomial m, double coeff) {
  if (coeff == 0.0) return;
  normalize_monomial(m);
  if (!m.empty()) ensure_vars(static_cast<std::size_t>(m.back()) + 1);
  auto [it, inserted] = terms_.try_emplace(std::move(m), coeff);
  if (!inserted) {
    it->second += coeff;
    if (std::abs(it->second) < kZero) terms_.erase(it);
  }
}

double PseudoBooleanPolynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

std::size_t PseudoBooleanPolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.size());
  return d;
}

std::size_t PseudoBooleanPolynomial::num_quadratic_terms() const {
  std::size_t n = 0;
  for (const auto& [m, c] : terms_) n += m.size() == 2 ? 1 : 0;
  return n;
}

double PseudoBooleanPolynomial::evaluate(std::span<const std::uint8_t> x) const {
  if (x.size() != num_vars_) {
    throw InputError("assignment has " + std::to_string(x.size()) + " entries, polynomial has " +
                     std::to_string(num_vars_) + " variables");
  }
  double e = 0.0;
  for (const auto& [m, c] : terms_) {
    bool on = true;
    for (VarId v : m) {
      if (!x[v]) {
        on = false;
        break;
      }
    }
    if (on) e += c;
  }
  return e;
}

PseudoBooleanPolynomial& PseudoBooleanPolynomial::operator+=(const PseudoBooleanPolynomial& o) {
  ensure_vars(o.num_vars_);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

PseudoBooleanPolynomial& PseudoBooleanPolynomial::operator-=(const PseudoBooleanPolynomial& o) {
  ensure_vars(o.num_vars_);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

PseudoBooleanPolynomial& PseudoBooleanPolynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

PseudoBooleanPolynomial operator*(const PseudoBooleanPolynomial& a, const PseudoBooleanPolynomial& b) {
  PseudoBooleanPolynomial out(std::max(a.num_vars(), b.num_vars()));
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) out.add_term(merge(ma, mb), ca * cb);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Qubo / Ising

Qubo::Qubo(PseudoBooleanPolynomial poly) : poly_(std::move(poly)) {
  if (poly_.degree() > 2) throw InputError("QUBO must have degree <= 2");
}

std::vector<std::pair<VarId, VarId>> Qubo::interactions() const {
  std::vector<std::pair<VarId, VarId>> out;
  for (const auto& [m, c] : poly_.terms()) {
    if (m.size() == 2) out.emplace_back(m[0], m[1]);
  }
  return out;
}

void IsingModel::add_coupling(VarId i, VarId j, double value) {
  if (i == j) throw InputError("Ising coupling needs two distinct spins");
  if (i > j) std::swap(i, j);
  auto [it, inserted] = J.try_emplace({i, j}, value);
  if (!inserted) {
    it->second += value;
    if (std::abs(it->second) < kZero) J.erase(it);
  }
}

double IsingModel::energy(std::span<const std::int8_t> s) const {
  if (s.size() != num_spins) throw InputError("spin configuration size mismatch");
  double e = offset;
  for (std::size_t i = 0; i < num_spins; ++i) e -= h[i] * s[i];
  for (const auto& [ij, value] : J) e += value * s[ij.first] * s[ij.second];
  return e;
}

IsingModel qubo_to_ising(const Qubo& qubo) {
  IsingModel ising(qubo.num_vars());
  for (const auto& [m, c] : qubo.poly().terms()) {
    switch (m.size()) {
      case 0:
        ising.offset += c;
        break;
      case 1:
        // c z = c/2 - (c/2) s
        ising.offset += c / 2;
        ising.h[m[0]] += c / 2;
        break;
      case 2:
        // c z_i z_j = c/4 (1 - s_i - s_j + s_i s_j)
        ising.offset += c / 4;
        ising.h[m[0]] += c / 4;
        ising.h[m[1]] += c / 4;
        ising.add_coupling(m[0], m[1], c / 4);
        break;
      default:
        throw InputError("qubo_to_ising needs degree <= 2");
    }
  }
  return ising;
}

Qubo ising_to_qubo(const IsingModel& ising) {
  PseudoBooleanPolynomial p(ising.num_spins);
  p.add_term({}, ising.offset);
  for (VarId i = 0; i < ising.num_spins; ++i) {
    // -h s = -h + 2h z
    p.add_term({}, -ising.h[i]);
    p.add_term({i}, 2 * ising.h[i]);
  }
  for (const auto& [ij, value] : ising.J) {
    // J s_i s_j = J (1 - 2z_i - 2z_j + 4 z_i z_j)
    p.add_term({}, value);
    p.add_term({ij.first}, -2 * value);
    p.add_term({ij.second}, -2 * value);
    p.add_term({ij.first, ij.second}, 4 * value);
  }
  return Qubo(std::move(p));
}

std::vector<std::int8_t> bits_to_spins(std::span<const std::uint8_t> bits) {
  std::vector<std::int8_t> s(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? -1 : 1;
  return s;
}

Assignment spins_to_bits(std::span<const std::int8_t> spins) {
  Assignment z(spins.size());
  for (std::size_t i = 0; i < spins.size(); ++i) z[i] = spins[i] < 0 ? 1 : 0;
  return z;
}

// ---------------------------------------------------------------------------
// CNF -> PUBO

PseudoBooleanPolynomial clause_to_pubo_term(const Clause& clause, std::size_t num_vars) {
  if (clause.empty()) throw InputError("clause_to_pubo_term needs a nonempty clause");
  std::set<Literal> lits(clause.begin(), clause.end());
  for (Literal lit : lits) {
    if (lit == 0) throw InputError("literal 0 is not a variable");
    if (lits.count(-lit)) return PseudoBooleanPolynomial(num_vars);  // tautology
  }
  auto term = PseudoBooleanPolynomial::constant(1.0, num_vars);
  for (Literal lit : lits) {
    const VarId v = literal_var(lit);
    term = term * (literal_positive(lit) ? PseudoBooleanPolynomial::negated(v, num_vars)
                                         : PseudoBooleanPolynomial::variable(v, num_vars));
  }
  term.ensure_vars(num_vars);
  return term;
}

PseudoBooleanPolynomial cnf_to_pubo(const CnfFormula& cnf) {
  PseudoBooleanPolynomial sum(cnf.num_vars);
  for (const auto& clause : cnf.clauses) {
    if (clause.empty()) {
      sum.add_term({}, 1.0);
    } else {
      sum += clause_to_pubo_term(clause, cnf.num_vars);
    }
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Quadratization

PseudoBooleanPolynomial conjunction_penalty(VarId u, VarId v, VarId a, std::size_t num_vars) {
  PseudoBooleanPolynomial p(num_vars);
  p.add_term({u, v}, 1.0);
  p.add_term({u, a}, -2.0);
  p.add_term({v, a}, -2.0);
  p.add_term({a}, 3.0);
  return p;
}

ReductionCertificate reduce_to_quadratic(const PseudoBooleanPolynomial& pubo) {
  ReductionCertificate cert;
  cert.original_num_vars = pubo.num_vars();
  PseudoBooleanPolynomial current = pubo;

  while (current.degree() > 2) {
    std::map<std::pair<VarId, VarId>, std::size_t> pair_count;
    for (const auto& [m, c] : current.terms()) {
      if (m.size() < 3) continue;
      for (std::size_t x = 0; x < m.size(); ++x) {
        for (std::size_t y = x + 1; y < m.size(); ++y) ++pair_count[{m[x], m[y]}];
      }
    }
    // std::map iterates pairs in lexicographic order; strict > keeps the smallest on ties.
    std::pair<VarId, VarId> best{};
    std::size_t best_count = 0;
    for (const auto& [pair, count] : pair_count) {
      if (count > best_count) {
        best = pair;
        best_count = count;
      }
    }
    const auto [u, v] = best;
    const auto ancilla = static_cast<VarId>(current.num_vars());

    std::vector<std::pair<Monomial, double>> selected;
    for (const auto& [m, c] : current.terms()) {
      if (m.size() >= 3 && contains(m, u) && contains(m, v)) selected.emplace_back(m, c);
    }
    double positive = 0.0;
    double negative = 0.0;
    for (const auto& [m, c] : selected) (c > 0 ? positive : negative) += std::abs(c);
    const double weight = 1.0 + std::max(positive, negative);

    PseudoBooleanPolynomial next(current.num_vars() + 1);
    for (const auto& [m, c] : current.terms()) {
      if (m.size() >= 3 && contains(m, u) && contains(m, v)) {
        Monomial rewritten;
        for (VarId x : m) {
          if (x != u && x != v) rewritten.push_back(x);
        }
        rewritten.push_back(ancilla);
        next.add_term(std::move(rewritten), c);
      } else {
        next.add_term(m, c);
      }
    }
    next += weight * conjunction_penalty(u, v, ancilla, next.num_vars());
    cert.substitutions.push_back({ancilla, u, v, weight});
    current = std::move(next);
  }
  cert.qubo = Qubo(std::move(current));
  return cert;
}

Assignment lift_assignment(const ReductionCertificate& cert, std::span<const std::uint8_t> reduced) {
  if (reduced.size() < cert.original_num_vars) throw InputError("assignment shorter than original variable range");
  return Assignment(reduced.begin(), reduced.begin() + static_cast<std::ptrdiff_t>(cert.original_num_vars));
}

bool check_ancilla_consistency(const ReductionCertificate& cert, std::span<const std::uint8_t> reduced) {
  for (const auto& s : cert.substitutions) {
    if (s.ancilla >= reduced.size()) return false;
    if ((reduced[s.ancilla] != 0) != (reduced[s.u] != 0 && reduced[s.v] != 0)) return false;
  }
  return true;
}

Assignment complete_ancillas(const ReductionCertificate& cert, std::span<const std::uint8_t> original) {
  if (original.size() != cert.original_num_vars) throw InputError("original assignment size mismatch");
  Assignment out(original.begin(), original.end());
  out.resize(cert.qubo.num_vars(), 0);
  for (const auto& s : cert.substitutions) out[s.ancilla] = (out[s.u] && out[s.v]) ? 1 : 0;
  return out;
}

// ---------------------------------------------------------------------------
// Text formats

namespace {

void write_header_and_offset(std::ostream& out, const char* kind, std::size_t n, std::size_t terms, double offset) {
  out << "p " << kind << ' ' << n << ' ' << terms << '\n';
  out << std::setprecision(17);
  if (offset != 0.0) out << "# offset " << offset << '\n';
}

struct ParsedTriples {
  std::size_t num_vars = 0;
  double offset = 0.0;
  std::vector<std::tuple<VarId, VarId, double>> entries;
};

ParsedTriples parse_triples(std::istream& in, const std::string& kind) {
  ParsedTriples parsed;
  bool have_header = false;
  std::size_t declared = 0;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') {
      std::istringstream ls(line.substr(start + 1));
      std::string tag;
      double value = 0.0;
      if (ls >> tag >> value && tag == "offset") parsed.offset += value;
      continue;
    }
    std::istringstream ls(line);
    if (line[start] == 'p') {
      std::string p;
      std::string fmt;
      if (!(ls >> p >> fmt >> parsed.num_vars >> declared) || fmt != kind) {
        throw InputError("malformed " + kind + " header: " + line);
      }
      have_header = true;
      continue;
    }
    if (!have_header) throw InputError(kind + " entry before header");
    long long i = 0;
    long long j = 0;
    double c = 0.0;
    if (!(ls >> i >> j >> c) || i < 0 || j < 0) throw InputError("malformed " + kind + " line: " + line);
    if (static_cast<std::size_t>(std::max(i, j)) >= parsed.num_vars) {
      throw InputError(kind + " index out of range: " + line);
    }
    if (i > j) std::swap(i, j);
    parsed.entries.emplace_back(static_cast<VarId>(i), static_cast<VarId>(j), c);
  }
  if (!have_header) throw InputError("missing " + kind + " header");
  if (parsed.entries.size() != declared) throw InputError(kind + " term count differs from header");
  return parsed;
}

}  // namespace

void write_qubo(const Qubo& qubo, std::ostream& out) {
  const auto& poly = qubo.poly();
  const std::size_t terms = poly.size() - (poly.coefficient({}) != 0.0 ? 1 : 0);
  write_header_and_offset(out, "qubo", qubo.num_vars(), terms, poly.constant_term());
  for (const auto& [m, c] : poly.terms()) {
    if (m.size() == 1) out << m[0] << ' ' << m[0] << ' ' << c << '\n';
    if (m.size() == 2) out << m[0] << ' ' << m[1] << ' ' << c << '\n';
  }
}

Qubo read_qubo(std::istream& in) {
  const auto parsed = parse_triples(in, "qubo");
  PseudoBooleanPolynomial p(parsed.num_vars);
  p.add_term({}, parsed.offset);
  for (const auto& [i, j, c] : parsed.entries) {
    if (i == j) p.add_term({i}, c); else p.add_term({i, j}, c);
  }
  return Qubo(std::move(p));
}

void write_ising(const IsingModel& ising, std::ostream& out) {
  std::size_t terms = ising.J.size();
  for (double h : ising.h) terms += h != 0.0 ? 1 : 0;
  write_header_and_offset(out, "ising", ising.num_spins, terms, ising.offset);
  for (std::size_t i = 0; i < ising.num_spins; ++i) {
    if (ising.h[i] != 0.0) out << i << ' ' << i << ' ' << ising.h[i] << '\n';
  }
  for (const auto& [ij, value] : ising.J) out << ij.first << ' ' << ij.second << ' ' << value << '\n';
}

IsingModel read_ising(std::istream& in) {
  const auto parsed = parse_triples(in, "ising");
  IsingModel ising(parsed.num_vars);
  ising.offset = parsed.offset;
  for (const auto& [i, j, c] : parsed.entries) {
    if (i == j) ising.h[i] += c; else ising.add_coupling(i, j, c);
  }
  return ising;
}

}  // namespace planqubo
