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
#include <map>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "planqubo/cnf.hpp"

namespace planqubo {

using VarId = std::uint32_t;
/// Sorted, duplicate-free variable set. The empty monomial is the constant.
using Monomial = std::vector<VarId>;
/// One byte per variable, 0 or 1.
using Assignment = std::vector<std::uint8_t>;

/// Multilinear polynomial over {0,1} variables.
class PseudoBooleanPolynomial {
 public:
  PseudoBooleanPolynomial() = default;
  explicit PseudoBooleanPolynomial(std::size_t num_vars) : num_vars_(num_vars) {}

  static PseudoBooleanPolynomial constant(double c, std::size_t num_vars = 0);
  static PseudoBooleanPolynomial variable(VarId v, std::size_t num_vars = 0);
  /// 1 - x_v
  static PseudoBooleanPolynomial negated(VarId v, std::size_t num_vars = 0);

  std::size_t num_vars() const { return num_vars_; }
  void ensure_vars(std::size_t n) { num_vars_ = std::max(num_vars_, n); }

  /// Adds coeff * prod(m). m is sorted and deduplicated (x*x = x); entries
  /// that cancel to zero are erased.
  void add_term(Monomial m, double coeff);
  double coefficient(const Monomial& m) const;
  double constant_term() const { return coefficient({}); }

  std::size_t degree() const;
  /// Number of monomials, constant included.
  std::size_t size() const { return terms_.size(); }
  std::size_t num_quadratic_terms() const;
  const std::map<Monomial, double>& terms() const { return terms_; }

  /// Throws InputError when x.size() != num_vars().
  double evaluate(std::span<const std::uint8_t> x) const;

  PseudoBooleanPolynomial& operator+=(const PseudoBooleanPolynomial& o);
  PseudoBooleanPolynomial& operator-=(const PseudoBooleanPolynomial& o);
  PseudoBooleanPolynomial& operator*=(double s);
  friend PseudoBooleanPolynomial operator+(PseudoBooleanPolynomial a, const PseudoBooleanPolynomial& b) {
    return a += b;
  }
  friend PseudoBooleanPolynomial operator-(PseudoBooleanPolynomial a, const PseudoBooleanPolynomial& b) {
    return a -= b;
  }
  friend PseudoBooleanPolynomial operator*(PseudoBooleanPolynomial a, double s) { return a *= s; }
  friend PseudoBooleanPolynomial operator*(double s, PseudoBooleanPolynomial a) { return a *= s; }
  friend PseudoBooleanPolynomial operator*(const PseudoBooleanPolynomial& a, const PseudoBooleanPolynomial& b);

  bool operator==(const PseudoBooleanPolynomial& o) const = default;

 private:
  std::size_t num_vars_ = 0;
  std::map<Monomial, double> terms_;
};

/// Degree <= 2 polynomial. The constructor rejects higher degree.
class Qubo {
 public:
  Qubo() = default;
  explicit Qubo(PseudoBooleanPolynomial poly);

  const PseudoBooleanPolynomial& poly() const { return poly_; }
  std::size_t num_vars() const { return poly_.num_vars(); }
  std::size_t num_couplings() const { return poly_.num_quadratic_terms(); }
  double evaluate(std::span<const std::uint8_t> x) const { return poly_.evaluate(x); }

  /// Edges of the variable interaction graph as (i, j), i < j.
  std::vector<std::pair<VarId, VarId>> interactions() const;

  bool operator==(const Qubo&) const = default;

 private:
  PseudoBooleanPolynomial poly_;
};

/// E(s) = offset - sum_i h_i s_i + sum_{i<j} J_ij s_i s_j, s in {-1,+1}.
struct IsingModel {
  std::size_t num_spins = 0;
  std::vector<double> h;
  std::map<std::pair<VarId, VarId>, double> J;
  double offset = 0.0;

  explicit IsingModel(std::size_t n = 0) : num_spins(n), h(n, 0.0) {}
  void add_coupling(VarId i, VarId j, double value);
  double energy(std::span<const std::int8_t> spins) const;
};

/// Bit to spin map s = 1 - 2z. Degree > 2 input throws InputError.
IsingModel qubo_to_ising(const Qubo& qubo);
Qubo ising_to_qubo(const IsingModel& ising);
std::vector<std::int8_t> bits_to_spins(std::span<const std::uint8_t> bits);
Assignment spins_to_bits(std::span<const std::int8_t> spins);

/// Penalty polynomial of a clause: 1 on exactly the assignments that falsify
/// it. A positive literal contributes (1 - x), a negative one x. Tautologies
/// give the zero polynomial. Empty clause throws InputError.
PseudoBooleanPolynomial clause_to_pubo_term(const Clause& clause, std::size_t num_vars = 0);
/// Sum of clause penalties: the number of violated clauses.
PseudoBooleanPolynomial cnf_to_pubo(const CnfFormula& cnf);

struct Substitution {
  VarId ancilla;
  VarId u;
  VarId v;
  double penalty_weight;
};

struct ReductionCertificate {
  std::size_t original_num_vars = 0;
  std::vector<Substitution> substitutions;  // in order of introduction
  Qubo qubo;
};

/// Penalty gadget enforcing a = u AND v: uv - 2ua - 2va + 3a (zero iff
/// consistent, otherwise >= 1).
PseudoBooleanPolynomial conjunction_penalty(VarId u, VarId v, VarId a, std::size_t num_vars);

/// Greedy pair substitution until degree <= 2. Each round replaces the pair
/// occurring in the most monomials of degree >= 3 (ties: smallest pair) by a
/// fresh ancilla, weighted by 1 + max(sum of positive, sum of |negative|)
/// coefficients of the monomials being rewritten.
ReductionCertificate reduce_to_quadratic(const PseudoBooleanPolynomial& pubo);

/// Projection onto the original variables.
Assignment lift_assignment(const ReductionCertificate& cert, std::span<const std::uint8_t> reduced);
bool check_ancilla_consistency(const ReductionCertificate& cert, std::span<const std::uint8_t> reduced);
/// Extends an original-variable assignment with consistent ancilla values.
Assignment complete_ancillas(const ReductionCertificate& cert, std::span<const std::uint8_t> original);

// Text formats. QUBO: "p qubo <num_vars> <num_terms>" then "i j coeff" lines
// (i == j linear, i < j quadratic); '#' starts a comment. The constant is
// carried in a "# offset <value>" comment. Ising: same with "p ising".
void write_qubo(const Qubo& qubo, std::ostream& out);
Qubo read_qubo(std::istream& in);
void write_ising(const IsingModel& ising, std::ostream& out);
IsingModel read_ising(std::istream& in);

}  // namespace planqubo
