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

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "planqubo/errors.hpp"
#include "planqubo/pseudo_boolean.hpp"

using namespace planqubo;
using Poly = PseudoBooleanPolynomial;

namespace {

Poly random_poly(std::size_t n, std::size_t terms, std::size_t max_degree, Rng& rng) {
  Poly p(n);
  for (std::size_t t = 0; t < terms; ++t) {
    const std::size_t d = 1 + rng.below(std::min(max_degree, n));
    Monomial m;
    while (m.size() < d) {
      const auto v = static_cast<VarId>(rng.below(n));
      if (std::find(m.begin(), m.end(), v) == m.end()) m.push_back(v);
    }
    p.add_term(m, std::round((rng.uniform() * 6 - 3) * 4) / 4);
  }
  return p;
}

std::set<Assignment> minimizers(const Poly& p) {
  const auto v = oracle::assignments_at(p, oracle::brute_min(p));
  return {v.begin(), v.end()};
}

}  // namespace

TEST(Poly, NoopTerm) {
  Poly q(2);
  q.add_term({0}, 1);
  q.add_term({1}, 1);
  q.add_term({0, 1}, -2);
  EXPECT_EQ(q.evaluate(Assignment{0, 0}), 0);
  EXPECT_EQ(q.evaluate(Assignment{1, 0}), 1);
  EXPECT_EQ(q.evaluate(Assignment{1, 1}), 0);
}

TEST(Poly, ConstantAndSizeCheck) {
  const auto c = Poly::constant(2.5, 3);
  EXPECT_EQ(c.evaluate(Assignment{1, 0, 1}), 2.5);
  EXPECT_THROW(c.evaluate(Assignment{1}), InputError);
}

TEST(Poly, ProductExample) {
  const Poly p = Poly::negated(0, 4) * Poly::variable(1, 4) * Poly::variable(2, 4) * Poly::negated(3, 4);
  EXPECT_EQ(p.degree(), 4u);
  EXPECT_EQ(p.evaluate(Assignment{0, 1, 1, 0}), 1);
  EXPECT_EQ(p.evaluate(Assignment{1, 1, 1, 0}), 0);
}

TEST(Poly, IdempotentProduct) {
  const Poly x = Poly::variable(0, 1);
  EXPECT_EQ(x * x, x);
}

TEST(Ising, SingleCoupling) {
  Poly p(2);
  p.add_term({0, 1}, 1);
  const Qubo q(p);
  const auto ising = qubo_to_ising(q);
  EXPECT_DOUBLE_EQ(ising.J.at({0, 1}), 0.25);
  EXPECT_DOUBLE_EQ(ising.offset, 0.25);
  for (std::uint64_t m = 0; m < 4; ++m) {
    const auto x = oracle::bits_of(m, 2);
    EXPECT_DOUBLE_EQ(ising.energy(bits_to_spins(x)), q.evaluate(x));
  }
}

TEST(Ising, PureField) {
  const Qubo q(Poly::variable(0, 1));
  const auto ising = qubo_to_ising(q);
  EXPECT_TRUE(ising.J.empty());
  for (std::uint8_t z : {0, 1}) EXPECT_DOUBLE_EQ(ising.energy(bits_to_spins(Assignment{z})), z);
}

TEST(Ising, RandomRoundTrip) {
  Rng rng(21);
  for (int k = 0; k < 20; ++k) {
    const Qubo q(random_poly(6, 12, 2, rng));
    const auto ising = qubo_to_ising(q);
    const auto back = ising_to_qubo(ising);
    for (std::uint64_t m = 0; m < 64; ++m) {
      const auto x = oracle::bits_of(m, 6);
      EXPECT_NEAR(ising.energy(bits_to_spins(x)), q.evaluate(x), 1e-12);
      EXPECT_NEAR(back.evaluate(x), q.evaluate(x), 1e-12);
    }
  }
}

TEST(Ising, SpinMap) {
  EXPECT_EQ(bits_to_spins(Assignment{0, 1}), (std::vector<std::int8_t>{1, -1}));
  EXPECT_EQ(spins_to_bits(std::vector<std::int8_t>{1, -1}), (Assignment{0, 1}));
}

TEST(Qubo, RejectsCubic) {
  Poly p(3);
  p.add_term({0, 1, 2}, 1);
  EXPECT_THROW(Qubo{p}, InputError);
}

TEST(Clause, WorkedExample) {
  // (x1 or not x2 or not x3 or x4)
  const auto p = clause_to_pubo_term({1, -2, -3, 4}, 4);
  const Poly expect = Poly::negated(0, 4) * Poly::variable(1, 4) * Poly::variable(2, 4) * Poly::negated(3, 4);
  EXPECT_EQ(p, expect);
}

TEST(Clause, UnitTautologyEmpty) {
  EXPECT_EQ(clause_to_pubo_term({1}, 1), Poly::negated(0, 1));
  const auto taut = clause_to_pubo_term({1, -1}, 1);
  EXPECT_EQ(taut.size(), 0u);
  EXPECT_THROW(clause_to_pubo_term({}, 1), InputError);
}

TEST(Clause, PuboCountsViolations) {
  Rng rng(8);
  for (int k = 0; k < 20; ++k) {
    CnfFormula f;
    f.num_vars = 5;
    for (int c = 0; c < 7; ++c) {
      Clause cl;
      for (int l = 0; l < 3; ++l) cl.push_back(make_literal(static_cast<std::uint32_t>(rng.below(5)), rng.coin()));
      f.clauses.push_back(cl);
    }
    const auto p = cnf_to_pubo(f);
    for (std::uint64_t m = 0; m < 32; ++m) {
      const auto x = oracle::bits_of(m, 5);
      EXPECT_DOUBLE_EQ(p.evaluate(x), static_cast<double>(f.violated_count(x)));
    }
  }
}

TEST(Quadratize, CubicExample) {
  Poly p(3);
  p.add_term({0, 1, 2}, 1);
  const auto cert = reduce_to_quadratic(p);
  ASSERT_EQ(cert.substitutions.size(), 1u);
  const auto& s = cert.substitutions[0];
  EXPECT_EQ(s.u, 0u);
  EXPECT_EQ(s.v, 1u);
  EXPECT_EQ(s.ancilla, 3u);
  EXPECT_DOUBLE_EQ(s.penalty_weight, 2.0);
  Poly expect = Poly::variable(3, 4) * Poly::variable(2, 4) + 2.0 * conjunction_penalty(0, 1, 3, 4);
  EXPECT_EQ(cert.qubo.poly(), expect);
  EXPECT_DOUBLE_EQ(oracle::brute_min(cert.qubo.poly()), oracle::brute_min(p));
}

TEST(Quadratize, QuadraticIsIdentity) {
  Poly p(3);
  p.add_term({0, 1}, -1);
  p.add_term({2}, 2);
  const auto cert = reduce_to_quadratic(p);
  EXPECT_TRUE(cert.substitutions.empty());
  EXPECT_EQ(cert.qubo.poly(), p);
}

TEST(Quadratize, GadgetValues) {
  const auto pen = conjunction_penalty(0, 1, 2, 3);
  for (std::uint64_t m = 0; m < 8; ++m) {
    const auto x = oracle::bits_of(m, 3);
    const bool consistent = x[2] == (x[0] & x[1]);
    if (consistent) EXPECT_EQ(pen.evaluate(x), 0);
    else EXPECT_GE(pen.evaluate(x), 1);
  }
}

TEST(Quadratize, RandomDegreeFourMinimizers) {
  Rng rng(17);
  for (int k = 0; k < 30; ++k) {
    const auto p = random_poly(6, 10, 4, rng);
    const auto cert = reduce_to_quadratic(p);
    ASSERT_LE(cert.qubo.num_vars(), 16u);
    const double lo = oracle::brute_min(cert.qubo.poly());
    EXPECT_NEAR(lo, oracle::brute_min(p), 1e-9);
    std::set<Assignment> projected;
    for (const auto& x : oracle::assignments_at(cert.qubo.poly(), lo)) {
      EXPECT_TRUE(check_ancilla_consistency(cert, x));
      projected.insert(lift_assignment(cert, x));
    }
    EXPECT_EQ(projected, minimizers(p));
  }
}

TEST(Quadratize, ConsistentCompletionPreservesEnergy) {
  Rng rng(4);
  for (int k = 0; k < 10; ++k) {
    const auto p = random_poly(5, 8, 4, rng);
    const auto cert = reduce_to_quadratic(p);
    for (std::uint64_t m = 0; m < 32; ++m) {
      const auto x = oracle::bits_of(m, 5);
      const auto full = complete_ancillas(cert, x);
      EXPECT_TRUE(check_ancilla_consistency(cert, full));
      EXPECT_NEAR(cert.qubo.evaluate(full), p.evaluate(x), 1e-9);
    }
  }
}

TEST(Quadratize, InconsistentAncillaDetected) {
  Poly p(3);
  p.add_term({0, 1, 2}, 1);
  const auto cert = reduce_to_quadratic(p);
  EXPECT_FALSE(check_ancilla_consistency(cert, Assignment{0, 1, 0, 1}));
  EXPECT_TRUE(check_ancilla_consistency(cert, Assignment{1, 1, 0, 1}));
}

TEST(TextFormats, QuboRoundTrip) {
  Rng rng(2);
  Poly p = random_poly(5, 9, 2, rng);
  p.add_term({}, 1.5);
  const Qubo q(p);
  std::stringstream s;
  write_qubo(q, s);
  EXPECT_EQ(read_qubo(s), q);
  std::istringstream bad("p qubo 2 1\n0 5 1.0\n");
  EXPECT_THROW(read_qubo(bad), InputError);
}

TEST(TextFormats, IsingRoundTrip) {
  IsingModel m(3);
  m.h = {0.5, -1, 0};
  m.add_coupling(0, 2, 0.75);
  m.offset = 2;
  std::stringstream s;
  write_ising(m, s);
  const auto back = read_ising(s);
  EXPECT_EQ(back.h, m.h);
  EXPECT_EQ(back.J, m.J);
  EXPECT_EQ(back.offset, m.offset);
}

TEST(TextFormats, Dimacs) {
  std::istringstream in("c comment\np cnf 3 2\n1 -2\n 0 3 0\n");
  const auto f = read_dimacs(in);
  ASSERT_EQ(f.clauses.size(), 2u);
  EXPECT_EQ(f.clauses[0], (Clause{1, -2}));
  std::stringstream out;
  write_dimacs(f, out);
  const auto g = read_dimacs(out);
  EXPECT_EQ(g.clauses, f.clauses);
  std::istringstream bad("p cnf 1 1\n2 0\n");
  EXPECT_THROW(read_dimacs(bad), InputError);
}
