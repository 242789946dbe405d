#include "lambdag/givental.hpp"

#include <cstddef>
#include <utility>
#include <vector>

#include "doctest.h"
#include "givental_ref.h"
#include "lambdag/errors.hpp"
#include "lambdag/pixton.hpp"
#include "lambdag/rational.hpp"

using namespace lambdag;
using givental_ref::oracle_tree_sum;
using givental_ref::pure_psi_query;
using givental_ref::rank1_exp_z3;
using givental_ref::rank1_id;
using givental_ref::random_symplectic;

TEST_CASE("validate accepts and rejects") {
  CHECK(validate(rank1_id(4)).empty());

  SemisimpleData bad = rank1_id(4);
  bad.R[1] = {{Rational(1)}};
  auto v = validate(bad);
  REQUIRE(!v.empty());
  CHECK(v.front().order == 2);  // 1 + z fails R(z)R*(-z) = Id first at z^2

  CHECK(validate(rank1_exp_z3(5)).empty());
  CHECK_NOTHROW(edge_table(rank1_exp_z3(5)));

  // chopping the z^6 tail off exp(c z^3) and claiming order 6 must fail there
  SemisimpleData dishonest = rank1_exp_z3(5);
  dishonest.R.push_back({{Rational(0)}});
  auto w = validate(dishonest);
  REQUIRE(!w.empty());
  CHECK(w.front().order == 6);

  // structural: wrong delta length
  SemisimpleData shape = rank1_id(2);
  shape.delta.push_back(Rational(1));
  auto s = validate(shape);
  REQUIRE(!s.empty());
  CHECK(s.front().order == -1);
}

TEST_CASE("identity R collapses to direct integrals") {
  SemisimpleData d = rank1_id(8);
  std::vector<std::pair<int, std::vector<int>>> cases = {
      {0, {0, 0, 0}}, {1, {1}},      {1, {0, 2}},    {1, {1, 1}},
      {2, {4}},       {2, {3, 1}},   {2, {2, 2, 1}}, {2, {5, 0, 0}},
      {1, {0, 1, 1}}, {0, {1, 0, 0, 0}}};
  for (const auto& [g, a] : cases) {
    TreeQuery q = pure_psi_query(g, a);
    int need = -1;
    Rational got = tree_sum(d, q, &need);
    CAPTURE(g);
    CHECK(got == hodge_integral(g, a));
    CHECK(need <= d.order());
  }
}

TEST_CASE("three legs on one genus-0 vertex") {
  SemisimpleData d = random_symplectic(5);
  REQUIRE(validate(d).empty());
  TreeQuery q;
  q.g = 0;
  LegInput l1, l2, l3;
  l1.psi_coeff = {{Rational(1), Rational(0)}};
  l2.psi_coeff = {{Rational(1), Rational(1)}};
  l3.psi_coeff = {{Rational(2), Rational(3)}};
  q.legs = {l1, l2, l3};
  // single vertex, height 0, no dilaton leaves: sum_i prod_l (t_l)_i / Delta_i
  Rational want = (Rational(1) * Rational(1) * Rational(2)) / d.delta[0] +
                  (Rational(0) * Rational(1) * Rational(3)) / d.delta[1];
  CHECK(tree_sum(d, q) == want);
}

TEST_CASE("edge table is exact and half-edge symmetric") {
  for (int trial = 0; trial < 10; ++trial) {
    SemisimpleData d = random_symplectic(6);
    CAPTURE(trial);
    REQUIRE(validate(d).empty());
    std::vector<std::vector<RMatrix>> Q;
    REQUIRE_NOTHROW(Q = edge_table(d));
    for (std::size_t a = 0; a < Q.size(); ++a)
      for (std::size_t b = 0; b < Q[a].size(); ++b)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) CHECK(Q[a][b][i][j] == Q[b][a][j][i]);
  }
}

TEST_CASE("tree sum matches the uncapped enumerator") {
  SemisimpleData d = random_symplectic(6);
  TreeQuery q;
  q.g = 0;
  LegInput l1, l2, l3, l4;
  l1.psi_coeff = {{Rational(1), Rational(1)}};
  l2.psi_coeff = {{Rational(1), Rational(-1)}};
  l3.psi_coeff = {{Rational(0), Rational(0)}, {Rational(1), Rational(2)}};
  l4.psi_coeff = {{Rational(2), Rational(1)}};
  q.legs = {l1, l2, l3, l4};
  int need = -1;
  Rational got = tree_sum(d, q, &need);
  CHECK(got == oracle_tree_sum(d, q, 3, 2, 5));
  CHECK(need <= d.order());

  LegInput l5;
  l5.psi_coeff = {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
  q.legs.push_back(l5);
  CHECK(tree_sum(d, q) == oracle_tree_sum(d, q, 2, 2, 4));
}

TEST_CASE("oracle agreement at positive genus") {
  {
    SemisimpleData d = rank1_exp_z3(5);
    TreeQuery q;
    q.g = 1;
    LegInput l;
    l.psi_coeff = {{Rational(1)}};
    q.legs = {l};
    Rational got = tree_sum(d, q);
    CHECK(got == oracle_tree_sum(d, q, 4, 3, 7));
    CHECK(got == Rational(1, 24));  // <tau_0 lambda_1> survives the R twist
  }
  {
    SemisimpleData d = random_symplectic(6);
    TreeQuery q;
    q.g = 1;
    LegInput l1, l2;
    l1.psi_coeff = {{Rational(1), Rational(1)}};
    l2.psi_coeff = {{Rational(0), Rational(1)}, {Rational(1), Rational(2)}};
    q.legs = {l1, l2};
    Rational got = tree_sum(d, q);
    CHECK(got == oracle_tree_sum(d, q, 3, 3, 6));
    CHECK(got != Rational(0));
  }
}

TEST_CASE("json round trip") {
  const char* text =
      "{\"n\":2,\"delta\":[\"1\",\"2/3\"],"
      "\"r\":[[[\"1\",\"0\"],[\"0\",\"1\"]],[[\"1/2\",\"-1/3\"],[\"0\",\"1/4\"]]]}";
  SemisimpleData d = semisimple_from_json(text);
  CHECK(d.N == 2);
  CHECK(d.order() == 1);
  CHECK(d.delta[1] == Rational(2, 3));
  CHECK(d.R[1][0][1] == Rational(-1, 3));

  CHECK_THROWS_AS(semisimple_from_json("{\"n\":2,\"delta\":[\"1\"],\"r\":[]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(semisimple_from_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(semisimple_from_json("{\"n\":0,\"delta\":[],\"r\":[]}"),
                  std::invalid_argument);
}

TEST_CASE("unstable queries are rejected") {
  SemisimpleData d = rank1_id(4);
  TreeQuery q;
  q.g = 0;
  LegInput l;
  l.psi_coeff = {{Rational(1)}};
  q.legs = {l, l};
  CHECK_THROWS_AS(tree_sum(d, q), UnstableInput);
}
