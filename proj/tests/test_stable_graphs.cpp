#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "lambdag/errors.hpp"
#include "lambdag/graphs.hpp"
#include "lambdag/psi.hpp"
#include "lambdag/rational.hpp"

using namespace lambdag;

TEST_CASE("enumeration counts") {
  CHECK(enumerate_graphs(0, 3).size() == 1);
  CHECK(enumerate_graphs(1, 1).size() == 2);
  CHECK(enumerate_graphs(0, 4).size() == 4);
  CHECK(enumerate_trees(1, 1).size() == 1);
  CHECK(enumerate_graphs(2, 0).size() == 7);
  CHECK(enumerate_trees(2, 0).size() == 2);
  CHECK_THROWS_AS(enumerate_graphs(0, 2), UnstableInput);
}

TEST_CASE("every emitted graph is valid with matching genus") {
  for (auto [g, n] : {std::pair{0, 3}, {0, 4}, {0, 5}, {1, 1}, {1, 2}, {1, 3}, {2, 0}, {2, 1}}) {
    std::set<std::string> keys;
    for (const auto& gr : enumerate_graphs(g, n)) {
      CHECK(gr.valid());
      CHECK(gr.n == n);
      CHECK(gr.h1() + std::accumulate(gr.genus.begin(), gr.genus.end(), 0) == g);
      CHECK(keys.insert(gr.canonical_key()).second);  // no duplicate classes
    }
    for (const auto& gr : enumerate_trees(g, n)) CHECK(gr.h1() == 0);
  }
}

TEST_CASE("canonical key is a labeling invariant") {
  // genus-1 vertex joined to a genus-0 vertex carrying all three legs,
  // written with both vertex orders
  StableGraph a;
  a.genus = {1, 0};
  a.n = 3;
  a.leg_vertex = {1, 1, 1};
  a.edges = {{0, 1}};
  StableGraph b;
  b.genus = {0, 1};
  b.n = 3;
  b.leg_vertex = {0, 0, 0};
  b.edges = {{0, 1}};
  REQUIRE(a.valid());
  REQUIRE(b.valid());
  CHECK(a.dump() != b.dump());
  CHECK(a.canonical_key() == b.canonical_key());

  // moving a leg to the other vertex changes the class
  StableGraph c = a;
  c.leg_vertex = {0, 1, 1};
  REQUIRE(c.valid());
  CHECK(c.canonical_key() != a.canonical_key());
}

// Independent automorphism count: pairs (f, s) of a vertex bijection and a
// half-edge bijection preserving genus, incidence, the edge pairing, and
// every leg pointwise. Exhaustive over both permutation sets.
static long brute_force_aut(const StableGraph& gr) {
  const int nv = gr.num_vertices();
  const int n = gr.n;
  const int ne = gr.num_edges();
  std::vector<int> f(nv);
  std::iota(f.begin(), f.end(), 0);
  std::vector<int> halves(2 * ne);
  std::iota(halves.begin(), halves.end(), n);
  auto iota_img = halves;
  long count = 0;
  do {  // vertex permutations
    bool ok = true;
    for (int v = 0; v < nv && ok; ++v)
      if (gr.genus[f[v]] != gr.genus[v]) ok = false;
    for (int l = 0; l < n && ok; ++l)
      if (f[gr.leg_vertex[l]] != gr.leg_vertex[l]) ok = false;
    if (!ok) continue;
    std::vector<int> img = iota_img;
    do {  // edge half permutations; s(half[i]) = img[i], legs fixed
      auto s = [&](int h) { return h < n ? h : img[h - n]; };
      auto iota_inv = [&](int h) {  // the edge involution
        return h < n ? h : ((h - n) % 2 == 0 ? h + 1 : h - 1);
      };
      bool good = true;
      for (int h = n; h < n + 2 * ne && good; ++h) {
        if (gr.vertex_of_half(s(h)) != f[gr.vertex_of_half(h)]) good = false;
        if (s(iota_inv(h)) != iota_inv(s(h))) good = false;
      }
      if (good) ++count;
    } while (std::next_permutation(img.begin(), img.end()));
  } while (std::next_permutation(f.begin(), f.end()));
  return count;
}

TEST_CASE("aut_order matches brute force on every graph with <= 5 half-edges") {
  long tested = 0;
  for (auto [g, n] : {std::pair{0, 3}, {0, 4}, {0, 5}, {1, 0},
                      {1, 1}, {1, 2}, {1, 3}, {2, 0}, {2, 1}}) {
    if (2 * g - 2 + n <= 0) continue;
    for (const auto& gr : enumerate_graphs(g, n)) {
      if (gr.num_half_edges() > 5) continue;
      CHECK_MESSAGE(aut_order(gr) == brute_force_aut(gr), gr.dump());
      ++tested;
    }
  }
  CHECK(tested >= 15);
}

TEST_CASE("aut_order hand values") {
  // smooth vertex, any legs
  StableGraph smooth;
  smooth.genus = {1};
  smooth.n = 2;
  smooth.leg_vertex = {0, 0};
  CHECK(aut_order(smooth) == 1);

  // genus-0 vertex with one loop and one leg: the loop's half-edge swap
  StableGraph loop;
  loop.genus = {0};
  loop.n = 1;
  loop.leg_vertex = {0};
  loop.edges = {{0, 0}};
  CHECK(aut_order(loop) == 2);

  // two genus-1 vertices joined by one edge, no legs: the vertex swap
  StableGraph pair;
  pair.genus = {1, 1};
  pair.n = 0;
  pair.edges = {{0, 1}};
  CHECK(aut_order(pair) == 2);

  // two loops on one genus-0 vertex: 2 half-edge swaps x loop exchange
  StableGraph two_loops;
  two_loops.genus = {0};
  two_loops.n = 0;
  two_loops.edges = {{0, 0}, {0, 0}};
  CHECK(aut_order(two_loops) == 8);
}

TEST_CASE("one-edge graphs of G_{0,4} sum 1/|Aut| to 3") {
  Rational total(0);
  for (const auto& gr : enumerate_graphs(0, 4)) {
    if (gr.num_edges() != 1) continue;
    CHECK(aut_order(gr) == 1);
    total += Rational(1) / Rational(aut_order(gr));
  }
  CHECK(total == Rational(3));
}

TEST_CASE("pair_decorated base cases") {
  StableGraph smooth;
  smooth.genus = {1};
  smooth.n = 1;
  smooth.leg_vertex = {0};
  CHECK(pair_decorated(smooth, {}, {1}) == psi_integral(1, {1}));

  // genus-1 loop graph, zero decorations, ambient (0): reduces to <tau_0^3>_0
  StableGraph loop;
  loop.genus = {0};
  loop.n = 1;
  loop.leg_vertex = {0};
  loop.edges = {{0, 0}};
  CHECK(pair_decorated(loop, {}, {0}) == Rational(1));

  // per-vertex dimension mismatch
  CHECK(pair_decorated(loop, {}, {1}) == Rational(0));

  // decorated loop: psi on one loop half, ambient psi on the leg
  // -> <tau_1 tau_1 tau_0>_0 = 0 by dimension; with leg ambient 0 it is
  //    <tau_0 tau_1 tau_0>_0 = 0 too (sum 1 != 1? dim M_{0,3} = 0)
  CHECK(pair_decorated(loop, {0, 1, 0}, {0}) == Rational(0));

  // two-vertex tree in G_{1,2}: genus-1 end with psi^1 on its edge half
  StableGraph tail;
  tail.genus = {1, 0};
  tail.n = 2;
  tail.leg_vertex = {1, 1};
  tail.edges = {{0, 1}};
  // halves: legs 0,1; edge halves 2 (at v0), 3 (at v1)
  // <tau_1>_1 * <tau_0 tau_0 tau_0>_0 = 1/24
  CHECK(pair_decorated(tail, {0, 0, 1, 0}, {0, 0}) == Rational(1, 24));
}

TEST_CASE("pair_decorated agrees across equivalent psi placements") {
  StableGraph loop;
  loop.genus = {0};
  loop.n = 2;
  loop.leg_vertex = {0, 0};
  loop.edges = {{0, 0}};
  REQUIRE(loop.valid());
  // M_{0,4} content: halves 0,1 legs; 2,3 loop halves; dimension 1
  Rational a = pair_decorated(loop, {0, 0, 1, 0}, {0, 0});
  Rational b = pair_decorated(loop, {0, 0, 0, 1}, {0, 0});
  Rational c = pair_decorated(loop, {1, 0, 0, 0}, {0, 0});
  CHECK(a == Rational(1));  // <tau_0 tau_0 tau_1 tau_0>_0
  CHECK(a == b);            // loop halves are symmetric
  CHECK(c == a);            // psi on a leg equals psi via ambient
  CHECK(pair_decorated(loop, {1, 0, 0, 0}, {0, 0}) ==
        pair_decorated(loop, {0, 0, 0, 0}, {1, 0}));
}
