#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lambdag/rational.hpp"

namespace lambdag {

// Stable graph: vertices carry genera, legs are marked 0..n-1, edges are
// unordered vertex pairs (loops and multi-edges allowed).
//
// Half-edge ids: leg i has id i; edge j has ends n + 2j and n + 2j + 1.
struct StableGraph {
  std::vector<int> genus;                 // per vertex
  int n = 0;                              // number of legs
  std::vector<int> leg_vertex;            // marking -> vertex
  std::vector<std::pair<int, int>> edges; // (u,v) with u <= v, sorted

  int num_vertices() const { return static_cast<int>(genus.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_half_edges() const { return n + 2 * num_edges(); }
  int h1() const { return num_edges() - num_vertices() + 1; }
  int total_genus() const;
  int vertex_of_half(int h) const;
  int valence(int v) const;  // legs plus edge ends at v

  bool connected() const;
  // Checks connectivity, per-vertex stability, and leg/edge index ranges.
  bool valid() const;

  // Text form with the current vertex labeling:
  //   V:(g0,g1,...) E:((u,v),...) L:(0->w0,1->w1,...)
  // Edges are normalized and sorted, so the dump determines the labeled
  // graph exactly.
  std::string dump() const;

  // Lexicographically minimal dump over vertex relabelings that preserve
  // isomorphism invariants; equal for two graphs iff they are isomorphic
  // respecting leg markings.
  std::string canonical_key() const;
};

// One representative per isomorphism class, ordered by |E| then canonical
// key. Throws UnstableInput when 2g-2+n <= 0.
std::vector<StableGraph> enumerate_graphs(int g, int n);

// The h1 = 0 subset of enumerate_graphs, same order.
std::vector<StableGraph> enumerate_trees(int g, int n);

// Order of the automorphism group acting on vertices and half-edges,
// fixing legs pointwise.
long aut_order(const StableGraph& gr);

// Integral of prod_i psi_i^{ambient_i} against the pushforward of the
// decorated class prod_h psi_h^{decorations[h]}: the product over vertices
// of psi_integral(g(v), exponents of half-edges at v), where leg h marked i
// contributes decorations[h] + ambient[i] and edge ends contribute their
// decoration. No 1/|Aut| factor is applied. decorations may be empty
// (all zero) or have size num_half_edges().
Rational pair_decorated(const StableGraph& gr, const std::vector<int>& decorations,
                        const std::vector<int>& ambient);

}  // namespace lambdag
