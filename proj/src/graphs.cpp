#include "lambdag/graphs.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

#include "lambdag/errors.hpp"
#include "lambdag/psi.hpp"

namespace lambdag {

int StableGraph::total_genus() const {
  return h1() + std::accumulate(genus.begin(), genus.end(), 0);
}

int StableGraph::vertex_of_half(int h) const {
  if (h < n) return leg_vertex[static_cast<std::size_t>(h)];
  int j = (h - n) / 2;
  const auto& e = edges[static_cast<std::size_t>(j)];
  return ((h - n) % 2 == 0) ? e.first : e.second;
}

int StableGraph::valence(int v) const {
  int c = 0;
  for (int w : leg_vertex) c += (w == v);
  for (const auto& e : edges) c += (e.first == v) + (e.second == v);
  return c;
}

bool StableGraph::connected() const {
  const int nv = num_vertices();
  if (nv == 0) return false;
  std::vector<int> parent(static_cast<std::size_t>(nv));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const auto& e : edges) parent[static_cast<std::size_t>(find(e.first))] = find(e.second);
  int root = find(0);
  for (int v = 1; v < nv; ++v)
    if (find(v) != root) return false;
  return true;
}

bool StableGraph::valid() const {
  const int nv = num_vertices();
  if (nv == 0) return false;
  if (static_cast<int>(leg_vertex.size()) != n) return false;
  for (int w : leg_vertex)
    if (w < 0 || w >= nv) return false;
  for (const auto& e : edges) {
    if (e.first < 0 || e.second < 0 || e.first >= nv || e.second >= nv) return false;
    if (e.first > e.second) return false;
  }
  for (int g : genus)
    if (g < 0) return false;
  if (!connected()) return false;
  for (int v = 0; v < nv; ++v)
    if (2 * genus[static_cast<std::size_t>(v)] - 2 + valence(v) <= 0) return false;
  return true;
}

namespace {

void append_int(std::string& s, long v) {
  char buf[24];
  int len = std::snprintf(buf, sizeof buf, "%ld", v);
  s.append(buf, static_cast<std::size_t>(len));
}

std::string dump_relabeled(const StableGraph& gr, const std::vector<int>& newlabel) {
  std::string s;
  s.reserve(16 + 4 * gr.genus.size() + 8 * gr.edges.size() + 8 * static_cast<std::size_t>(gr.n));
  s += "V:(";
  // newlabel[v] = position of old vertex v; invert to list genera in new order.
  std::vector<int> inv(newlabel.size());
  for (std::size_t v = 0; v < newlabel.size(); ++v)
    inv[static_cast<std::size_t>(newlabel[v])] = static_cast<int>(v);
  for (std::size_t p = 0; p < inv.size(); ++p) {
    if (p) s += ',';
    append_int(s, gr.genus[static_cast<std::size_t>(inv[p])]);
  }
  s += ") E:(";
  std::vector<std::pair<int, int>> es;
  es.reserve(gr.edges.size());
  for (const auto& e : gr.edges) {
    int a = newlabel[static_cast<std::size_t>(e.first)];
    int b = newlabel[static_cast<std::size_t>(e.second)];
    es.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(es.begin(), es.end());
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (i) s += ',';
    s += '(';
    append_int(s, es[i].first);
    s += ',';
    append_int(s, es[i].second);
    s += ')';
  }
  s += ") L:(";
  for (int i = 0; i < gr.n; ++i) {
    if (i) s += ',';
    append_int(s, i);
    s += "->";
    append_int(s, newlabel[static_cast<std::size_t>(gr.leg_vertex[static_cast<std::size_t>(i)])]);
  }
  s += ')';
  return s;
}

// Isomorphism-invariant vertex signature used to cut the permutation search.
// One round of neighbor refinement on top of (genus, legs, valence, loops).
std::vector<std::string> vertex_colors(const StableGraph& gr) {
  const int nv = gr.num_vertices();
  std::vector<std::string> base(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v) {
    int loops = 0;
    for (const auto& e : gr.edges) loops += (e.first == v && e.second == v);
    std::string s;
    append_int(s, gr.genus[static_cast<std::size_t>(v)]);
    s += '|';
    append_int(s, gr.valence(v));
    s += '|';
    append_int(s, loops);
    s += '|';
    for (int i = 0; i < gr.n; ++i)
      if (gr.leg_vertex[static_cast<std::size_t>(i)] == v) {
        append_int(s, i);
        s += ',';
      }
    base[static_cast<std::size_t>(v)] = std::move(s);
  }
  std::vector<std::string> out(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v) {
    std::vector<const std::string*> nbr;
    for (const auto& e : gr.edges) {
      if (e.first == v && e.second != v) nbr.push_back(&base[static_cast<std::size_t>(e.second)]);
      if (e.second == v && e.first != v) nbr.push_back(&base[static_cast<std::size_t>(e.first)]);
    }
    std::sort(nbr.begin(), nbr.end(),
              [](const std::string* a, const std::string* b) { return *a < *b; });
    std::string s = base[static_cast<std::size_t>(v)];
    s += '#';
    for (const auto* p : nbr) {
      s += *p;
      s += ';';
    }
    out[static_cast<std::size_t>(v)] = std::move(s);
  }
  return out;
}

// Runs fn over every relabeling consistent with the color classes:
// vertices are first ordered by color, then all permutations within each
// color block are tried. fn receives newlabel (old vertex -> new position).
template <typename Fn>
void for_each_color_relabeling(const StableGraph& gr, Fn&& fn) {
  const int nv = gr.num_vertices();
  auto colors = vertex_colors(gr);
  std::vector<int> order(static_cast<std::size_t>(nv));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return colors[static_cast<std::size_t>(a)] < colors[static_cast<std::size_t>(b)];
  });
  // Blocks of equal color, as index ranges into `order`.
  std::vector<std::pair<int, int>> blocks;
  int start = 0;
  for (int i = 1; i <= nv; ++i) {
    if (i == nv || colors[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] !=
                       colors[static_cast<std::size_t>(order[static_cast<std::size_t>(start)])]) {
      blocks.emplace_back(start, i);
      start = i;
    }
  }
  std::vector<int> arrangement(order);
  // Recursively permute each block.
  auto rec = [&](auto&& self, std::size_t bi) -> void {
    if (bi == blocks.size()) {
      std::vector<int> newlabel(static_cast<std::size_t>(nv));
      for (int pos = 0; pos < nv; ++pos)
        newlabel[static_cast<std::size_t>(arrangement[static_cast<std::size_t>(pos)])] = pos;
      fn(newlabel);
      return;
    }
    auto [b, e] = blocks[bi];
    std::sort(arrangement.begin() + b, arrangement.begin() + e);
    do {
      self(self, bi + 1);
    } while (std::next_permutation(arrangement.begin() + b, arrangement.begin() + e));
  };
  rec(rec, 0);
}

}  // namespace

std::string StableGraph::dump() const {
  std::vector<int> ident(genus.size());
  std::iota(ident.begin(), ident.end(), 0);
  return dump_relabeled(*this, ident);
}

std::string StableGraph::canonical_key() const {
  std::string best;
  for_each_color_relabeling(*this, [&](const std::vector<int>& newlabel) {
    std::string d = dump_relabeled(*this, newlabel);
    if (best.empty() || d < best) best = std::move(d);
  });
  return best;
}

long aut_order(const StableGraph& gr) {
  // Orbit-stabilizer: over all color-preserving relabelings, every labeled
  // image occurs |Aut_V| times, so count copies of the minimal dump.
  std::string best;
  long vertex_autos = 0;
  for_each_color_relabeling(gr, [&](const std::vector<int>& newlabel) {
    std::string d = dump_relabeled(gr, newlabel);
    if (best.empty() || d < best) {
      best = std::move(d);
      vertex_autos = 1;
    } else if (d == best) {
      ++vertex_autos;
    }
  });
  // Half-edge freedom on top of each vertex automorphism: permute parallel
  // edges within a bundle, permute loops and flip each loop.
  std::map<std::pair<int, int>, long> mult;
  for (const auto& e : gr.edges) ++mult[e];
  long he = 1;
  for (const auto& [pair, m] : mult) {
    for (long i = 2; i <= m; ++i) he *= i;
    if (pair.first == pair.second)
      for (long i = 0; i < m; ++i) he *= 2;
  }
  return vertex_autos * he;
}

Rational pair_decorated(const StableGraph& gr, const std::vector<int>& decorations,
                        const std::vector<int>& ambient) {
  const int nh = gr.num_half_edges();
  if (!decorations.empty() && static_cast<int>(decorations.size()) != nh)
    throw std::invalid_argument("pair_decorated: decoration size mismatch");
  if (static_cast<int>(ambient.size()) != gr.n)
    throw std::invalid_argument("pair_decorated: ambient size mismatch");
  auto deco = [&](int h) { return decorations.empty() ? 0 : decorations[static_cast<std::size_t>(h)]; };

  Rational out(1);
  for (int v = 0; v < gr.num_vertices(); ++v) {
    std::vector<int> exps;
    for (int h = 0; h < nh; ++h) {
      if (gr.vertex_of_half(h) != v) continue;
      int e = deco(h);
      if (h < gr.n) e += ambient[static_cast<std::size_t>(h)];
      exps.push_back(e);
    }
    // Loops put both ends at v; vertex_of_half reports the same vertex for
    // both ids, so each end is hit exactly once above.
    out *= psi_integral(gr.genus[static_cast<std::size_t>(v)], std::move(exps));
    if (out.is_zero()) return out;
  }
  return out;
}

namespace {

struct EdgeFill {
  const std::vector<std::pair<int, int>>* pairs;
  const std::vector<int>* genus;
  const std::vector<int>* leg_count;
  std::vector<int> last_pair_of;  // last pair index touching each vertex
  std::vector<int> min_deg;       // degree needed for stability (and connectivity)
  std::vector<int> counts;
  std::vector<int> deg;
  std::vector<std::vector<std::pair<int, int>>>* out;

  void run(int pair_idx, int remaining) {
    const int np = static_cast<int>(pairs->size());
    const int nv = static_cast<int>(genus->size());
    if (pair_idx == np) {
      if (remaining != 0) return;
      std::vector<std::pair<int, int>> edges;
      for (int p = 0; p < np; ++p)
        for (int c = 0; c < counts[static_cast<std::size_t>(p)]; ++c)
          edges.push_back((*pairs)[static_cast<std::size_t>(p)]);
      out->push_back(std::move(edges));
      return;
    }
    // Each unplaced edge supplies 2 to the total degree; bail when the open
    // vertices can no longer reach their minimum degrees.
    int need = 0;
    for (int w = 0; w < nv; ++w)
      need += std::max(0, min_deg[static_cast<std::size_t>(w)] - deg[static_cast<std::size_t>(w)]);
    if (need > 2 * remaining) return;

    const auto [u, v] = (*pairs)[static_cast<std::size_t>(pair_idx)];
    for (int m = 0; m <= remaining; ++m) {
      if (m > 0) {
        deg[static_cast<std::size_t>(u)] += (u == v ? 2 : 1);
        if (u != v) deg[static_cast<std::size_t>(v)] += 1;
      }
      counts[static_cast<std::size_t>(pair_idx)] = m;
      // Vertices with no later pairs must have their degree settled.
      bool ok = true;
      for (int w : {u, v}) {
        if (last_pair_of[static_cast<std::size_t>(w)] == pair_idx &&
            deg[static_cast<std::size_t>(w)] < min_deg[static_cast<std::size_t>(w)]) {
          ok = false;
          break;
        }
      }
      if (ok) run(pair_idx + 1, remaining - m);
    }
    const int m = counts[static_cast<std::size_t>(pair_idx)];
    deg[static_cast<std::size_t>(u)] -= (u == v ? 2 * m : m);
    if (u != v) deg[static_cast<std::size_t>(v)] -= m;
    counts[static_cast<std::size_t>(pair_idx)] = 0;
  }
};

// Ordered genus tuples of length nv summing to gsum.
void genus_tuples(int nv, int gsum, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == nv) {
    if (gsum == 0) out.push_back(cur);
    return;
  }
  for (int g = 0; g <= gsum; ++g) {
    cur.push_back(g);
    genus_tuples(nv, gsum - g, cur, out);
    cur.pop_back();
  }
}

}  // namespace

namespace {

std::vector<StableGraph> enumerate_graphs_uncached(int g, int n) {
  std::set<std::string> seen;
  std::vector<std::pair<std::string, StableGraph>> found;

  const int max_nv = 2 * g - 2 + n;  // each vertex contributes >= 1 to 2g-2+n
  for (int nv = 1; nv <= max_nv; ++nv) {
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < nv; ++u)
      for (int v = u; v < nv; ++v) pairs.emplace_back(u, v);
    std::vector<int> last_pair_of(static_cast<std::size_t>(nv), -1);
    for (int p = 0; p < static_cast<int>(pairs.size()); ++p) {
      last_pair_of[static_cast<std::size_t>(pairs[static_cast<std::size_t>(p)].first)] = p;
      last_pair_of[static_cast<std::size_t>(pairs[static_cast<std::size_t>(p)].second)] = p;
    }

    for (int h1 = 0; h1 <= g; ++h1) {
      const int ne = h1 + nv - 1;
      const int gsum = g - h1;
      if (gsum < 0) continue;
      std::vector<std::vector<int>> tuples;
      std::vector<int> cur;
      genus_tuples(nv, gsum, cur, tuples);

      // Leg assignments: n digits base nv.
      long nmaps = 1;
      for (int i = 0; i < n; ++i) nmaps *= nv;

      for (const auto& genus : tuples) {
        for (long code = 0; code < nmaps; ++code) {
          std::vector<int> legs(static_cast<std::size_t>(n));
          std::vector<int> leg_count(static_cast<std::size_t>(nv), 0);
          long c = code;
          for (int i = 0; i < n; ++i) {
            legs[static_cast<std::size_t>(i)] = static_cast<int>(c % nv);
            ++leg_count[static_cast<std::size_t>(c % nv)];
            c /= nv;
          }
          // Symmetry cut: every isomorphism class has a labeling whose
          // per-vertex (genus, leg set) sequence is sorted; skip the rest.
          {
            std::vector<std::vector<int>> attr(static_cast<std::size_t>(nv));
            for (int v = 0; v < nv; ++v)
              attr[static_cast<std::size_t>(v)].push_back(genus[static_cast<std::size_t>(v)]);
            for (int i = 0; i < n; ++i)
              attr[static_cast<std::size_t>(legs[static_cast<std::size_t>(i)])].push_back(i);
            bool sorted = true;
            for (int v = 1; v < nv && sorted; ++v)
              sorted = !(attr[static_cast<std::size_t>(v)] < attr[static_cast<std::size_t>(v - 1)]);
            if (!sorted) continue;
          }
          std::vector<int> min_deg(static_cast<std::size_t>(nv));
          int min_total = 0;
          for (int v = 0; v < nv; ++v) {
            int need = std::max(nv > 1 ? 1 : 0,
                                3 - 2 * genus[static_cast<std::size_t>(v)] -
                                    leg_count[static_cast<std::size_t>(v)]);
            min_deg[static_cast<std::size_t>(v)] = std::max(0, need);
            min_total += min_deg[static_cast<std::size_t>(v)];
          }
          if (min_total > 2 * ne) continue;

          std::vector<std::vector<std::pair<int, int>>> edge_sets;
          EdgeFill fill{&pairs,     &genus,
                        &leg_count, last_pair_of,
                        min_deg,    std::vector<int>(pairs.size(), 0),
                        std::vector<int>(static_cast<std::size_t>(nv), 0),
                        &edge_sets};
          fill.run(0, ne);
          for (auto& edges : edge_sets) {
            StableGraph gr{genus, n, legs, edges};
            if (!gr.connected()) continue;
            std::string key = gr.canonical_key();
            if (seen.insert(key).second) found.emplace_back(std::move(key), std::move(gr));
          }
        }
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.second.num_edges() != b.second.num_edges())
      return a.second.num_edges() < b.second.num_edges();
    return a.first < b.first;
  });
  std::vector<StableGraph> result;
  result.reserve(found.size());
  for (auto& [key, gr] : found) result.push_back(std::move(gr));
  return result;
}

}  // namespace

std::vector<StableGraph> enumerate_graphs(int g, int n) {
  if (g < 0 || n < 0 || 2 * g - 2 + n <= 0) {
    std::ostringstream os;
    os << "enumerate_graphs: unstable (g,n) = (" << g << "," << n << ")";
    throw UnstableInput(os.str());
  }
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<StableGraph>> cache;
  std::lock_guard lk(mu);
  auto it = cache.find({g, n});
  if (it == cache.end())
    it = cache.emplace(std::make_pair(g, n), enumerate_graphs_uncached(g, n)).first;
  return it->second;
}

std::vector<StableGraph> enumerate_trees(int g, int n) {
  auto all = enumerate_graphs(g, n);
  std::vector<StableGraph> out;
  for (auto& gr : all)
    if (gr.h1() == 0) out.push_back(std::move(gr));
  return out;
}

}  // namespace lambdag
