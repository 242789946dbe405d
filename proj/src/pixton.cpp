#include "lambdag/pixton.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

#include "lambdag/cache.hpp"
#include "lambdag/errors.hpp"
#include "lambdag/psi.hpp"

namespace lambdag {

std::vector<WeightingModR> weightings(const StableGraph& gr, const std::vector<long>& A,
                                      long r) {
  if (r < 1) throw InvalidModulus("weightings: modulus must be >= 1");
  if (static_cast<int>(A.size()) != gr.n)
    throw std::invalid_argument("weightings: ramification data size mismatch");

  const int nv = gr.num_vertices();
  const int ne = gr.num_edges();
  const int nh = gr.num_half_edges();
  auto modr = [r](long x) { return ((x % r) + r) % r; };

  // Spanning tree via union-find; loops and extra parallel copies are chords.
  std::vector<int> parent_uf(static_cast<std::size_t>(nv));
  std::iota(parent_uf.begin(), parent_uf.end(), 0);
  auto find = [&](int x) {
    while (parent_uf[static_cast<std::size_t>(x)] != x) x = parent_uf[static_cast<std::size_t>(x)];
    return x;
  };
  std::vector<bool> in_tree(static_cast<std::size_t>(ne), false);
  std::vector<int> chords;
  for (int j = 0; j < ne; ++j) {
    int a = find(gr.edges[static_cast<std::size_t>(j)].first);
    int b = find(gr.edges[static_cast<std::size_t>(j)].second);
    if (a != b) {
      parent_uf[static_cast<std::size_t>(a)] = b;
      in_tree[static_cast<std::size_t>(j)] = true;
    } else {
      chords.push_back(j);
    }
  }

  // Root the tree at 0; record each vertex's tree edge to its parent and a
  // leaves-first processing order.
  std::vector<int> tree_edge_up(static_cast<std::size_t>(nv), -1);
  std::vector<int> bfs;
  {
    std::vector<bool> seen(static_cast<std::size_t>(nv), false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      bfs.push_back(v);
      for (int j = 0; j < ne; ++j) {
        if (!in_tree[static_cast<std::size_t>(j)]) continue;
        const auto [a, b] = gr.edges[static_cast<std::size_t>(j)];
        int other = -1;
        if (a == v && !seen[static_cast<std::size_t>(b)]) other = b;
        else if (b == v && !seen[static_cast<std::size_t>(a)]) other = a;
        if (other >= 0) {
          seen[static_cast<std::size_t>(other)] = true;
          tree_edge_up[static_cast<std::size_t>(other)] = j;
          q.push(other);
        }
      }
    }
  }

  const std::size_t k = chords.size();  // h1 of the graph
  std::vector<WeightingModR> out;
  std::vector<long> choice(k, 0);
  while (true) {
    WeightingModR wt;
    wt.r = r;
    wt.w.assign(static_cast<std::size_t>(nh), -1);
    for (int i = 0; i < gr.n; ++i) wt.w[static_cast<std::size_t>(i)] = modr(A[static_cast<std::size_t>(i)]);
    for (std::size_t c = 0; c < k; ++c) {
      int j = chords[c];
      wt.w[static_cast<std::size_t>(gr.n + 2 * j)] = choice[c];
      wt.w[static_cast<std::size_t>(gr.n + 2 * j + 1)] = modr(-choice[c]);
    }
    // Leaves first: reverse BFS order; at each non-root vertex the unique
    // undetermined half-edge is its tree edge up.
    for (auto it = bfs.rbegin(); it != bfs.rend(); ++it) {
      int v = *it;
      int up = tree_edge_up[static_cast<std::size_t>(v)];
      if (up < 0) continue;  // root
      const auto [a, b] = gr.edges[static_cast<std::size_t>(up)];
      int h_here = gr.n + 2 * up + (b == v && a != v ? 1 : 0);
      long s = 0;
      for (int h = 0; h < nh; ++h)
        if (h != h_here && gr.vertex_of_half(h) == v) s += wt.w[static_cast<std::size_t>(h)];
      wt.w[static_cast<std::size_t>(h_here)] = modr(-s);
      int h_par = gr.n + 2 * up + (h_here == gr.n + 2 * up ? 1 : 0);
      wt.w[static_cast<std::size_t>(h_par)] = modr(s);
    }
    // Root vertex condition; fails for all choices iff sum(A) != 0 mod r.
    bool ok = true;
    for (int v = 0; v < nv && ok; ++v) {
      long s = 0;
      for (int h = 0; h < nh; ++h)
        if (gr.vertex_of_half(h) == v) s += wt.w[static_cast<std::size_t>(h)];
      ok = (modr(s) == 0);
    }
    if (ok) out.push_back(std::move(wt));

    // Next chord assignment.
    std::size_t pos = 0;
    while (pos < k && ++choice[pos] == r) choice[pos++] = 0;
    if (pos == k) break;
    if (k == 0) break;
  }
  return out;
}

namespace {

// Per-edge psi-degree vectors m with |E| + sum(m) <= d, together with the
// r-independent coefficient multiplying sum_w prod_e x_e^{m_e+1}.
struct GraphTerms {
  StableGraph gr;
  Rational aut_inv;                    // 1/|Aut|
  std::vector<std::vector<int>> ms;    // m-vectors
  std::vector<Rational> coeff;         // matching coefficients
};

void leg_degree_splits(int rem, std::size_t i, std::vector<int>& p,
                       std::vector<std::vector<int>>& out) {
  if (i + 1 == p.size()) {
    p[i] = rem;
    out.push_back(p);
    return;
  }
  for (int v = 0; v <= rem; ++v) {
    p[i] = v;
    leg_degree_splits(rem - v, i + 1, p, out);
  }
}

void m_vectors(int budget, std::size_t i, std::vector<int>& m,
               std::vector<std::vector<int>>& out) {
  if (i == m.size()) {
    out.push_back(m);
    return;
  }
  for (int v = 0; v <= budget; ++v) {
    m[i] = v;
    m_vectors(budget - v, i + 1, m, out);
  }
}

GraphTerms build_graph_terms(const StableGraph& gr, int d, const std::vector<long>& A,
                             const std::vector<int>& ambient) {
  GraphTerms t;
  t.gr = gr;
  t.aut_inv = Rational(1) / Rational(aut_order(gr));
  const int ne = gr.num_edges();
  const int n = gr.n;
  if (ne > d) return t;  // every edge factor carries degree >= 1

  std::vector<std::vector<int>> all_m;
  if (ne == 0) {
    all_m.push_back({});
  } else {
    std::vector<int> m(static_cast<std::size_t>(ne));
    m_vectors(d - ne, 0, m, all_m);
  }

  for (const auto& m : all_m) {
    const int mtot = std::accumulate(m.begin(), m.end(), 0);
    const int rem = d - ne - mtot;  // total psi degree on legs
    // Leg exponent distributions.
    std::vector<std::vector<int>> legs;
    if (n == 0) {
      if (rem == 0) legs.push_back({});
    } else {
      std::vector<int> p(static_cast<std::size_t>(n));
      leg_degree_splits(rem, 0, p, legs);
    }

    Rational edge_const(1);  // prod (-1)^{m_e} / (m_e+1)!
    for (int me : m) {
      edge_const *= Rational((me % 2 == 0) ? 1 : -1);
      edge_const /= Rational(factorial_z(static_cast<unsigned>(me) + 1));
    }

    Rational total(0);
    for (const auto& p : legs) {
      Rational leg_const(1);  // prod a_i^{2 p_i} / p_i!
      bool dead = false;
      for (int i = 0; i < n && !dead; ++i) {
        int pi = p[static_cast<std::size_t>(i)];
        if (pi == 0) continue;
        long a = A[static_cast<std::size_t>(i)];
        if (a == 0) {
          dead = true;
          break;
        }
        leg_const *= Rational(mpz_class(a)).pow(static_cast<unsigned>(2 * pi));
        leg_const /= Rational(factorial_z(static_cast<unsigned>(pi)));
      }
      if (dead) continue;

      // Distribute each edge's (psi_h + psi_h')^{m_e} binomially.
      std::vector<int> split(static_cast<std::size_t>(ne), 0);
      auto rec = [&](auto&& self, int e, Rational binom_acc) -> void {
        if (e == ne) {
          std::vector<int> decor(static_cast<std::size_t>(gr.num_half_edges()), 0);
          for (int i = 0; i < n; ++i) decor[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
          for (int j = 0; j < ne; ++j) {
            decor[static_cast<std::size_t>(n + 2 * j)] = split[static_cast<std::size_t>(j)];
            decor[static_cast<std::size_t>(n + 2 * j + 1)] =
                m[static_cast<std::size_t>(j)] - split[static_cast<std::size_t>(j)];
          }
          Rational pd = pair_decorated(gr, decor, ambient);
          if (!pd.is_zero()) total += binom_acc * leg_const * pd;
          return;
        }
        for (int j = 0; j <= m[static_cast<std::size_t>(e)]; ++j) {
          split[static_cast<std::size_t>(e)] = j;
          self(self, e + 1,
               binom_acc * Rational(binomial_z(static_cast<unsigned>(m[static_cast<std::size_t>(e)]),
                                               static_cast<unsigned>(j))));
        }
      };
      rec(rec, 0, Rational(1));
    }

    Rational c = total * edge_const;
    if (!c.is_zero()) {
      t.ms.push_back(m);
      t.coeff.push_back(c);
    }
  }
  return t;
}

// Sum over weightings of prod_e x_e^{m_e+1}, for every stored m at once.
std::vector<Rational> edge_weight_sums(const GraphTerms& t, const std::vector<long>& A,
                                       long r) {
  std::vector<mpz_class> acc(t.ms.size(), mpz_class(0));
  const int ne = t.gr.num_edges();
  auto wts = weightings(t.gr, A, r);
  for (const auto& wt : wts) {
    std::vector<mpz_class> x(static_cast<std::size_t>(ne));
    bool zero = false;
    for (int j = 0; j < ne; ++j) {
      long wh = wt.w[static_cast<std::size_t>(t.gr.n + 2 * j)];
      long wh2 = wt.w[static_cast<std::size_t>(t.gr.n + 2 * j + 1)];
      x[static_cast<std::size_t>(j)] = mpz_class(wh) * wh2;
      if (x[static_cast<std::size_t>(j)] == 0) zero = true;
    }
    if (zero && ne > 0) continue;  // every edge enters with exponent >= 1
    for (std::size_t mi = 0; mi < t.ms.size(); ++mi) {
      mpz_class prod(1);
      for (int j = 0; j < ne; ++j) {
        mpz_class pw;
        mpz_pow_ui(pw.get_mpz_t(), x[static_cast<std::size_t>(j)].get_mpz_t(),
                   static_cast<unsigned>(t.ms[mi][static_cast<std::size_t>(j)] + 1));
        prod *= pw;
      }
      acc[mi] += prod;
    }
  }
  std::vector<Rational> out;
  out.reserve(acc.size());
  for (auto& z : acc) out.push_back(Rational(z));
  return out;
}

Rational eval_at_r(const std::vector<GraphTerms>& terms, const std::vector<long>& A, long r) {
  Rational v(0);
  for (const auto& t : terms) {
    if (t.ms.empty()) continue;
    auto sums = edge_weight_sums(t, A, r);
    Rational graph_sum(0);
    for (std::size_t mi = 0; mi < t.ms.size(); ++mi)
      graph_sum += t.coeff[mi] * sums[mi];
    // 1/r^{h1}
    Rational rpow(1);
    for (int i = 0; i < t.gr.h1(); ++i) rpow *= Rational(r);
    v += t.aut_inv * graph_sum / rpow;
  }
  return v;
}

RPolynomial pixton_poly_impl(int g, int d, const std::vector<long>& A,
                             const std::vector<int>& ambient, int extra) {
  const int n = static_cast<int>(A.size());
  if (static_cast<int>(ambient.size()) != n)
    throw std::invalid_argument("pixton: ambient size must match A");
  if (g < 0 || 2 * g - 2 + n <= 0) {
    std::ostringstream os;
    os << "pixton: unstable (g,n) = (" << g << "," << n << ")";
    throw UnstableInput(os.str());
  }
  if (d < 0) throw std::invalid_argument("pixton: negative degree");
  long asum = std::accumulate(A.begin(), A.end(), 0L);
  if (asum != 0) throw std::invalid_argument("pixton: ramification data must sum to 0");

  auto graphs = enumerate_graphs(g, n);
  std::vector<GraphTerms> terms;
  terms.reserve(graphs.size());
  for (const auto& gr : graphs) {
    GraphTerms t = build_graph_terms(gr, d, A, ambient);
    if (!t.ms.empty()) terms.push_back(std::move(t));
  }

  long amax = 0;
  for (long a : A) amax = std::max(amax, std::labs(a));
  long r0 = 2L * (d + 1) * (1 + amax) + 2;
  const int degree_bound = 2 * d;
  const int nsamples = 2 * d + 3 + extra;

  for (int attempt = 0;; ++attempt) {
    std::vector<std::pair<long, Rational>> samples;
    samples.reserve(static_cast<std::size_t>(nsamples));
    for (int i = 0; i < nsamples; ++i)
      samples.emplace_back(r0 + i, eval_at_r(terms, A, r0 + i));
    try {
      return interpolate(samples, degree_bound);
    } catch (const ConsistencyError&) {
      if (attempt == 3) throw;
      r0 *= 2;
    }
  }
}

}  // namespace

RPolynomial pixton_poly(int g, int d, const std::vector<long>& A,
                        const std::vector<int>& ambient, int extra) {
  return pixton_poly_impl(g, d, A, ambient, extra);
}

Rational pixton_pairing(int g, int d, const std::vector<long>& A,
                        const std::vector<int>& ambient) {
  const int n = static_cast<int>(A.size());
  long ksum = std::accumulate(ambient.begin(), ambient.end(), 0L);
  if (static_cast<int>(ambient.size()) == n && ksum + d != 3L * g - 3 + n) {
    // Still validate stability for a clean error on unstable inputs.
    if (g < 0 || 2 * g - 2 + n <= 0) {
      std::ostringstream os;
      os << "pixton: unstable (g,n) = (" << g << "," << n << ")";
      throw UnstableInput(os.str());
    }
    return Rational(0);
  }
  return pixton_poly_impl(g, d, A, ambient, 0).constant_term();
}

Rational dr_pairing(int g, const std::vector<long>& A, const std::vector<int>& ambient) {
  Rational v = pixton_pairing(g, g, A, ambient);
  Rational half_pow(1);
  for (int i = 0; i < g; ++i) half_pow *= Rational(1, 2);
  return v * half_pow;
}

Rational hodge_integral(int g, const std::vector<int>& ambient) {
  const int n = static_cast<int>(ambient.size());
  if (g < 0 || 2 * g - 2 + n <= 0) {
    std::ostringstream os;
    os << "hodge_integral: unstable (g,n) = (" << g << "," << n << ")";
    throw UnstableInput(os.str());
  }
  if (g == 0) return psi_integral(0, ambient);

  std::vector<int> sorted(ambient);
  std::sort(sorted.begin(), sorted.end(), std::greater<int>());
  const std::string key = hodge_cache_key(g, sorted);
  if (auto hit = global_table().find(key)) return *hit;

  long ksum = std::accumulate(sorted.begin(), sorted.end(), 0L);
  Rational value(0);
  if (ksum == 2L * g - 3 + n) {
    std::vector<long> A(static_cast<std::size_t>(n), 0L);
    Rational sign((g % 2 == 0) ? 1 : -1);
    Rational half_pow(1);
    for (int i = 0; i < g; ++i) half_pow *= Rational(1, 2);
    value = sign * half_pow * pixton_pairing(g, g, A, sorted);
  }
  return global_table().store(key, value);
}

}  // namespace lambdag
