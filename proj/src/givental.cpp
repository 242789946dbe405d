#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"

#include "lambdag/errors.hpp"
#include "lambdag/givental.hpp"
#include "lambdag/graphs.hpp"
#include "lambdag/pixton.hpp"
#include "lambdag/rational.hpp"

namespace lambdag {
namespace {

RMatrix zero_matrix(int n) {
  return RMatrix(static_cast<std::size_t>(n),
                 std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)));
}

RMatrix identity_matrix(int n) {
  RMatrix m = zero_matrix(n);
  for (int i = 0; i < n; ++i) m[i][i] = Rational(1);
  return m;
}

RMatrix multiply(const RMatrix& a, const RMatrix& b) {
  const int n = static_cast<int>(a.size());
  RMatrix out = zero_matrix(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (a[i][k].is_zero()) continue;
      for (int j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

bool matrix_is_zero(const RMatrix& m) {
  for (const auto& row : m)
    for (const auto& x : row)
      if (!x.is_zero()) return false;
  return true;
}

// Adjoint w.r.t. <e_i, e_j> = delta_ij / Delta_i: (M*)_{ij} = D_i M_{ji} / D_j.
RMatrix adjoint(const RMatrix& m, const std::vector<Rational>& delta) {
  const int n = static_cast<int>(m.size());
  RMatrix out = zero_matrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = delta[i] * m[j][i] / delta[j];
  return out;
}

bool shape_ok(const SemisimpleData& d) {
  if (d.N < 1) return false;
  if (static_cast<int>(d.delta.size()) != d.N) return false;
  if (d.R.empty()) return false;
  for (const auto& m : d.R) {
    if (static_cast<int>(m.size()) != d.N) return false;
    for (const auto& row : m)
      if (static_cast<int>(row.size()) != d.N) return false;
  }
  return true;
}

// Ordered compositions of total into k parts, each >= 2.
void compositions(long total, int k, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& visit) {
  if (k == 0) {
    if (total == 0) visit(cur);
    return;
  }
  for (long b = 2; b <= total - 2L * (k - 1); ++b) {
    cur.push_back(static_cast<int>(b));
    compositions(total - b, k - 1, cur, visit);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Violation> validate(const SemisimpleData& data) {
  std::vector<Violation> out;
  if (!shape_ok(data)) {
    out.push_back({-1, "shape: need N >= 1, N deltas, nonempty list of N x N matrices"});
    return out;
  }
  for (int i = 0; i < data.N; ++i)
    if (data.delta[i].is_zero()) {
      out.push_back({-1, "Delta_" + std::to_string(i + 1) + " must be nonzero"});
      return out;
    }

  const int n = data.N;
  const int Z = data.order();
  RMatrix id = identity_matrix(n);
  if (data.R[0] != id) out.push_back({0, "R_0 must be the identity"});

  std::vector<RMatrix> adj;
  adj.reserve(data.R.size());
  for (const auto& m : data.R) adj.push_back(adjoint(m, data.delta));

  // [z^m] of R(z) R*(-z) must vanish for m >= 1.
  for (int m = 1; m <= Z; ++m) {
    RMatrix acc = zero_matrix(n);
    for (int a = 0; a <= m; ++a) {
      const int b = m - a;
      RMatrix prod = multiply(data.R[a], adj[b]);
      const Rational sign((b % 2 == 0) ? 1 : -1);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc[i][j] += sign * prod[i][j];
    }
    if (!matrix_is_zero(acc)) {
      std::ostringstream os;
      os << "symplectic condition fails at order z^" << m;
      out.push_back({m, os.str()});
    }
  }
  return out;
}

std::vector<RMatrix> r_inverse(const SemisimpleData& data) {
  const int n = data.N;
  const int Z = data.order();
  std::vector<RMatrix> B;
  B.reserve(static_cast<std::size_t>(Z) + 1);
  B.push_back(identity_matrix(n));
  for (int k = 1; k <= Z; ++k) {
    RMatrix acc = zero_matrix(n);
    for (int j = 1; j <= k; ++j) {
      RMatrix prod = multiply(data.R[j], B[static_cast<std::size_t>(k - j)]);
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < n; ++c) acc[i][c] -= prod[i][c];
    }
    B.push_back(std::move(acc));
  }
  return B;
}

std::vector<std::vector<RMatrix>> edge_table(const SemisimpleData& data) {
  const int n = data.N;
  const int Z = data.order();
  std::vector<RMatrix> B = r_inverse(data);

  // Numerator coefficients E[p][q] for p + q <= Z.
  auto E = [&](int p, int q) {
    RMatrix m = zero_matrix(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Rational s(0);
        for (int k = 0; k < n; ++k) s += data.delta[k] * B[p][i][k] * B[q][j][k];
        m[i][j] = -s;
      }
    if (p == 0 && q == 0)
      for (int i = 0; i < n; ++i) m[i][i] += data.delta[i];
    return m;
  };

  // Solve (z + w) Q = E: E_{p,q} = Q_{p-1,q} + Q_{p,q-1}.
  std::vector<std::vector<RMatrix>> Q(static_cast<std::size_t>(Z));
  for (int p = 0; p <= Z - 1; ++p) Q[p].resize(static_cast<std::size_t>(Z - p));
  for (int p = 0; p <= Z - 1; ++p) Q[p][0] = E(p + 1, 0);
  for (int q = 1; q <= Z - 1; ++q)
    for (int p = 0; p + q <= Z - 1; ++p) {
      RMatrix m = E(p + 1, q);
      const RMatrix& prev = Q[p + 1][q - 1];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] -= prev[i][j];
      Q[p][q] = std::move(m);
    }

  // Remainder: the unused relations E_{0,q} = Q_{0,q-1} and E_{0,0} = 0.
  if (!matrix_is_zero(E(0, 0)))
    throw ValidationError("edge numerator has nonzero constant term");
  for (int q = 1; q <= Z; ++q) {
    RMatrix m = E(0, q);
    const RMatrix& rhs = Q[0][q - 1];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m[i][j] -= rhs[i][j];
    if (!matrix_is_zero(m)) {
      std::ostringstream os;
      os << "edge numerator not divisible by (z+w) at total order " << q;
      throw ValidationError(os.str());
    }
  }
  return Q;
}

Rational tree_sum(const SemisimpleData& data, const TreeQuery& q, int* min_order) {
  {
    auto bad = validate(data);
    if (!bad.empty()) throw ValidationError("tree_sum: " + bad.front().what);
  }
  const int g = q.g;
  const int n = static_cast<int>(q.legs.size());
  if (g < 0 || 2 * g - 2 + n <= 0) {
    std::ostringstream os;
    os << "tree_sum: unstable (g,n) = (" << g << "," << n << ")";
    throw UnstableInput(os.str());
  }

  const int N = data.N;
  const int Z = data.order();
  for (const auto& leg : q.legs)
    for (const auto& v : leg.psi_coeff)
      if (static_cast<int>(v.size()) > N)
        throw std::invalid_argument("tree_sum: leg vector longer than the basis");
  std::vector<RMatrix> B = r_inverse(data);
  std::vector<std::vector<RMatrix>> Q = edge_table(data);

  int need = 0;
  auto record = [&](int o) {
    if (o > need) need = o;
  };

  // [z^b] <T(z), e^i> = -(B_{b-1} 1)_i, nonzero for b >= 2 only.
  auto tcoef = [&](int b, int i) {
    record(b - 1);
    if (b - 1 > Z) return Rational(0);
    Rational s(0);
    for (int j = 0; j < N; ++j) s += B[static_cast<std::size_t>(b - 1)][i][j];
    return -s;
  };

  // [z^a] <Rinv(z) t_l(z), e^i>.
  auto legval = [&](int l, int a, int i) {
    Rational s(0);
    const auto& t = q.legs[static_cast<std::size_t>(l)].psi_coeff;
    for (int c = 0; c <= a && c < static_cast<int>(t.size()); ++c) {
      const auto& v = t[static_cast<std::size_t>(c)];
      bool nonzero = false;
      for (const auto& x : v)
        if (!x.is_zero()) nonzero = true;
      if (!nonzero) continue;
      record(a - c);
      if (a - c > Z) continue;
      for (int m = 0; m < N && m < static_cast<int>(v.size()); ++m)
        s += B[static_cast<std::size_t>(a - c)][i][m] * v[m];
    }
    return s;
  };

  auto edgeval = [&](int x, int y, int i, int j) {
    record(x + y + 1);
    if (x + y > Z - 1) return Rational(0);
    return Q[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)][i][j];
  };

  // Vertex factor: Delta_i^{g-1} sum_k 1/k! sum over dilaton-leaf exponents.
  auto vfactor = [&](int gv, int i, const std::vector<int>& hs) {
    const long asum = std::accumulate(hs.begin(), hs.end(), 0L);
    const long base = 2L * gv - 3 + static_cast<long>(hs.size());
    Rational out(0);
    if (asum <= base) {
      for (int k = 0; k <= static_cast<int>(base - asum); ++k) {
        const long S = base + k - asum;
        if (k == 0) {
          if (S == 0) out += hodge_integral(gv, hs);
          continue;
        }
        Rational ksum(0);
        std::vector<int> parts;
        compositions(S, k, parts, [&](const std::vector<int>& bs) {
          Rational c(1);
          for (int b : bs) {
            c *= tcoef(b, i);
            if (c.is_zero()) return;
          }
          std::vector<int> exps = hs;
          exps.insert(exps.end(), bs.begin(), bs.end());
          ksum += c * hodge_integral(gv, exps);
        });
        out += ksum / Rational(factorial_z(k));
      }
    }
    // Delta_i^{gv-1}
    Rational d(1);
    for (int t = 0; t < gv - 1; ++t) d *= data.delta[i];
    for (int t = 0; t < 1 - gv; ++t) d /= data.delta[i];
    return d * out;
  };

  Rational total(0);
  for (const StableGraph& gr : enumerate_trees(g, n)) {
    const int nv = gr.num_vertices();
    const int ne = gr.num_edges();
    const int nh = gr.num_half_edges();
    const Rational inv_aut = Rational(1) / Rational(aut_order(gr));

    // Half-edges grouped by vertex, and per-vertex height budgets
    // (sum of heights <= 2g(v) - 3 + valence, the most any on-gate
    // composition can absorb).
    std::vector<std::vector<int>> half_at(nv);
    for (int i = 0; i < n; ++i) half_at[gr.leg_vertex[i]].push_back(i);
    for (int j = 0; j < ne; ++j) {
      half_at[gr.edges[j].first].push_back(n + 2 * j);
      half_at[gr.edges[j].second].push_back(n + 2 * j + 1);
    }

    // All height tuples per vertex with sum <= 2g(v) - 3 + valence, the most
    // any on-gate dilaton composition can absorb.
    std::vector<std::vector<std::vector<int>>> tuples(nv);
    for (int v = 0; v < nv; ++v) {
      const long budget = 2L * gr.genus[v] - 3 + static_cast<long>(half_at[v].size());
      std::vector<int> cur(half_at[v].size(), 0);
      long sum = 0;
      while (true) {
        tuples[v].push_back(cur);
        std::size_t idx = 0;
        while (idx < cur.size()) {
          ++cur[idx];
          ++sum;
          if (sum <= budget) break;
          sum -= cur[idx];
          cur[idx] = 0;
          ++idx;
        }
        if (idx == cur.size()) break;
      }
    }

    std::vector<int> mark(nv, 0);
    while (true) {
      std::vector<std::size_t> pick(nv, 0);
      while (true) {
        // assemble heights by half-edge id
        std::vector<int> height(nh, 0);
        for (int v = 0; v < nv; ++v) {
          const auto& tp = tuples[v][pick[v]];
          for (std::size_t t = 0; t < tp.size(); ++t) height[half_at[v][t]] = tp[t];
        }
        Rational f = inv_aut;
        for (int l = 0; l < n && !f.is_zero(); ++l)
          f *= legval(l, height[l], mark[gr.leg_vertex[l]]);
        for (int j = 0; j < ne && !f.is_zero(); ++j)
          f *= edgeval(height[n + 2 * j], height[n + 2 * j + 1],
                       mark[gr.edges[j].first], mark[gr.edges[j].second]);
        for (int v = 0; v < nv && !f.is_zero(); ++v)
          f *= vfactor(gr.genus[v], mark[v], tuples[v][pick[v]]);
        total += f;

        std::size_t pos = 0;
        while (pos < pick.size() && ++pick[pos] == tuples[pos].size()) pick[pos++] = 0;
        if (pos == pick.size()) break;
      }
      std::size_t pos = 0;
      while (pos < mark.size() && ++mark[pos] == N) mark[pos++] = 0;
      if (pos == mark.size()) break;
    }
  }

  if (min_order) *min_order = need;
  return total;
}

SemisimpleData semisimple_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("semisimple data: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("delta") || !j.contains("r"))
    throw std::invalid_argument("semisimple data: need fields n, delta, r");
  SemisimpleData d;
  if (!j["n"].is_number_integer())
    throw std::invalid_argument("semisimple data: n must be an integer");
  d.N = j["n"].get<int>();
  if (d.N < 1) throw std::invalid_argument("semisimple data: n must be >= 1");
  auto parse_rat = [](const nlohmann::json& x) {
    if (x.is_number_integer()) return Rational(x.get<long>());
    if (!x.is_string())
      throw std::invalid_argument("semisimple data: rationals are strings or integers");
    return Rational::parse(x.get<std::string>());
  };
  if (!j["delta"].is_array() || static_cast<int>(j["delta"].size()) != d.N)
    throw std::invalid_argument("semisimple data: delta must list n values");
  for (const auto& x : j["delta"]) d.delta.push_back(parse_rat(x));
  if (!j["r"].is_array() || j["r"].empty())
    throw std::invalid_argument("semisimple data: r must list at least R_0");
  for (const auto& mj : j["r"]) {
    if (!mj.is_array() || static_cast<int>(mj.size()) != d.N)
      throw std::invalid_argument("semisimple data: each R_k must be n x n");
    RMatrix m;
    for (const auto& rowj : mj) {
      if (!rowj.is_array() || static_cast<int>(rowj.size()) != d.N)
        throw std::invalid_argument("semisimple data: each R_k must be n x n");
      std::vector<Rational> row;
      for (const auto& x : rowj) row.push_back(parse_rat(x));
      m.push_back(std::move(row));
    }
    d.R.push_back(std::move(m));
  }
  return d;
}

}  // namespace lambdag
