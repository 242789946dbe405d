#include "lambdag/gw.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

#include "lambdag/cache.hpp"
#include "lambdag/errors.hpp"

namespace lambdag {

namespace {

std::vector<std::vector<Rational>> antidiag(int n) {
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) m[i][n - 1 - i] = Rational(1);
  return m;
}

TargetModel make_projective(const std::string& name, int dim, long c1_line) {
  TargetModel t;
  t.name = name;
  t.N = dim + 1;
  t.dim = dim;
  t.divisor = dim >= 1 ? 1 : -1;
  t.c1_line = c1_line;
  t.p.resize(t.N);
  for (int a = 0; a < t.N; ++a) t.p[a] = a;
  t.eta = antidiag(t.N);
  t.eta_inv = antidiag(t.N);  // an antidiagonal of ones squares to the identity
  t.b.resize(t.N);
  t.bhat.resize(t.N);
  for (int a = 0; a < t.N; ++a) {
    t.b[a] = Rational(a) - Rational(dim - 1, 2);
    t.bhat[a] = Rational(dim - a) - Rational(dim - 1, 2);
  }
  return t;
}

// integral over the target of phi_a phi_b phi_c; the basis is powers of H
// with the top power integrating to 1.
Rational triple(const TargetModel& tm, int a, int b, int c) {
  return a + b + c == tm.dim ? Rational(1) : Rational(0);
}

bool insertion_greater(const Insertion& x, const Insertion& y) {
  return std::make_pair(x.level, x.cls) > std::make_pair(y.level, y.cls);
}

std::string gw_key(const TargetModel& tm, const std::vector<Insertion>& ins, long degree) {
  std::string key = "GW0;";
  key += tm.name;
  key += ';';
  key += std::to_string(degree);
  key += ';';
  for (std::size_t i = 0; i < ins.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(ins[i].level);
    key += ':';
    key += std::to_string(ins[i].cls);
  }
  return key;
}

// Kontsevich's recursion for rational plane curves through 3d-1 points:
//   N_d = sum_{d1+d2=d} N_{d1} N_{d2} d1 d2 (d1 d2 C(3d-4,3d1-2) - d1^2 C(3d-4,3d1-1))
Rational plane_curve_count(long d) {
  if (d < 1) return Rational(0);
  static std::mutex mu;
  static std::vector<Rational> table = {Rational(0), Rational(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<long>(table.size()) <= d) {
    const long m = static_cast<long>(table.size());
    Rational acc(0);
    for (long d1 = 1; d1 < m; ++d1) {
      const long d2 = m - d1;
      Rational bracket = Rational(d1 * d2) *
                             Rational(binomial_z(static_cast<unsigned long>(3 * m - 4),
                                                 static_cast<unsigned long>(3 * d1 - 2))) -
                         Rational(d1 * d1) *
                             Rational(binomial_z(static_cast<unsigned long>(3 * m - 4),
                                                 static_cast<unsigned long>(3 * d1 - 1)));
      acc += table[d1] * table[d2] * Rational(d1 * d2) * bracket;
    }
    table.push_back(acc);
  }
  return table[d];
}

// All-primary invariant, dimension gate already applied by the caller.
// Strips fundamental and divisor classes, then what remains is either
// nothing (P^1) or point classes (P^2).
Rational primary_invariant(const TargetModel& tm, std::vector<int> cls, long degree) {
  if (degree == 0) {
    if (cls.size() != 3) return Rational(0);
    return triple(tm, cls[0], cls[1], cls[2]);
  }
  Rational factor(1);
  std::vector<int> rest;
  for (int a : cls) {
    if (tm.p[a] == 0) return Rational(0);  // fundamental class, degree > 0
    if (a == tm.divisor) {
      factor *= Rational(degree);  // divisor equation, <H, degree [line]> = degree
    } else {
      rest.push_back(a);
    }
  }
  if (rest.empty()) {
    // P^1 only: the single degree-1 map with no constraints. For P^2 the
    // dimension gate rules this branch out.
    if (tm.dim == 1) return degree == 1 ? factor : Rational(0);
    return Rational(0);
  }
  // remaining classes are all top degree: point conditions on P^2
  if (static_cast<long>(rest.size()) != 3 * degree - 1) return Rational(0);
  return factor * plane_curve_count(degree);
}

Rational gw_rec(const TargetModel& tm, std::vector<Insertion> ins, long degree);

Rational gw_call(const TargetModel& tm, std::vector<Insertion> ins, long degree) {
  std::sort(ins.begin(), ins.end(), insertion_greater);
  return gw_rec(tm, std::move(ins), degree);
}

// ins sorted descending by (level, cls)
Rational gw_rec(const TargetModel& tm, std::vector<Insertion> ins, long degree) {
  const long n = static_cast<long>(ins.size());
  long codim = 0;
  for (const auto& t : ins) codim += t.level + tm.p[t.cls];
  if (codim != tm.dim + tm.c1_deg(degree) + n - 3) return Rational(0);
  if (degree == 0 && n < 3) return Rational(0);
  if (tm.c1_line == 0 && degree > 0) return Rational(0);  // the point carries no curve classes

  const std::string key = gw_key(tm, ins, degree);
  if (auto hit = global_table().find(key)) return *hit;

  Rational out(0);
  const bool all_primary =
      std::all_of(ins.begin(), ins.end(), [](const Insertion& t) { return t.level == 0; });
  if (all_primary) {
    std::vector<int> cls;
    cls.reserve(ins.size());
    for (const auto& t : ins) cls.push_back(t.cls);
    out = primary_invariant(tm, std::move(cls), degree);
  } else if (n < 3) {
    // raise n with the divisor equation, solved for the bare correlator:
    // degree * <..> = <tau_0(H) ..> - sum_j <tau_{k_j - 1}(H phi_j) ..>
    std::vector<Insertion> raised = ins;
    raised.push_back({0, tm.divisor});
    Rational acc = gw_call(tm, std::move(raised), degree);
    for (long j = 0; j < n; ++j) {
      if (ins[j].level == 0) continue;
      const int hp = tm.cup(tm.divisor, ins[j].cls);
      if (hp < 0) continue;
      std::vector<Insertion> lowered = ins;
      lowered[j].level -= 1;
      lowered[j].cls = hp;
      acc -= gw_call(tm, std::move(lowered), degree);
    }
    out = acc / Rational(degree);
  } else {
    // genus-0 TRR on the highest-level insertion against the last two slots
    const Insertion a = ins[0];
    const Insertion b = ins[n - 2];
    const Insertion c = ins[n - 1];
    std::vector<Insertion> mid(ins.begin() + 1, ins.end() - 2);
    const int ne = static_cast<int>(mid.size());
    for (long mask = 0; mask < (1L << ne); ++mask) {
      std::vector<Insertion> left = {{a.level - 1, a.cls}};
      std::vector<Insertion> right = {b, c};
      for (int e = 0; e < ne; ++e) {
        if (mask & (1L << e))
          left.push_back(mid[e]);
        else
          right.push_back(mid[e]);
      }
      for (long d1 = 0; d1 <= degree; ++d1) {
        for (int s = 0; s < tm.N; ++s) {
          for (int v = 0; v < tm.N; ++v) {
            if (tm.eta_inv[s][v].is_zero()) continue;
            std::vector<Insertion> lf = left;
            lf.push_back({0, s});
            const Rational f1 = gw_call(tm, std::move(lf), d1);
            if (f1.is_zero()) continue;
            std::vector<Insertion> rf = right;
            rf.push_back({0, v});
            const Rational f2 = gw_call(tm, std::move(rf), degree - d1);
            if (f2.is_zero()) continue;
            out += tm.eta_inv[s][v] * f1 * f2;
          }
        }
      }
    }
  }

  global_table().store(key, out);
  return out;
}

}  // namespace

std::vector<Rational> TargetModel::c1_cup(const std::vector<Rational>& v) const {
  std::vector<Rational> out(N, Rational(0));
  if (divisor < 0) return out;  // c1 = 0 on the point
  for (int a = 0; a + 1 < N; ++a) out[a + 1] = Rational(c1_line) * v[a];
  return out;
}

const TargetModel& TargetModel::point() {
  static const TargetModel tm = [] {
    TargetModel t;
    t.name = "point";
    t.N = 1;
    t.dim = 0;
    t.divisor = -1;
    t.c1_line = 0;
    t.p = {0};
    t.eta = {{Rational(1)}};
    t.eta_inv = {{Rational(1)}};
    t.b = {Rational(1, 2)};
    t.bhat = {Rational(1, 2)};
    return t;
  }();
  return tm;
}

const TargetModel& TargetModel::p1() {
  static const TargetModel tm = make_projective("p1", 1, 2);
  return tm;
}

const TargetModel& TargetModel::p2() {
  static const TargetModel tm = make_projective("p2", 2, 3);
  return tm;
}

const TargetModel& TargetModel::by_name(const std::string& name) {
  if (name == "point") return point();
  if (name == "p1") return p1();
  if (name == "p2") return p2();
  throw UnsupportedTarget("unknown target '" + name + "' (expected point, p1 or p2)");
}

Rational gw_descendant(const TargetModel& tm, std::vector<Insertion> ins, long degree) {
  if (degree < 0) throw std::invalid_argument("gw_descendant: negative degree");
  for (const auto& t : ins) {
    if (t.level < 0) throw std::invalid_argument("gw_descendant: negative descendant level");
    if (t.cls < 0 || t.cls >= tm.N)
      throw std::invalid_argument("gw_descendant: class index out of range");
  }
  std::sort(ins.begin(), ins.end(), insertion_greater);
  return gw_rec(tm, std::move(ins), degree);
}

Rational double_bracket0(const TargetModel& tm, const std::vector<Insertion>& args,
                         const std::vector<Insertion>& derivs, long degree) {
  std::vector<Insertion> all = args;
  all.insert(all.end(), derivs.begin(), derivs.end());
  return gw_descendant(tm, std::move(all), degree);
}

void InsertionSeries::add(long level, int cls, long qdeg, const Rational& c, int qmax) {
  if (qdeg > qmax || c.is_zero()) return;
  auto& coeffs = terms[{level, cls}];
  if (static_cast<long>(coeffs.size()) <= qdeg) coeffs.resize(qdeg + 1, Rational(0));
  coeffs[qdeg] += c;
}

InsertionSeries t_apply(const TargetModel& tm, const InsertionSeries& w, int qmax) {
  InsertionSeries out;
  for (const auto& [ka, coeffs] : w.terms) {
    const auto [k, a] = ka;
    for (long d = 0; d < static_cast<long>(coeffs.size()) && d <= qmax; ++d) {
      if (coeffs[d].is_zero()) continue;
      out.add(k + 1, a, d, coeffs[d], qmax);
      for (int al = 0; al < tm.N; ++al) {
        for (int gc = 0; gc < tm.N; ++gc) {
          if (tm.eta_inv[al][gc].is_zero()) continue;
          for (long e = 0; d + e <= qmax; ++e) {
            const Rational br = gw_descendant(tm, {{k, a}, {0, gc}}, e);
            if (br.is_zero()) continue;
            out.add(0, al, d + e, -coeffs[d] * tm.eta_inv[al][gc] * br, qmax);
          }
        }
      }
    }
  }
  return out;
}

InsertionSeries t_power(const TargetModel& tm, long k, int cls, int qmax) {
  InsertionSeries w;
  w.add(0, cls, 0, Rational(1), qmax);
  for (long i = 0; i < k; ++i) w = t_apply(tm, w, qmax);
  return w;
}

}  // namespace lambdag
