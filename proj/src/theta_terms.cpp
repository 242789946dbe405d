#include <cstddef>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lambdag/constraints.hpp"
#include "lambdag/errors.hpp"
#include "lambdag/lambda_point.hpp"
#include "lambdag/poly.hpp"

namespace lambdag {
namespace {

// Prefactors that can carry the theta terms: 1, ttilde_r^alpha, t_0^alpha.
enum class Pre { kOne, kTildeT, kT0 };

// e_k(x0, x0+1, ..., x0+len-1) at a rational start.
Rational elem_sym_at(int k, const Rational& x0, int len) {
  if (k < 0) return Rational(0);
  std::vector<Rational> vals;
  vals.reserve(static_cast<std::size_t>(len > 0 ? len : 0));
  for (int i = 0; i < len; ++i) vals.push_back(x0 + Rational(i));
  return elem_sym(k, vals);
}

// c1(TX)^j cup phi_cls, expanded in the basis. j = 0 is the identity map
// even at the point, where c1 itself is zero.
std::vector<Rational> c1_pow_basis(const TargetModel& tm, int j, int cls) {
  std::vector<Rational> v(static_cast<std::size_t>(tm.N), Rational(0));
  v[static_cast<std::size_t>(cls)] = Rational(1);
  for (int i = 0; i < j; ++i) v = tm.c1_cup(v);
  return v;
}

struct GBracket {
  std::vector<Insertion> args;
};

// Negative levels are zero vector fields, not errors, inside the sums.
Rational bracket_at(const TargetModel& tm, const std::vector<Insertion>& args, long qd) {
  for (const auto& t : args)
    if (t.level < 0) return Rational(0);
  return gw_descendant(tm, args, qd);
}

// Product of bracket values summed over all splits of qrest across the
// remaining factors.
Rational brackets_product(const TargetModel& tm, const std::vector<GBracket>& brs,
                          std::size_t i, long qrest) {
  if (i == brs.size()) return qrest == 0 ? Rational(1) : Rational(0);
  if (i + 1 == brs.size()) return bracket_at(tm, brs[i].args, qrest);
  Rational acc(0);
  for (long d = 0; d <= qrest; ++d) {
    Rational head = bracket_at(tm, brs[i].args, d);
    if (head.is_zero()) continue;
    acc += head * brackets_product(tm, brs, i + 1, qrest - d);
  }
  return acc;
}

// coeff * prefactor(t) * product of genus-0 double brackets, differentiated
// along derivs and evaluated at t = 0; q^qdeg coefficient. Each derivative
// lands on the prefactor or is appended to one bracket; all assignments and
// all Novikov splits are summed.
Rational eval_term(const TargetModel& tm, const Rational& coeff, Pre pre, long pre_r,
                   int pre_alpha, const std::vector<GBracket>& brackets,
                   const std::vector<Insertion>& derivs, long qdeg, long* nonzero) {
  if (coeff.is_zero()) return Rational(0);
  const std::size_t nd = derivs.size();
  const std::size_t nb = brackets.size();
  std::vector<std::size_t> where(nd, 0);  // 0 = prefactor, 1..nb = bracket
  Rational total(0);
  while (true) {
    int pre_hits = 0;
    for (std::size_t i = 0; i < nd; ++i) pre_hits += (where[i] == 0);

    Rational pre_val(0);
    switch (pre) {
      case Pre::kOne:
        if (pre_hits == 0) pre_val = Rational(1);
        break;
      case Pre::kTildeT:
        // ttilde_r^alpha = t_r^alpha - delta_{r1} delta_{alpha,identity}.
        if (pre_hits == 0) {
          if (pre_r == 1 && pre_alpha == 0) pre_val = Rational(-1);
        } else if (pre_hits == 1) {
          for (std::size_t i = 0; i < nd; ++i)
            if (where[i] == 0)
              pre_val = (derivs[i].level == pre_r && derivs[i].cls == pre_alpha)
                            ? Rational(1)
                            : Rational(0);
        }
        break;
      case Pre::kT0:
        if (pre_hits == 1) {
          for (std::size_t i = 0; i < nd; ++i)
            if (where[i] == 0)
              pre_val = (derivs[i].level == 0 && derivs[i].cls == pre_alpha)
                            ? Rational(1)
                            : Rational(0);
        }
        break;
    }

    if (!pre_val.is_zero()) {
      std::vector<GBracket> brs = brackets;
      for (std::size_t i = 0; i < nd; ++i)
        if (where[i] > 0) brs[where[i] - 1].args.push_back(derivs[i]);
      Rational prod = pre_val * brackets_product(tm, brs, 0, qdeg);
      if (!prod.is_zero()) {
        if (nonzero) ++*nonzero;
        total += prod;
      }
    }

    std::size_t pos = 0;
    while (pos < nd && ++where[pos] == nb + 1) where[pos++] = 0;
    if (pos == nd || nd == 0) break;
  }
  return coeff * total;
}

void validate_query(const TargetModel& tm, const ThetaQuery& q) {
  if (q.n < -1) throw std::invalid_argument("theta: n must be >= -1");
  if (q.m < 0) throw std::invalid_argument("theta: negative m");
  if (q.beta < 0 || q.beta >= tm.N) throw std::invalid_argument("theta: beta out of range");
  if (q.degree < 0) throw std::invalid_argument("theta: negative Novikov degree");
  for (const auto& d : q.derivs) {
    if (d.level < 0) throw std::invalid_argument("theta: negative derivative direction");
    if (d.cls < 0 || d.cls >= tm.N)
      throw std::invalid_argument("theta: derivative class out of range");
  }
}

// (r, alpha) pairs where ttilde_r^alpha can contribute at t = 0: the shifted
// slot (1, identity) plus every derivative direction.
std::vector<std::pair<long, int>> tilde_pairs(const std::vector<Insertion>& derivs) {
  std::set<std::pair<long, int>> rs{{1, 0}};
  for (const auto& d : derivs) rs.insert({d.level, d.cls});
  return {rs.begin(), rs.end()};
}

}  // namespace

Rational theta0(const ThetaQuery& q, long* nonzero_terms) {
  const TargetModel& tm = TargetModel::by_name(q.target);
  validate_query(tm, q);
  if (nonzero_terms) *nonzero_terms = 0;
  const int n = q.n;
  const long m = q.m;
  Rational total(0);

  // First sum: e_{n+1-j}(r + b_alpha - 1/2, ..., r + n + b_alpha - 1/2)
  //            ttilde_r^alpha <<tau_{r+n-j}(c1^j phi_alpha) tau_m(phi_beta)>>.
  for (const auto& [r, alpha] : tilde_pairs(q.derivs)) {
    for (int j = 0; j <= n + 1; ++j) {
      Rational e = elem_sym_at(n + 1 - j, Rational(r) + tm.b[alpha] - Rational(1, 2), n + 1);
      if (e.is_zero()) continue;
      auto u = c1_pow_basis(tm, j, alpha);
      for (int cls = 0; cls < tm.N; ++cls) {
        if (u[cls].is_zero()) continue;
        GBracket br;
        br.args = {{r + n - j, cls}, {m, q.beta}};
        total += eval_term(tm, e * u[cls], Pre::kTildeT, r, alpha, {br}, q.derivs,
                           q.degree, nonzero_terms);
      }
    }
  }

  // Second sum: e_{n+1-j}(m + b_beta + 1/2, ...) <<tau_{m+n-j}(c1^j phi_beta)>>.
  for (int j = 0; j <= n + 1; ++j) {
    Rational e = elem_sym_at(n + 1 - j, Rational(m) + tm.b[q.beta] + Rational(1, 2), n + 1);
    if (e.is_zero()) continue;
    auto u = c1_pow_basis(tm, j, q.beta);
    for (int cls = 0; cls < tm.N; ++cls) {
      if (u[cls].is_zero()) continue;
      GBracket br;
      br.args = {{m + n - j, cls}};
      total += eval_term(tm, e * u[cls], Pre::kOne, 0, 0, {br}, q.derivs, q.degree,
                         nonzero_terms);
    }
  }

  // Third sum: (-1)^{s+1} e_{n+1-j}(-s + bhat_alpha - 3/2, ...)
  //   <<tau_m(phi_beta) tau_{-s-1+n-j}(c1^j phi^alpha)>> <<tau_s(phi_alpha)>>.
  for (int s = 0; s <= n - 1; ++s) {
    const Rational sign((s % 2 == 0) ? -1 : 1);
    for (int j = 0; j <= n + 1; ++j) {
      const long idx = -s - 1 + n - j;
      if (idx < 0) continue;
      for (int alpha = 0; alpha < tm.N; ++alpha) {
        Rational e =
            elem_sym_at(n + 1 - j, Rational(-s) + tm.bhat[alpha] - Rational(3, 2), n + 1) * sign;
        if (e.is_zero()) continue;
        for (int gamma = 0; gamma < tm.N; ++gamma) {
          if (tm.eta_inv[alpha][gamma].is_zero()) continue;
          auto u = c1_pow_basis(tm, j, gamma);
          for (int cls = 0; cls < tm.N; ++cls) {
            if (u[cls].is_zero()) continue;
            GBracket b1, b2;
            b1.args = {{m, q.beta}, {idx, cls}};
            b2.args = {{s, alpha}};
            total += eval_term(tm, e * tm.eta_inv[alpha][gamma] * u[cls], Pre::kOne, 0, 0,
                               {b1, b2}, q.derivs, q.degree, nonzero_terms);
          }
        }
      }
    }
  }

  // Constant-vector term: delta_{m0} t_0^alpha int_X c1^{n+1} phi_alpha phi_beta,
  // q-degree zero only.
  if (q.m == 0) {
    auto u = c1_pow_basis(tm, n + 1, q.beta);
    for (int alpha = 0; alpha < tm.N; ++alpha) {
      Rational c(0);
      for (int cls = 0; cls < tm.N; ++cls) c += u[cls] * tm.eta[cls][alpha];
      total += eval_term(tm, c, Pre::kT0, 0, alpha, {}, q.derivs, q.degree, nonzero_terms);
    }
  }

  return total;
}

// The genus-1 boundary replacement inserts phi_sigma phi^sigma =
// sum_{sg,gm} eta^{sg gm} tau_0(phi_sg) tau_0(phi_gm) into the genus-1 slot
// of each theta sum. Terms below mirror theta0 one for one (the constant
// term has no genus-1 slot and drops).
Rational theta1_m12(const ThetaQuery& q, long* nonzero_terms) {
  const TargetModel& tm = TargetModel::by_name(q.target);
  validate_query(tm, q);
  if (nonzero_terms) *nonzero_terms = 0;
  const int n = q.n;
  const long m = q.m;
  Rational total(0);

  for (const auto& [r, alpha] : tilde_pairs(q.derivs)) {
    for (int j = 0; j <= n + 1; ++j) {
      Rational e = elem_sym_at(n + 1 - j, Rational(r) + tm.b[alpha] - Rational(1, 2), n + 1);
      if (e.is_zero()) continue;
      auto u = c1_pow_basis(tm, j, alpha);
      for (int cls = 0; cls < tm.N; ++cls) {
        if (u[cls].is_zero()) continue;
        for (int sg = 0; sg < tm.N; ++sg)
          for (int gm = 0; gm < tm.N; ++gm) {
            if (tm.eta_inv[sg][gm].is_zero()) continue;
            GBracket br;
            br.args = {{r + n - j, cls}, {m, q.beta}, {0, sg}, {0, gm}};
            total += eval_term(tm, e * u[cls] * tm.eta_inv[sg][gm], Pre::kTildeT, r, alpha,
                               {br}, q.derivs, q.degree, nonzero_terms);
          }
      }
    }
  }

  for (int j = 0; j <= n + 1; ++j) {
    Rational e = elem_sym_at(n + 1 - j, Rational(m) + tm.b[q.beta] + Rational(1, 2), n + 1);
    if (e.is_zero()) continue;
    auto u = c1_pow_basis(tm, j, q.beta);
    for (int cls = 0; cls < tm.N; ++cls) {
      if (u[cls].is_zero()) continue;
      for (int sg = 0; sg < tm.N; ++sg)
        for (int gm = 0; gm < tm.N; ++gm) {
          if (tm.eta_inv[sg][gm].is_zero()) continue;
          GBracket br;
          br.args = {{m + n - j, cls}, {0, sg}, {0, gm}};
          total += eval_term(tm, e * u[cls] * tm.eta_inv[sg][gm], Pre::kOne, 0, 0, {br},
                             q.derivs, q.degree, nonzero_terms);
        }
    }
  }

  // Split sum, genus-1 slot on either side.
  for (int s = 0; s <= n - 1; ++s) {
    const Rational sign((s % 2 == 0) ? -1 : 1);
    for (int j = 0; j <= n + 1; ++j) {
      const long idx = -s - 1 + n - j;
      if (idx < 0) continue;
      for (int alpha = 0; alpha < tm.N; ++alpha) {
        Rational e =
            elem_sym_at(n + 1 - j, Rational(-s) + tm.bhat[alpha] - Rational(3, 2), n + 1) * sign;
        if (e.is_zero()) continue;
        for (int gamma = 0; gamma < tm.N; ++gamma) {
          if (tm.eta_inv[alpha][gamma].is_zero()) continue;
          auto u = c1_pow_basis(tm, j, gamma);
          for (int cls = 0; cls < tm.N; ++cls) {
            if (u[cls].is_zero()) continue;
            const Rational base = e * tm.eta_inv[alpha][gamma] * u[cls];
            for (int sg = 0; sg < tm.N; ++sg)
              for (int gm = 0; gm < tm.N; ++gm) {
                if (tm.eta_inv[sg][gm].is_zero()) continue;
                const Rational c = base * tm.eta_inv[sg][gm];
                {
                  GBracket b1, b2;
                  b1.args = {{m, q.beta}, {idx, cls}};
                  b2.args = {{s, alpha}, {0, sg}, {0, gm}};
                  total += eval_term(tm, c, Pre::kOne, 0, 0, {b1, b2}, q.derivs, q.degree,
                                     nonzero_terms);
                }
                {
                  GBracket b1, b2;
                  b1.args = {{m, q.beta}, {idx, cls}, {0, sg}, {0, gm}};
                  b2.args = {{s, alpha}};
                  total += eval_term(tm, c, Pre::kOne, 0, 0, {b1, b2}, q.derivs, q.degree,
                                     nonzero_terms);
                }
              }
          }
        }
      }
    }
  }

  return total;
}

// Independent assembly of the same constraint, normalized so that
// theta1_m12 == -2 * theta1_six identically.
Rational theta1_six(const ThetaQuery& q, long* nonzero_terms) {
  const TargetModel& tm = TargetModel::by_name(q.target);
  validate_query(tm, q);
  if (nonzero_terms) *nonzero_terms = 0;
  const int n = q.n;
  const long m = q.m;
  Rational total(0);

  // e_{n+1-j}(b_sg - 1/2, ...) <<tau_m(phi_beta) tau_{n-j}(c1^j phi_sg) phi^sg>>.
  for (int j = 0; j <= n + 1; ++j) {
    const long lvl = n - j;
    if (lvl < 0) continue;
    for (int sg = 0; sg < tm.N; ++sg) {
      Rational e = elem_sym_at(n + 1 - j, tm.b[sg] - Rational(1, 2), n + 1);
      if (e.is_zero()) continue;
      auto u = c1_pow_basis(tm, j, sg);
      for (int cls = 0; cls < tm.N; ++cls) {
        if (u[cls].is_zero()) continue;
        for (int gm = 0; gm < tm.N; ++gm) {
          if (tm.eta_inv[sg][gm].is_zero()) continue;
          GBracket br;
          br.args = {{m, q.beta}, {lvl, cls}, {0, gm}};
          total += eval_term(tm, e * u[cls] * tm.eta_inv[sg][gm], Pre::kOne, 0, 0, {br},
                             q.derivs, q.degree, nonzero_terms);
        }
      }
    }
  }

  // (-1)^{s+1} e_{n+1-j}(-s + bhat_alpha - 3/2, ...)
  //   <<tau_m(phi_beta) tau_{-s-1+n-j}(c1^j phi^alpha) phi_sg>> <<phi^sg tau_s(phi_alpha)>>.
  for (int s = 0; s <= n - 1; ++s) {
    const Rational sign((s % 2 == 0) ? -1 : 1);
    for (int j = 0; j <= n + 1; ++j) {
      const long idx = -s - 1 + n - j;
      if (idx < 0) continue;
      for (int alpha = 0; alpha < tm.N; ++alpha) {
        Rational e =
            elem_sym_at(n + 1 - j, Rational(-s) + tm.bhat[alpha] - Rational(3, 2), n + 1) * sign;
        if (e.is_zero()) continue;
        for (int gamma = 0; gamma < tm.N; ++gamma) {
          if (tm.eta_inv[alpha][gamma].is_zero()) continue;
          auto u = c1_pow_basis(tm, j, gamma);
          for (int cls = 0; cls < tm.N; ++cls) {
            if (u[cls].is_zero()) continue;
            const Rational base = e * tm.eta_inv[alpha][gamma] * u[cls];
            for (int sg = 0; sg < tm.N; ++sg)
              for (int gm = 0; gm < tm.N; ++gm) {
                if (tm.eta_inv[sg][gm].is_zero()) continue;
                GBracket b1, b2;
                b1.args = {{m, q.beta}, {idx, cls}, {0, sg}};
                b2.args = {{0, gm}, {s, alpha}};
                total += eval_term(tm, base * tm.eta_inv[sg][gm], Pre::kOne, 0, 0, {b1, b2},
                                   q.derivs, q.degree, nonzero_terms);
              }
          }
        }
      }
    }
  }

  return total;
}

Rational theta1_pixton(const ThetaQuery& q, long* nonzero_terms) {
  return theta1_m12(q, nonzero_terms) / Rational(-12);
}

Rational theta_general_pixton(int g, const ThetaQuery& q, long* nonzero_terms) {
  if (g < 0) throw std::invalid_argument("theta_general_pixton: negative genus");
  if (g == 0) return theta0(q, nonzero_terms);
  if (g == 1) return theta1_pixton(q, nonzero_terms);
  if (q.target != "point")
    throw UnsupportedTarget("theta_general_pixton: g >= 2 supports the point target only");
  const TargetModel& tm = TargetModel::point();
  validate_query(tm, q);
  if (q.degree != 0) return Rational(0);
  PointThetaQuery pq;
  pq.g = g;
  pq.n = q.n;
  pq.m = q.m;
  for (const auto& d : q.derivs) pq.derivs.push_back(d.level);
  return theta_point(pq, nonzero_terms);
}

}  // namespace lambdag
