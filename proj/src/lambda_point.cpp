#include "lambdag/lambda_point.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "lambdag/errors.hpp"
#include "lambdag/pixton.hpp"
#include "lambdag/poly.hpp"
#include "lambdag/psi.hpp"

namespace lambdag {

Rational b_g(int g) {
  if (g < 0) throw std::invalid_argument("b_g: negative genus");
  if (g == 0) return Rational(1);
  return hodge_integral(g, {2 * g - 2});
}

Rational lambda_theorem_value(int g, const std::vector<int>& exponents) {
  const int n = static_cast<int>(exponents.size());
  long sum = std::accumulate(exponents.begin(), exponents.end(), 0L);
  if (sum != 2L * g - 3 + n) return Rational(0);
  return multinomial(exponents) * b_g(g);
}

namespace {

// One double bracket at the point: genus h correlator with a single
// lambda_{lam} factor. Out-of-range data (negative genus or lambda order,
// negative tau index, unstable (h,n)) evaluates to 0 by convention; the
// only lambda orders that ever reach the integral backends here are 0 and h.
struct PtBracket {
  int genus = 0;
  int lambda = 0;
  std::vector<long> args;
};

Rational bracket_value(const PtBracket& b) {
  if (b.genus < 0 || b.lambda < 0) return Rational(0);
  const int n = static_cast<int>(b.args.size());
  if (2 * b.genus - 2 + n <= 0) return Rational(0);
  std::vector<int> exps;
  exps.reserve(b.args.size());
  for (long a : b.args) {
    if (a < 0) return Rational(0);
    exps.push_back(static_cast<int>(a));
  }
  if (b.lambda == 0) return psi_integral(b.genus, std::move(exps));
  if (b.lambda == b.genus) return hodge_integral(b.genus, exps);
  throw UnsupportedGenus("point bracket: lambda order outside {0, g}");
}

enum class Pre { kOne, kTildeT, kT0, kT0T0 };

// coeff * prefactor(t) * product of brackets, differentiated along derivs
// and evaluated at t = 0. Each derivative lands on the prefactor or on one
// bracket (an appended insertion); all assignments are summed.
Rational eval_term(const Rational& coeff, Pre pre, long pre_r,
                   const std::vector<PtBracket>& brackets,
                   const std::vector<long>& derivs, long* nonzero = nullptr) {
  if (coeff.is_zero()) return Rational(0);
  const std::size_t nd = derivs.size();
  const std::size_t nb = brackets.size();
  // Assignment digit per derivative: 0 = prefactor, 1..nb = bracket.
  std::vector<std::size_t> where(nd, 0);
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
        if (pre_hits == 0) {
          pre_val = (pre_r == 1) ? Rational(-1) : Rational(0);
        } else if (pre_hits == 1) {
          for (std::size_t i = 0; i < nd; ++i)
            if (where[i] == 0) pre_val = (derivs[i] == pre_r) ? Rational(1) : Rational(0);
        }
        break;
      case Pre::kT0:
        if (pre_hits == 1) {
          for (std::size_t i = 0; i < nd; ++i)
            if (where[i] == 0) pre_val = (derivs[i] == 0) ? Rational(1) : Rational(0);
        }
        break;
      case Pre::kT0T0:
        // t_0^2: two derivatives, both along t_0, give 2.
        if (pre_hits == 2) {
          bool all0 = true;
          for (std::size_t i = 0; i < nd; ++i)
            if (where[i] == 0 && derivs[i] != 0) all0 = false;
          if (all0) pre_val = Rational(2);
        }
        break;
    }

    if (!pre_val.is_zero()) {
      Rational prod = pre_val;
      for (std::size_t bi = 0; bi < nb && !prod.is_zero(); ++bi) {
        PtBracket b = brackets[bi];
        for (std::size_t i = 0; i < nd; ++i)
          if (where[i] == bi + 1) b.args.push_back(derivs[i]);
        prod *= bracket_value(b);
      }
      if (!prod.is_zero()) {
        if (nonzero) ++*nonzero;
        total += prod;
      }
    }

    // Next assignment.
    std::size_t pos = 0;
    while (pos < nd && ++where[pos] == nb + 1) where[pos++] = 0;
    if (pos == nd) break;
    if (nd == 0) break;
  }
  return coeff * total;
}

// e_{k}(x, x+1, ..., x+len-1) for integer x, as a Rational.
Rational elem_sym_run(int k, long x, int len) {
  if (k < 0) return Rational(0);
  std::vector<Rational> vals;
  vals.reserve(static_cast<std::size_t>(std::max(len, 0)));
  for (int i = 0; i < len; ++i) vals.push_back(Rational(x + i));
  return elem_sym(k, vals);
}

std::vector<long> distinct_r_values(const std::vector<long>& derivs) {
  std::set<long> rs{1};
  for (long w : derivs) rs.insert(w);
  return {rs.begin(), rs.end()};
}

}  // namespace

Rational theta_point(const PointThetaQuery& q, long* nonzero_terms) {
  if (q.g < 0) throw std::invalid_argument("theta_point: negative genus");
  if (q.n < -1) throw std::invalid_argument("theta_point: n must be >= -1");
  if (q.m < 0) throw std::invalid_argument("theta_point: negative m");
  for (long w : q.derivs)
    if (w < 0) throw std::invalid_argument("theta_point: negative derivative direction");
  if (nonzero_terms) *nonzero_terms = 0;

  const int n = q.n;
  Rational total(0);

  // First sum: e_{n+1}(r,...,r+n) ttilde_r <<tau_{r+n} tau_m ; lambda_g>>.
  for (long r : distinct_r_values(q.derivs)) {
    Rational e = elem_sym_run(n + 1, r, n + 1);
    total += eval_term(e, Pre::kTildeT, r,
                       {{q.g, q.g, {r + n, q.m}}}, q.derivs, nonzero_terms);
  }

  // Second sum: e_{n+1}(m+1,...,m+n+1) <<tau_{m+n} ; lambda_g>>.
  {
    Rational e = elem_sym_run(n + 1, q.m + 1, n + 1);
    total += eval_term(e, Pre::kOne, 0, {{q.g, q.g, {static_cast<long>(q.m) + n}}},
                       q.derivs, nonzero_terms);
  }

  // Third sum: (-1)^{s+1} e_{n+1}(-s-1,...,-s+n-1) over genus splits.
  // Indices go negative for s >= n, so the sum is finite as written.
  for (int s = 0; s <= n - 1; ++s) {
    Rational e = elem_sym_run(n + 1, -s - 1, n + 1);
    if (s % 2 == 0) e = -e;
    if (e.is_zero()) continue;  // analytically zero at the point; kept honest
    for (int g1 = 0; g1 <= q.g; ++g1) {
      int g2 = q.g - g1;
      total += eval_term(e, Pre::kOne, 0,
                         {{g1, g1, {q.m, static_cast<long>(-s - 1 + n)}}, {g2, g2, {s}}},
                         q.derivs, nonzero_terms);
    }
  }

  // Constant-vector term: delta_g0 delta_m0 t_0 int_X c_1^{n+1} phi phi,
  // nonzero at the point only for n = -1.
  if (q.g == 0 && q.m == 0 && n == -1)
    total += eval_term(Rational(1), Pre::kT0, 0, {}, q.derivs, nonzero_terms);

  return total;
}

Rational psi_point(int g, int n, const std::vector<long>& derivs) {
  if (g >= 2)
    throw UnsupportedGenus("psi_point: g >= 2 needs lambda_{g-1} integrals");
  if (g < 0) throw std::invalid_argument("psi_point: negative genus");
  if (n < -1) throw std::invalid_argument("psi_point: n must be >= -1");
  for (long w : derivs)
    if (w < 0) throw std::invalid_argument("psi_point: negative derivative direction");

  Rational total(0);

  for (long r : distinct_r_values(derivs)) {
    // S1: e_{n+1}(r..r+n) ttilde_r <<tau_{r+n} ; lambda_{g-1}>>_g.
    Rational e1 = elem_sym_run(n + 1, r, n + 1);
    total += eval_term(e1, Pre::kTildeT, r, {{g, g - 1, {r + n}}}, derivs);
    // S2: -j e_n(r..r+n) ttilde_r <<tau_{r+n-1} ; lambda_g>>_g with j = 1.
    Rational e2 = elem_sym_run(n, r, n + 1);
    total += eval_term(-e2, Pre::kTildeT, r, {{g, g, {r + n - 1}}}, derivs);
  }

  for (int s = 0;; ++s) {
    // All four boundary sums carry indices that go negative once s is large;
    // past both cutoffs every term is zero.
    const long idx3 = -s - 1 + n;  // j = 0 terms
    const long idx5 = -s - 2 + n;  // j = 1 terms
    if (idx3 < 0 && idx5 < 0) break;
    Rational sign((s % 2 == 0) ? -1 : 1);
    Rational e3 = elem_sym_run(n + 1, -s - 1, n + 1) * sign;
    Rational e5 = elem_sym_run(n, -s - 1, n + 1) * sign;

    // S3: genus-split lambda_{g1-1}/lambda_{g2} product.
    for (int g1 = 0; g1 <= g; ++g1)
      total += eval_term(e3, Pre::kOne, 0,
                         {{g1, g1 - 1, {idx3}}, {g - g1, g - g1, {static_cast<long>(s)}}},
                         derivs);
    // S4: +(1/2) <<tau_{idx3} tau_s ; lambda_{g-1}>>_{g-1}.
    total += eval_term(e3 * Rational(1, 2), Pre::kOne, 0,
                       {{g - 1, g - 1, {idx3, static_cast<long>(s)}}}, derivs);
    // S5: -(1/2) j genus-split with c_1^{j-1}, j = 1.
    for (int g1 = 0; g1 <= g; ++g1)
      total += eval_term(-e5 * Rational(1, 2), Pre::kOne, 0,
                         {{g1, g1, {static_cast<long>(s)}}, {g - g1, g - g1, {idx5}}},
                         derivs);
  }

  // S6: -delta_{g,0} (n+1)/2 t_0^2 int_X c_1^n phi phi; point keeps n = 0.
  if (g == 0 && n == 0)
    total += eval_term(Rational(-1, 2), Pre::kT0T0, 0, {}, derivs);

  // S7: delta_{g,1} delta_{n,0} constant; the point integrand is 0.

  return total;
}

}  // namespace lambdag
