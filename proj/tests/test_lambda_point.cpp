#include "lambdag/lambda_point.hpp"

#include <vector>

#include "doctest.h"
#include "lambdag/errors.hpp"
#include "lambdag/pixton.hpp"
#include "lambdag/poly.hpp"
#include "lambdag/rational.hpp"

using namespace lambdag;

namespace {

// nonincreasing exponent tuples of length n summing to total
void partitions_into(int total, int n, int cap, std::vector<int>& cur,
                     std::vector<std::vector<int>>& out) {
  if (n == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  for (int a = std::min(total, cap); a >= 0; --a) {
    cur.push_back(a);
    partitions_into(total - a, n - 1, a, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> exponent_tuples(int total, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  partitions_into(total, n, total, cur, out);
  return out;
}

}  // namespace

TEST_CASE("b_g values") {
  CHECK(b_g(0) == Rational(1));
  CHECK(b_g(1) == Rational(1, 24));
  CHECK(b_g(2) == Rational(7, 5760));
  CHECK(b_g(3) == Rational(31, 967680));
  CHECK(b_g(1) == hodge_integral(1, {0}));
  CHECK(b_g(2) == hodge_integral(2, {2}));
}

TEST_CASE("closed form on examples") {
  CHECK(lambda_theorem_value(0, {1, 0, 0, 0}) == Rational(1));
  CHECK(lambda_theorem_value(1, {1, 0}) == Rational(1, 24));
  CHECK(lambda_theorem_value(1, {0}) == Rational(1, 24));
  CHECK(lambda_theorem_value(2, {2}) == b_g(2));
  CHECK(lambda_theorem_value(2, {2, 1}) == Rational(3) * b_g(2));
  CHECK(lambda_theorem_value(0, {0, 0, 0}) == Rational(1));
  // off-dimension
  CHECK(lambda_theorem_value(1, {2, 0}) == Rational(0));
  CHECK(lambda_theorem_value(0, {1, 1, 0}) == Rational(0));
}

TEST_CASE("closed form agrees with the pixton route") {
  for (int g = 0; g <= 2; ++g) {
    for (int n = 1; n <= 4; ++n) {
      int total = 2 * g - 3 + n;
      if (total < 0 || 2 * g - 2 + n <= 0) continue;
      for (const auto& a : exponent_tuples(total, n)) {
        CAPTURE(g);
        CAPTURE(n);
        CHECK(hodge_integral(g, a) == lambda_theorem_value(g, a));
      }
    }
  }
}

TEST_CASE("theta at the point: worked examples") {
  long nz = -1;
  CHECK(theta_point({1, 1, 0, {}}, &nz) == Rational(0));
  CHECK(nz == 0);  // both candidate terms die on the dimension gate

  nz = -1;
  CHECK(theta_point({1, 1, 0, {0}}, &nz) == Rational(0));
  CHECK(nz == 2);  // -2/24 + 2/24

  CHECK(theta_point({0, -1, 0, {}}) == Rational(0));
}

TEST_CASE("theta at the point vanishes on a small grid") {
  std::vector<std::vector<long>> deriv_sets = {
      {}, {0}, {1}, {2}, {0, 0}, {0, 1}, {1, 1}, {0, 2}};
  long total_nonzero = 0;
  for (int g = 0; g <= 2; ++g)
    for (int n = -1; n <= 2; ++n)
      for (int m = 0; m <= 2; ++m)
        for (const auto& d : deriv_sets) {
          long nz = 0;
          Rational v = theta_point({g, n, m, d}, &nz);
          CAPTURE(g);
          CAPTURE(n);
          CAPTURE(m);
          CHECK(v == Rational(0));
          total_nonzero += nz;
        }
  CHECK(total_nonzero > 0);  // the zeros are cancellations, not gate artifacts
}

TEST_CASE("psi constraint at the point") {
  CHECK(psi_point(0, -1, {}) == Rational(0));
  CHECK(psi_point(1, 0, {}) == Rational(0));
  for (int g = 0; g <= 1; ++g)
    for (int n = -1; n <= 2; ++n)
      for (const auto& d : std::vector<std::vector<long>>{{}, {0}, {1}, {2}}) {
        CAPTURE(g);
        CAPTURE(n);
        CHECK(psi_point(g, n, d) == Rational(0));
      }
  CHECK_THROWS_AS(psi_point(2, 0, {}), UnsupportedGenus);
}

TEST_CASE("elementary symmetric gamma-ratio identity") {
  // e_{n+1}(r, r+1, ..., r+n) = (r+n)! / (r-1)!
  for (long r = 1; r <= 5; ++r)
    for (int n = 0; n <= 4; ++n) {
      std::vector<Rational> vals;
      for (int i = 0; i <= n; ++i) vals.push_back(Rational(r + i));
      Rational lhs = elem_sym(n + 1, vals);
      Rational rhs(factorial_z(static_cast<unsigned>(r + n)),
                   factorial_z(static_cast<unsigned>(r - 1)));
      CHECK(lhs == rhs);
    }
}
