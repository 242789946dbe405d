#include "lambdag/psi.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "lambdag/cache.hpp"
#include "lambdag/errors.hpp"

namespace lambdag {

PsiKey PsiKey::make(int g, std::vector<int> exponents) {
  const int n = static_cast<int>(exponents.size());
  if (g < 0) throw UnstableInput("psi: negative genus");
  if (2 * g - 2 + n <= 0) {
    std::ostringstream os;
    os << "psi: unstable (g,n) = (" << g << "," << n << ")";
    throw UnstableInput(os.str());
  }
  for (int a : exponents)
    if (a < 0) throw UnstableInput("psi: negative exponent");
  std::sort(exponents.begin(), exponents.end(), std::greater<int>());
  return PsiKey{g, std::move(exponents)};
}

std::string PsiKey::payload() const {
  std::ostringstream os;
  os << g << ";";
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (i) os << ",";
    os << exponents[i];
  }
  return os.str();
}

namespace {

// prod_{i=0}^{k} (r + 1/2 + i); empty product (k = -1) is 1.
Rational c_coeff(long r, int k) {
  Rational out(1);
  for (int i = 0; i <= k; ++i) out *= Rational(2 * r + 1 + 2 * i, 2);
  return out;
}

// (-1)^{s+1} prod_{i=0}^{k} (-s - 1/2 + i).
Rational q_coeff(long s, int k) {
  Rational out((s % 2 == 0) ? -1 : 1);
  for (int i = 0; i <= k; ++i) out *= Rational(-2 * s - 1 + 2 * i, 2);
  return out;
}

// Value with the interior convention: unstable, negative index, or wrong
// dimension all give 0. `rest` need not be sorted.
Rational psi_val(int g, std::vector<int> rest);

// rest: the other insertions (any order). Computes <tau_a prod rest>_g where
// a is already known to be the maximal exponent and the dimension gate holds.
Rational psi_rec(int g, int a, const std::vector<int>& rest) {
  const int k = a - 1;
  Rational rhs(0);

  for (std::size_t j = 0; j < rest.size(); ++j) {
    if (rest[j] + k < 0) continue;
    std::vector<int> next;
    next.reserve(rest.size());
    for (std::size_t i = 0; i < rest.size(); ++i)
      if (i != j) next.push_back(rest[i]);
    next.push_back(rest[j] + k);
    rhs += c_coeff(rest[j], k) * psi_val(g, std::move(next));
  }

  for (int s = 0; s <= k - 1; ++s) {
    const Rational q = q_coeff(s, k);
    // One handle pinched off: genus drops.
    {
      std::vector<int> next(rest);
      next.push_back(s);
      next.push_back(k - 1 - s);
      rhs += q * psi_val(g - 1, std::move(next)) * Rational(1, 2);
    }
    // Separating splits over genus and over subsets of the other insertions.
    const std::size_t nrest = rest.size();
    for (int g1 = 0; g1 <= g; ++g1) {
      const int g2 = g - g1;
      for (std::size_t mask = 0; mask < (std::size_t{1} << nrest); ++mask) {
        std::vector<int> left{s}, right{k - 1 - s};
        for (std::size_t i = 0; i < nrest; ++i)
          ((mask >> i) & 1 ? left : right).push_back(rest[i]);
        if (2 * g1 - 2 + static_cast<int>(left.size()) <= 0) continue;
        if (2 * g2 - 2 + static_cast<int>(right.size()) <= 0) continue;
        Rational lv = psi_val(g1, std::move(left));
        if (lv.is_zero()) continue;
        rhs += q * lv * psi_val(g2, std::move(right)) * Rational(1, 2);
      }
    }
  }

  if (k == -1 && g == 0 && rest.size() == 2 && rest[0] == 0 && rest[1] == 0)
    rhs += Rational(1);
  if (k == 0 && g == 1 && rest.empty()) rhs += Rational(1, 16);

  return rhs / c_coeff(1, k);
}

Rational psi_val(int g, std::vector<int> exponents) {
  const int n = static_cast<int>(exponents.size());
  if (g < 0 || 2 * g - 2 + n <= 0) return Rational(0);
  for (int a : exponents)
    if (a < 0) return Rational(0);
  long sum = std::accumulate(exponents.begin(), exponents.end(), 0L);
  if (sum != 3L * g - 3 + n) return Rational(0);

  std::sort(exponents.begin(), exponents.end(), std::greater<int>());
  const std::string key = psi_cache_key(g, exponents);
  if (auto hit = global_table().find(key)) return *hit;

  std::vector<int> rest(exponents.begin() + 1, exponents.end());
  Rational value = psi_rec(g, exponents[0], rest);
  return global_table().store(key, value);
}

}  // namespace

Rational psi_integral(int g, std::vector<int> exponents) {
  PsiKey key = PsiKey::make(g, std::move(exponents));
  long sum = std::accumulate(key.exponents.begin(), key.exponents.end(), 0L);
  if (sum != 3L * g - 3 + static_cast<long>(key.exponents.size())) return Rational(0);
  return psi_val(key.g, key.exponents);
}

}  // namespace lambdag
