#pragma once

#include <string>
#include <vector>

#include "lambdag/rational.hpp"

namespace lambdag {

// Canonical key for <tau_{a1}...tau_{an}>_g: exponents sorted descending.
struct PsiKey {
  int g = 0;
  std::vector<int> exponents;

  // Sorts descending and checks stability 2g-2+n > 0 (throws UnstableInput).
  static PsiKey make(int g, std::vector<int> exponents);
  std::string payload() const;  // "g;a1,a2,...,an"
  friend bool operator==(const PsiKey&, const PsiKey&) = default;
};

// Integral of psi_1^{a1}...psi_n^{an} over Mbar_{g,n}. Zero unless
// sum(a_i) = 3g-3+n. Throws UnstableInput when 2g-2+n <= 0. Memoized in
// the global table; safe to call concurrently.
Rational psi_integral(int g, std::vector<int> exponents);

}  // namespace lambdag
