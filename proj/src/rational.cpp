#include "lambdag/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace lambdag {

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("Rational::parse: empty string");
  auto is_int = [](const std::string& s) {
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!is_int(text)) throw std::invalid_argument("Rational::parse: bad integer '" + text + "'");
    return Rational(mpz_class(text));
  }
  std::string num = text.substr(0, slash);
  std::string den = text.substr(slash + 1);
  if (!is_int(num) || !is_int(den))
    throw std::invalid_argument("Rational::parse: bad fraction '" + text + "'");
  mpz_class d(den);
  if (d == 0) throw std::invalid_argument("Rational::parse: zero denominator in '" + text + "'");
  return Rational(mpz_class(num), d);
}

Rational Rational::pow(unsigned e) const {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), v_.get_num().get_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), v_.get_den().get_mpz_t(), e);
  return Rational(n, d);  // already canonical, ctor re-canonicalizes harmlessly
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::size_t Rational::hash() const {
  // Cheap and adequate: fold the low limbs of numerator and denominator.
  auto fold = [](const mpz_class& z) -> std::size_t {
    std::size_t h = mpz_sgn(z.get_mpz_t()) < 0 ? 0x9e3779b97f4a7c15ULL : 0;
    std::size_t limbs = mpz_size(z.get_mpz_t());
    for (std::size_t i = 0; i < limbs && i < 4; ++i)
      h = h * 1099511628211ULL + mpz_getlimbn(z.get_mpz_t(), i);
    return h;
  };
  return fold(v_.get_num()) * 31 + fold(v_.get_den());
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

mpz_class factorial_z(unsigned n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

mpz_class binomial_z(unsigned n, unsigned k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace lambdag
