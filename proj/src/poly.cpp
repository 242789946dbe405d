#include "lambdag/poly.hpp"

#include <sstream>
#include <stdexcept>

#include "lambdag/errors.hpp"

namespace lambdag {

RPolynomial::RPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

void RPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Rational RPolynomial::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Rational(0);
  return coeffs_[static_cast<std::size_t>(k)];
}

Rational RPolynomial::eval(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

RPolynomial& RPolynomial::operator+=(const RPolynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

RPolynomial RPolynomial::scaled(const Rational& c) const {
  std::vector<Rational> out(coeffs_);
  for (auto& v : out) v *= c;
  return RPolynomial(std::move(out));
}

std::string RPolynomial::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = coeffs_[static_cast<std::size_t>(k)];
    if (c.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    if (k == 0) {
      os << c.str();
    } else {
      if (c != Rational(1)) os << "(" << c.str() << ")*";
      os << "r";
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

Rational elem_sym(int k, const std::vector<Rational>& values) {
  if (k < 0) throw std::invalid_argument("elem_sym: negative k");
  const int n = static_cast<int>(values.size());
  if (k == 0) return Rational(1);
  if (k > n) return Rational(0);
  // e[j] after processing a prefix of values; standard one-pass update.
  std::vector<Rational> e(static_cast<std::size_t>(k) + 1, Rational(0));
  e[0] = Rational(1);
  for (const auto& x : values)
    for (int j = k; j >= 1; --j) e[j] += e[j - 1] * x;
  return e[static_cast<std::size_t>(k)];
}

Rational multinomial(const std::vector<int>& parts) {
  unsigned total = 0;
  for (int p : parts) {
    if (p < 0) throw std::invalid_argument("multinomial: negative part");
    total += static_cast<unsigned>(p);
  }
  mpz_class num = factorial_z(total);
  for (int p : parts) num /= factorial_z(static_cast<unsigned>(p));
  return Rational(num);
}

RPolynomial interpolate(const std::vector<std::pair<long, Rational>>& samples,
                        int degree_bound) {
  if (degree_bound < 0) throw std::invalid_argument("interpolate: negative degree bound");
  const std::size_t need = static_cast<std::size_t>(degree_bound) + 1;
  if (samples.size() < need)
    throw std::invalid_argument("interpolate: need at least degree_bound+1 samples");
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j)
      if (samples[i].first == samples[j].first)
        throw std::invalid_argument("interpolate: duplicate r-value");

  // Newton form on the first degree_bound+1 nodes, then expand to dense.
  std::vector<Rational> xs, divided;
  xs.reserve(need);
  divided.reserve(need);
  for (std::size_t i = 0; i < need; ++i) {
    Rational x(samples[i].first);
    Rational v = samples[i].second;
    // Evaluate current Newton polynomial at x, fold in the next divided difference.
    Rational acc(0), basis(1);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      acc += divided[j] * basis;
      basis *= x - xs[j];
    }
    divided.push_back((v - acc) / basis);
    xs.push_back(x);
  }
  std::vector<Rational> dense{divided[0]};
  std::vector<Rational> basis{Rational(1)};  // prod_{k<j} (r - x_k), dense
  for (std::size_t j = 1; j < need; ++j) {
    std::vector<Rational> nb(basis.size() + 1, Rational(0));
    for (std::size_t k = 0; k < basis.size(); ++k) {
      nb[k + 1] += basis[k];
      nb[k] -= basis[k] * xs[j - 1];
    }
    basis = std::move(nb);
    if (dense.size() < basis.size()) dense.resize(basis.size(), Rational(0));
    for (std::size_t k = 0; k < basis.size(); ++k) dense[k] += divided[j] * basis[k];
  }
  RPolynomial p(std::move(dense));

  for (std::size_t i = need; i < samples.size(); ++i) {
    Rational got = p.eval(Rational(samples[i].first));
    if (got != samples[i].second) {
      std::ostringstream os;
      os << "interpolate: sample at r=" << samples[i].first << " gives "
         << samples[i].second.str() << " but fitted polynomial gives " << got.str()
         << " (degree bound " << degree_bound << " too small, or r threshold too low)";
      throw ConsistencyError(os.str());
    }
  }
  return p;
}

Rational constant_term(const RPolynomial& p) { return p.constant_term(); }

}  // namespace lambdag
