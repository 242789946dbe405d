#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lambdag/rational.hpp"

namespace lambdag {

// Cohomology data for the supported targets (point, P^1, P^2). The basis is
// 1, H, ..., H^dim indexed by complex degree, so cup product is index
// addition; eta is the Poincare pairing in that basis.
struct TargetModel {
  std::string name;
  int N = 1;         // basis size
  int dim = 0;       // complex dimension
  int divisor = -1;  // basis index of H, -1 for the point
  long c1_line = 0;  // <c1(TX), [line]>
  std::vector<int> p;                          // complex degrees, p[a] = a
  std::vector<std::vector<Rational>> eta;      // pairing
  std::vector<std::vector<Rational>> eta_inv;  // inverse pairing
  std::vector<Rational> b;     // p_a - (dim-1)/2
  std::vector<Rational> bhat;  // same for the eta-dual basis

  long c1_deg(long degree) const { return c1_line * degree; }

  // phi_a cup phi_b as a basis index, -1 when the product vanishes.
  int cup(int a, int b) const {
    int s = a + b;
    return s < N ? s : -1;
  }

  // c1(TX) cup v, v expanded in the basis.
  std::vector<Rational> c1_cup(const std::vector<Rational>& v) const;

  // Integral over the target of a basis-expanded class: the top coefficient.
  Rational integral(const std::vector<Rational>& v) const { return v.back(); }

  static const TargetModel& point();
  static const TargetModel& p1();
  static const TargetModel& p2();
  static const TargetModel& by_name(const std::string& name);
};

// tau_{level}(phi_cls)
struct Insertion {
  long level = 0;
  int cls = 0;
};

// Genus-0 descendant invariant <prod_i tau_{k_i}(phi_{a_i})>_{0, degree}.
// Zero off the dimension gate and for unstable degree-0 inputs (n < 3);
// memoized under GW0 keys. Computed by the genus-0 topological recursion
// relation plus the divisor and string equations, with Kontsevich's
// recursion supplying the rational plane curve counts for P^2.
Rational gw_descendant(const TargetModel& tm, std::vector<Insertion> ins, long degree);

// q^degree coefficient of the genus-0 double bracket <<args>>_0 after
// applying d/dt_{k}^{a} for each deriv and setting t = 0: the plain
// correlator with the derivs appended as insertions.
Rational double_bracket0(const TargetModel& tm, const std::vector<Insertion>& args,
                         const std::vector<Insertion>& derivs, long degree);

// Linear combination of single insertions with polynomial Novikov
// coefficients: terms[{k, a}][d] multiplies q^d tau_k(phi_a).
struct InsertionSeries {
  std::map<std::pair<long, int>, std::vector<Rational>> terms;

  void add(long level, int cls, long qdeg, const Rational& c, int qmax);
};

// One application of the ancestor correction
//   T(W) = tau_+(W) - sum_a <<W phi^a>>_0 tau_0(phi_a)
// extended linearly over w, Novikov-truncated at qmax. At the point target
// the subtracted brackets are all unstable, so T reduces to tau_+.
InsertionSeries t_apply(const TargetModel& tm, const InsertionSeries& w, int qmax);

// T^k applied to tau_0(phi_cls).
InsertionSeries t_power(const TargetModel& tm, long k, int cls, int qmax);

}  // namespace lambdag
