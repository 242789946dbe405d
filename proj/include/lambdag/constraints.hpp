#pragma once

#include <string>
#include <vector>

#include "lambdag/graphs.hpp"
#include "lambdag/gw.hpp"
#include "lambdag/rational.hpp"

namespace lambdag {

// One Taylor/Novikov coefficient query against a target constraint series:
// apply d/dt_{r}^{alpha} for each deriv, set t = 0, take the q^degree part.
struct ThetaQuery {
  std::string target;  // point | p1 | p2
  int n = 0;           // >= -1
  int m = 0;
  int beta = 0;                   // basis index of phi_beta
  std::vector<Insertion> derivs;  // (r, alpha) pairs
  long degree = 0;                // Novikov degree
};

// The genus-0 constraint Theta_{0,n,m,beta}: four displayed sums over
// (j, r, alpha) with coefficients e_{n+1-j}(r + b_alpha - 1/2, ...) and
// c_1^j cups, evaluated through genus-0 descendants. Provenly zero; the
// function computes the sums honestly and returns the total. When
// nonzero_terms is given it receives the number of nonzero intermediate
// contributions (zero means the query was vacuous).
Rational theta0(const ThetaQuery& q, long* nonzero_terms = nullptr);

// The genus-1 constraint translated through the boundary expression for the
// genus-1 Pixton class: value of Theta^P_{1,n,m,beta}, computed as the
// four-term "-12 form" divided by -12.
Rational theta1_pixton(const ThetaQuery& q, long* nonzero_terms = nullptr);

// The two sides of the internal consistency identity: the -12 form (four
// sums with phi_sigma phi^sigma insertions) and the independently assembled
// "6 form" (two sums). They must satisfy m12 == -2 * six identically;
// verify the ratio before asserting either is zero.
Rational theta1_m12(const ThetaQuery& q, long* nonzero_terms = nullptr);
Rational theta1_six(const ThetaQuery& q, long* nonzero_terms = nullptr);

// Theta^P beyond genus 1. Point target: any genus (the direct evaluation
// route already pairs lambda_g through the same boundary machinery). Other
// targets throw UnsupportedTarget for g >= 2.
Rational theta_general_pixton(int g, const ThetaQuery& q, long* nonzero_terms = nullptr);

// One monomial c * prod_h psi_h^{exps[h]} in the half-edge psi classes of a
// stable graph; exps is indexed by half-edge id.
struct PsiMonomial {
  Rational c;
  std::vector<long> exps;
};

// Contraction of a psi-polynomial against a stable graph: for each monomial,
// the product over vertices of double brackets where leg i carries legs[i]
// (translated by T^{exps[leg]} when the monomial decorates it) and each edge
// (h, h') carries the bivector T^{a_h}(phi_alpha) (x) T^{a_h'}(phi^alpha)
// summed over alpha. Novikov degree is split across all factors; derivs act
// by the product rule on every t-dependent factor, including the brackets
// inside T. Positive-genus vertices are supported for the point target only.
Rational contract_graph(const TargetModel& tm, const StableGraph& gr,
                        const std::vector<InsertionSeries>& legs,
                        const std::vector<PsiMonomial>& P,
                        const std::vector<Insertion>& derivs, long degree);

// T^a applied to the combination w with the derivative insertions dv applied
// by the product rule through every bracket inside the iterated T, at t = 0.
// With dv empty this is the plain iterate of t_apply.
InsertionSeries t_power_derivs(const TargetModel& tm, long a, const InsertionSeries& w,
                               const std::vector<Insertion>& dv, int qmax);

}  // namespace lambdag
