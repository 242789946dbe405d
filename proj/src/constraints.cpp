#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lambdag/constraints.hpp"
#include "lambdag/errors.hpp"
#include "lambdag/psi.hpp"

namespace lambdag {
namespace {

void merge_into(InsertionSeries& dst, const InsertionSeries& src, int qmax) {
  for (const auto& [key, coeffs] : src.terms)
    for (std::size_t d = 0; d < coeffs.size(); ++d)
      dst.add(key.first, key.second, static_cast<long>(d), coeffs[d], qmax);
}

struct Choice {
  Insertion ins;
  long q = 0;
  Rational c;
};

std::vector<Choice> flatten(const InsertionSeries& s, long qcap) {
  std::vector<Choice> out;
  for (const auto& [key, coeffs] : s.terms)
    for (std::size_t d = 0; d < coeffs.size(); ++d) {
      if (static_cast<long>(d) > qcap || coeffs[d].is_zero()) continue;
      out.push_back({{key.first, key.second}, static_cast<long>(d), coeffs[d]});
    }
  return out;
}

struct EdgeChoice {
  Insertion a, b;
  long q = 0;
  Rational c;
};

// Value of one vertex: genus 0 goes through the target recursion; positive
// genus is point-only (checked by the caller) and pairs pure psi classes at
// Novikov degree zero.
Rational vertex_value(const TargetModel& tm, int gv, const std::vector<Insertion>& args,
                      long qd) {
  for (const auto& t : args)
    if (t.level < 0) return Rational(0);
  if (gv == 0) return gw_descendant(tm, args, qd);
  if (qd != 0) return Rational(0);
  if (2 * gv - 2 + static_cast<long>(args.size()) <= 0) return Rational(0);
  std::vector<int> exps;
  exps.reserve(args.size());
  for (const auto& t : args) exps.push_back(static_cast<int>(t.level));
  return psi_integral(gv, exps);
}

Rational vertex_products(const TargetModel& tm, const std::vector<int>& genus,
                         const std::vector<std::vector<Insertion>>& vins, std::size_t i,
                         long qrest) {
  if (i == vins.size()) return qrest == 0 ? Rational(1) : Rational(0);
  if (i + 1 == vins.size()) return vertex_value(tm, genus[i], vins[i], qrest);
  Rational acc(0);
  for (long d = 0; d <= qrest; ++d) {
    Rational head = vertex_value(tm, genus[i], vins[i], d);
    if (head.is_zero()) continue;
    acc += head * vertex_products(tm, genus, vins, i + 1, qrest - d);
  }
  return acc;
}

}  // namespace

InsertionSeries t_power_derivs(const TargetModel& tm, long a, const InsertionSeries& w,
                               const std::vector<Insertion>& dv, int qmax) {
  if (a < 0) throw std::invalid_argument("t_power_derivs: negative power");
  if (a == 0) {
    // Constant combinations carry no t dependence.
    if (dv.empty()) return w;
    return InsertionSeries{};
  }
  const std::size_t nd = dv.size();
  InsertionSeries out;
  // Product rule: each derivative acts on the outer T application or deeper.
  for (unsigned long mask = 0; mask < (1UL << nd); ++mask) {
    std::vector<Insertion> outer, inner;
    for (std::size_t i = 0; i < nd; ++i)
      (((mask >> i) & 1) ? outer : inner).push_back(dv[i]);
    InsertionSeries v = t_power_derivs(tm, a - 1, w, inner, qmax);
    if (v.terms.empty()) continue;
    if (outer.empty()) {
      merge_into(out, t_apply(tm, v, qmax), qmax);
      continue;
    }
    // Differentiating T(V) kills tau_+ and hits the subtracted brackets:
    //   -sum_a <<V phi^a (outer derivs)>>_0 tau_0(phi_a), as a q-series.
    for (const auto& [key, coeffs] : v.terms) {
      for (std::size_t d = 0; d < coeffs.size(); ++d) {
        if (coeffs[d].is_zero()) continue;
        for (int al = 0; al < tm.N; ++al)
          for (int gc = 0; gc < tm.N; ++gc) {
            if (tm.eta_inv[al][gc].is_zero()) continue;
            for (long e = 0; static_cast<long>(d) + e <= qmax; ++e) {
              std::vector<Insertion> args = {{key.first, key.second}, {0, gc}};
              args.insert(args.end(), outer.begin(), outer.end());
              Rational br = gw_descendant(tm, std::move(args), e);
              if (br.is_zero()) continue;
              out.add(0, al, static_cast<long>(d) + e,
                      -coeffs[d] * tm.eta_inv[al][gc] * br, qmax);
            }
          }
      }
    }
  }
  return out;
}

Rational contract_graph(const TargetModel& tm, const StableGraph& gr,
                        const std::vector<InsertionSeries>& legs,
                        const std::vector<PsiMonomial>& P,
                        const std::vector<Insertion>& derivs, long degree) {
  if (!gr.valid()) throw std::invalid_argument("contract_graph: invalid stable graph");
  if (static_cast<int>(legs.size()) != gr.n)
    throw std::invalid_argument("contract_graph: leg count mismatch");
  if (degree < 0) throw std::invalid_argument("contract_graph: negative Novikov degree");
  for (const auto& d : derivs) {
    if (d.level < 0) throw std::invalid_argument("contract_graph: negative derivative");
    if (d.cls < 0 || d.cls >= tm.N)
      throw std::invalid_argument("contract_graph: derivative class out of range");
  }
  if (tm.dim > 0)
    for (int gv : gr.genus)
      if (gv != 0)
        throw UnsupportedTarget("contract_graph: positive-genus vertices need the point target");

  const int n = gr.n;
  const int ne = gr.num_edges();
  const int nv = gr.num_vertices();
  const int qmax = static_cast<int>(degree);
  const std::size_t nd = derivs.size();
  Rational total(0);

  for (const auto& mono : P) {
    if (mono.c.is_zero()) continue;
    if (static_cast<int>(mono.exps.size()) != gr.num_half_edges())
      throw std::invalid_argument("contract_graph: exponent count mismatch");
    for (long e : mono.exps)
      if (e < 0) throw std::invalid_argument("contract_graph: negative psi exponent");

    // Derivative slots: one per vertex, one per edge end, one per leg whose
    // T power makes it t-dependent. Zero-power legs are constant vectors.
    std::vector<int> tlegs;
    for (int i = 0; i < n; ++i)
      if (mono.exps[i] > 0) tlegs.push_back(i);
    const std::size_t nslots = static_cast<std::size_t>(nv + 2 * ne) + tlegs.size();

    std::vector<std::size_t> assign(nd, 0);
    while (true) {
      std::vector<std::vector<Insertion>> vderiv(nv), sderiv(2 * ne), lderiv(tlegs.size());
      for (std::size_t i = 0; i < nd; ++i) {
        std::size_t s = assign[i];
        if (s < static_cast<std::size_t>(nv))
          vderiv[s].push_back(derivs[i]);
        else if (s < static_cast<std::size_t>(nv + 2 * ne))
          sderiv[s - nv].push_back(derivs[i]);
        else
          lderiv[s - nv - 2 * ne].push_back(derivs[i]);
      }

      bool dead = false;
      std::vector<std::vector<Choice>> legch(n);
      for (int i = 0; i < n && !dead; ++i) {
        const long a = mono.exps[i];
        if (a == 0) {
          legch[i] = flatten(legs[i], degree);
        } else {
          auto it = std::find(tlegs.begin(), tlegs.end(), i);
          const auto& dv = lderiv[static_cast<std::size_t>(it - tlegs.begin())];
          legch[i] = flatten(t_power_derivs(tm, a, legs[i], dv, qmax), degree);
        }
        if (legch[i].empty()) dead = true;
      }

      std::vector<std::vector<EdgeChoice>> edch(ne);
      for (int j = 0; j < ne && !dead; ++j) {
        const long a1 = mono.exps[n + 2 * j];
        const long a2 = mono.exps[n + 2 * j + 1];
        for (int alpha = 0; alpha < tm.N; ++alpha) {
          InsertionSeries s1;
          s1.add(0, alpha, 0, Rational(1), qmax);
          auto f1 = flatten(t_power_derivs(tm, a1, s1, sderiv[2 * j], qmax), degree);
          if (f1.empty()) continue;
          InsertionSeries s2;
          for (int gc = 0; gc < tm.N; ++gc)
            if (!tm.eta_inv[alpha][gc].is_zero())
              s2.add(0, gc, 0, tm.eta_inv[alpha][gc], qmax);
          auto f2 = flatten(t_power_derivs(tm, a2, s2, sderiv[2 * j + 1], qmax), degree);
          for (const auto& c1 : f1)
            for (const auto& c2 : f2)
              if (c1.q + c2.q <= degree)
                edch[j].push_back({c1.ins, c2.ins, c1.q + c2.q, c1.c * c2.c});
        }
        if (edch[j].empty()) dead = true;
      }

      if (!dead) {
        std::vector<std::size_t> pick(static_cast<std::size_t>(n + ne), 0);
        while (true) {
          Rational coeff = mono.c;
          long qused = 0;
          std::vector<std::vector<Insertion>> vins(nv);
          for (int i = 0; i < n; ++i) {
            const Choice& ch = legch[i][pick[i]];
            coeff *= ch.c;
            qused += ch.q;
            vins[gr.leg_vertex[i]].push_back(ch.ins);
          }
          for (int j = 0; j < ne; ++j) {
            const EdgeChoice& ch = edch[j][pick[n + j]];
            coeff *= ch.c;
            qused += ch.q;
            vins[gr.edges[j].first].push_back(ch.a);
            vins[gr.edges[j].second].push_back(ch.b);
          }
          for (int v = 0; v < nv; ++v)
            for (const auto& d : vderiv[v]) vins[v].push_back(d);
          if (qused <= degree)
            total += coeff * vertex_products(tm, gr.genus, vins, 0, degree - qused);

          std::size_t pos = 0;
          while (pos < pick.size() &&
                 ++pick[pos] == (pos < static_cast<std::size_t>(n)
                                     ? legch[pos].size()
                                     : edch[pos - n].size()))
            pick[pos++] = 0;
          if (pos == pick.size()) break;
        }
      }

      std::size_t pos = 0;
      while (pos < nd && ++assign[pos] == nslots) assign[pos++] = 0;
      if (pos == nd || nd == 0) break;
    }
  }
  return total;
}

}  // namespace lambdag
