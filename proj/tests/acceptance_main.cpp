// Acceptance runner: ten numbered end-to-end checks, one PASS/FAIL line each.
// Exit status is the number of failed checks. Budgets are enforced in-process
// where a check carries one, so a pathological slowdown fails loudly instead
// of hanging the harness.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "givental_ref.h"
#include "lambdag/cache.hpp"
#include "lambdag/constraints.hpp"
#include "lambdag/errors.hpp"
#include "lambdag/givental.hpp"
#include "lambdag/graphs.hpp"
#include "lambdag/gw.hpp"
#include "lambdag/lambda_point.hpp"
#include "lambdag/pixton.hpp"
#include "lambdag/poly.hpp"
#include "lambdag/psi.hpp"
#include "lambdag/rational.hpp"

using namespace lambdag;

namespace {

int failures = 0;

void run(int idx, const char* what, double budget_secs,
         const std::function<bool(std::string&)>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  std::string note;
  bool ok = false;
  try {
    ok = fn(note);
  } catch (const std::exception& e) {
    ok = false;
    note = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (ok && budget_secs > 0 && secs > budget_secs) {
    ok = false;
    note = "exceeded time budget of " + std::to_string(budget_secs) + "s";
  }
  std::printf("%s %2d  %s  (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", idx, what, secs,
              note.empty() ? "" : "  ", note.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

// All nonincreasing exponent tuples of the given length with the given sum.
void tuples_rec(int total, int len, int maxpart, std::vector<int>& cur,
                std::vector<std::vector<int>>& out) {
  if (len == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  for (int a = std::min(total, maxpart); a >= 0; --a) {
    cur.push_back(a);
    tuples_rec(total - a, len - 1, a, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> exponent_tuples(int total, int len) {
  std::vector<std::vector<int>> out;
  if (total < 0) return out;
  std::vector<int> cur;
  tuples_rec(total, len, total, cur, out);
  return out;
}

std::string brief(int g, const std::vector<int>& a) {
  std::string s = "g=" + std::to_string(g) + " [";
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (i ? "," : "") + std::to_string(a[i]);
  return s + "]";
}

// The (g, exponents) grid behind checks 2 and 8: full to n = 4 for g <= 2,
// and the cheap n <= 2 slice of genus 3 on top.
std::vector<std::pair<int, std::vector<int>>> theorem_grid(int gmin) {
  std::vector<std::pair<int, std::vector<int>>> grid;
  for (int g = gmin; g <= 3; ++g) {
    const int nmax = g == 3 ? 2 : 4;
    for (int n = 1; n <= nmax; ++n) {
      if (2 * g - 2 + n <= 0) continue;
      for (auto& a : exponent_tuples(2 * g - 3 + n, n)) grid.emplace_back(g, a);
    }
  }
  return grid;
}

bool check_psi_table(std::string& note) {
  if (psi_integral(0, {0, 0, 0}) != Rational(1) || psi_integral(1, {1}) != Rational(1, 24) ||
      psi_integral(2, {4}) != Rational(1, 1152)) {
    note = "anchor value mismatch";
    return false;
  }
  // populate: every dimension-correct key with g <= 3, n <= 6
  for (int g = 0; g <= 3; ++g)
    for (int n = 1; n <= 6; ++n) {
      if (2 * g - 2 + n <= 0) continue;
      for (auto& a : exponent_tuples(3 * g - 3 + n, n)) psi_integral(g, a);
    }
  long checked = 0;
  for (const auto& [key, val] : global_table().entries_sorted()) {
    if (key.rfind("PSI;", 0) != 0) continue;
    const std::size_t p1 = key.find(';'), p2 = key.find(';', p1 + 1);
    const int g = std::stoi(key.substr(p1 + 1, p2 - p1 - 1));
    std::vector<int> a;
    for (std::size_t pos = p2 + 1; pos < key.size();) {
      std::size_t c = key.find(',', pos);
      if (c == std::string::npos) c = key.size();
      a.push_back(std::stoi(key.substr(pos, c - pos)));
      pos = c + 1;
    }
    if (g > 3 || a.size() > 6) continue;
    const int n = static_cast<int>(a.size());

    auto plus = [&](int extra) {
      std::vector<int> b = a;
      b.push_back(extra);
      return b;
    };
    Rational pulled(0);  // string: lower each positive exponent by one
    for (int i = 0; i < n; ++i)
      if (a[i] > 0) {
        std::vector<int> b = a;
        --b[i];
        pulled += psi_integral(g, b);
      }
    if (psi_integral(g, plus(0)) != pulled) {
      note = "string identity fails at " + key;
      return false;
    }
    if (psi_integral(g, plus(1)) != Rational(2 * g - 2 + n) * val) {
      note = "dilaton identity fails at " + key;
      return false;
    }
    ++checked;
  }
  if (checked < 50) {
    note = "only " + std::to_string(checked) + " keys checked";
    return false;
  }
  return true;
}

bool check_lambda_theorem(std::string& note) {
  long checked = 0;
  for (const auto& [g, a] : theorem_grid(0)) {
    if (hodge_integral(g, a) != lambda_theorem_value(g, a)) {
      note = "mismatch at " + brief(g, a);
      return false;
    }
    ++checked;
  }
  if (checked < 20) {
    note = "grid unexpectedly small";
    return false;
  }
  return true;
}

bool check_bg(std::string& note) {
  if (b_g(0) != Rational(1)) {
    note = "b_0";
    return false;
  }
  if (b_g(1) != Rational(1, 24)) {
    note = "b_1";
    return false;
  }
  if (b_g(2) != Rational(7, 5760)) {
    note = "b_2";
    return false;
  }
  return true;
}

bool check_degree_one_pins(std::string& note) {
  if (pixton_pairing(1, 1, {0}, {0}) != Rational(-1, 12)) {
    note = "genus-1 degree-1 pairing";
    return false;
  }
  if (dr_pairing(1, {0}, {0}) != Rational(-1, 24)) {
    note = "genus-1 double ramification pairing";
    return false;
  }
  return true;
}

bool check_theta_point(std::string& note) {
  std::vector<std::vector<long>> dsets = {{}};
  for (long r = 0; r <= 3; ++r) dsets.push_back({r});
  for (long r = 0; r <= 3; ++r)
    for (long s = r; s <= 3; ++s) dsets.push_back({r, s});

  long nontrivial = 0;
  for (int g = 0; g <= 2; ++g)
    for (int n = -1; n <= 3; ++n)
      for (int m = 0; m <= 3; ++m)
        for (const auto& ds : dsets) {
          PointThetaQuery q{g, n, m, ds};
          long nz = 0;
          if (theta_point(q, &nz) != Rational(0)) {
            note = "nonzero at g=" + std::to_string(g) + " n=" + std::to_string(n) +
                   " m=" + std::to_string(m);
            return false;
          }
          if (nz > 0) ++nontrivial;
        }
  if (nontrivial < 20) {
    note = "only " + std::to_string(nontrivial) + " nontrivial evaluations";
    return false;
  }
  return true;
}

bool check_theta0(std::string& note) {
  for (const char* target : {"p1", "p2"}) {
    const TargetModel& tm = TargetModel::by_name(target);
    std::vector<std::vector<Insertion>> dsets = {{}};
    for (long r = 0; r <= 3; ++r)
      for (int a = 0; a < tm.N; ++a) dsets.push_back({Insertion{r, a}});

    long nontrivial = 0;
    for (int n = -1; n <= 2; ++n)
      for (int m = 0; m <= 2; ++m)
        for (int beta = 0; beta < tm.N; ++beta)
          for (long deg = 0; deg <= 2; ++deg)
            for (const auto& ds : dsets) {
              ThetaQuery q{target, n, m, beta, ds, deg};
              long nz = 0;
              if (theta0(q, &nz) != Rational(0)) {
                note = std::string("nonzero at ") + target + " n=" + std::to_string(n) +
                       " m=" + std::to_string(m) + " beta=" + std::to_string(beta) +
                       " q^" + std::to_string(deg);
                return false;
              }
              if (nz > 0) ++nontrivial;
            }
    if (nontrivial < 10) {
      note = std::string(target) + ": only " + std::to_string(nontrivial) + " nontrivial";
      return false;
    }
  }
  return true;
}

bool check_theta1(std::string& note) {
  for (const char* target : {"point", "p1"}) {
    const TargetModel& tm = TargetModel::by_name(target);
    const long degmax = std::string(target) == "point" ? 0 : 1;
    std::vector<std::vector<Insertion>> dsets = {{}};
    for (long r = 0; r <= 3; ++r)
      for (int a = 0; a < tm.N; ++a) dsets.push_back({Insertion{r, a}});

    for (int n = -1; n <= 2; ++n)
      for (int m = 0; m <= 2; ++m)
        for (int beta = 0; beta < tm.N; ++beta)
          for (long deg = 0; deg <= degmax; ++deg)
            for (const auto& ds : dsets) {
              ThetaQuery q{target, n, m, beta, ds, deg};
              // internal consistency first: the -12 form against the 6 form
              if (theta1_m12(q) != Rational(-2) * theta1_six(q)) {
                note = std::string("route ratio fails at ") + target +
                       " n=" + std::to_string(n) + " m=" + std::to_string(m);
                return false;
              }
              if (theta1_pixton(q) != Rational(0)) {
                note = std::string("nonzero at ") + target + " n=" + std::to_string(n) +
                       " m=" + std::to_string(m) + " beta=" + std::to_string(beta);
                return false;
              }
            }
  }
  return true;
}

bool check_stabilization(std::string& note) {
  std::vector<std::tuple<int, int, std::vector<long>, std::vector<int>>> queries;
  for (const auto& [g, a] : theorem_grid(1))
    queries.emplace_back(g, g, std::vector<long>(a.size(), 0), a);
  queries.emplace_back(1, 1, std::vector<long>{0}, std::vector<int>{0});
  for (const auto& [g, d, A, amb] : queries) {
    if (pixton_poly(g, d, A, amb, 0) != pixton_poly(g, d, A, amb, 2)) {
      note = "polynomial drifts with extra samples at " + brief(g, amb) +
             " d=" + std::to_string(d);
      return false;
    }
  }
  return true;
}

long brute_force_aut(const StableGraph& gr) {
  const int nv = gr.num_vertices();
  const int n = gr.n;
  const int ne = gr.num_edges();
  std::vector<int> f(nv);
  std::iota(f.begin(), f.end(), 0);
  std::vector<int> halves(2 * ne);
  std::iota(halves.begin(), halves.end(), n);
  auto iota_img = halves;
  long count = 0;
  do {
    bool ok = true;
    for (int v = 0; v < nv && ok; ++v)
      if (gr.genus[f[v]] != gr.genus[v]) ok = false;
    for (int l = 0; l < n && ok; ++l)
      if (f[gr.leg_vertex[l]] != gr.leg_vertex[l]) ok = false;
    if (!ok) continue;
    std::vector<int> img = iota_img;
    do {
      auto s = [&](int h) { return h < n ? h : img[h - n]; };
      auto inv = [&](int h) {
        return h < n ? h : ((h - n) % 2 == 0 ? h + 1 : h - 1);
      };
      bool good = true;
      for (int h = n; h < n + 2 * ne && good; ++h) {
        if (gr.vertex_of_half(s(h)) != f[gr.vertex_of_half(h)]) good = false;
        if (s(inv(h)) != inv(s(h))) good = false;
      }
      if (good) ++count;
    } while (std::next_permutation(img.begin(), img.end()));
  } while (std::next_permutation(f.begin(), f.end()));
  return count;
}

bool check_graphs(std::string& note) {
  if (enumerate_graphs(0, 3).size() != 1 || enumerate_graphs(1, 1).size() != 2 ||
      enumerate_graphs(0, 4).size() != 4 || enumerate_trees(1, 1).size() != 1) {
    note = "enumeration count mismatch";
    return false;
  }
  long tested = 0;
  for (auto [g, n] : {std::pair{0, 3}, {0, 4}, {0, 5}, {1, 0}, {1, 1}, {1, 2}, {1, 3},
                      {2, 0}, {2, 1}}) {
    if (2 * g - 2 + n <= 0) continue;
    for (const auto& gr : enumerate_graphs(g, n)) {
      if (gr.num_half_edges() > 5) continue;
      if (aut_order(gr) != brute_force_aut(gr)) {
        note = "aut order disagrees with brute force on " + gr.dump();
        return false;
      }
      ++tested;
    }
  }
  if (tested < 15) {
    note = "too few graphs within the half-edge cap";
    return false;
  }
  return true;
}

bool check_givental(std::string& note) {
  using givental_ref::oracle_tree_sum;
  using givental_ref::pure_psi_query;
  using givental_ref::rank1_exp_z3;
  using givental_ref::rank1_id;
  using givental_ref::random_symplectic;

  SemisimpleData id = rank1_id(8);
  std::vector<std::pair<int, std::vector<int>>> cases = {
      {0, {0, 0, 0}}, {1, {1}},    {1, {0, 2}},    {1, {1, 1}},   {2, {4}},
      {2, {3, 1}},    {2, {2, 2, 1}}, {2, {5, 0, 0}}, {1, {0, 1, 1}}};
  for (const auto& [g, a] : cases) {
    TreeQuery q = pure_psi_query(g, a);
    int need = -1;
    if (tree_sum(id, q, &need) != hodge_integral(g, a) || need > id.order()) {
      note = "identity collapse fails at " + brief(g, a);
      return false;
    }
  }

  SemisimpleData bad = rank1_id(4);
  bad.R[1] = {{Rational(1)}};
  auto v = validate(bad);
  if (v.empty() || v.front().order != 2) {
    note = "R = 1 + z passed validation";
    return false;
  }

  for (int trial = 0; trial < 10; ++trial) {
    SemisimpleData d = random_symplectic(6);
    if (!validate(d).empty()) {
      note = "generated series rejected at trial " + std::to_string(trial);
      return false;
    }
    try {
      edge_table(d);
    } catch (const ValidationError&) {
      note = "(z+w) division left a remainder at trial " + std::to_string(trial);
      return false;
    }
  }

  SemisimpleData tw = rank1_exp_z3(5);
  TreeQuery q1 = pure_psi_query(1, {0});
  Rational got = tree_sum(tw, q1);
  if (got != oracle_tree_sum(tw, q1, 4, 3, 7) || got != Rational(1, 24)) {
    note = "rank-1 genus-1 oracle disagreement";
    return false;
  }
  return true;
}

}  // namespace

int main() {
  run(1, "psi anchors, string and dilaton across the populated table", 10.0,
      check_psi_table);
  run(2, "lambda theorem: Pixton route equals multinomial * b_g", 300.0,
      check_lambda_theorem);
  run(3, "b_g closed-form values", 0, check_bg);
  run(4, "degree-one pairing pins", 0, check_degree_one_pins);
  run(5, "theta_point vanishes on the dimension-filtered grid", 300.0, check_theta_point);
  run(6, "theta0 vanishes for p1 and p2", 0, check_theta0);
  run(7, "theta1 route ratio then vanishing for point and p1", 0, check_theta1);
  run(8, "pixton polynomials unchanged by extra r samples", 0, check_stabilization);
  run(9, "graph enumeration counts and automorphism oracle", 0, check_graphs);
  run(10, "givental trees: collapse, validation, divisibility, oracle", 0, check_givental);

  if (failures)
    std::printf("acceptance: %d of 10 FAILED\n", failures);
  else
    std::printf("acceptance: all 10 checks passed\n");
  return failures;
}
