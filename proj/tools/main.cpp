// lambdag: exact calculator and verification driver for psi / lambda_g
// integrals, Pixton pairings, and the Theta constraint suites.
//
// Subcommands:
//   psi g a1,a2,...            pure psi integral
//   hodge g a1,...             psi monomial times lambda_g
//   bg g                       the lambda_g theorem constant b_g
//   dr g a1,...,an -- k1,...   DR cycle paired with psi^k (sum a_i = 0)
//   graphs g n [--trees]       stable graph dumps, one per line
//   verify theta-point|theta0|theta1|lambda-theorem   residual grids
//   givental --data f.json --g G --n N                R-matrix tree sum
//   cache stats|verify|gc      cache file management
//
// Exit codes: 0 ok, 1 nonzero residual or failed invariant, 2 usage.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lambdag/cache.hpp"
#include "lambdag/constraints.hpp"
#include "lambdag/errors.hpp"
#include "lambdag/givental.hpp"
#include "lambdag/graphs.hpp"
#include "lambdag/gw.hpp"
#include "lambdag/lambda_point.hpp"
#include "lambdag/pixton.hpp"
#include "lambdag/psi.hpp"
#include "lambdag/rational.hpp"

namespace {

using lambdag::Rational;
using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------- parsing

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

long parse_long(const std::string& s) {
  std::size_t pos = 0;
  long v = std::stol(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

// Comma lists may also arrive as separate argv tokens; flatten both forms.
std::vector<long> parse_list(const std::vector<std::string>& tokens) {
  std::vector<long> out;
  for (const auto& t : tokens)
    for (const auto& part : split(t, ','))
      if (!part.empty()) out.push_back(parse_long(part));
  return out;
}

// "lo:hi" inclusive range.
std::pair<int, int> parse_range(const std::string& s) {
  auto parts = split(s, ':');
  if (parts.size() != 2) throw CLI::ValidationError("range", "expected lo:hi, got '" + s + "'");
  int lo = static_cast<int>(parse_long(parts[0]));
  int hi = static_cast<int>(parse_long(parts[1]));
  if (lo > hi) throw CLI::ValidationError("range", "empty range '" + s + "'");
  return {lo, hi};
}

std::vector<int> to_int_vec(const std::vector<long>& v) {
  std::vector<int> out;
  out.reserve(v.size());
  for (long x : v) out.push_back(static_cast<int>(x));
  return out;
}

// ---------------------------------------------------------------- reports

struct Report {
  std::string check;
  std::string target;
  ojson indices;
  Rational residual;
  long nontrivial = 0;
  bool ok = true;
};

void print_report(const Report& r, bool json_out) {
  if (json_out) {
    ojson rec;
    rec["check"] = r.check;
    rec["target"] = r.target;
    rec["indices"] = r.indices;
    rec["residual"] = r.residual.str();
    rec["nontrivial_terms"] = r.nontrivial;
    rec["status"] = r.ok ? "ok" : "fail";
    std::cout << rec.dump() << "\n";
    return;
  }
  std::cout << (r.ok ? "ok   " : "FAIL ") << r.check << " target=" << r.target;
  for (const auto& [k, v] : r.indices.items()) std::cout << " " << k << "=" << v.dump();
  std::cout << " residual=" << r.residual.str() << " nontrivial=" << r.nontrivial << "\n";
}

// Runs jobs over [0, count) with a shared index; results land in grid order
// so the report stream is identical for every --threads value.
template <typename Fn>
std::vector<std::vector<Report>> run_grid(std::size_t count, int threads, Fn&& fn) {
  std::vector<std::vector<Report>> out(count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard lk(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  return out;
}

// Prints every record, returns {points, nontrivial points, failures} and
// leaves the one-line summary on stderr so JSONL stdout stays pure.
int flush_reports(const std::vector<std::vector<Report>>& grid, bool json_out,
                  const std::string& label) {
  long points = 0, nontrivial = 0, failures = 0;
  for (const auto& pack : grid)
    for (const auto& r : pack) {
      print_report(r, json_out);
      ++points;
      if (r.nontrivial > 0) ++nontrivial;
      if (!r.ok) ++failures;
    }
  std::cerr << label << ": " << points << " points, " << nontrivial << " nontrivial, "
            << failures << " failures\n";
  return failures == 0 ? 0 : 1;
}

// --------------------------------------------------------- deriv multisets

// Multisets of directions r in [0, cap] with at most `order` elements.
std::vector<std::vector<long>> point_deriv_sets(int order, long cap) {
  std::vector<std::vector<long>> out = {{}};
  std::vector<std::vector<long>> layer = {{}};
  for (int s = 1; s <= order; ++s) {
    std::vector<std::vector<long>> next;
    for (const auto& v : layer)
      for (long r = v.empty() ? 0 : v.back(); r <= cap; ++r) {
        auto w = v;
        w.push_back(r);
        next.push_back(std::move(w));
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Same for target directions t_r^alpha, pairs ordered lexicographically.
std::vector<std::vector<lambdag::Insertion>> target_deriv_sets(int order, long rcap, int N) {
  const long ids = (rcap + 1) * N;
  std::vector<std::vector<long>> raw = point_deriv_sets(order, ids - 1);
  std::vector<std::vector<lambdag::Insertion>> out;
  out.reserve(raw.size());
  for (const auto& v : raw) {
    std::vector<lambdag::Insertion> ins;
    ins.reserve(v.size());
    for (long id : v) ins.push_back({id / N, static_cast<int>(id % N)});
    out.push_back(std::move(ins));
  }
  return out;
}

ojson derivs_json(const std::vector<long>& derivs) {
  ojson a = ojson::array();
  for (long r : derivs) a.push_back(r);
  return a;
}

ojson derivs_json(const std::vector<lambdag::Insertion>& derivs) {
  ojson a = ojson::array();
  for (const auto& d : derivs) a.push_back(ojson::array({d.level, d.cls}));
  return a;
}

// ------------------------------------------------------------ verify grids

int verify_theta_point(int gmax, std::pair<int, int> nr, std::pair<int, int> mr,
                       int deriv_order, long rcap, int threads, bool json_out) {
  std::vector<lambdag::PointThetaQuery> qs;
  for (int g = 0; g <= gmax; ++g)
    for (int n = nr.first; n <= nr.second; ++n)
      for (int m = mr.first; m <= mr.second; ++m)
        for (const auto& dv : point_deriv_sets(deriv_order, rcap))
          qs.push_back({g, n, m, dv});
  auto grid = run_grid(qs.size(), threads, [&](std::size_t i) {
    const auto& q = qs[i];
    long nz = 0;
    Rational res = lambdag::theta_point(q, &nz);
    Report r;
    r.check = "theta-point";
    r.target = "point";
    r.indices = {{"g", q.g}, {"n", q.n}, {"m", q.m}, {"derivs", derivs_json(q.derivs)}};
    r.residual = res;
    r.nontrivial = nz;
    r.ok = res.is_zero();
    return std::vector<Report>{r};
  });
  return flush_reports(grid, json_out, "theta-point");
}

std::vector<lambdag::ThetaQuery> target_grid(const std::string& target, std::pair<int, int> nr,
                                             std::pair<int, int> mr, int deriv_order, long rcap,
                                             long qmax) {
  const auto& tm = lambdag::TargetModel::by_name(target);
  const long degmax = target == "point" ? 0 : qmax;  // point has no curve classes
  std::vector<lambdag::ThetaQuery> qs;
  for (int n = nr.first; n <= nr.second; ++n)
    for (int m = mr.first; m <= mr.second; ++m)
      for (int beta = 0; beta < tm.N; ++beta)
        for (const auto& dv : target_deriv_sets(deriv_order, rcap, tm.N))
          for (long deg = 0; deg <= degmax; ++deg)
            qs.push_back({target, n, m, beta, dv, deg});
  return qs;
}

ojson theta_indices(const lambdag::ThetaQuery& q) {
  return {{"n", q.n},
          {"m", q.m},
          {"beta", q.beta},
          {"derivs", derivs_json(q.derivs)},
          {"degree", q.degree}};
}

int verify_theta0(const std::string& target, std::pair<int, int> nr, std::pair<int, int> mr,
                  int deriv_order, long rcap, long qmax, int threads, bool json_out) {
  auto qs = target_grid(target, nr, mr, deriv_order, rcap, qmax);
  auto grid = run_grid(qs.size(), threads, [&](std::size_t i) {
    long nz = 0;
    Rational res = lambdag::theta0(qs[i], &nz);
    Report r;
    r.check = "theta0";
    r.target = target;
    r.indices = theta_indices(qs[i]);
    r.residual = res;
    r.nontrivial = nz;
    r.ok = res.is_zero();
    return std::vector<Report>{r};
  });
  return flush_reports(grid, json_out, "theta0[" + target + "]");
}

int verify_theta1(const std::string& target, std::pair<int, int> nr, std::pair<int, int> mr,
                  int deriv_order, long rcap, long qmax, int threads, bool json_out) {
  auto qs = target_grid(target, nr, mr, deriv_order, rcap, qmax);
  auto grid = run_grid(qs.size(), threads, [&](std::size_t i) {
    const auto& q = qs[i];
    long nz = 0;
    Rational m12 = lambdag::theta1_m12(q, &nz);
    Rational six = lambdag::theta1_six(q);
    // the two assemblies must agree before either zero is believed
    Report ratio;
    ratio.check = "theta1-ratio";
    ratio.target = target;
    ratio.indices = theta_indices(q);
    ratio.residual = m12 + Rational(2) * six;
    ratio.nontrivial = nz;
    ratio.ok = ratio.residual.is_zero();
    Report zero;
    zero.check = "theta1";
    zero.target = target;
    zero.indices = theta_indices(q);
    zero.residual = m12 / Rational(-12);
    zero.nontrivial = nz;
    zero.ok = ratio.ok && zero.residual.is_zero();
    return std::vector<Report>{ratio, zero};
  });
  return flush_reports(grid, json_out, "theta1[" + target + "]");
}

// Exponent vectors a_1 >= a_2 >= ... >= a_n >= 0 with given sum.
void desc_exponents(int n, int sum, int cap, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
  if (n == 0) {
    if (sum == 0) out.push_back(cur);
    return;
  }
  for (int a = std::min(sum, cap); a >= 0; --a) {
    cur.push_back(a);
    desc_exponents(n - 1, sum - a, a, cur, out);
    cur.pop_back();
  }
}

int verify_lambda_theorem(int gmax, int nmax, int threads, bool json_out) {
  std::vector<std::pair<int, std::vector<int>>> qs;
  for (int g = 0; g <= gmax; ++g)
    for (int n = 1; n <= nmax; ++n) {
      if (2 * g - 2 + n <= 0) continue;
      int sum = 2 * g - 3 + n;
      if (sum < 0) continue;
      std::vector<int> cur;
      std::vector<std::vector<int>> vecs;
      desc_exponents(n, sum, sum, cur, vecs);
      for (auto& a : vecs) qs.emplace_back(g, std::move(a));
    }
  auto grid = run_grid(qs.size(), threads, [&](std::size_t i) {
    const auto& [g, a] = qs[i];
    Rational lhs = lambdag::hodge_integral(g, a);
    Rational rhs = lambdag::lambda_theorem_value(g, a);
    Report r;
    r.check = "lambda-theorem";
    r.target = "point";
    ojson exps = ojson::array();
    for (int x : a) exps.push_back(x);
    r.indices = {{"g", g}, {"exponents", exps}};
    r.residual = lhs - rhs;
    r.nontrivial = rhs.is_zero() ? 0 : 1;
    r.ok = r.residual.is_zero();
    return std::vector<Report>{r};
  });
  return flush_reports(grid, json_out, "lambda-theorem");
}

// ---------------------------------------------------------------- givental

int run_givental(const std::string& path, int g, int n) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "givental: cannot open '" << path << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  lambdag::SemisimpleData data;
  try {
    data = lambdag::semisimple_from_json(buf.str());
  } catch (const std::exception& e) {
    std::cerr << "givental: bad data file: " << e.what() << "\n";
    return 2;
  }
  auto bad = lambdag::validate(data);
  if (!bad.empty()) {
    for (const auto& v : bad)
      std::cerr << "violation at order " << v.order << ": " << v.what << "\n";
    return 1;
  }
  lambdag::TreeQuery q;
  q.g = g;
  lambdag::LegInput ones;
  ones.psi_coeff = {std::vector<Rational>(data.N, Rational(1))};
  q.legs.assign(n, ones);
  int min_order = 0;
  Rational val = lambdag::tree_sum(data, q, &min_order);
  std::cout << val.str() << "\n";
  std::cerr << "needed series order " << min_order << " of " << data.order() << "\n";
  return 0;
}

// ------------------------------------------------------------------- cache

struct KindStats {
  long psi = 0, hodge = 0, gw0 = 0;
};

KindStats count_kinds(const lambdag::IntegralTable& table) {
  KindStats ks;
  for (const auto& entry : table.entries_sorted()) {
    const std::string& k = entry.first;
    if (k.rfind("PSI;", 0) == 0) ++ks.psi;
    else if (k.rfind("HODGE;", 0) == 0) ++ks.hodge;
    else if (k.rfind("GW0;", 0) == 0) ++ks.gw0;
  }
  return ks;
}

int cache_stats(const std::string& path) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) {
    std::cout << path << ": no cache file\n";
    return 0;
  }
  lambdag::IntegralTable table;
  table.load_file(path);
  KindStats ks = count_kinds(table);
  std::cout << path << ": " << table.size() << " records (PSI " << ks.psi << ", HODGE "
            << ks.hodge << ", GW0 " << ks.gw0 << ")\n";
  return 0;
}

struct PsiRecord {
  int g;
  std::vector<int> exps;
  Rational value;
};

// Re-checks the table-internal invariants: dimension gates, the string and
// dilaton equations between cached psi keys, and the multinomial form of the
// hodge records against the cached b_g key. Relations whose partner keys are
// absent are counted as skipped, never recomputed.
int cache_verify(const std::string& path) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) {
    std::cout << path << ": no cache file\n";
    return 0;
  }
  lambdag::IntegralTable table;
  table.load_file(path);  // grammar and canonical form enforced here
  std::vector<PsiRecord> psi, hodge;
  for (const auto& [key, value] : table.entries_sorted()) {
    auto fields = split(key, ';');
    if (fields[0] != "PSI" && fields[0] != "HODGE") continue;
    PsiRecord rec;
    rec.g = static_cast<int>(parse_long(fields[1]));
    if (!fields[2].empty())
      for (const auto& p : split(fields[2], ',')) rec.exps.push_back(static_cast<int>(parse_long(p)));
    rec.value = value;
    (fields[0] == "PSI" ? psi : hodge).push_back(std::move(rec));
  }
  auto lookup = [&](const char* kind, int g, std::vector<int> exps) -> std::optional<Rational> {
    std::sort(exps.rbegin(), exps.rend());
    std::string key = lambdag::psi_cache_key(g, exps);
    if (std::string(kind) == "HODGE") key = "HODGE" + key.substr(3);
    return table.find(key);
  };
  long fails = 0;
  auto suite = [&](const char* name, long checked, long skipped, long bad) {
    std::cout << name << ": " << checked << " checked, " << skipped << " skipped, " << bad
              << " failed\n";
    fails += bad;
  };

  long c = 0, s = 0, b = 0;
  for (const auto& r : psi) {
    long sum = 0;
    for (int a : r.exps) sum += a;
    ++c;
    if (sum != 3L * r.g - 3 + static_cast<long>(r.exps.size()) && !r.value.is_zero()) ++b;
  }
  suite("psi dimension gate", c, s, b);

  c = s = b = 0;
  for (const auto& r : psi) {
    // keys are sorted descending, so a trailing 0 is the tau_0 to strip
    if (r.exps.empty() || r.exps.back() != 0) continue;
    std::vector<int> rest(r.exps.begin(), r.exps.end() - 1);
    if (2 * r.g - 2 + static_cast<int>(rest.size()) <= 0) continue;
    Rational rhs(0);
    bool have_all = true;
    for (std::size_t j = 0; j < rest.size() && have_all; ++j) {
      if (rest[j] == 0) continue;
      auto down = rest;
      --down[j];
      if (auto hit = lookup("PSI", r.g, down)) rhs += *hit;
      else have_all = false;
    }
    if (!have_all) {
      ++s;
      continue;
    }
    ++c;
    if (r.value != rhs) ++b;
  }
  suite("psi string equation", c, s, b);

  c = s = b = 0;
  for (const auto& r : psi) {
    auto it = std::find(r.exps.begin(), r.exps.end(), 1);
    if (it == r.exps.end()) continue;
    std::vector<int> rest = r.exps;
    rest.erase(rest.begin() + (it - r.exps.begin()));
    if (2 * r.g - 2 + static_cast<int>(rest.size()) <= 0) continue;
    auto hit = lookup("PSI", r.g, rest);
    if (!hit) {
      ++s;
      continue;
    }
    ++c;
    if (r.value != Rational(2 * r.g - 2 + static_cast<long>(rest.size())) * *hit) ++b;
  }
  suite("psi dilaton equation", c, s, b);

  c = s = b = 0;
  for (const auto& r : hodge) {
    long sum = 0;
    for (int a : r.exps) sum += a;
    const long top = 2L * r.g - 3 + static_cast<long>(r.exps.size());
    if (sum != top) {
      ++c;
      if (!r.value.is_zero()) ++b;
      continue;
    }
    std::optional<Rational> bg;
    if (r.g == 0) bg = lookup("PSI", 0, r.exps);  // lambda_0 = 1
    else bg = lookup("HODGE", r.g, {2 * r.g - 2});
    if (!bg) {
      ++s;
      continue;
    }
    Rational want = *bg;
    if (r.g > 0) {
      Rational multi(lambdag::factorial_z(static_cast<unsigned>(top)));
      for (int a : r.exps) multi /= Rational(lambdag::factorial_z(static_cast<unsigned>(a)));
      want *= multi;
    }
    ++c;
    if (r.value != want) ++b;
  }
  suite("hodge multinomial form", c, s, b);

  std::cout << (fails == 0 ? "ok" : "FAIL") << " (" << table.size() << " records)\n";
  return fails == 0 ? 0 : 1;
}

// Drops records that the dimension gates re-derive for free (off-dimension
// zeros) and rewrites the file in sorted canonical order.
int cache_gc(const std::string& path) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) {
    std::cout << path << ": no cache file\n";
    return 0;
  }
  lambdag::IntegralTable table;
  table.load_file(path);
  lambdag::IntegralTable kept;
  long dropped = 0;
  for (const auto& [key, value] : table.entries_sorted()) {
    auto fields = split(key, ';');
    bool redundant = false;
    if ((fields[0] == "PSI" || fields[0] == "HODGE") && value.is_zero()) {
      long g = parse_long(fields[1]);
      long sum = 0, n = 0;
      if (!fields[2].empty())
        for (const auto& p : split(fields[2], ',')) {
          sum += parse_long(p);
          ++n;
        }
      long dim = fields[0] == "PSI" ? 3 * g - 3 + n : 2 * g - 3 + n;
      redundant = sum != dim;
    }
    if (redundant) ++dropped;
    else kept.store(key, value);
  }
  kept.save_file(path);
  std::cout << "kept " << kept.size() << ", dropped " << dropped << " redundant\n";
  return 0;
}

// --------------------------------------------------------------------- dr

// dr takes signed ramification data, which fights any flag parser; handled
// by hand. Grammar: dr g a1,...,an -- k1,...,kn
int run_dr(int argc, char** argv) {
  std::vector<std::string> before, after;
  bool seen_sep = false;
  std::string cache_path;
  for (int i = 2; i < argc; ++i) {
    std::string t = argv[i];
    if (t == "--") {
      seen_sep = true;
      continue;
    }
    if (t == "--cache" && i + 1 < argc) {
      cache_path = argv[++i];
      continue;
    }
    if (t.rfind("--cache=", 0) == 0) {
      cache_path = t.substr(8);
      continue;
    }
    (seen_sep ? after : before).push_back(t);
  }
  if (!seen_sep || before.empty() || after.empty()) {
    std::cerr << "usage: lambdag dr g a1,...,an -- k1,...,kn\n";
    return 2;
  }
  try {
    long g = parse_long(before.front());
    before.erase(before.begin());
    std::vector<long> A = parse_list(before);
    std::vector<long> K = parse_list(after);
    if (A.size() != K.size()) {
      std::cerr << "dr: ramification and exponent lists differ in length\n";
      return 2;
    }
    long sum = 0;
    for (long a : A) sum += a;
    if (sum != 0) {
      std::cerr << "dr: ramification data must sum to 0\n";
      return 2;
    }
    if (cache_path.empty())
      if (const char* env = std::getenv("LAMBDAG_CACHE")) cache_path = env;
    if (!cache_path.empty() && std::filesystem::exists(cache_path))
      lambdag::global_table().load_file(cache_path);
    Rational val = lambdag::dr_pairing(static_cast<int>(g), A, to_int_vec(K));
    std::cout << val.str() << "\n";
    if (!cache_path.empty() && lambdag::global_table().dirty())
      lambdag::global_table().save_file(cache_path);
    return 0;
  } catch (const lambdag::UnstableInput& e) {
    std::cerr << "dr: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "dr: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc >= 2 && std::string(argv[1]) == "dr") return run_dr(argc, argv);

  CLI::App app{"exact lambda_g and Theta constraint calculator"};
  app.require_subcommand(1);
  std::string cache_flag;
  int threads = 1;
  bool json_out = false;
  app.add_option("--cache", cache_flag, "cache file (overrides LAMBDAG_CACHE)");
  app.add_option("--threads", threads, "worker threads for verify grids")
      ->check(CLI::PositiveNumber);
  app.add_flag("--json", json_out, "emit JSONL report records");

  // psi g a1,...
  auto* psi_cmd = app.add_subcommand("psi", "pure psi integral");
  psi_cmd->fallthrough();
  int psi_g = 0;
  std::vector<std::string> psi_exps;
  psi_cmd->add_option("g", psi_g)->required();
  psi_cmd->add_option("exps", psi_exps, "a1,a2,...")->required();

  auto* hodge_cmd = app.add_subcommand("hodge", "psi monomial times lambda_g");
  hodge_cmd->fallthrough();
  int hodge_g = 0;
  std::vector<std::string> hodge_exps;
  hodge_cmd->add_option("g", hodge_g)->required();
  hodge_cmd->add_option("exps", hodge_exps, "a1,a2,...")->required();

  auto* bg_cmd = app.add_subcommand("bg", "lambda_g theorem constant");
  bg_cmd->fallthrough();
  int bg_g = 0;
  bg_cmd->add_option("g", bg_g)->required();

  auto* graphs_cmd = app.add_subcommand("graphs", "stable graph dumps");
  graphs_cmd->fallthrough();
  int graphs_g = 0, graphs_n = 0;
  bool graphs_trees = false;
  graphs_cmd->add_option("g", graphs_g)->required();
  graphs_cmd->add_option("n", graphs_n)->required();
  graphs_cmd->add_flag("--trees", graphs_trees, "restrict to trees");

  auto* verify_cmd = app.add_subcommand("verify", "residual grids");
  verify_cmd->fallthrough();
  verify_cmd->require_subcommand(1);

  auto* vtp = verify_cmd->add_subcommand("theta-point", "point target constraint");
  vtp->fallthrough();
  int vtp_g = 2, vtp_order = 2;
  long vtp_rcap = 3;
  std::string vtp_nr = "-1:3", vtp_mr = "0:3";
  vtp->add_option("--g", vtp_g, "max genus");
  vtp->add_option("--n-range", vtp_nr, "lo:hi (use --n-range=-1:3)");
  vtp->add_option("--m-range", vtp_mr, "lo:hi");
  vtp->add_option("--deriv-order", vtp_order, "max number of derivatives");
  vtp->add_option("--deriv-cap", vtp_rcap, "max direction index r");

  auto* vt0 = verify_cmd->add_subcommand("theta0", "genus 0 target constraint");
  vt0->fallthrough();
  std::string vt0_target;
  long vt0_qmax = 2, vt0_rcap = 1;
  int vt0_order = 1;
  std::string vt0_nr = "-1:2", vt0_mr = "0:2";
  vt0->add_option("--target", vt0_target, "point|p1|p2")->required();
  vt0->add_option("--q-max", vt0_qmax, "max Novikov degree");
  vt0->add_option("--n-range", vt0_nr, "lo:hi");
  vt0->add_option("--m-range", vt0_mr, "lo:hi");
  vt0->add_option("--deriv-order", vt0_order, "max number of derivatives");
  vt0->add_option("--deriv-cap", vt0_rcap, "max direction level r");

  auto* vt1 = verify_cmd->add_subcommand("theta1", "genus 1 Pixton constraint");
  vt1->fallthrough();
  std::string vt1_target;
  long vt1_qmax = 1, vt1_rcap = 1;
  int vt1_order = 1;
  std::string vt1_nr = "-1:2", vt1_mr = "0:2";
  vt1->add_option("--target", vt1_target, "point|p1|p2")->required();
  vt1->add_option("--q-max", vt1_qmax, "max Novikov degree");
  vt1->add_option("--n-range", vt1_nr, "lo:hi");
  vt1->add_option("--m-range", vt1_mr, "lo:hi");
  vt1->add_option("--deriv-order", vt1_order, "max number of derivatives");
  vt1->add_option("--deriv-cap", vt1_rcap, "max direction level r");

  auto* vlt = verify_cmd->add_subcommand("lambda-theorem", "hodge integrals vs closed form");
  vlt->fallthrough();
  int vlt_g = 2, vlt_n = 4;
  vlt->add_option("--g-max", vlt_g, "max genus");
  vlt->add_option("--n-max", vlt_n, "max marked points");

  auto* giv_cmd = app.add_subcommand("givental", "R-matrix tree sum");
  giv_cmd->fallthrough();
  std::string giv_data;
  int giv_g = 0, giv_n = 1;
  giv_cmd->add_option("--data", giv_data, "semisimple data JSON file")->required();
  giv_cmd->add_option("--g", giv_g, "genus")->required();
  giv_cmd->add_option("--n", giv_n, "number of legs")->required();

  auto* cache_cmd = app.add_subcommand("cache", "cache file management");
  cache_cmd->fallthrough();
  cache_cmd->require_subcommand(1);
  auto* cstats = cache_cmd->add_subcommand("stats", "record counts");
  cstats->fallthrough();
  auto* cverify = cache_cmd->add_subcommand("verify", "table-internal invariants");
  cverify->fallthrough();
  auto* cgc = cache_cmd->add_subcommand("gc", "drop redundant records, compact");
  cgc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  std::string cache_path = cache_flag;
  if (cache_path.empty())
    if (const char* env = std::getenv("LAMBDAG_CACHE")) cache_path = env;

  try {
    if (*cache_cmd) {
      if (cache_path.empty()) {
        std::cerr << "cache: no path (use --cache or LAMBDAG_CACHE)\n";
        return 2;
      }
      if (*cstats) return cache_stats(cache_path);
      if (*cverify) return cache_verify(cache_path);
      if (*cgc) return cache_gc(cache_path);
      return 2;
    }

    if (!cache_path.empty() && std::filesystem::exists(cache_path))
      lambdag::global_table().load_file(cache_path);

    int rc = 0;
    if (*psi_cmd) {
      std::cout << lambdag::psi_integral(psi_g, to_int_vec(parse_list(psi_exps))).str() << "\n";
    } else if (*hodge_cmd) {
      std::cout << lambdag::hodge_integral(hodge_g, to_int_vec(parse_list(hodge_exps))).str()
                << "\n";
    } else if (*bg_cmd) {
      std::cout << lambdag::b_g(bg_g).str() << "\n";
    } else if (*graphs_cmd) {
      auto gs = graphs_trees ? lambdag::enumerate_trees(graphs_g, graphs_n)
                             : lambdag::enumerate_graphs(graphs_g, graphs_n);
      for (const auto& gr : gs) std::cout << gr.dump() << "\n";
    } else if (*giv_cmd) {
      rc = run_givental(giv_data, giv_g, giv_n);
    } else if (*vtp) {
      rc = verify_theta_point(vtp_g, parse_range(vtp_nr), parse_range(vtp_mr), vtp_order,
                              vtp_rcap, threads, json_out);
    } else if (*vt0) {
      rc = verify_theta0(vt0_target, parse_range(vt0_nr), parse_range(vt0_mr), vt0_order,
                         vt0_rcap, vt0_qmax, threads, json_out);
    } else if (*vt1) {
      rc = verify_theta1(vt1_target, parse_range(vt1_nr), parse_range(vt1_mr), vt1_order,
                         vt1_rcap, vt1_qmax, threads, json_out);
    } else if (*vlt) {
      rc = verify_lambda_theorem(vlt_g, vlt_n, threads, json_out);
    }

    if (!cache_path.empty() && lambdag::global_table().dirty())
      lambdag::global_table().save_file(cache_path);
    return rc;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const lambdag::CacheParseError& e) {
    std::cerr << "error: line " << e.line_no << ": " << e.what() << "\n";
    return 1;
  } catch (const lambdag::UnstableInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lambdag::UnsupportedTarget& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
