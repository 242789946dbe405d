#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#ifndef LAMBDAG_CLI_PATH
#define LAMBDAG_CLI_PATH "./lambdag"
#endif

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

// Spawns the real binary through the shell. stderr is dropped unless merged.
RunResult run_cli(const std::string& args, const std::string& env_prefix = "",
                  bool merge_stderr = false) {
  std::string cmd;
  if (!env_prefix.empty()) cmd += "env " + env_prefix + " ";
  cmd += std::string(LAMBDAG_CLI_PATH) + " " + args;
  cmd += merge_stderr ? " 2>&1" : " 2>/dev/null";
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) res.out.append(buf, got);
  int rc = pclose(pipe);
  res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return res;
}

std::filesystem::path scratch_dir() {
  static std::filesystem::path dir = [] {
    auto p = std::filesystem::temp_directory_path() /
             ("lambdag_cli_" + std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  auto p = scratch_dir() / name;
  std::ofstream f(p);
  f << text;
  f.close();
  return p.string();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

const std::string kTinyGrid =
    "--g 1 --n-range 0:1 --m-range 0:1 --deriv-order 1 --deriv-cap 1";

}  // namespace

TEST_CASE("cli value commands") {
  CHECK(run_cli("psi 1 1").out == "1/24\n");
  CHECK(run_cli("psi 0 0,0,0").out == "1\n");
  CHECK(run_cli("psi 2 3,2").out == "29/5760\n");
  CHECK(run_cli("hodge 1 0").out == "1/24\n");
  CHECK(run_cli("bg 2").out == "7/5760\n");
  CHECK(run_cli("bg 2").status == 0);
}

TEST_CASE("cli graph dumps") {
  RunResult r = run_cli("graphs 1 1");
  CHECK(r.status == 0);
  auto ls = lines_of(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "V:(1) E:() L:(0->0)");
  CHECK(ls[1] == "V:(0) E:((0,0)) L:(0->0)");
  CHECK(lines_of(run_cli("graphs 0 4").out).size() == 4);
  CHECK(lines_of(run_cli("graphs --trees 1 1").out).size() == 1);
}

TEST_CASE("cli dr pairing") {
  CHECK(run_cli("dr 1 0 -- 0").out == "-1/24\n");
  CHECK(run_cli("dr 0 2,-1,-1 -- 0,0,0").out == "1\n");
  // ramification must sum to zero, and the separator is mandatory
  CHECK(run_cli("dr 1 5 -- 0").status == 2);
  CHECK(run_cli("dr 1 0 0").status == 2);
}

TEST_CASE("cli usage errors") {
  CHECK(run_cli("").status == 2);
  CHECK(run_cli("nosuchcmd").status == 2);
  CHECK(run_cli("--help").status == 0);
  CHECK(run_cli("verify theta0 --q-max 1").status == 2);  // --target required
  CHECK(run_cli("verify theta-point --n-range nonsense").status == 2);
}

TEST_CASE("cli verify grids pass") {
  CHECK(run_cli("verify lambda-theorem --g-max 1 --n-max 3").status == 0);
  CHECK(run_cli("verify theta0 --target p1 --q-max 1 --n-range 0:1 --m-range 0:1 "
                "--deriv-order 1 --deriv-cap 1")
            .status == 0);
}

TEST_CASE("cli jsonl report schema") {
  RunResult r = run_cli("verify theta-point --json " + kTinyGrid);
  CHECK(r.status == 0);
  auto ls = lines_of(r.out);
  REQUIRE(ls.size() == 24);
  long nontrivial = 0;
  for (const auto& line : ls) {
    auto rec = nlohmann::json::parse(line);
    REQUIRE(rec.is_object());
    CHECK(rec.size() == 6);
    CHECK(rec.at("check") == "theta-point");
    CHECK(rec.at("target") == "point");
    CHECK(rec.at("indices").is_object());
    CHECK(rec.at("residual") == "0");
    CHECK(rec.at("status") == "ok");
    nontrivial += rec.at("nontrivial_terms").get<long>();
  }
  CHECK(nontrivial == 9);
}

TEST_CASE("cli worker count does not change the report stream") {
  std::string args = "verify theta-point --json " + kTinyGrid;
  RunResult one = run_cli(args + " --threads 1");
  RunResult four = run_cli(args + " --threads 4");
  CHECK(one.status == 0);
  CHECK(one.out == four.out);
}

TEST_CASE("cli theta1 emits the ratio record first") {
  RunResult r = run_cli(
      "verify theta1 --json --target point --n-range 0:0 --m-range 0:0 "
      "--deriv-order 1 --deriv-cap 1");
  CHECK(r.status == 0);
  auto ls = lines_of(r.out);
  REQUIRE(ls.size() >= 2);
  REQUIRE(ls.size() % 2 == 0);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    auto rec = nlohmann::json::parse(ls[i]);
    CHECK(rec.at("check") == (i % 2 == 0 ? "theta1-ratio" : "theta1"));
  }
}

TEST_CASE("cli cache lifecycle") {
  std::string cache = (scratch_dir() / "cache.txt").string();
  CHECK(run_cli("psi --cache " + cache + " 1 1").status == 0);
  CHECK(read_file(cache) == "TAUTCACHE v1\nPSI;1;1;1/24\n");

  RunResult stats = run_cli("cache stats --cache " + cache);
  CHECK(stats.status == 0);
  CHECK(stats.out.find("1 records (PSI 1, HODGE 0, GW0 0)") != std::string::npos);

  CHECK(run_cli("hodge --cache " + cache + " 1 0").status == 0);
  RunResult verify = run_cli("cache verify --cache " + cache, "", true);
  CHECK(verify.status == 0);
  CHECK(verify.out.find("ok (") != std::string::npos);
}

TEST_CASE("cli rejects corrupt cache files with a line number") {
  std::string bad1 = write_file("bad1.txt", "WRONG\nPSI;1;1;1/24\n");
  RunResult r1 = run_cli("cache stats --cache " + bad1, "", true);
  CHECK(r1.status == 1);
  CHECK(r1.out.find("line 1") != std::string::npos);

  std::string bad2 = write_file("bad2.txt", "TAUTCACHE v1\nPSI;1;0,1;1/24\n");
  RunResult r2 = run_cli("cache stats --cache " + bad2, "", true);
  CHECK(r2.status == 1);
  CHECK(r2.out.find("line 2") != std::string::npos);
}

TEST_CASE("cli detects a poisoned memo through the verify grid") {
  // wrong stored value for <tau_1 tau_0 lambda_1>: the cancellation breaks
  std::string poison = write_file("poison.txt", "TAUTCACHE v1\nHODGE;1;1,0;1/25\n");
  RunResult r = run_cli("verify theta-point --cache " + poison +
                        " --g 1 --n-range 1:1 --m-range 0:0 --deriv-order 1 --deriv-cap 0");
  CHECK(r.status == 1);
  CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("cli cache gc drops off-dimension zeros") {
  std::string f = write_file("gc.txt", "TAUTCACHE v1\nPSI;1;1;1/24\nPSI;1;0,0;0\n");
  RunResult r = run_cli("cache gc --cache " + f);
  CHECK(r.status == 0);
  std::string after = read_file(f);
  CHECK(after.find("PSI;1;1;1/24") != std::string::npos);
  CHECK(after.find("PSI;1;0,0") == std::string::npos);
}

TEST_CASE("cli flag beats cache environment variable") {
  std::string bad = write_file("envbad.txt", "WRONG HEADER\n");
  std::string good = write_file("envgood.txt", "TAUTCACHE v1\n");
  CHECK(run_cli("psi 1 1", "LAMBDAG_CACHE=" + bad).status == 1);
  RunResult r = run_cli("psi --cache " + good + " 1 1", "LAMBDAG_CACHE=" + bad);
  CHECK(r.status == 0);
  CHECK(r.out == "1/24\n");
}

TEST_CASE("cli givental") {
  std::string good = write_file(
      "giv_good.json",
      "{\"n\":1,\"delta\":[\"1\"],\"r\":[[[\"1\"]],[[\"0\"]],[[\"0\"]],[[\"2/7\"]],"
      "[[\"0\"]],[[\"0\"]]]}");
  RunResult ok = run_cli("givental --data " + good + " --g 1 --n 1");
  CHECK(ok.status == 0);
  CHECK(ok.out == "1/24\n");

  // R = 1 + z declared through order 2 breaks the symplectic condition there
  std::string bad = write_file("giv_bad.json",
                               "{\"n\":1,\"delta\":[\"1\"],\"r\":[[[\"1\"]],[[\"1\"]],[[\"0\"]]]}");
  RunResult rej = run_cli("givental --data " + bad + " --g 1 --n 1", "", true);
  CHECK(rej.status == 1);
  CHECK(rej.out.find("violation at order 2") != std::string::npos);

  CHECK(run_cli("givental --data " + (scratch_dir() / "absent.json").string() +
                " --g 1 --n 1")
            .status == 2);
  std::string mal = write_file("giv_mal.json", "not json");
  CHECK(run_cli("givental --data " + mal + " --g 1 --n 1").status == 2);
}
