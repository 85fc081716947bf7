#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "addm/cli.hpp"

using namespace addm;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "addm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(ADDM_TEST_DATA) + "/" + name; }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "addm_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("odometer commands") {
  auto r = run({"odometer", "succ", "--base", ";2", "--point", "1,1,1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "0,0,0\n");

  r = run({"odometer", "dist", "--base", ";2", "--p", "0,0,0,0", "--q", "0,1,1,0"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "3/8\n");

  r = run({"odometer", "add", "--base", "2,3;2", "--p", "1,2,1", "--q", "1,0,1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "0,0,1\n");

  r = run({"odometer", "conjugate", "--base1", "2,3;", "--base2", "6;"});
  CHECK(r.code == kExitInputError);
  CHECK(has(r.err, "tail"));

  r = run({"odometer", "conjugate", "--base1", ";2,3", "--base2", ";6"});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "conjugate: yes"));
  CHECK(has(r.out, "M(base1): {2: inf, 3: inf}"));

  r = run({"odometer", "conjugate", "--base1", ";2", "--base2", ";3"});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "conjugate: no"));

  CHECK(run({"odometer", "succ", "--base", ";2", "--point", "1,x"}).code == kExitInputError);
  CHECK(run({"odometer", "succ", "--base", ";2", "--point", "3"}).code == kExitInputError);
  CHECK(run({"odometer", "dist", "--base", ";2", "--p", "0,0", "--q", "0"}).code == kExitInputError);
}

TEST_CASE("argument errors") {
  CHECK(run({}).code == kExitInputError);
  CHECK(run({"odometer"}).code == kExitInputError);
  CHECK(run({"odometer", "succ", "--base", ";2"}).code == kExitInputError);
  CHECK(run({"odometer", "succ", "--base", ";2", "--point", "0", "--bogus"}).code ==
        kExitInputError);
  CHECK(run({"ifs", "analyze", data("missing.ifs")}).code == kExitInputError);
  CHECK(run({"ifs", "analyze", data("z6.ifs"), "--format", "xml"}).code == kExitInputError);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("ifs analyze on the cyclic group of order six") {
  const auto r = run({"ifs", "analyze", data("z6.ifs")});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "verdict: minimal"));
  CHECK(has(r.out, "members: 1 2 3 6"));
  CHECK(has(r.out, "radices: 2,3"));
  CHECK(has(r.out, "label a: PASS"));
  CHECK(has(r.out, "nm bound: 6"));
  CHECK(has(r.out, "recurrence horizon: 4096"));
  CHECK(has(r.out, "C_2: [0] {0 2 4} [1] {1 3 5}"));
}

TEST_CASE("ifs analyze reports non-minimal systems") {
  const auto r = run({"ifs", "analyze", data("z4_plus2.ifs")});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "verdict: not minimal"));
}

TEST_CASE("ifs analyze rejects malformed files with a line number") {
  const auto r = run({"ifs", "analyze", data("bad_map.ifs")});
  CHECK(r.code == kExitInputError);
  CHECK(has(r.err, "line 2"));
}

TEST_CASE("ifs analyze is deterministic") {
  for (const char* name : {"z6.ifs", "z6_two.ifs", "z4_plus2.ifs"}) {
    const auto a = run({"ifs", "analyze", data(name)});
    const auto b = run({"ifs", "analyze", data(name)});
    CHECK(a.out == b.out);
    const auto c = run({"ifs", "analyze", data(name), "--format", "csv"});
    const auto d = run({"ifs", "analyze", data(name), "--format", "csv"});
    CHECK(c.out == d.out);
  }
}

TEST_CASE("csv and file output") {
  const auto csv = run({"ifs", "analyze", data("z6.ifs"), "--format", "csv"});
  CHECK(csv.code == kExitOk);
  CHECK(csv.out.rfind("section,key,value\n", 0) == 0);
  CHECK(has(csv.out, "minimality,verdict,minimal"));
  CHECK(has(csv.out, "equivariance,label a,PASS"));

  const auto path = scratch("z6.txt");
  std::filesystem::remove(path);
  const auto filed = run({"ifs", "analyze", data("z6.ifs"), "--output", path.string()});
  CHECK(filed.code == kExitOk);
  CHECK(filed.out.empty());
  CHECK(slurp(path) == run({"ifs", "analyze", data("z6.ifs")}).out);
}

TEST_CASE("single-map shadowing section") {
  const auto path = scratch("line.ifs");
  std::ofstream(path) << "states: 0 1 2\nlabel f: 1 2 0\n";
  const auto r = run({"ifs", "analyze", path.string(), "--delta", "1/2", "--epsilon", "1/2"});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "== single map =="));
  CHECK(has(r.out, "shadowing (delta=1/2, epsilon=1/2): yes"));
  CHECK(has(r.out, "sensitive (delta=1/2): no"));
}

TEST_CASE("ifs verify") {
  auto r = run({"ifs", "verify", data("z6.ifs")});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "result: PASS"));

  r = run({"ifs", "verify", data("z6_two.ifs"), "--primes", "2"});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "label b: PASS"));

  // +3 is invisible mod 3, so no three-block level exists.
  r = run({"ifs", "verify", data("z6_two.ifs"), "--primes", "3"});
  CHECK(r.code == kExitCounterexample);

  r = run({"ifs", "verify", data("z6.ifs"), "--primes", "5"});
  CHECK(r.code == kExitCounterexample);

  r = run({"ifs", "verify", data("z4_plus2.ifs")});
  CHECK(r.code == kExitCounterexample);

  // pi(x) for +1 on six states with radices (2,3)
  const auto good = scratch("good.assign");
  std::ofstream(good) << "0: 0,0\n1: 1,0\n2: 0,1\n3: 1,1\n4: 0,2\n5: 1,2\n";
  r = run({"ifs", "verify", data("z6.ifs"), "--primes", "2,3", "--assignment", good.string()});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "label a: PASS"));

  const auto bad = scratch("bad.assign");
  std::ofstream(bad) << "0: 0,0\n1: 1,0\n2: 0,1\n3: 1,1\n4: 0,2\n5: 1,1\n";
  r = run({"ifs", "verify", data("z6.ifs"), "--primes", "2,3", "--assignment", bad.string()});
  CHECK(r.code == kExitCounterexample);
  CHECK(has(r.out, "FAIL"));

  const auto broken = scratch("broken.assign");
  std::ofstream(broken) << "0: 0,0\n1 1,0\n";
  r = run({"ifs", "verify", data("z6.ifs"), "--primes", "2,3", "--assignment", broken.string()});
  CHECK(r.code == kExitInputError);
}

TEST_CASE("tent orbit and kneading") {
  auto r = run({"tent", "orbit", "--a", "2", "--budget", "10"});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "0: 1/2 "));
  CHECK(has(r.out, "1: 1 "));
  CHECK(has(r.out, "2: 0 "));
  CHECK(has(r.out, "3: 0 "));
  CHECK(has(r.out, "9: 0 "));
  CHECK(!has(r.out, "10: "));

  r = run({"tent", "orbit", "--a", "sqrt(2)", "--budget", "6"});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "3: 2-sqrt(2) "));

  r = run({"tent", "kneading", "--a", "sqrt(2)", "--length", "6"});
  CHECK(has(r.out, "kneading: RLRRRR"));

  CHECK(run({"tent", "orbit", "--a", "sqrt(2"}).code == kExitInputError);
  CHECK(run({"tent", "orbit", "--a", "3"}).code == kExitInputError);
}

TEST_CASE("tent cycle") {
  auto r = run({"tent", "cycle", "--a", "13/10", "--n", "2"});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "level n=2: PASS"));
  CHECK(has(r.out, "J0 = [91/200, 10621/20000]"));
  CHECK(has(r.out, "J1 = [1183/2000, 13/20]"));

  r = run({"tent", "cycle", "--a", "2", "--n", "2"});
  CHECK(r.code == kExitCounterexample);
  CHECK(has(r.out, "FAIL"));

  r = run({"tent", "cycle", "--a", "sqrt(2)", "--n", "2", "--transient", "4"});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "2-sqrt(2)"));

  CHECK(run({"tent", "cycle", "--a", "13/10"}).code == kExitInputError);
  CHECK(run({"tent", "cycle", "--a", "13/10", "--n", "2", "--primes", "2"}).code ==
        kExitInputError);
}

TEST_CASE("tent sweep") {
  const auto r = run({"tent", "sweep", "--from", "1.05", "--to", "1.40", "--step", "1/100", "--n", "2"});
  CHECK(r.code == kExitOk);
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 2 + 36);
  CHECK(rows[0].rfind("# radices=2", 0) == 0);
  CHECK(rows[1] == "a,level_certified,cycle_lengths,status");
  CHECK(rows[2].rfind("21/20,", 0) == 0);
  CHECK(rows.back().rfind("7/5,", 0) == 0);
  CHECK(has(r.out, "13/10,1,2,PASS"));
  CHECK(r.out == run({"tent", "sweep", "--from", "1.05", "--to", "1.40", "--step", "1/100", "--n", "2"}).out);
  CHECK(run({"tent", "sweep", "--from", "1", "--to", "2", "--step", "0", "--n", "2"}).code ==
        kExitInputError);
}
