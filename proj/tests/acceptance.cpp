// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "addm/cli.hpp"
#include "addm/conjugacy.hpp"
#include "addm/errors.hpp"
#include "addm/finite_ifs.hpp"
#include "addm/ifs_io.hpp"
#include "addm/interval_dynamics.hpp"
#include "addm/odometer.hpp"
#include "addm/primes.hpp"
#include "oracles.hpp"

using namespace addm;

namespace {

struct Check {
  bool ok = true;
  std::string first_failure;
  std::size_t count = 0;

  void operator()(bool cond, const std::string& what) {
    ++count;
    if (!cond && ok) {
      ok = false;
      first_failure = what;
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<void(Check&)> body;
};

std::string str(const StateSet& s) {
  std::string out = "{";
  for (State x : s) out += (out.size() > 1 ? " " : "") + std::to_string(x);
  return out + "}";
}

// ---- 1 ----------------------------------------------------------------

void odometer_algebra(Check& check) {
  for (const std::vector<Radix>& radices :
       {std::vector<Radix>{2, 2, 2, 2}, {2, 3, 2}, {5, 2}}) {
    const auto base = BaseSequence::truncated(radices);
    const std::size_t depth = radices.size();
    std::uint64_t m = 1;
    for (auto r : radices) m *= r;
    const std::string tag = base.to_string();
    std::vector<OdometerPoint> pts;
    for (std::uint64_t i = 0; i < m; ++i) {
      pts.push_back(from_residue(base, depth, i));
      check(as_residue(pts.back()) == i, tag + ": residue round trip at " + std::to_string(i));
      // Digits from independent mixed-radix expansion.
      const auto d = oracle::digits_of(i, {radices.begin(), radices.end()});
      for (std::size_t k = 0; k < depth; ++k)
        check(pts.back().digit(k) == d[k], tag + ": digit mismatch at " + std::to_string(i));
    }
    for (std::uint64_t i = 0; i < m; ++i) {
      check(as_residue(successor(pts[i])) == (i + 1) % m,
            tag + ": successor at " + std::to_string(i));
      for (std::uint64_t j = 0; j < m; ++j) {
        const auto& x = pts[i];
        const auto& y = pts[j];
        check(as_residue(add(x, y)) == (i + j) % m,
              tag + ": add " + std::to_string(i) + "+" + std::to_string(j));
        const mpq_class dxy = distance(x, y);
        check(dxy >= 0, tag + ": negative distance");
        check((dxy == 0) == (i == j), tag + ": identity of indiscernibles");
        check(dxy == distance(y, x), tag + ": symmetry");
        // Independent formula: sum of 2^-k over differing digits.
        mpq_class expected = 0;
        const auto di = oracle::digits_of(i, {radices.begin(), radices.end()});
        const auto dj = oracle::digits_of(j, {radices.begin(), radices.end()});
        for (std::size_t k = 0; k < depth; ++k)
          if (di[k] != dj[k]) expected += mpq_class(1, 1u << (k + 1));
        check(dxy == expected, tag + ": distance formula");
        for (std::uint64_t l = 0; l < m; ++l)
          check(distance(x, pts[l]) <= dxy + distance(y, pts[l]), tag + ": triangle inequality");
      }
    }
  }
}

// ---- 2 ----------------------------------------------------------------

void cyclic_round_trip(Check& check) {
  for (std::size_t m = 2; m <= 12; ++m) {
    const std::string tag = "Z" + std::to_string(m);
    const auto f = oracle::cycle_system(m, {1});
    const auto tower = max_tower(f);
    std::uint64_t prod = 1;
    for (auto r : tower.radices()) prod *= r;
    check(prod == m, tag + ": product of tower primes");
    for (auto r : tower.radices()) check(is_prime(r), tag + ": non-prime radix");
    const auto pi = build_factor_map(f, tower);
    check(pi.is_injective() && pi.is_surjective(), tag + ": factor map not bijective");
    check(verify_equivariance(f, pi).ok, tag + ": equivariance");
    for (State x = 0; x < m; ++x)
      for (std::size_t level = 0; level < pi.depth(); ++level)
        for (Radix d = 0; d < tower.radices()[level]; ++d) {
          if (d == pi.digits(x)[level]) continue;
          auto digits = pi.digits(x);
          digits[level] = d;
          check(!verify_equivariance(f, pi.with_digits(x, digits)).ok,
                tag + ": corruption at state " + std::to_string(x) + " level " +
                    std::to_string(level) + " undetected");
        }
  }
}

// ---- 3 and 4 ----------------------------------------------------------

const std::vector<FiniteIFS>& minimal_family() {
  static const std::vector<FiniteIFS> family = [] {
    std::vector<FiniteIFS> out;
    for (std::size_t m = 1; m <= 8; ++m)
      for (auto& f : oracle::all_single_cycles(m)) out.push_back(std::move(f));
    for (auto& f : oracle::random_two_label(120, 2024)) out.push_back(std::move(f));
    return out;
  }();
  return family;
}

void coloring_equivalence(Check& check) {
  std::size_t singles = 0, pairs = 0;
  for (const auto& f : minimal_family()) {
    (f.num_labels() == 1 ? singles : pairs) += 1;
    check(is_minimal(f), "family member not minimal");
    const auto nm = nm_set(f, f.num_states());
    if (f.num_labels() == 2)
      check(nm.members == oracle::nm_set(f, f.num_states()), "NM disagrees with subset oracle");
    for (std::size_t n = 2; n <= f.num_states(); ++n) {
      const auto result = find_mod_n_coloring(f, n);
      const bool member = nm.contains(n);
      check(bool(result) == member, "coloring exists iff n in NM fails at n=" + std::to_string(n) +
                                        ", |X|=" + std::to_string(f.num_states()));
      const auto expected = oracle::coloring(f, n);
      check(bool(result) == expected.has_value(), "coloring disagrees with path oracle");
      if (result && member) {
        const auto fibers = result.coloring->fibers();
        const auto cover = canonical_cover(f, n).sets;
        check(std::set<StateSet>(fibers.begin(), fibers.end()) ==
                  std::set<StateSet>(cover.begin(), cover.end()),
              "fibers differ from C_n at n=" + std::to_string(n));
      }
    }
  }
  check(singles == 1 + 1 + 2 + 6 + 24 + 120 + 720 + 5040, "single-cycle family incomplete");
  check(pairs >= 100, "fewer than 100 two-label systems");
}

void cover_structure(Check& check) {
  for (const auto& f : minimal_family()) {
    const std::size_t size = f.num_states();
    const auto nm = nm_set(f, size);
    std::map<std::size_t, std::vector<StateSet>> covers;
    for (std::size_t n : nm.members) covers[n] = canonical_cover(f, n).sets;
    for (std::size_t l : nm.members) {
      for (std::size_t n = 1; n <= l; ++n) {
        if (l % n) continue;
        check(nm.contains(n), "NM not closed under divisors");
        if (!nm.contains(n)) continue;
        for (const auto& block : covers[l]) {
          bool inside = false;
          for (const auto& big : covers[n])
            inside |= std::includes(big.begin(), big.end(), block.begin(), block.end());
          check(inside, "C_" + std::to_string(l) + " block " + str(block) + " not inside C_" +
                            std::to_string(n));
        }
      }
    }
    for (std::size_t p : nm.members)
      for (std::size_t q : nm.members)
        if (p != q && is_prime(p) && is_prime(q) && p * q <= size)
          check(nm.contains(p * q), "prime product " + std::to_string(p * q) + " missing from NM");
  }
}

// ---- 5 ----------------------------------------------------------------

void finite_factor(Check& check) {
  for (const auto& [name, f] :
       {std::pair{"Z12 (+1)", oracle::cycle_system(12, {1})},
        std::pair{"Z6 (+1, +3)", oracle::cycle_system(6, {1, 3})}}) {
    const std::string tag = name;
    const auto pi = build_factor_map(f, max_tower(f));
    check(pi.depth() >= 1, tag + ": trivial tower");
    // Direct check of pi o f_l = successor o pi, independent of verify_equivariance.
    for (std::size_t l = 0; l < f.num_labels(); ++l)
      for (State x = 0; x < f.num_states(); ++x)
        check(pi.point(f.map(l)(x)) == successor(pi.point(x)), tag + ": equivariance");
    check(verify_equivariance(f, pi).ok, tag + ": verify_equivariance");
    const auto rr = regularly_recurrent_points(f, 64);
    check(rr == oracle::regularly_recurrent(f, 12), tag + ": regularly recurrent set");
    check(injectivity_on_regularly_recurrent(f, pi, rr), tag + ": injectivity");
    for (State x : rr)
      for (State y : rr)
        if (x != y) check(!(pi.point(x) == pi.point(y)), tag + ": pi collides on rr");
  }
}

// ---- 6 ----------------------------------------------------------------

void odometer_invariant(Check& check) {
  const std::vector<std::pair<const char*, const char*>> pairs = {
      {";2,3", ";6,6"},   {";2", ";3"},     {";2", ";4"},     {";2", ";2,4"},
      {";6", ";2,3"},     {";6", ";2"},     {"3;2", ";2"},    {"3;2", "3;4"},
      {"9;6", "3;6"},     {"5;3", ";3"},    {"5;3", "5,5;3"}, {"4;3", "2;3"},
      {";2,2,3", ";12"},  {";2,3", ";2,9"}, {";10", ";2,5"},  {"7;2", "7;8"},
      {";5", ";25"},      {"2,3;5", "6;5"}, {"2,2;3", "4;9"}, {";6", ";12"}};
  std::size_t positives = 0;
  for (const auto& [a, b] : pairs) {
    const auto b1 = BaseSequence::parse(a);
    const auto b2 = BaseSequence::parse(b);
    const bool fast = odometers_conjugate(b1, b2);
    const bool slow = oracle::towers_match([&](std::size_t i) { return b1.radix(i); },
                                           [&](std::size_t i) { return b2.radix(i); }, 24, 96);
    check(fast == slow, std::string(a) + " vs " + b);
    positives += fast;
  }
  check(odometers_conjugate(BaseSequence::parse(";2,3"), BaseSequence::parse(";6")),
        "(2,3,...) vs (6,...) should be conjugate");
  check(!odometers_conjugate(BaseSequence::parse(";2"), BaseSequence::parse(";3")),
        "dyadic vs triadic should not be conjugate");
  check(positives > 0 && positives < pairs.size(), "pair list lacks both outcomes");
}

// ---- 7 ----------------------------------------------------------------

void tent_detectors(Check& check) {
  const TentParam a13(QuadSurd(mpq_class(13, 10)));
  const auto c = detect_interval_cycle(a13, 2, 0, 64);
  check(c.status == CycleStatus::Certified, "13/10 n=2 not certified");
  if (c.hulls.size() == 2) {
    check(!c.hulls[0].intersects(c.hulls[1]), "13/10 hulls intersect");
    for (std::size_t j = 0; j < 2; ++j)
      check(c.hulls[(j + 1) % 2].contains(tent_image(a13, c.hulls[j])), "13/10 hull not mapped");
    // Endpoints are exact orbit points, recomputed with plain rationals.
    const mpq_class a(13, 10), half(1, 2);
    mpq_class x = half;
    std::vector<mpq_class> lo(2, 2), hi(2, -1);
    for (std::size_t k = 0; k < 64; ++k) {
      lo[k % 2] = std::min(lo[k % 2], x);
      hi[k % 2] = std::max(hi[k % 2], x);
      x = x < half ? mpq_class(a * x) : mpq_class(a - a * x);
    }
    for (std::size_t j = 0; j < 2; ++j) {
      check(c.hulls[j].lo.is_rational() && c.hulls[j].lo.rational_part() == lo[j] &&
                c.hulls[j].hi.rational_part() == hi[j],
            "13/10 hull endpoints differ from rational oracle");
    }
  }
  check(detect_interval_cycle(TentParam(2), 2, 0, 64).status == CycleStatus::Absent,
        "a=2 should fail n=2");
  const QuadSurd r2 = QuadSurd::sqrt(2);
  const auto orb = critical_orbit(TentParam(r2), 5);
  bool hit = false;
  for (std::size_t k = 0; k < orb.points.size() && k <= 5; ++k) hit |= orb.points[k] == 2 - r2;
  check(hit, "sqrt(2): 2-sqrt(2) not reached within 5 iterates");
  check(tent_eval(TentParam(r2), 2 - r2) == 2 - r2, "2-sqrt(2) not fixed");
  check(orb.status == OrbitStatus::ExactCycle && orb.period == 1, "sqrt(2): fixed point not detected");
}

// ---- 8 ----------------------------------------------------------------

std::vector<FiniteIFS> all_single_maps(std::size_t m) {
  std::vector<FiniteIFS> out;
  std::vector<State> t(m, 0);
  while (true) {
    out.push_back(FiniteIFS::from_tables({{"f", t}}));
    std::size_t i = 0;
    while (i < m && ++t[i] == m) t[i++] = 0;
    if (i == m) break;
  }
  return out;
}

void discrete_edge_contracts(Check& check) {
  const std::vector<mpq_class> deltas = {0, mpq_class(1, 3), mpq_class(1, 2), mpq_class(99, 100)};
  const std::vector<mpq_class> epsilons = {mpq_class(1, 100), mpq_class(1, 2), 1, 2};
  for (std::size_t m = 1; m <= 4; ++m)
    for (const auto& f : all_single_maps(m)) {
      for (const auto& d : deltas)
        for (const auto& e : epsilons)
          check(has_shadowing(f, d, e), "discrete shadowing fails for |X|=" + std::to_string(m));
      for (const mpq_class d : {mpq_class(0), mpq_class(1, 2), mpq_class(1), mpq_class(5)})
        check(!is_sensitive(f, d), "discrete system reported sensitive");
    }
}

// ---- 9 ----------------------------------------------------------------

std::string run_analyze(const std::string& path, const std::string& format) {
  std::vector<std::string> args = {"addm", "ifs", "analyze", path, "--format", format};
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return out.str() + err.str();
}

void determinism(Check& check) {
  const auto dir = std::filesystem::temp_directory_path() / "addm_acceptance";
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (const char* name : {"z6.ifs", "z6_two.ifs", "z4_plus2.ifs"})
    files.push_back(std::string(ADDM_TEST_DATA) + "/" + name);
  const auto family = oracle::random_two_label(10, 77);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto path = dir / ("random" + std::to_string(i) + ".ifs");
    std::ofstream(path) << format_ifs(family[i]);
    files.push_back(path.string());
  }
  for (const auto& file : files)
    for (const char* format : {"text", "csv"}) {
      const auto first = run_analyze(file, format);
      const auto second = run_analyze(file, format);
      check(!first.empty() && first == second, file + " (" + format + ") differs between runs");
    }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "odometer algebra", 1.0, odometer_algebra},
      {2, "cyclic round trip", 5.0, cyclic_round_trip},
      {3, "coloring equivalence", 30.0, coloring_equivalence},
      {4, "cover refinement and NM closure", 30.0, cover_structure},
      {5, "finite factor map", 1.0, finite_factor},
      {6, "odometer conjugacy invariant", 1.0, odometer_invariant},
      {7, "tent detectors", 1.0, tent_detectors},
      {8, "discrete shadowing and sensitivity", 1.0, discrete_edge_contracts},
      {9, "analyze determinism", 10.0, determinism},
  };
  // Build the shared family outside the timed regions.
  minimal_family();

  int failures = 0;
  for (const auto& c : criteria) {
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(check);
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = check.ok && in_time;
    failures += !pass;
    std::printf("criterion %d %-36s %s  %zu checks  %.3f s (limit %.0f s)", c.id, c.title.c_str(),
                pass ? "PASS" : "FAIL", check.count, secs, c.limit_seconds);
    if (!check.ok) std::printf("  first failure: %s", check.first_failure.c_str());
    if (!in_time) std::printf("  over time limit");
    std::printf("\n");
  }
  return failures == 0 ? 0 : 1;
}
