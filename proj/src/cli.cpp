#include "addm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "addm/conjugacy.hpp"
#include "addm/errors.hpp"
#include "addm/ifs_io.hpp"
#include "addm/interval_dynamics.hpp"
#include "addm/odometer.hpp"
#include "addm/report.hpp"

namespace addm {
namespace {

void emit(const std::string& text, const std::string& output_path, std::ostream& out) {
  if (output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(output_path, std::ios::binary);
  if (!file) throw InputError("cannot write output file '" + output_path + "'");
  file << text;
  if (!file) throw InputError("failed writing output file '" + output_path + "'");
}

std::vector<Radix> parse_list(const std::string& text, const char* what) {
  try {
    return parse_digits(text);
  } catch (const ParseError& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

std::vector<Radix> parse_radix_list(const std::string& text, const char* what) {
  std::vector<Radix> radices = parse_list(text, what);
  if (radices.empty()) throw InputError(std::string(what) + ": expected at least one value");
  for (Radix r : radices)
    if (r < 2) throw InputError(std::string(what) + ": values must be at least 2");
  return radices;
}

OdometerPoint make_point(const BaseSequence& base, const std::string& text, const char* what) {
  return OdometerPoint(base, parse_list(text, what));
}

std::string approx(const QuadSurd& x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << x.to_double();
  return os.str();
}

std::string digit_string(const std::vector<Radix>& digits) {
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) out += (i ? "," : "") + std::to_string(digits[i]);
  return out;
}

// odometer

struct OdometerArgs {
  std::string base, p, q, point, base1, base2;
};

int odometer_add(const OdometerArgs& a, std::ostream& out) {
  const BaseSequence base = BaseSequence::parse(a.base);
  out << add(make_point(base, a.p, "--p"), make_point(base, a.q, "--q")).to_string() << '\n';
  return kExitOk;
}

int odometer_succ(const OdometerArgs& a, std::ostream& out) {
  const BaseSequence base = BaseSequence::parse(a.base);
  out << successor(make_point(base, a.point, "--point")).to_string() << '\n';
  return kExitOk;
}

int odometer_dist(const OdometerArgs& a, std::ostream& out) {
  const BaseSequence base = BaseSequence::parse(a.base);
  out << distance(make_point(base, a.p, "--p"), make_point(base, a.q, "--q")).get_str() << '\n';
  return kExitOk;
}

int odometer_conjugate(const OdometerArgs& a, std::ostream& out) {
  const BaseSequence b1 = BaseSequence::parse(a.base1);
  const BaseSequence b2 = BaseSequence::parse(a.base2);
  for (const BaseSequence* b : {&b1, &b2})
    if (!b->is_complete())
      throw InputError("base '" + b->to_string() + "' has no periodic tail; conjugacy needs a full sequence");
  out << "base1: " << b1.to_string() << '\n';
  out << "M(base1): " << prime_multiplicity(b1).to_string() << '\n';
  out << "base2: " << b2.to_string() << '\n';
  out << "M(base2): " << prime_multiplicity(b2).to_string() << '\n';
  out << "conjugate: " << (odometers_conjugate(b1, b2) ? "yes" : "no") << '\n';
  return kExitOk;
}

// ifs

struct IfsArgs {
  std::string file;
  std::size_t bound = 0;
  std::size_t horizon = 0;
  std::string output;
  std::string format = "text";
  std::string delta, epsilon;
  std::string primes;
  std::string assignment;
};

std::string render(const Report& report, const IfsArgs& a) {
  return a.format == "csv" ? report.csv() : report.text();
}

int ifs_analyze(const IfsArgs& a, std::ostream& out) {
  const FiniteIFS ifs = load_ifs(a.file);
  AnalyzeOptions options;
  options.source = a.file;
  options.nm_bound = a.bound;
  options.horizon = a.horizon;
  if (!a.delta.empty()) options.delta = parse_rational(a.delta);
  if (!a.epsilon.empty()) {
    if (!options.delta) throw InputError("--epsilon requires --delta");
    options.epsilon = parse_rational(a.epsilon);
  }
  if (options.delta && ifs.num_labels() != 1)
    throw InputError("--delta and --epsilon apply to single-map systems only");
  const AnalyzeResult result = analyze_ifs(ifs, options);
  emit(render(result.report, a), a.output, out);
  return result.equivariance_ok ? kExitOk : kExitCounterexample;
}

// Lines `state: d1,d2,...`; `#` starts a comment.
FactorMap load_assignment(const std::string& path, const std::vector<Radix>& radices,
                          std::size_t num_states) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open assignment file '" + path + "'");
  std::vector<std::optional<std::vector<Radix>>> digits(num_states);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("expected 'state: digits'", line_no, 1);
    std::vector<Radix> head;
    try {
      head = parse_digits(line.substr(0, colon));
    } catch (const ParseError& e) {
      throw ParseError(e.message(), line_no, e.column());
    }
    if (head.size() != 1) throw ParseError("expected a single state index", line_no, 1);
    if (head[0] >= num_states) throw ParseError("state out of range", line_no, 1);
    const auto x = static_cast<State>(head[0]);
    if (digits[x]) throw ParseError("state assigned twice", line_no, 1);
    std::vector<Radix> d;
    try {
      d = parse_digits(line.substr(colon + 1));
    } catch (const ParseError& e) {
      throw ParseError(e.message(), line_no, colon + 1 + e.column());
    }
    if (d.size() != radices.size())
      throw ParseError("expected " + std::to_string(radices.size()) + " digits", line_no, colon + 2);
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] >= radices[i]) throw ParseError("digit exceeds its radix", line_no, colon + 2);
    digits[x] = std::move(d);
  }
  std::vector<std::vector<Radix>> table;
  for (State x = 0; x < num_states; ++x) {
    if (!digits[x]) throw InputError("assignment file gives no digits for state " + std::to_string(x));
    table.push_back(*digits[x]);
  }
  return FactorMap(radices, std::move(table));
}

CyclicTower forced_tower(const FiniteIFS& ifs, const std::vector<Radix>& radices,
                         std::string& failure) {
  CyclicTower tower;
  for (Radix p : radices) {
    const auto extensions = extend_tower(ifs, tower);
    auto it = std::find_if(extensions.begin(), extensions.end(),
                           [p](const TowerExtension& e) { return e.prime == p; });
    if (it == extensions.end()) {
      failure = "no cyclically permuted level with " +
                std::to_string(tower.block_count(tower.depth()) * p) + " blocks refines level " +
                std::to_string(tower.depth());
      return tower;
    }
    tower = it->tower;
  }
  return tower;
}

int ifs_verify(const IfsArgs& a, std::ostream& out) {
  const FiniteIFS ifs = load_ifs(a.file);
  Report report;
  report.add("input", "source", a.file);
  report.add("input", "states", std::to_string(ifs.num_states()));
  const std::vector<Radix> radices =
      a.primes.empty() ? std::vector<Radix>{} : parse_radix_list(a.primes, "--primes");

  if (!a.assignment.empty()) {
    if (radices.empty()) throw InputError("--assignment requires --primes");
    report.add("input", "assignment", a.assignment);
    const FactorMap pi = load_assignment(a.assignment, radices, ifs.num_states());
    const EquivarianceResult eq = verify_equivariance(ifs, pi);
    for (State x = 0; x < ifs.num_states(); ++x)
      report.add("factor map", "pi(" + std::to_string(x) + ")", digit_string(pi.digits(x)));
    report.add("factor map", "injective", pi.is_injective() ? "yes" : "no");
    report.add("factor map", "surjective", pi.is_surjective() ? "yes" : "no");
    for (std::size_t l = 0; l < ifs.num_labels(); ++l)
      report.add("equivariance", "label " + ifs.labels()[l], eq.per_label[l] ? "PASS" : "FAIL");
    if (eq.witness)
      report.add("equivariance", "counterexample",
                 "label " + ifs.labels()[eq.witness->first] + " at state " +
                     std::to_string(eq.witness->second));
    report.add("verdict", "result", eq.ok ? "PASS" : "FAIL");
    emit(render(report, a), a.output, out);
    return eq.ok ? kExitOk : kExitCounterexample;
  }

  if (!is_minimal(ifs)) {
    report.add("verdict", "result", "FAIL: system is not minimal, no tower exists");
    emit(render(report, a), a.output, out);
    return kExitCounterexample;
  }
  std::string failure;
  const CyclicTower tower = radices.empty() ? max_tower(ifs) : forced_tower(ifs, radices, failure);
  const FactorMap pi = build_factor_map(ifs, tower);
  const EquivarianceResult eq = verify_equivariance(ifs, pi);
  add_certificate(report, ifs, tower, pi, eq);
  const bool ok = failure.empty() && eq.ok;
  report.add("verdict", "result", ok ? std::string("PASS") : "FAIL" + (failure.empty() ? "" : ": " + failure));
  emit(render(report, a), a.output, out);
  return ok ? kExitOk : kExitCounterexample;
}

// tent

struct TentArgs {
  std::string a;
  std::string start = "1/2";
  std::size_t budget = 64;
  std::size_t length = 16;
  std::size_t n = 0;
  std::string primes;
  std::size_t transient = 0;
  std::size_t window = 64;
  std::string margin = "0";
  std::string from, to, step;
  std::string output;
};

std::vector<std::size_t> tower_radices(const TentArgs& t) {
  if (t.n && !t.primes.empty()) throw InputError("give either --n or --primes, not both");
  if (t.n) {
    if (t.n < 2) throw InputError("--n must be at least 2");
    return {t.n};
  }
  if (t.primes.empty()) throw InputError("one of --n or --primes is required");
  const auto radices = parse_radix_list(t.primes, "--primes");
  return {radices.begin(), radices.end()};
}

mpq_class parse_margin(const std::string& text) {
  const mpq_class margin = parse_rational(text);
  if (margin < 0) throw InputError("--margin must be nonnegative");
  return margin;
}

int tent_orbit(const TentArgs& t, std::ostream& out) {
  const TentParam a = TentParam::parse(t.a);
  const QuadSurd start = QuadSurd::parse(t.start);
  const OrbitSegment seg = orbit(a, start, t.budget);
  out << "a: " << a.value().to_string() << '\n';
  out << "start: " << start.to_string() << '\n';
  out << "budget: " << t.budget << '\n';
  const std::size_t shown = seg.status == OrbitStatus::ExactCycle ? t.budget : seg.points.size();
  for (std::size_t k = 0; k < shown; ++k)
    out << k << ": " << seg.at(k).to_string() << " (" << approx(seg.at(k)) << ")\n";
  out << "status: " << to_string(seg.status) << '\n';
  if (seg.status == OrbitStatus::ExactCycle)
    out << "cycle: starts at " << seg.cycle_start << ", period " << seg.period << '\n';
  if (!seg.note.empty()) out << "note: " << seg.note << '\n';
  return kExitOk;
}

int tent_kneading(const TentArgs& t, std::ostream& out) {
  const TentParam a = TentParam::parse(t.a);
  out << "a: " << a.value().to_string() << '\n';
  out << "length: " << t.length << '\n';
  out << "kneading: " << kneading_sequence(a, t.length) << '\n';
  return kExitOk;
}

void print_cycle(const IntervalCycle& c, std::ostream& out) {
  out << "level n=" << c.n << ": " << to_string(c.status) << '\n';
  for (std::size_t j = 0; j < c.hulls.size(); ++j)
    out << "  J" << j << " = " << c.hulls[j].to_string() << '\n';
  for (const auto& [i, j] : c.overlaps) out << "  overlap: J" << i << " and J" << j << '\n';
  for (std::size_t j : c.escapes)
    out << "  escape: T(J" << j << ") not inside J" << (j + 1) % c.n << '\n';
  if (c.status == CycleStatus::Trivial)
    out << "  tail orbit is periodic with period " << c.period << '\n';
}

int tent_cycle(const TentArgs& t, std::ostream& out) {
  const TentParam a = TentParam::parse(t.a);
  const auto radices = tower_radices(t);
  const mpq_class margin = parse_margin(t.margin);
  const TowerCertificate cert = tower_certificate(a, radices, t.transient, t.window, margin);
  std::ostringstream os;
  os << "a: " << a.value().to_string() << '\n';
  os << "radices: " << format_list(radices, ",") << '\n';
  os << "transient: " << t.transient << '\n';
  os << "window: " << t.window << '\n';
  os << "margin: " << margin.get_str() << '\n';
  for (const auto& level : cert.levels) print_cycle(level.cycle, os);
  os << cert.summary() << '\n';
  emit(os.str(), t.output, out);
  for (const auto& level : cert.levels)
    if (level.cycle.status == CycleStatus::Absent) return kExitCounterexample;
  return kExitOk;
}

int tent_sweep(const TentArgs& t, std::ostream& out) {
  constexpr std::size_t kMaxPoints = 100000;
  const auto radices = tower_radices(t);
  const mpq_class margin = parse_margin(t.margin);
  const QuadSurd from = QuadSurd::parse(t.from);
  const QuadSurd to = QuadSurd::parse(t.to);
  const QuadSurd step = QuadSurd::parse(t.step);
  if (step.sign() <= 0) throw InputError("--step must be positive");
  if (to < from) throw InputError("--to must not be below --from");

  std::ostringstream os;
  os << "# radices=" << format_list(radices, " ") << " transient=" << t.transient
     << " window=" << t.window << " margin=" << margin.get_str() << '\n';
  os << "a,level_certified,cycle_lengths,status\n";
  std::size_t count = 0;
  for (QuadSurd a = from; a <= to; a = a + step) {
    if (++count > kMaxPoints)
      throw InputError("sweep exceeds " + std::to_string(kMaxPoints) + " grid points");
    const TowerCertificate cert =
        tower_certificate(TentParam(a), radices, t.transient, t.window, margin);
    std::vector<std::size_t> lengths;
    for (std::size_t i = 0; i < cert.deepest_certified; ++i) lengths.push_back(cert.levels[i].n);
    const auto& decisive = cert.levels[std::min(cert.deepest_certified, cert.levels.size() - 1)];
    os << csv_field(a.to_string()) << ',' << cert.deepest_certified << ','
       << csv_field(format_list(lengths, " ")) << ',' << to_string(decisive.cycle.status) << '\n';
  }
  emit(os.str(), t.output, out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adding machines, finite IFS minimality and tent-map interval cycles", "addm"};
  app.require_subcommand(1);

  OdometerArgs od;
  IfsArgs fs;
  TentArgs tn;
  std::function<int(std::ostream&)> action;

  auto* odometer = app.add_subcommand("odometer", "Odometer arithmetic");
  odometer->require_subcommand(1);
  auto* o_add = odometer->add_subcommand("add", "Sum of two points");
  o_add->add_option("--base", od.base, "Base sequence prefix;tail")->required();
  o_add->add_option("--p", od.p, "First point")->required();
  o_add->add_option("--q", od.q, "Second point")->required();
  o_add->callback([&] { action = [&](std::ostream& o) { return odometer_add(od, o); }; });
  auto* o_succ = odometer->add_subcommand("succ", "Apply the adding machine once");
  o_succ->add_option("--base", od.base, "Base sequence prefix;tail")->required();
  o_succ->add_option("--point", od.point, "Point digits")->required();
  o_succ->callback([&] { action = [&](std::ostream& o) { return odometer_succ(od, o); }; });
  auto* o_dist = odometer->add_subcommand("dist", "Distance between two points");
  o_dist->add_option("--base", od.base, "Base sequence prefix;tail")->required();
  o_dist->add_option("--p", od.p, "First point")->required();
  o_dist->add_option("--q", od.q, "Second point")->required();
  o_dist->callback([&] { action = [&](std::ostream& o) { return odometer_dist(od, o); }; });
  auto* o_conj = odometer->add_subcommand("conjugate", "Decide conjugacy of two odometers");
  o_conj->add_option("--base1", od.base1, "First base sequence")->required();
  o_conj->add_option("--base2", od.base2, "Second base sequence")->required();
  o_conj->callback([&] { action = [&](std::ostream& o) { return odometer_conjugate(od, o); }; });

  auto* ifs = app.add_subcommand("ifs", "Finite iterated function systems");
  ifs->require_subcommand(1);
  auto* i_an = ifs->add_subcommand("analyze", "Minimality, NM set, covers, tower and factor map");
  i_an->add_option("file", fs.file, "IFS file")->required()->check(CLI::ExistingFile);
  i_an->add_option("--bound", fs.bound, "NM bound (default: number of states)")
      ->check(CLI::PositiveNumber);
  i_an->add_option("--horizon", fs.horizon, "Recurrence horizon")->check(CLI::PositiveNumber);
  i_an->add_option("--delta", fs.delta, "Pseudo-orbit and sensitivity constant (single map)");
  i_an->add_option("--epsilon", fs.epsilon, "Shadowing constant (single map)");
  i_an->add_option("--output", fs.output, "Write the report to this file");
  i_an->add_option("--format", fs.format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  i_an->callback([&] { action = [&](std::ostream& o) { return ifs_analyze(fs, o); }; });
  auto* i_ver = ifs->add_subcommand("verify", "Build or check a factor map onto an odometer");
  i_ver->add_option("file", fs.file, "IFS file")->required()->check(CLI::ExistingFile);
  i_ver->add_option("--primes", fs.primes, "Tower radices, e.g. 2,3");
  i_ver->add_option("--assignment", fs.assignment, "Digit table file (state: d1,d2,...)")
      ->check(CLI::ExistingFile);
  i_ver->add_option("--output", fs.output, "Write the report to this file");
  i_ver->add_option("--format", fs.format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  i_ver->callback([&] { action = [&](std::ostream& o) { return ifs_verify(fs, o); }; });

  auto* tent = app.add_subcommand("tent", "Symmetric tent maps");
  tent->require_subcommand(1);
  auto* t_orbit = tent->add_subcommand("orbit", "Exact orbit");
  t_orbit->add_option("--a", tn.a, "Slope, e.g. 13/10 or sqrt(2)")->required();
  t_orbit->add_option("--start", tn.start, "Initial point")->capture_default_str();
  t_orbit->add_option("--budget", tn.budget, "Number of points")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  t_orbit->callback([&] { action = [&](std::ostream& o) { return tent_orbit(tn, o); }; });
  auto* t_kn = tent->add_subcommand("kneading", "Kneading sequence of 1/2");
  t_kn->add_option("--a", tn.a, "Slope")->required();
  t_kn->add_option("--length", tn.length, "Number of symbols")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  t_kn->callback([&] { action = [&](std::ostream& o) { return tent_kneading(tn, o); }; });
  auto add_cycle_options = [&](CLI::App* sub) {
    sub->add_option("--n", tn.n, "Number of intervals");
    sub->add_option("--primes", tn.primes, "Tower radices, e.g. 2,2");
    sub->add_option("--transient", tn.transient, "Orbit points skipped")->capture_default_str();
    sub->add_option("--window", tn.window, "Orbit points grouped")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--margin", tn.margin, "Hull padding (rational)")->capture_default_str();
    sub->add_option("--output", tn.output, "Write the report to this file");
  };
  auto* t_cycle = tent->add_subcommand("cycle", "Detect a cycle of intervals");
  t_cycle->add_option("--a", tn.a, "Slope")->required();
  add_cycle_options(t_cycle);
  t_cycle->callback([&] { action = [&](std::ostream& o) { return tent_cycle(tn, o); }; });
  auto* t_sweep = tent->add_subcommand("sweep", "Cycle detection over a grid of slopes");
  t_sweep->add_option("--from", tn.from, "First slope")->required();
  t_sweep->add_option("--to", tn.to, "Last slope")->required();
  t_sweep->add_option("--step", tn.step, "Grid step")->required();
  add_cycle_options(t_sweep);
  t_sweep->callback([&] { action = [&](std::ostream& o) { return tent_sweep(tn, o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInputError;
  }

  try {
    return action(out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitInputError;
}

}  // namespace addm
