#include "addm/report.hpp"

#include <sstream>

#include "addm/errors.hpp"

namespace addm {

void Report::add(std::string section, std::string key, std::string value) {
  rows_.push_back({std::move(section), std::move(key), std::move(value)});
}

std::string Report::text() const {
  std::ostringstream os;
  const std::string* current = nullptr;
  for (const auto& row : rows_) {
    if (!current || *current != row.section) {
      if (current) os << '\n';
      os << "== " << row.section << " ==\n";
      current = &row.section;
    }
    os << row.key << ": " << row.value << '\n';
  }
  return os.str();
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Report::csv() const {
  std::ostringstream os;
  os << "section,key,value\n";
  for (const auto& row : rows_)
    os << csv_field(row.section) << ',' << csv_field(row.key) << ',' << csv_field(row.value) << '\n';
  return os.str();
}

std::string format_set(const StateSet& set) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) out += (i ? " " : "") + std::to_string(set[i]);
  return out + "}";
}

std::string format_blocks(const std::vector<StateSet>& blocks) {
  std::string out;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    out += (b ? " [" : "[") + std::to_string(b) + "] " + format_set(blocks[b]);
  return out;
}

std::string format_list(const std::vector<std::size_t>& values, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? sep : "") + std::to_string(values[i]);
  return out;
}

namespace {

std::string format_multiplicity(const std::map<std::uint64_t, unsigned>& m) {
  if (m.empty()) return "(none)";
  std::string out;
  for (const auto& [p, e] : m) out += (out.empty() ? "" : " ") + ("N(" + std::to_string(p) + ")=" + std::to_string(e));
  return out;
}

}  // namespace

void add_certificate(Report& report, const FiniteIFS& ifs, const CyclicTower& tower,
                     const FactorMap& pi, const EquivarianceResult& eq) {
  std::vector<std::size_t> radices(tower.radices().begin(), tower.radices().end());
  std::vector<std::size_t> counts;
  for (std::size_t i = 1; i <= tower.depth(); ++i) counts.push_back(tower.block_count(i));
  report.add("tower", "radices", tower.depth() ? format_list(radices, ",") : "(trivial)");
  report.add("tower", "blocks per level", tower.depth() ? format_list(counts, ",") : "1");
  for (std::size_t i = 1; i <= tower.depth(); ++i)
    report.add("tower", "level " + std::to_string(i), format_blocks(tower.level(i)));

  for (State x = 0; x < ifs.num_states(); ++x) {
    std::string digits;
    for (std::size_t i = 0; i < pi.depth(); ++i)
      digits += (i ? "," : "") + std::to_string(pi.digits(x)[i]);
    report.add("factor map", "pi(" + std::to_string(x) + ")", pi.depth() ? digits : "(point)");
  }
  report.add("factor map", "injective", pi.is_injective() ? "yes" : "no");
  report.add("factor map", "surjective", pi.is_surjective() ? "yes" : "no");

  for (std::size_t l = 0; l < ifs.num_labels(); ++l)
    report.add("equivariance", "label " + ifs.labels()[l], eq.per_label[l] ? "PASS" : "FAIL");
  if (eq.witness) {
    const auto [l, x] = *eq.witness;
    report.add("equivariance", "counterexample",
               "label " + ifs.labels()[l] + " at state " + std::to_string(x));
  }
}

AnalyzeResult analyze_ifs(const FiniteIFS& ifs, const AnalyzeOptions& options) {
  AnalyzeResult result;
  Report& r = result.report;
  const std::size_t bound = options.nm_bound ? options.nm_bound : ifs.num_states();
  const std::size_t horizon = options.horizon ? options.horizon : kDefaultHorizon;

  r.add("input", "source", options.source);
  r.add("input", "states", std::to_string(ifs.num_states()));
  std::string labels;
  for (const auto& l : ifs.labels()) labels += (labels.empty() ? "" : " ") + l;
  r.add("input", "labels", labels);
  r.add("input", "metric", ifs.metric() ? "explicit" : "discrete");
  r.add("input", "nm bound", std::to_string(bound));
  r.add("input", "recurrence horizon", std::to_string(horizon));

  result.minimal = is_minimal(ifs);
  r.add("minimality", "verdict", result.minimal ? "minimal" : "not minimal");

  const StateSet rr = regularly_recurrent_points(ifs, horizon);

  if (result.minimal) {
    const NMSet nm = nm_set(ifs, bound);
    r.add("nm", "members", format_list(nm.members));
    r.add("nm", "prime multiplicity", format_multiplicity(nm_prime_multiplicity(nm)));
    for (std::size_t n : nm.members) {
      try {
        r.add("covers", "C_" + std::to_string(n), format_blocks(canonical_cover(ifs, n).sets));
      } catch (const InputError& e) {
        r.add("covers", "C_" + std::to_string(n), std::string("none (") + e.what() + ")");
      }
    }

    const CyclicTower tower = max_tower(ifs);
    const FactorMap pi = build_factor_map(ifs, tower);
    const EquivarianceResult eq = verify_equivariance(ifs, pi);
    result.equivariance_ok = eq.ok;
    add_certificate(r, ifs, tower, pi, eq);

    try {
      const AlphaReport alpha = tower_to_alpha(ifs, tower);
      std::vector<std::size_t> primes(alpha.primes.begin(), alpha.primes.end());
      r.add("alpha", "primes", primes.empty() ? "(none)" : format_list(primes, ","));
      r.add("alpha", "tower multiplicity", format_multiplicity(alpha.tower_multiplicity));
      r.add("alpha", "nm multiplicity", format_multiplicity(alpha.nm_multiplicity));
      r.add("alpha", "agreement", "yes");
    } catch (const ConsistencyError& e) {
      r.add("alpha", "agreement", std::string("no (") + e.what() + ")");
    }
    r.add("recurrence", "pi injective on regularly recurrent",
          injectivity_on_regularly_recurrent(ifs, pi, rr) ? "yes" : "no");
  }

  r.add("recurrence", "regularly recurrent", format_set(rr));
  r.add("recurrence", "periodic", format_set(periodic_points(ifs)));

  if (ifs.num_labels() == 1) {
    if (options.delta && options.epsilon)
      r.add("single map", "shadowing (delta=" + options.delta->get_str() +
                              ", epsilon=" + options.epsilon->get_str() + ")",
            has_shadowing(ifs, *options.delta, *options.epsilon) ? "yes" : "no");
    if (options.delta)
      r.add("single map", "sensitive (delta=" + options.delta->get_str() + ")",
            is_sensitive(ifs, *options.delta) ? "yes" : "no");
  }
  return result;
}

}  // namespace addm
