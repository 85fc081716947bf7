#pragma once

// Structured reports: ordered (section, key, value) rows rendered either as
// human-readable text or as CSV. Row order is insertion order, so identical
// inputs give byte-identical output.

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "addm/conjugacy.hpp"
#include "addm/finite_ifs.hpp"

namespace addm {

class Report {
 public:
  void add(std::string section, std::string key, std::string value);

  std::string text() const;
  /// Header `section,key,value`; fields quoted when needed.
  std::string csv() const;

 private:
  struct Row {
    std::string section;
    std::string key;
    std::string value;
  };
  std::vector<Row> rows_;
};

std::string csv_field(const std::string& value);

/// `{0 2 4}`
std::string format_set(const StateSet& set);
/// `[0] {0 2 4} [1] {1 3 5}`
std::string format_blocks(const std::vector<StateSet>& blocks);
std::string format_list(const std::vector<std::size_t>& values, const char* sep = " ");

struct AnalyzeOptions {
  std::string source;
  std::size_t nm_bound = 0;  // 0: number of states
  std::size_t horizon = 0;   // 0: default horizon
  std::optional<mpq_class> delta;
  std::optional<mpq_class> epsilon;
};

/// Horizon used when none is given: enough for every state space up to a few
/// hundred states, since R_n(x) sequences repeat well before it.
inline constexpr std::size_t kDefaultHorizon = 4096;

struct AnalyzeResult {
  Report report;
  bool minimal = false;
  bool equivariance_ok = true;
};

/// Minimality, NM(F), the covers C_n, the greedy tower, its factor map and the
/// equivariance check, and the recurrence sets.
AnalyzeResult analyze_ifs(const FiniteIFS& ifs, const AnalyzeOptions& options);

/// Tower levels, pi digit table and one PASS/FAIL line per label.
void add_certificate(Report& report, const FiniteIFS& ifs, const CyclicTower& tower,
                     const FactorMap& pi, const EquivarianceResult& eq);

}  // namespace addm
