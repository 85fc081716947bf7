#pragma once

// Cyclic clopen-cover towers and the (semi-)conjugacies they induce.
//
// A tower level i is a partition P_i = (X_{i,0}, ..., X_{i,m_i - 1}) of the
// states with m_i = j_1 * ... * j_i, such that every label map sends X_{i,j}
// onto X_{i,j+1 mod m_i}, and P_{i+1} refines P_i with X_{i+1,j} inside
// X_{i, j mod m_i}. Reading off the block index at every level gives the
// residue of a point of Delta_alpha truncated at the tower depth.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "addm/finite_ifs.hpp"
#include "addm/odometer.hpp"

namespace addm {

class CyclicTower {
 public:
  /// Level 0: a single block, all of X.
  CyclicTower() = default;
  /// Structural constructor; use validate_tower to check it against a system.
  CyclicTower(std::vector<Radix> radices, std::vector<std::vector<StateSet>> levels);

  std::size_t depth() const { return radices_.size(); }
  const std::vector<Radix>& radices() const { return radices_; }
  /// Blocks of level i, 1 <= i <= depth(), in cyclic order.
  const std::vector<StateSet>& level(std::size_t i) const { return levels_.at(i - 1); }
  /// m_i; m_0 = 1.
  std::uint64_t block_count(std::size_t i) const;
  /// (j_1, ..., j_k) as a truncated base; requires depth() >= 1.
  BaseSequence base() const;

  CyclicTower extended(Radix radix, std::vector<StateSet> blocks) const;

  friend bool operator==(const CyclicTower&, const CyclicTower&) = default;

 private:
  std::vector<Radix> radices_;
  std::vector<std::vector<StateSet>> levels_;
};

/// Reason the tower fails for `ifs`, or nullopt when it is valid.
std::optional<std::string> tower_violation(const FiniteIFS& ifs, const CyclicTower& tower);
/// Throws InputError with the violation.
void validate_tower(const FiniteIFS& ifs, const CyclicTower& tower);

struct ModNColoring {
  std::size_t n = 0;
  std::vector<std::size_t> color;

  /// M_i = color^{-1}(i), i = 0..n-1.
  std::vector<StateSet> fibers() const;
};

/// Edge whose constraint color(f(x)) = color(x) + 1 could not be met.
struct ColoringConflict {
  std::size_t label = 0;
  State from = 0;
  State to = 0;
  std::size_t required = 0;
  std::size_t assigned = 0;
};

struct ColoringResult {
  std::optional<ModNColoring> coloring;
  std::optional<ColoringConflict> conflict;

  explicit operator bool() const { return coloring.has_value(); }
};

/// Colouring g: X -> Z/n with g(f_l(x)) = g(x) + 1 for every label, anchored
/// at g(0) = 0. Throws InputError if n < 2 or F is not minimal.
ColoringResult find_mod_n_coloring(const FiniteIFS& ifs, std::size_t n);

struct TowerExtension {
  Radix prime = 0;
  CyclicTower tower;
};

/// One canonical extension per prime p such that a cyclically permuted level
/// with p times as many blocks refines the top level. Ascending in p.
std::vector<TowerExtension> extend_tower(const FiniteIFS& ifs, const CyclicTower& tower);

/// Greedy tower: repeatedly extend, taking the first available prime in
/// `preference` and otherwise the smallest. Throws InputError if F is not minimal.
CyclicTower max_tower(const FiniteIFS& ifs, const std::vector<Radix>& preference = {});

/// Tower cylinder digits of every state.
class FactorMap {
 public:
  FactorMap(std::vector<Radix> radices, std::vector<std::vector<Radix>> digits);

  std::size_t depth() const { return radices_.size(); }
  const std::vector<Radix>& radices() const { return radices_; }
  std::size_t num_states() const { return digits_.size(); }
  const std::vector<Radix>& digits(State x) const { return digits_.at(x); }
  /// Requires depth() >= 1.
  OdometerPoint point(State x) const;
  /// Residue in Z/m_k; 0 at depth 0.
  mpz_class residue(State x) const;

  bool is_injective() const;
  bool is_surjective() const;

  FactorMap with_digits(State x, std::vector<Radix> digits) const;

 private:
  std::vector<Radix> radices_;
  std::vector<std::vector<Radix>> digits_;
};

/// pi: state -> cylinder digits. Throws InputError on an invalid tower.
FactorMap build_factor_map(const FiniteIFS& ifs, const CyclicTower& tower);

struct EquivarianceResult {
  bool ok = true;
  /// Per label: pi(f_l(x)) = successor(pi(x)) for every x.
  std::vector<bool> per_label;
  /// First failing (label, state), if any.
  std::optional<std::pair<std::size_t, State>> witness;
};

EquivarianceResult verify_equivariance(const FiniteIFS& ifs, const FactorMap& pi);

struct AlphaReport {
  /// Prime factors of the tower radices, in tower order.
  std::vector<Radix> primes;
  std::map<std::uint64_t, unsigned> tower_multiplicity;
  /// N(p) computed independently from NM(F).
  std::map<std::uint64_t, unsigned> nm_multiplicity;
  NMSet nm;
};

/// Throws ConsistencyError when the tower's prime counts differ from N(p).
AlphaReport tower_to_alpha(const FiniteIFS& ifs, const CyclicTower& tower);

/// Every point of `rr` has a singleton fiber under pi.
bool injectivity_on_regularly_recurrent(const FiniteIFS& ifs, const FactorMap& pi,
                                        const StateSet& rr);

}  // namespace addm
