#pragma once

// Finite iterated function systems F = {X; f_l | l in Lambda} with X = {0, ..., n-1}.
//
// Words are applied first-letter-first: the word (l_1, ..., l_k) denotes
// f_{l_k} o ... o f_{l_1}. F^k is the system whose maps are all length-k
// compositions. A set M is F^n-minimal when every length-n composition maps M
// onto itself and no nonempty proper subset of M has that property.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace addm {

using State = std::uint32_t;
/// Sorted, duplicate-free list of states.
using StateSet = std::vector<State>;
using Metric = std::vector<std::vector<mpq_class>>;

/// A total self-map of {0, ..., n-1} stored as its image table.
class Transformation {
 public:
  Transformation() = default;
  explicit Transformation(std::vector<State> image);

  static Transformation identity(std::size_t n);

  std::size_t size() const { return image_.size(); }
  State operator()(State x) const { return image_[x]; }
  const std::vector<State>& image() const { return image_; }

  /// x -> next(this(x)).
  Transformation then(const Transformation& next) const;
  StateSet apply(const StateSet& set) const;
  bool is_permutation() const;

  friend auto operator<=>(const Transformation&, const Transformation&) = default;

 private:
  std::vector<State> image_;
};

class FiniteIFS {
 public:
  /// Validates label uniqueness, totality of every map and, when given, the
  /// metric axioms. Throws InputError.
  FiniteIFS(std::size_t num_states, std::vector<std::string> labels,
            std::vector<Transformation> maps, std::optional<Metric> metric = std::nullopt);

  /// Convenience for tests and examples: labels named by their tables.
  static FiniteIFS from_tables(std::vector<std::pair<std::string, std::vector<State>>> maps);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_labels() const { return maps_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Transformation>& maps() const { return maps_; }
  const Transformation& map(std::size_t label) const { return maps_.at(label); }
  std::size_t label_index(std::string_view name) const;

  const std::optional<Metric>& metric() const { return metric_; }
  /// Explicit metric if present, otherwise the discrete metric.
  mpq_class distance(State x, State y) const;
  mpq_class diameter(const StateSet& set) const;

  StateSet all_states() const;

 private:
  std::size_t num_states_;
  std::vector<std::string> labels_;
  std::vector<Transformation> maps_;
  std::optional<Metric> metric_;
};

using Word = std::vector<std::string>;

/// f_{l_n} o ... o f_{l_1}. Throws InputError on an empty word or unknown label.
Transformation compose(const FiniteIFS& ifs, const Word& word);

/// F(A) = union over labels of f_l(A).
StateSet image_of_set(const FiniteIFS& ifs, const StateSet& set);

/// Distinct tables of all length-k words, ascending.
std::vector<Transformation> word_tables(const FiniteIFS& ifs, std::size_t k);

/// F^k with one label per distinct table; each label is named after the first
/// word (in lexicographic label order) that produces it, letters joined by '.'.
FiniteIFS power_system(const FiniteIFS& ifs, std::size_t k);

struct MinimalSetReport {
  std::size_t n = 0;
  /// Ordered by smallest element.
  std::vector<StateSet> sets;
  bool is_whole_space = false;
};

MinimalSetReport minimal_sets(const FiniteIFS& ifs, std::size_t n);

/// Every state reaches every state along some nonempty word.
bool is_minimal(const FiniteIFS& ifs);

struct NMSet {
  std::size_t bound = 0;
  std::vector<std::size_t> members;

  bool contains(std::size_t n) const;
};

/// All i <= bound such that some F^i-minimal set is not F^j-minimal for any
/// j < i. 1 is always a member. Throws InputError if F is not minimal.
NMSet nm_set(const FiniteIFS& ifs, std::size_t bound);

/// N(p) = max over s in NM of the exponent of p in s.
std::map<std::uint64_t, unsigned> nm_prime_multiplicity(const NMSet& nm);

/// C_n: the partition of X into the n disjoint F^n-minimal sets. Throws
/// InputError if n is not in NM(F) or the minimal sets do not form such a partition.
MinimalSetReport canonical_cover(const FiniteIFS& ifs, std::size_t n);

/// Points x with some step n <= horizon such that every word whose length is a
/// multiple of n returns x to itself (on a finite metric space the smallest
/// neighbourhood of x is {x}).
StateSet regularly_recurrent_points(const FiniteIFS& ifs, std::size_t horizon);

/// Points fixed by some nonempty word.
StateSet periodic_points(const FiniteIFS& ifs);

/// Single-map systems only: every delta-pseudo-orbit is epsilon-shadowed.
bool has_shadowing(const FiniteIFS& ifs, const mpq_class& delta, const mpq_class& epsilon);

/// Single-map systems only: every nonempty open set has an iterate of diameter > delta.
bool is_sensitive(const FiniteIFS& ifs, const mpq_class& delta);

}  // namespace addm
