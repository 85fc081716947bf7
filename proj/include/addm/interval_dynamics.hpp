#pragma once

// Symmetric tent maps T_a(x) = a x on [0, 1/2), -a x + a on [1/2, 1], a in [0, 2],
// evaluated exactly over Q or a single quadratic field Q(sqrt r).

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "addm/quad_surd.hpp"

namespace addm {

class TentParam {
 public:
  /// Throws InputError unless 0 <= a <= 2.
  explicit TentParam(QuadSurd a);
  /// `p/q`, a decimal, or a surd expression such as `(p+q*sqrt(r))/s`.
  static TentParam parse(std::string_view text);

  const QuadSurd& value() const { return a_; }

 private:
  QuadSurd a_;
};

/// Throws InputError when x is outside [0, 1].
QuadSurd tent_eval(const TentParam& a, const QuadSurd& x);

enum class OrbitStatus {
  ExactCycle,       // a value repeated exactly
  TransientOnly,    // budget reached, no repeat seen
  BudgetExhausted,  // arithmetic left the supported number field; partial data
};

const char* to_string(OrbitStatus status);

struct OrbitSegment {
  QuadSurd start;
  /// points[0] = start, points[i+1] = T_a(points[i]).
  std::vector<QuadSurd> points;
  OrbitStatus status = OrbitStatus::TransientOnly;
  /// For ExactCycle: T_a(points.back()) == points[cycle_start].
  std::size_t cycle_start = 0;
  std::size_t period = 0;
  std::string note;

  std::size_t length() const { return points.size(); }
  /// T_a^k(start), extended periodically past the recorded points when a cycle
  /// was found. Throws std::out_of_range otherwise.
  const QuadSurd& at(std::size_t k) const;
};

/// Iterates from `start`, recording at most `budget` points.
OrbitSegment orbit(const TentParam& a, const QuadSurd& start, std::size_t budget);
/// orbit from the critical point c = 1/2.
OrbitSegment critical_orbit(const TentParam& a, std::size_t budget);

struct Interval {
  QuadSurd lo;
  QuadSurd hi;

  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  bool intersects(const Interval& other) const { return !(hi < other.lo || other.hi < lo); }
  std::string to_string() const;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// T_a([lo, hi]) computed exactly from the endpoints and the peak at 1/2.
Interval tent_image(const TentParam& a, const Interval& interval);

struct OmegaEstimate {
  /// omega(y, T_a) is contained in the union of these (disjoint, ascending)
  /// intervals; no point is claimed to belong to it.
  std::vector<Interval> intervals;
  mpq_class resolution;
  std::size_t transient = 0;
  std::size_t window = 0;
  /// The orbit was seen to repeat exactly before the window ended.
  bool eventually_periodic = false;
};

/// Hull of T_a^k(y), transient <= k < transient + window, each visited point
/// padded by `resolution` and overlapping pads merged.
OmegaEstimate omega_limit_estimate(const TentParam& a, const QuadSurd& y, std::size_t transient,
                                   std::size_t window, const mpq_class& resolution = 0);

/// Symbol i (1-based) places T_a^i(1/2) left of, at, or right of 1/2.
std::string kneading_sequence(const TentParam& a, std::size_t length);

enum class CycleStatus {
  Certified,     // disjoint hulls, cyclically mapped
  Absent,        // overlap or containment failure witnessed
  Trivial,       // the post-transient orbit is a periodic orbit
  Inconclusive,  // too few points for n groups
};

const char* to_string(CycleStatus status);

struct IntervalCycle {
  CycleStatus status = CycleStatus::Inconclusive;
  std::size_t n = 0;
  std::size_t transient = 0;
  std::size_t window = 0;
  mpq_class margin;
  /// hulls[j]: hull of T_a^k(1/2) over window indices k = j (mod n).
  std::vector<Interval> hulls;
  /// Pairs of overlapping hull indices.
  std::vector<std::pair<std::size_t, std::size_t>> overlaps;
  /// Indices j with T_a(hulls[j]) not inside the padded hulls[j+1].
  std::vector<std::size_t> escapes;
  /// Period of the tail orbit for Trivial.
  std::size_t period = 0;
};

/// Groups the critical orbit over [transient, transient + window) by index mod n
/// and checks the hulls form n disjoint intervals cyclically permuted by T_a.
/// Throws InputError if n < 2.
IntervalCycle detect_interval_cycle(const TentParam& a, std::size_t n, std::size_t transient,
                                    std::size_t window, const mpq_class& margin = 0);

struct TowerLevelCheck {
  std::size_t level = 0;
  std::size_t n = 0;
  IntervalCycle cycle;
};

struct TowerCertificate {
  std::vector<std::size_t> primes;
  std::vector<TowerLevelCheck> levels;
  /// Number of consecutive certified levels starting from level 1.
  std::size_t deepest_certified = 0;
  /// No level could be decided.
  bool inconclusive = false;

  std::string summary() const;
};

/// Runs detect_interval_cycle at n = m_1, m_2, ... (cumulative products).
TowerCertificate tower_certificate(const TentParam& a, const std::vector<std::size_t>& primes,
                                   std::size_t transient, std::size_t window,
                                   const mpq_class& margin = 0);

}  // namespace addm
