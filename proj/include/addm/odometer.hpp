#pragma once

// Adding machines (odometers) g_alpha on the mixed-radix space Delta_alpha.
//
// A base sequence alpha = (j_1, j_2, ...) is stored as a finite prefix followed
// by a periodic tail. Points of Delta_alpha are only ever handled as depth-L
// truncations (r_1, ..., r_L), which are in bijection with Z/m_L where
// m_L = j_1 * ... * j_L, via r_1 + r_2 j_1 + r_3 j_1 j_2 + ...
// Arithmetic at depth L is arithmetic mod m_L: a carry out of digit L is dropped.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "addm/primes.hpp"

namespace addm {

/// Eventually periodic radix sequence. An empty tail marks a truncated view:
/// such a sequence only has `prefix().size()` radices and is not a full odometer.
class BaseSequence {
 public:
  /// Throws InputError if a radix is < 2 or both parts are empty.
  BaseSequence(std::vector<Radix> prefix, std::vector<Radix> tail);

  /// Finite view (j_1, ..., j_k) with no tail.
  static BaseSequence truncated(std::vector<Radix> radices);

  /// Parses `prefix;tail`, e.g. `4,3;5` or `;2`. Either side may be empty but
  /// not both. Errors carry the 1-based column of the offending character.
  static BaseSequence parse(std::string_view text);

  const std::vector<Radix>& prefix() const { return prefix_; }
  const std::vector<Radix>& tail() const { return tail_; }
  bool is_complete() const { return !tail_.empty(); }

  /// Number of radices available; nullopt when the sequence is infinite.
  std::optional<std::size_t> available_depth() const;

  /// j_i for 1-based i.
  Radix radix(std::size_t i) const;
  std::vector<Radix> radices(std::size_t depth) const;
  /// m_depth = j_1 * ... * j_depth (m_0 = 1).
  mpz_class modulus(std::size_t depth) const;

  std::string to_string() const;

  friend bool operator==(const BaseSequence&, const BaseSequence&) = default;

 private:
  std::vector<Radix> prefix_;
  std::vector<Radix> tail_;
};

/// Depth-L truncation (r_1, ..., r_L), L >= 1, of a point of Delta_alpha.
class OdometerPoint {
 public:
  /// Throws InputError on an empty digit list, a digit >= its radix, or a depth
  /// beyond a truncated base.
  OdometerPoint(BaseSequence base, std::vector<Radix> digits);

  static OdometerPoint zero(const BaseSequence& base, std::size_t depth);

  const BaseSequence& base() const { return base_; }
  std::size_t depth() const { return digits_.size(); }
  const std::vector<Radix>& digits() const { return digits_; }
  Radix digit(std::size_t i) const { return digits_.at(i); }

  /// Comma separated digits, least significant first.
  std::string to_string() const;

  /// Same truncated radices and same digits.
  friend bool operator==(const OdometerPoint& a, const OdometerPoint& b);

 private:
  BaseSequence base_;
  std::vector<Radix> digits_;
};

/// Digit list `1,0,1`.
std::vector<Radix> parse_digits(std::string_view text);

OdometerPoint add(const OdometerPoint& x, const OdometerPoint& y);
/// g_alpha at depth L: add (1, 0, 0, ...).
OdometerPoint successor(const OdometerPoint& x);
/// Additive inverse mod m_L.
OdometerPoint negate(const OdometerPoint& x);
/// sum_{i=1..L} delta(r_i, s_i) / 2^i.
mpq_class distance(const OdometerPoint& x, const OdometerPoint& y);

mpz_class as_residue(const OdometerPoint& x);
OdometerPoint from_residue(const BaseSequence& base, std::size_t depth, const mpz_class& n);

/// Extended natural number: a finite count or the distinguished infinity.
class Multiplicity {
 public:
  static Multiplicity finite(std::uint64_t count) { return Multiplicity(false, count); }
  static Multiplicity infinite() { return Multiplicity(true, 0); }

  bool is_infinite() const { return infinite_; }
  /// Throws std::logic_error on infinity.
  std::uint64_t count() const;

  std::string to_string() const;
  friend bool operator==(const Multiplicity&, const Multiplicity&) = default;

 private:
  Multiplicity(bool infinite, std::uint64_t count) : infinite_(infinite), count_(count) {}
  bool infinite_;
  std::uint64_t count_;
};

/// M_beta: prime -> total exponent over all radices. Only primes with nonzero
/// multiplicity are stored.
class PrimeMultiplicity {
 public:
  PrimeMultiplicity() = default;
  explicit PrimeMultiplicity(std::map<std::uint64_t, Multiplicity> entries);

  Multiplicity at(std::uint64_t prime) const;
  const std::map<std::uint64_t, Multiplicity>& entries() const { return entries_; }

  /// `{2: inf, 3: 1}`
  std::string to_string() const;
  friend bool operator==(const PrimeMultiplicity&, const PrimeMultiplicity&) = default;

 private:
  std::map<std::uint64_t, Multiplicity> entries_;
};

/// Requires a complete (tailed) base.
PrimeMultiplicity prime_multiplicity(const BaseSequence& base);

/// g_b1 and g_b2 are topologically conjugate iff their prime multiplicity
/// functions agree.
bool odometers_conjugate(const BaseSequence& b1, const BaseSequence& b2);

}  // namespace addm
