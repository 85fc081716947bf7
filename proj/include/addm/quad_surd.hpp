#pragma once

// Exact numbers a + b*sqrt(r) with a, b rational and r a squarefree integer >= 2
// (r = 0 marks a plain rational). Q(sqrt r) is a field, so the tent map's affine
// branches never leave it; mixing two different radicands is rejected.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace addm {

/// An operation would leave the single quadratic extension the operands live in.
class UnsupportedFieldError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class QuadSurd {
 public:
  QuadSurd() = default;
  QuadSurd(long n) : rational_(n) {}  // NOLINT(google-explicit-constructor)
  QuadSurd(mpq_class q) : rational_(std::move(q)) { rational_.canonicalize(); }  // NOLINT
  /// rational + coefficient * sqrt(radicand); the radicand is reduced to its
  /// squarefree part.
  QuadSurd(mpq_class rational, mpq_class coefficient, std::uint64_t radicand);

  /// sqrt(q) for rational q >= 0.
  static QuadSurd sqrt(const mpq_class& q);

  /// Accepts `p`, `p/q`, decimals such as `1.05`, and arithmetic expressions
  /// with `sqrt(...)`, e.g. `(1+sqrt(5))/2` or `2-sqrt(2)`. Throws ParseError
  /// with a 1-based column.
  static QuadSurd parse(std::string_view text);

  const mpq_class& rational_part() const { return rational_; }
  const mpq_class& coefficient() const { return coefficient_; }
  /// 0 for rationals.
  std::uint64_t radicand() const { return radicand_; }
  bool is_rational() const { return radicand_ == 0; }

  int sign() const;
  double to_double() const;
  /// Canonical text that parse() reads back, e.g. `1/2`, `sqrt(2)/2`, `2-sqrt(2)`.
  std::string to_string() const;

  QuadSurd operator-() const;
  friend QuadSurd operator+(const QuadSurd& x, const QuadSurd& y);
  friend QuadSurd operator-(const QuadSurd& x, const QuadSurd& y);
  friend QuadSurd operator*(const QuadSurd& x, const QuadSurd& y);
  /// Throws std::domain_error on division by zero.
  friend QuadSurd operator/(const QuadSurd& x, const QuadSurd& y);

  friend bool operator==(const QuadSurd& x, const QuadSurd& y);
  friend std::strong_ordering operator<=>(const QuadSurd& x, const QuadSurd& y);

 private:
  void normalize();

  mpq_class rational_{0};
  mpq_class coefficient_{0};
  std::uint64_t radicand_ = 0;
};

}  // namespace addm
