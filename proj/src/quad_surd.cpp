#include "addm/quad_surd.hpp"

#include <cctype>
#include <cmath>

#include "addm/errors.hpp"
#include "addm/primes.hpp"

namespace addm {

namespace {

int sgn(const mpq_class& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

std::uint64_t common_radicand(const QuadSurd& x, const QuadSurd& y) {
  if (x.is_rational()) return y.radicand();
  if (y.is_rational() || x.radicand() == y.radicand()) return x.radicand();
  throw UnsupportedFieldError("cannot combine sqrt(" + std::to_string(x.radicand()) +
                              ") and sqrt(" + std::to_string(y.radicand()) + ") exactly");
}

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  QuadSurd run() {
    QuadSurd value = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected character");
    return value;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " in '" + std::string(text_) + "'", 0, pos_ + 1);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  // Exceptions from arithmetic are reported at the operator's column.
  template <class Op>
  QuadSurd apply(std::size_t at, Op op) {
    try {
      return op();
    } catch (const UnsupportedFieldError& e) {
      pos_ = at;
      fail(e.what());
    } catch (const std::domain_error& e) {
      pos_ = at;
      fail(e.what());
    }
  }

  QuadSurd expr() {
    QuadSurd value = term();
    while (true) {
      skip();
      const std::size_t at = pos_;
      if (eat('+')) {
        QuadSurd rhs = term();
        value = apply(at, [&] { return value + rhs; });
      } else if (eat('-')) {
        QuadSurd rhs = term();
        value = apply(at, [&] { return value - rhs; });
      } else {
        return value;
      }
    }
  }

  QuadSurd term() {
    QuadSurd value = unary();
    while (true) {
      skip();
      const std::size_t at = pos_;
      if (eat('*')) {
        QuadSurd rhs = unary();
        value = apply(at, [&] { return value * rhs; });
      } else if (eat('/')) {
        QuadSurd rhs = unary();
        value = apply(at, [&] { return value / rhs; });
      } else {
        return value;
      }
    }
  }

  QuadSurd unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return primary();
  }

  QuadSurd primary() {
    skip();
    if (eat('(')) {
      QuadSurd value = expr();
      if (!eat(')')) fail("expected ')'");
      return value;
    }
    if (text_.substr(pos_).starts_with("sqrt")) {
      const std::size_t at = pos_;
      pos_ += 4;
      if (!eat('(')) fail("expected '(' after sqrt");
      QuadSurd arg = expr();
      if (!eat(')')) fail("expected ')'");
      if (!arg.is_rational()) {
        pos_ = at;
        fail("nested square roots are not supported");
      }
      if (arg.sign() < 0) {
        pos_ = at;
        fail("square root of a negative number");
      }
      return QuadSurd::sqrt(arg.rational_part());
    }
    return number();
  }

  QuadSurd number() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string digits{text_.substr(start, pos_ - start)};
    mpz_class denominator = 1;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      const std::size_t frac = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == frac) fail("expected digits after '.'");
      digits += text_.substr(frac, pos_ - frac);
      for (std::size_t i = frac; i < pos_; ++i) denominator *= 10;
    }
    if (digits.empty()) {
      pos_ = start;
      fail("expected a number");
    }
    mpq_class q{mpz_class(digits, 10), denominator};
    q.canonicalize();
    return QuadSurd(q);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

QuadSurd::QuadSurd(mpq_class rational, mpq_class coefficient, std::uint64_t radicand)
    : rational_(std::move(rational)), coefficient_(std::move(coefficient)), radicand_(0) {
  rational_.canonicalize();
  coefficient_.canonicalize();
  if (radicand == 0) {
    coefficient_ = 0;
  } else {
    std::uint64_t square_part = 1;
    std::uint64_t free_part = 1;
    for (const auto& [p, e] : factorize(radicand)) {
      for (unsigned i = 0; i < e / 2; ++i) square_part *= p;
      if (e % 2) free_part *= p;
    }
    coefficient_ *= mpz_class(static_cast<unsigned long>(square_part));
    if (free_part == 1) {
      rational_ += coefficient_;
      coefficient_ = 0;
    } else {
      radicand_ = free_part;
    }
  }
  normalize();
}

QuadSurd QuadSurd::sqrt(const mpq_class& q) {
  if (q < 0) throw std::domain_error("square root of a negative number");
  // sqrt(p/s) = sqrt(p*s)/s
  const mpz_class num = q.get_num() * q.get_den();
  if (!num.fits_ulong_p()) throw std::domain_error("radicand too large");
  return QuadSurd(0, mpq_class(1, q.get_den()), num.get_ui());
}

QuadSurd QuadSurd::parse(std::string_view text) { return ExpressionParser(text).run(); }

void QuadSurd::normalize() {
  if (coefficient_ == 0) radicand_ = 0;
}

int QuadSurd::sign() const {
  const int a = sgn(rational_);
  const int b = sgn(coefficient_);
  if (b == 0) return a;
  if (a == 0 || a == b) return b;
  // Opposite signs: compare a^2 with b^2 r.
  const mpq_class lhs = rational_ * rational_;
  const mpq_class rhs = coefficient_ * coefficient_ * mpz_class(static_cast<unsigned long>(radicand_));
  if (lhs == rhs) return 0;  // impossible for squarefree r > 1
  return lhs > rhs ? a : b;
}

double QuadSurd::to_double() const {
  return rational_.get_d() + coefficient_.get_d() * std::sqrt(static_cast<double>(radicand_));
}

std::string QuadSurd::to_string() const {
  if (is_rational()) return rational_.get_str();
  mpz_class s;
  mpz_lcm(s.get_mpz_t(), rational_.get_den().get_mpz_t(), coefficient_.get_den().get_mpz_t());
  const mpz_class p = rational_.get_num() * (s / rational_.get_den());
  const mpz_class q = coefficient_.get_num() * (s / coefficient_.get_den());
  std::string root = "sqrt(" + std::to_string(radicand_) + ")";
  std::string surd;
  if (q == 1)
    surd = root;
  else if (q == -1)
    surd = "-" + root;
  else
    surd = q.get_str() + "*" + root;
  std::string body;
  if (p == 0)
    body = surd;
  else
    body = p.get_str() + (q > 0 ? "+" : "") + surd;
  if (s == 1) return body;
  if (p == 0) return body + "/" + s.get_str();
  return "(" + body + ")/" + s.get_str();
}

QuadSurd QuadSurd::operator-() const {
  QuadSurd out = *this;
  out.rational_ = -out.rational_;
  out.coefficient_ = -out.coefficient_;
  return out;
}

QuadSurd operator+(const QuadSurd& x, const QuadSurd& y) {
  QuadSurd out;
  out.radicand_ = common_radicand(x, y);
  out.rational_ = x.rational_ + y.rational_;
  out.coefficient_ = x.coefficient_ + y.coefficient_;
  out.normalize();
  return out;
}

QuadSurd operator-(const QuadSurd& x, const QuadSurd& y) { return x + (-y); }

QuadSurd operator*(const QuadSurd& x, const QuadSurd& y) {
  QuadSurd out;
  const std::uint64_t r = common_radicand(x, y);
  out.radicand_ = r;
  out.rational_ = x.rational_ * y.rational_ +
                  x.coefficient_ * y.coefficient_ * mpz_class(static_cast<unsigned long>(r));
  out.coefficient_ = x.rational_ * y.coefficient_ + x.coefficient_ * y.rational_;
  out.normalize();
  return out;
}

QuadSurd operator/(const QuadSurd& x, const QuadSurd& y) {
  if (y.sign() == 0) throw std::domain_error("division by zero");
  const std::uint64_t r = common_radicand(x, y);
  // 1/(c + d sqrt r) = (c - d sqrt r) / (c^2 - d^2 r)
  const mpq_class norm =
      y.rational_ * y.rational_ - y.coefficient_ * y.coefficient_ * mpz_class(static_cast<unsigned long>(r));
  QuadSurd conj;
  conj.radicand_ = y.radicand_;
  conj.rational_ = y.rational_ / norm;
  conj.coefficient_ = -y.coefficient_ / norm;
  conj.normalize();
  return x * conj;
}

bool operator==(const QuadSurd& x, const QuadSurd& y) {
  return x.rational_ == y.rational_ && x.coefficient_ == y.coefficient_ &&
         (x.coefficient_ == 0 || x.radicand_ == y.radicand_);
}

std::strong_ordering operator<=>(const QuadSurd& x, const QuadSurd& y) {
  const int s = (x - y).sign();
  return s < 0 ? std::strong_ordering::less
               : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

}  // namespace addm
