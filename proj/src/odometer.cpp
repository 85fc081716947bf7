#include "addm/odometer.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "addm/errors.hpp"

namespace addm {

namespace {

struct Item {
  Radix value;
  std::size_t column;  // 1-based
};

// Parses a comma-separated list of unsigned integers. `offset` is the 0-based
// position of `text` inside the full input, used for column reporting.
std::vector<Item> parse_items(std::string_view text, std::size_t offset, const char* what) {
  std::vector<Item> out;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  skip_ws();
  if (i == text.size()) return out;
  while (true) {
    skip_ws();
    const std::size_t start = i;
    Radix value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
    if (ec != std::errc() || ptr == text.data() + i) {
      throw ParseError(std::string("expected a non-negative integer in ") + what, 1,
                       offset + start + 1);
    }
    i = static_cast<std::size_t>(ptr - text.data());
    out.push_back({value, offset + start + 1});
    skip_ws();
    if (i == text.size()) break;
    if (text[i] != ',') {
      throw ParseError(std::string("unexpected character '") + text[i] + "' in " + what, 1,
                       offset + i + 1);
    }
    ++i;
  }
  return out;
}

std::vector<Radix> radices_checked(const std::vector<Item>& items) {
  std::vector<Radix> out;
  for (const auto& item : items) {
    if (item.value < 2) throw ParseError("radix must be at least 2", 1, item.column);
    out.push_back(item.value);
  }
  return out;
}

void require_same_truncation(const OdometerPoint& x, const OdometerPoint& y) {
  if (x.depth() != y.depth()) throw InputError("points have different depths");
  if (x.base().radices(x.depth()) != y.base().radices(y.depth()))
    throw InputError("points live on different bases");
}

std::string join(const std::vector<Radix>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

BaseSequence::BaseSequence(std::vector<Radix> prefix, std::vector<Radix> tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  if (prefix_.empty() && tail_.empty()) throw InputError("base sequence has no radices");
  for (Radix r : prefix_)
    if (r < 2) throw InputError("radix " + std::to_string(r) + " is below 2");
  for (Radix r : tail_)
    if (r < 2) throw InputError("radix " + std::to_string(r) + " is below 2");
}

BaseSequence BaseSequence::truncated(std::vector<Radix> radices) {
  return BaseSequence(std::move(radices), {});
}

BaseSequence BaseSequence::parse(std::string_view text) {
  const auto semi = text.find(';');
  if (semi == std::string_view::npos)
    throw ParseError("base sequence must have the form prefix;tail", 1, text.size() + 1);
  if (text.find(';', semi + 1) != std::string_view::npos)
    throw ParseError("more than one ';' in base sequence", 1, text.find(';', semi + 1) + 1);
  auto prefix = radices_checked(parse_items(text.substr(0, semi), 0, "prefix"));
  auto tail = radices_checked(parse_items(text.substr(semi + 1), semi + 1, "tail"));
  if (prefix.empty() && tail.empty()) throw ParseError("base sequence has no radices", 1, 1);
  return BaseSequence(std::move(prefix), std::move(tail));
}

std::optional<std::size_t> BaseSequence::available_depth() const {
  if (is_complete()) return std::nullopt;
  return prefix_.size();
}

Radix BaseSequence::radix(std::size_t i) const {
  if (i == 0) throw InputError("radix index is 1-based");
  if (i <= prefix_.size()) return prefix_[i - 1];
  if (tail_.empty())
    throw InputError("depth " + std::to_string(i) + " exceeds truncated base of length " +
                     std::to_string(prefix_.size()));
  return tail_[(i - 1 - prefix_.size()) % tail_.size()];
}

std::vector<Radix> BaseSequence::radices(std::size_t depth) const {
  std::vector<Radix> out;
  out.reserve(depth);
  for (std::size_t i = 1; i <= depth; ++i) out.push_back(radix(i));
  return out;
}

mpz_class BaseSequence::modulus(std::size_t depth) const {
  mpz_class m = 1;
  for (std::size_t i = 1; i <= depth; ++i) m *= static_cast<unsigned long>(radix(i));
  return m;
}

std::string BaseSequence::to_string() const { return join(prefix_) + ";" + join(tail_); }

OdometerPoint::OdometerPoint(BaseSequence base, std::vector<Radix> digits)
    : base_(std::move(base)), digits_(std::move(digits)) {
  if (digits_.empty()) throw InputError("odometer points need depth >= 1");
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    const Radix j = base_.radix(i + 1);
    if (digits_[i] >= j)
      throw InputError("digit " + std::to_string(i + 1) + " is " + std::to_string(digits_[i]) +
                       " but radix is " + std::to_string(j));
  }
}

OdometerPoint OdometerPoint::zero(const BaseSequence& base, std::size_t depth) {
  return OdometerPoint(base, std::vector<Radix>(depth, 0));
}

std::string OdometerPoint::to_string() const { return join(digits_); }

bool operator==(const OdometerPoint& a, const OdometerPoint& b) {
  return a.digits_ == b.digits_ && a.base_.radices(a.depth()) == b.base_.radices(b.depth());
}

std::vector<Radix> parse_digits(std::string_view text) {
  std::vector<Radix> out;
  for (const auto& item : parse_items(text, 0, "digit list")) out.push_back(item.value);
  return out;
}

OdometerPoint add(const OdometerPoint& x, const OdometerPoint& y) {
  require_same_truncation(x, y);
  std::vector<Radix> z(x.depth());
  Radix carry = 0;
  for (std::size_t i = 0; i < x.depth(); ++i) {
    const Radix j = x.base().radix(i + 1);
    // Each summand is < j, so the sum fits as long as j < 2^63.
    const Radix s = x.digit(i) + y.digit(i) + carry;
    carry = s >= j ? 1 : 0;
    z[i] = s - carry * j;
  }
  return OdometerPoint(x.base(), std::move(z));
}

OdometerPoint successor(const OdometerPoint& x) {
  std::vector<Radix> z = x.digits();
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (++z[i] < x.base().radix(i + 1)) break;
    z[i] = 0;
  }
  return OdometerPoint(x.base(), std::move(z));
}

OdometerPoint negate(const OdometerPoint& x) {
  // -(r) = (j-1-r) + 1 digitwise complement plus one.
  std::vector<Radix> z(x.depth());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = x.base().radix(i + 1) - 1 - x.digit(i);
  return successor(OdometerPoint(x.base(), std::move(z)));
}

mpq_class distance(const OdometerPoint& x, const OdometerPoint& y) {
  require_same_truncation(x, y);
  mpq_class d = 0;
  mpq_class weight(1, 2);
  for (std::size_t i = 0; i < x.depth(); ++i) {
    if (x.digit(i) != y.digit(i)) d += weight;
    weight /= 2;
  }
  d.canonicalize();
  return d;
}

mpz_class as_residue(const OdometerPoint& x) {
  mpz_class value = 0;
  for (std::size_t i = x.depth(); i-- > 0;) {
    value *= static_cast<unsigned long>(x.base().radix(i + 1));
    value += static_cast<unsigned long>(x.digit(i));
  }
  return value;
}

OdometerPoint from_residue(const BaseSequence& base, std::size_t depth, const mpz_class& n) {
  if (depth == 0) throw InputError("odometer points need depth >= 1");
  if (n < 0 || n >= base.modulus(depth))
    throw InputError("residue " + n.get_str() + " is outside [0, m_" + std::to_string(depth) + ")");
  std::vector<Radix> digits(depth);
  mpz_class rest = n;
  for (std::size_t i = 0; i < depth; ++i) {
    const mpz_class j = static_cast<unsigned long>(base.radix(i + 1));
    mpz_class r = rest % j;
    digits[i] = r.get_ui();
    rest /= j;
  }
  return OdometerPoint(base, std::move(digits));
}

std::uint64_t Multiplicity::count() const {
  if (infinite_) throw std::logic_error("multiplicity is infinite");
  return count_;
}

std::string Multiplicity::to_string() const { return infinite_ ? "inf" : std::to_string(count_); }

PrimeMultiplicity::PrimeMultiplicity(std::map<std::uint64_t, Multiplicity> entries) {
  for (auto& [p, m] : entries)
    if (m.is_infinite() || m.count() != 0) entries_.emplace(p, m);
}

Multiplicity PrimeMultiplicity::at(std::uint64_t prime) const {
  auto it = entries_.find(prime);
  return it == entries_.end() ? Multiplicity::finite(0) : it->second;
}

std::string PrimeMultiplicity::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [p, m] : entries_) {
    if (!first) os << ", ";
    first = false;
    os << p << ": " << m.to_string();
  }
  os << '}';
  return os.str();
}

PrimeMultiplicity prime_multiplicity(const BaseSequence& base) {
  if (!base.is_complete())
    throw InputError("prime multiplicity needs an infinite base (non-empty tail)");
  std::map<std::uint64_t, Multiplicity> out;
  for (Radix r : base.tail())
    for (const auto& [p, e] : factorize(r)) out.insert_or_assign(p, Multiplicity::infinite());
  for (Radix r : base.prefix()) {
    for (const auto& [p, e] : factorize(r)) {
      auto it = out.find(p);
      if (it == out.end())
        out.emplace(p, Multiplicity::finite(e));
      else if (!it->second.is_infinite())
        it->second = Multiplicity::finite(it->second.count() + e);
    }
  }
  return PrimeMultiplicity(std::move(out));
}

bool odometers_conjugate(const BaseSequence& b1, const BaseSequence& b2) {
  return prime_multiplicity(b1) == prime_multiplicity(b2);
}

}  // namespace addm
