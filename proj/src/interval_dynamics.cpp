#include "addm/interval_dynamics.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "addm/errors.hpp"

namespace addm {

namespace {

const QuadSurd& half() {
  static const QuadSurd h(mpq_class(1, 2));
  return h;
}

// Window values T^k, transient <= k < transient + window, as far as known.
std::vector<QuadSurd> window_values(const OrbitSegment& orb, std::size_t transient,
                                    std::size_t window) {
  std::vector<QuadSurd> out;
  for (std::size_t k = transient; k < transient + window; ++k) {
    if (k >= orb.length() && orb.status != OrbitStatus::ExactCycle) break;
    out.push_back(orb.at(k));
  }
  return out;
}

}  // namespace

TentParam::TentParam(QuadSurd a) : a_(std::move(a)) {
  if (a_ < QuadSurd(0) || a_ > QuadSurd(2))
    throw InputError("tent parameter " + a_.to_string() + " is outside [0, 2]");
}

TentParam TentParam::parse(std::string_view text) { return TentParam(QuadSurd::parse(text)); }

QuadSurd tent_eval(const TentParam& a, const QuadSurd& x) {
  if (x < QuadSurd(0) || x > QuadSurd(1))
    throw InputError("tent map argument " + x.to_string() + " is outside [0, 1]");
  if (x < half()) return a.value() * x;
  return a.value() - a.value() * x;
}

const char* to_string(OrbitStatus status) {
  switch (status) {
    case OrbitStatus::ExactCycle: return "exact-cycle-found";
    case OrbitStatus::TransientOnly: return "transient-only";
    case OrbitStatus::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

const QuadSurd& OrbitSegment::at(std::size_t k) const {
  if (k < points.size()) return points[k];
  if (status != OrbitStatus::ExactCycle)
    throw std::out_of_range("orbit index " + std::to_string(k) + " beyond recorded points");
  return points[cycle_start + (k - cycle_start) % period];
}

OrbitSegment orbit(const TentParam& a, const QuadSurd& start, std::size_t budget) {
  if (budget == 0) throw InputError("orbit budget must be positive");
  if (start < QuadSurd(0) || start > QuadSurd(1))
    throw InputError("orbit start " + start.to_string() + " is outside [0, 1]");
  OrbitSegment seg;
  seg.start = start;
  seg.points.push_back(start);
  std::map<QuadSurd, std::size_t> index{{start, 0}};
  while (true) {
    QuadSurd next;
    try {
      next = tent_eval(a, seg.points.back());
    } catch (const UnsupportedFieldError& e) {
      seg.status = OrbitStatus::BudgetExhausted;
      seg.note = e.what();
      return seg;
    }
    if (auto it = index.find(next); it != index.end()) {
      seg.status = OrbitStatus::ExactCycle;
      seg.cycle_start = it->second;
      seg.period = seg.points.size() - it->second;
      return seg;
    }
    if (seg.points.size() == budget) {
      seg.status = OrbitStatus::TransientOnly;
      return seg;
    }
    index.emplace(next, seg.points.size());
    seg.points.push_back(std::move(next));
  }
}

OrbitSegment critical_orbit(const TentParam& a, std::size_t budget) {
  return orbit(a, half(), budget);
}

std::string Interval::to_string() const {
  if (lo == hi) return "{" + lo.to_string() + "}";
  return "[" + lo.to_string() + ", " + hi.to_string() + "]";
}

Interval tent_image(const TentParam& a, const Interval& interval) {
  const QuadSurd fl = tent_eval(a, interval.lo);
  const QuadSurd fh = tent_eval(a, interval.hi);
  const QuadSurd low = std::min(fl, fh);
  if (interval.lo < half() && half() < interval.hi) return {low, tent_eval(a, half())};
  return {low, std::max(fl, fh)};
}

OmegaEstimate omega_limit_estimate(const TentParam& a, const QuadSurd& y, std::size_t transient,
                                   std::size_t window, const mpq_class& resolution) {
  if (transient == 0 || window == 0)
    throw InputError("transient and window must be positive");
  if (resolution < 0) throw InputError("resolution must be non-negative");
  const auto orb = orbit(a, y, transient + window);
  auto values = window_values(orb, transient, window);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  OmegaEstimate est;
  est.resolution = resolution;
  est.transient = transient;
  est.window = window;
  est.eventually_periodic = orb.status == OrbitStatus::ExactCycle;
  const QuadSurd pad(resolution);
  for (const auto& v : values) {
    Interval next{std::max(v - pad, QuadSurd(0)), std::min(v + pad, QuadSurd(1))};
    if (!est.intervals.empty() && est.intervals.back().hi >= next.lo)
      est.intervals.back().hi = std::max(est.intervals.back().hi, next.hi);
    else
      est.intervals.push_back(std::move(next));
  }
  return est;
}

std::string kneading_sequence(const TentParam& a, std::size_t length) {
  if (length == 0) throw InputError("kneading length must be positive");
  const auto orb = critical_orbit(a, length + 1);
  std::string out;
  for (std::size_t i = 1; i <= length; ++i) {
    if (i >= orb.length() && orb.status != OrbitStatus::ExactCycle) break;
    const auto cmp = orb.at(i) <=> half();
    out += cmp < 0 ? 'L' : (cmp > 0 ? 'R' : 'C');
  }
  return out;
}

const char* to_string(CycleStatus status) {
  switch (status) {
    case CycleStatus::Certified: return "PASS";
    case CycleStatus::Absent: return "FAIL";
    case CycleStatus::Trivial: return "TRIVIAL";
    case CycleStatus::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

IntervalCycle detect_interval_cycle(const TentParam& a, std::size_t n, std::size_t transient,
                                    std::size_t window, const mpq_class& margin) {
  if (n < 2) throw InputError("interval cycles need n >= 2");
  if (margin < 0) throw InputError("margin must be non-negative");
  IntervalCycle result;
  result.n = n;
  result.transient = transient;
  result.window = window;
  result.margin = margin;

  const auto orb = critical_orbit(a, transient + window);
  const auto values = window_values(orb, transient, window);
  if (values.size() < n) return result;  // inconclusive

  result.hulls.resize(n);
  std::vector<bool> seeded(n, false);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t j = (transient + i) % n;
    if (!seeded[j]) {
      result.hulls[j] = {values[i], values[i]};
      seeded[j] = true;
    } else {
      result.hulls[j].lo = std::min(result.hulls[j].lo, values[i]);
      result.hulls[j].hi = std::max(result.hulls[j].hi, values[i]);
    }
  }

  if (orb.status == OrbitStatus::ExactCycle && orb.cycle_start <= transient) {
    result.status = CycleStatus::Trivial;
    result.period = orb.period;
    return result;
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (result.hulls[i].intersects(result.hulls[j])) result.overlaps.emplace_back(i, j);

  const QuadSurd pad(margin);
  for (std::size_t j = 0; j < n; ++j) {
    const Interval& target = result.hulls[(j + 1) % n];
    const Interval padded{target.lo - pad, target.hi + pad};
    if (!padded.contains(tent_image(a, result.hulls[j]))) result.escapes.push_back(j);
  }

  result.status = result.overlaps.empty() && result.escapes.empty() ? CycleStatus::Certified
                                                                    : CycleStatus::Absent;
  return result;
}

std::string TowerCertificate::summary() const {
  std::ostringstream os;
  if (inconclusive) {
    os << "inconclusive: not enough post-transient orbit data to test level 1";
    return os.str();
  }
  os << "deepest certified level: " << deepest_certified << " of " << levels.size();
  if (deepest_certified > 0) os << " (n = " << levels[deepest_certified - 1].n << ")";
  os << "; certification at every level is necessary for conjugacy to the adding machine"
        " but not sufficient at finite depth";
  return os.str();
}

TowerCertificate tower_certificate(const TentParam& a, const std::vector<std::size_t>& primes,
                                   std::size_t transient, std::size_t window,
                                   const mpq_class& margin) {
  if (primes.empty()) throw InputError("tower certificate needs at least one radix");
  TowerCertificate cert;
  cert.primes = primes;
  std::size_t n = 1;
  bool unbroken = true;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (primes[i] < 2) throw InputError("tower radices must be at least 2");
    n *= primes[i];
    TowerLevelCheck check{i + 1, n, detect_interval_cycle(a, n, transient, window, margin)};
    if (unbroken && check.cycle.status == CycleStatus::Certified)
      ++cert.deepest_certified;
    else
      unbroken = false;
    cert.levels.push_back(std::move(check));
  }
  cert.inconclusive = cert.levels.front().cycle.status == CycleStatus::Inconclusive;
  return cert;
}

}  // namespace addm
