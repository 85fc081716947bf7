#include "addm/conjugacy.hpp"

#include <algorithm>
#include <deque>

#include "addm/errors.hpp"
#include "addm/primes.hpp"

namespace addm {

CyclicTower::CyclicTower(std::vector<Radix> radices, std::vector<std::vector<StateSet>> levels)
    : radices_(std::move(radices)), levels_(std::move(levels)) {
  if (radices_.size() != levels_.size())
    throw InputError("tower needs one radix per level");
  for (Radix r : radices_)
    if (r < 2) throw InputError("tower radices must be at least 2");
}

std::uint64_t CyclicTower::block_count(std::size_t i) const {
  std::uint64_t m = 1;
  for (std::size_t k = 0; k < i; ++k) m *= radices_.at(k);
  return m;
}

BaseSequence CyclicTower::base() const { return BaseSequence::truncated(radices_); }

CyclicTower CyclicTower::extended(Radix radix, std::vector<StateSet> blocks) const {
  auto radices = radices_;
  auto levels = levels_;
  radices.push_back(radix);
  levels.push_back(std::move(blocks));
  return CyclicTower(std::move(radices), std::move(levels));
}

namespace {

std::optional<std::string> level_violation(const FiniteIFS& ifs, const std::vector<StateSet>& blocks,
                                           std::uint64_t expected, std::size_t i) {
  const std::string where = "level " + std::to_string(i) + ": ";
  if (blocks.size() != expected)
    return where + "has " + std::to_string(blocks.size()) + " blocks, expected " +
           std::to_string(expected);
  std::vector<int> owner(ifs.num_states(), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) return where + "block " + std::to_string(b) + " is empty";
    for (State x : blocks[b]) {
      if (x >= ifs.num_states()) return where + "state " + std::to_string(x) + " out of range";
      if (owner[x] != -1) return where + "state " + std::to_string(x) + " lies in two blocks";
      owner[x] = static_cast<int>(b);
    }
  }
  for (State x = 0; x < ifs.num_states(); ++x)
    if (owner[x] == -1) return where + "state " + std::to_string(x) + " is not covered";
  for (std::size_t l = 0; l < ifs.num_labels(); ++l) {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      StateSet sorted = blocks[b];
      std::sort(sorted.begin(), sorted.end());
      StateSet target = blocks[(b + 1) % blocks.size()];
      std::sort(target.begin(), target.end());
      if (ifs.map(l).apply(sorted) != target)
        return where + "label '" + ifs.labels()[l] + "' does not map block " + std::to_string(b) +
               " onto block " + std::to_string((b + 1) % blocks.size());
    }
  }
  return std::nullopt;
}

std::vector<std::size_t> block_index(std::size_t num_states, const std::vector<StateSet>& blocks) {
  std::vector<std::size_t> index(num_states, 0);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (State x : blocks[b]) index[x] = b;
  return index;
}

// Lifts the top-level index to Z/n (n a multiple of the top count m) along the
// constraint c(f(x)) = c(x) + 1, seeding each weakly connected component at its
// smallest state with its top-level index. Returns nullopt on a contradiction.
std::optional<std::vector<std::size_t>> lift_coloring(const FiniteIFS& ifs,
                                                      const std::vector<std::size_t>& top,
                                                      std::size_t n) {
  const std::size_t size = ifs.num_states();
  std::vector<std::vector<State>> preimages(size);
  for (const auto& f : ifs.maps())
    for (State x = 0; x < size; ++x) preimages[f(x)].push_back(x);

  std::vector<std::optional<std::size_t>> color(size);
  for (State seed = 0; seed < size; ++seed) {
    if (color[seed]) continue;
    color[seed] = top[seed];
    std::deque<State> queue{seed};
    while (!queue.empty()) {
      const State x = queue.front();
      queue.pop_front();
      const std::size_t c = *color[x];
      auto assign = [&](State y, std::size_t want) {
        if (!color[y]) {
          color[y] = want;
          queue.push_back(y);
          return true;
        }
        return *color[y] == want;
      };
      for (const auto& f : ifs.maps())
        if (!assign(f(x), (c + 1) % n)) return std::nullopt;
      for (State pre : preimages[x])
        if (!assign(pre, (c + n - 1) % n)) return std::nullopt;
    }
  }
  std::vector<std::size_t> out(size);
  for (State x = 0; x < size; ++x) out[x] = *color[x];
  return out;
}

}  // namespace

std::optional<std::string> tower_violation(const FiniteIFS& ifs, const CyclicTower& tower) {
  for (std::size_t i = 1; i <= tower.depth(); ++i) {
    if (auto why = level_violation(ifs, tower.level(i), tower.block_count(i), i)) return why;
    if (i >= 2) {
      const auto& coarse = tower.level(i - 1);
      const auto coarse_index = block_index(ifs.num_states(), coarse);
      const auto& fine = tower.level(i);
      for (std::size_t b = 0; b < fine.size(); ++b)
        for (State x : fine[b])
          if (coarse_index[x] != b % coarse.size())
            return "level " + std::to_string(i) + ": block " + std::to_string(b) +
                   " is not nested in block " + std::to_string(b % coarse.size()) + " of level " +
                   std::to_string(i - 1);
    }
  }
  return std::nullopt;
}

void validate_tower(const FiniteIFS& ifs, const CyclicTower& tower) {
  if (auto why = tower_violation(ifs, tower)) throw InputError("invalid tower: " + *why);
}

std::vector<StateSet> ModNColoring::fibers() const {
  std::vector<StateSet> out(n);
  for (State x = 0; x < color.size(); ++x) out[color[x]].push_back(x);
  return out;
}

ColoringResult find_mod_n_coloring(const FiniteIFS& ifs, std::size_t n) {
  if (n < 2) throw InputError("mod-n colourings need n >= 2");
  if (!is_minimal(ifs)) throw InputError("mod-n colourings are only searched on minimal systems");
  const std::size_t size = ifs.num_states();
  std::vector<std::optional<std::size_t>> color(size);
  color[0] = 0;
  std::deque<State> queue{0};
  while (!queue.empty()) {
    const State x = queue.front();
    queue.pop_front();
    const std::size_t want = (*color[x] + 1) % n;
    for (std::size_t l = 0; l < ifs.num_labels(); ++l) {
      const State y = ifs.map(l)(x);
      if (!color[y]) {
        color[y] = want;
        queue.push_back(y);
      } else if (*color[y] != want) {
        return {std::nullopt, ColoringConflict{l, x, y, want, *color[y]}};
      }
    }
  }
  ModNColoring g;
  g.n = n;
  for (const auto& c : color) g.color.push_back(*c);  // minimality: all reached from 0
  return {std::move(g), std::nullopt};
}

std::vector<TowerExtension> extend_tower(const FiniteIFS& ifs, const CyclicTower& tower) {
  const std::size_t k = tower.depth();
  const std::uint64_t m = tower.block_count(k);
  const std::size_t size = ifs.num_states();
  if (size % m != 0) return {};
  const std::vector<std::size_t> top =
      k == 0 ? std::vector<std::size_t>(size, 0) : block_index(size, tower.level(k));

  std::vector<TowerExtension> out;
  for (std::uint64_t p : prime_divisors(size / m)) {
    const std::size_t n = static_cast<std::size_t>(p * m);
    auto color = lift_coloring(ifs, top, n);
    if (!color) continue;
    // Rotate so block 0 holds state 0.
    const std::size_t shift = (*color)[0];
    std::vector<StateSet> blocks(n);
    for (State x = 0; x < size; ++x) blocks[((*color)[x] + n - shift) % n].push_back(x);
    auto candidate = tower.extended(p, std::move(blocks));
    if (!tower_violation(ifs, candidate)) out.push_back({p, std::move(candidate)});
  }
  return out;
}

CyclicTower max_tower(const FiniteIFS& ifs, const std::vector<Radix>& preference) {
  if (!is_minimal(ifs)) throw InputError("max_tower requires a minimal system");
  CyclicTower tower;
  while (true) {
    auto options = extend_tower(ifs, tower);
    if (options.empty()) return tower;
    auto chosen = options.begin();
    for (Radix p : preference) {
      auto it = std::find_if(options.begin(), options.end(),
                             [&](const TowerExtension& e) { return e.prime == p; });
      if (it != options.end()) {
        chosen = it;
        break;
      }
    }
    tower = std::move(chosen->tower);
  }
}

FactorMap::FactorMap(std::vector<Radix> radices, std::vector<std::vector<Radix>> digits)
    : radices_(std::move(radices)), digits_(std::move(digits)) {
  for (const auto& d : digits_) {
    if (d.size() != radices_.size()) throw InputError("digit vector length differs from tower depth");
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] >= radices_[i]) throw InputError("digit exceeds its radix");
  }
}

OdometerPoint FactorMap::point(State x) const {
  return OdometerPoint(BaseSequence::truncated(radices_), digits_.at(x));
}

mpz_class FactorMap::residue(State x) const {
  if (depth() == 0) return 0;
  return as_residue(point(x));
}

bool FactorMap::is_injective() const {
  auto sorted = digits_;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

bool FactorMap::is_surjective() const {
  auto sorted = digits_;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::uint64_t m = 1;
  for (Radix r : radices_) m *= r;
  return sorted.size() == m;
}

FactorMap FactorMap::with_digits(State x, std::vector<Radix> digits) const {
  auto copy = digits_;
  copy.at(x) = std::move(digits);
  return FactorMap(radices_, std::move(copy));
}

FactorMap build_factor_map(const FiniteIFS& ifs, const CyclicTower& tower) {
  validate_tower(ifs, tower);
  const std::size_t k = tower.depth();
  std::vector<std::vector<Radix>> digits(ifs.num_states());
  if (k > 0) {
    const auto base = tower.base();
    const auto& top = tower.level(k);
    for (std::size_t b = 0; b < top.size(); ++b) {
      const auto pt = from_residue(base, k, mpz_class(static_cast<unsigned long>(b)));
      for (State x : top[b]) digits[x] = pt.digits();
    }
  }
  return FactorMap(tower.radices(), std::move(digits));
}

EquivarianceResult verify_equivariance(const FiniteIFS& ifs, const FactorMap& pi) {
  if (pi.num_states() != ifs.num_states())
    throw InputError("factor map and system have different state counts");
  EquivarianceResult result;
  result.per_label.assign(ifs.num_labels(), true);
  if (pi.depth() == 0) return result;  // both sides are the one-point quotient
  for (std::size_t l = 0; l < ifs.num_labels(); ++l) {
    for (State x = 0; x < ifs.num_states(); ++x) {
      if (pi.point(ifs.map(l)(x)) != successor(pi.point(x))) {
        result.per_label[l] = false;
        if (result.ok) result.witness = std::make_pair(l, x);
        result.ok = false;
        break;
      }
    }
  }
  return result;
}

AlphaReport tower_to_alpha(const FiniteIFS& ifs, const CyclicTower& tower) {
  validate_tower(ifs, tower);
  AlphaReport report;
  for (Radix r : tower.radices()) {
    for (const auto& [p, e] : factorize(r)) {
      for (unsigned i = 0; i < e; ++i) report.primes.push_back(p);
      report.tower_multiplicity[p] += e;
    }
  }
  report.nm = nm_set(ifs, ifs.num_states());
  report.nm_multiplicity = nm_prime_multiplicity(report.nm);
  if (report.tower_multiplicity != report.nm_multiplicity) {
    auto show = [](const std::map<std::uint64_t, unsigned>& m) {
      std::string s = "{";
      for (const auto& [p, e] : m) s += (s.size() > 1 ? ", " : "") + std::to_string(p) + ": " + std::to_string(e);
      return s + "}";
    };
    throw ConsistencyError("tower prime counts " + show(report.tower_multiplicity) +
                           " disagree with N(p) from NM(F) " + show(report.nm_multiplicity));
  }
  return report;
}

bool injectivity_on_regularly_recurrent(const FiniteIFS& ifs, const FactorMap& pi,
                                        const StateSet& rr) {
  if (pi.num_states() != ifs.num_states())
    throw InputError("factor map and system have different state counts");
  for (State x : rr) {
    for (State y = 0; y < ifs.num_states(); ++y)
      if (y != x && pi.digits(y) == pi.digits(x)) return false;
  }
  return true;
}

}  // namespace addm
