#include "addm/finite_ifs.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

#include "addm/errors.hpp"
#include "addm/primes.hpp"

namespace addm {

namespace {

StateSet normalized(std::vector<State> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void require_single_map(const FiniteIFS& ifs, const char* what) {
  if (ifs.num_labels() != 1)
    throw InputError(std::string(what) + " is defined for single-map systems only (got " +
                     std::to_string(ifs.num_labels()) + " labels)");
}

// States reachable from `start` along nonempty words.
std::vector<char> reachable_nonempty(const FiniteIFS& ifs, State start) {
  std::vector<char> seen(ifs.num_states(), 0);
  std::deque<State> queue;
  for (const auto& f : ifs.maps()) {
    if (!seen[f(start)]) {
      seen[f(start)] = 1;
      queue.push_back(f(start));
    }
  }
  while (!queue.empty()) {
    const State y = queue.front();
    queue.pop_front();
    for (const auto& f : ifs.maps()) {
      if (!seen[f(y)]) {
        seen[f(y)] = 1;
        queue.push_back(f(y));
      }
    }
  }
  return seen;
}

// True if some word of length <= n identifies two distinct states of `set`.
// Once two states collide they stay collided, so this is equivalent to some
// length-n word failing to be injective on `set`.
bool some_word_collapses(const FiniteIFS& ifs, const StateSet& set, std::size_t n) {
  const std::size_t size = ifs.num_states();
  std::vector<std::pair<State, State>> frontier;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j) frontier.emplace_back(set[i], set[j]);
  for (std::size_t step = 0; step < n && !frontier.empty(); ++step) {
    std::vector<char> next_pairs(size * size, 0);
    std::vector<std::pair<State, State>> next;
    for (const auto& [y, z] : frontier) {
      for (const auto& f : ifs.maps()) {
        State a = f(y), b = f(z);
        if (a == b) return true;
        if (a > b) std::swap(a, b);
        if (!next_pairs[a * size + b]) {
          next_pairs[a * size + b] = 1;
          next.emplace_back(a, b);
        }
      }
    }
    frontier = std::move(next);
  }
  return false;
}

}  // namespace

Transformation::Transformation(std::vector<State> image) : image_(std::move(image)) {}

Transformation Transformation::identity(std::size_t n) {
  std::vector<State> image(n);
  for (std::size_t i = 0; i < n; ++i) image[i] = static_cast<State>(i);
  return Transformation(std::move(image));
}

Transformation Transformation::then(const Transformation& next) const {
  std::vector<State> image(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) image[i] = next(image_[i]);
  return Transformation(std::move(image));
}

StateSet Transformation::apply(const StateSet& set) const {
  std::vector<State> out;
  out.reserve(set.size());
  for (State x : set) out.push_back(image_[x]);
  return normalized(std::move(out));
}

bool Transformation::is_permutation() const {
  std::vector<char> hit(image_.size(), 0);
  for (State y : image_) {
    if (hit[y]) return false;
    hit[y] = 1;
  }
  return true;
}

FiniteIFS::FiniteIFS(std::size_t num_states, std::vector<std::string> labels,
                     std::vector<Transformation> maps, std::optional<Metric> metric)
    : num_states_(num_states),
      labels_(std::move(labels)),
      maps_(std::move(maps)),
      metric_(std::move(metric)) {
  if (num_states_ == 0) throw InputError("state space is empty");
  if (maps_.empty()) throw InputError("label set is empty");
  if (labels_.size() != maps_.size()) throw InputError("label and map counts differ");
  std::set<std::string> names;
  for (std::size_t l = 0; l < labels_.size(); ++l) {
    if (labels_[l].empty()) throw InputError("empty label name");
    if (!names.insert(labels_[l]).second) throw InputError("duplicate label '" + labels_[l] + "'");
    if (maps_[l].size() != num_states_)
      throw InputError("map '" + labels_[l] + "' has " + std::to_string(maps_[l].size()) +
                       " entries, expected " + std::to_string(num_states_));
    for (State y : maps_[l].image())
      if (y >= num_states_)
        throw InputError("map '" + labels_[l] + "' sends a state to " + std::to_string(y) +
                         ", outside the state space");
  }
  if (metric_) {
    const Metric& d = *metric_;
    if (d.size() != num_states_) throw InputError("metric must have one row per state");
    for (const auto& row : d)
      if (row.size() != num_states_) throw InputError("metric rows must have one entry per state");
    for (std::size_t x = 0; x < num_states_; ++x) {
      if (d[x][x] != 0) throw InputError("metric: d(x,x) must be 0");
      for (std::size_t y = 0; y < num_states_; ++y) {
        if (x != y && d[x][y] <= 0) throw InputError("metric: distinct states need positive distance");
        if (d[x][y] != d[y][x]) throw InputError("metric is not symmetric");
        for (std::size_t z = 0; z < num_states_; ++z)
          if (d[x][z] > d[x][y] + d[y][z])
            throw InputError("metric violates the triangle inequality at (" + std::to_string(x) +
                             ", " + std::to_string(y) + ", " + std::to_string(z) + ")");
      }
    }
  }
}

FiniteIFS FiniteIFS::from_tables(std::vector<std::pair<std::string, std::vector<State>>> maps) {
  if (maps.empty()) throw InputError("label set is empty");
  const std::size_t n = maps.front().second.size();
  std::vector<std::string> labels;
  std::vector<Transformation> tables;
  for (auto& [name, table] : maps) {
    labels.push_back(std::move(name));
    tables.emplace_back(std::move(table));
  }
  return FiniteIFS(n, std::move(labels), std::move(tables));
}

std::size_t FiniteIFS::label_index(std::string_view name) const {
  for (std::size_t l = 0; l < labels_.size(); ++l)
    if (labels_[l] == name) return l;
  throw InputError("unknown label '" + std::string(name) + "'");
}

mpq_class FiniteIFS::distance(State x, State y) const {
  if (metric_) return (*metric_)[x][y];
  return x == y ? 0 : 1;
}

mpq_class FiniteIFS::diameter(const StateSet& set) const {
  mpq_class best = 0;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j)
      if (distance(set[i], set[j]) > best) best = distance(set[i], set[j]);
  return best;
}

StateSet FiniteIFS::all_states() const {
  StateSet out(num_states_);
  for (std::size_t i = 0; i < num_states_; ++i) out[i] = static_cast<State>(i);
  return out;
}

Transformation compose(const FiniteIFS& ifs, const Word& word) {
  if (word.empty()) throw InputError("composition word must be nonempty");
  Transformation t = Transformation::identity(ifs.num_states());
  for (const auto& letter : word) t = t.then(ifs.map(ifs.label_index(letter)));
  return t;
}

StateSet image_of_set(const FiniteIFS& ifs, const StateSet& set) {
  std::vector<State> out;
  for (const auto& f : ifs.maps())
    for (State x : set) out.push_back(f(x));
  return normalized(std::move(out));
}

namespace {

// Distinct tables of length-k words together with the lexicographically
// smallest word (as label indices) realizing each.
std::map<Transformation, std::vector<std::size_t>> tables_with_words(const FiniteIFS& ifs,
                                                                     std::size_t k) {
  if (k == 0) throw InputError("word length must be positive");
  std::map<Transformation, std::vector<std::size_t>> level;
  for (std::size_t l = 0; l < ifs.num_labels(); ++l) level.try_emplace(ifs.map(l), std::vector{l});
  for (std::size_t step = 1; step < k; ++step) {
    std::map<Transformation, std::vector<std::size_t>> next;
    for (const auto& [table, word] : level) {
      for (std::size_t l = 0; l < ifs.num_labels(); ++l) {
        auto extended = word;
        extended.push_back(l);
        auto [it, inserted] = next.try_emplace(table.then(ifs.map(l)), extended);
        if (!inserted && extended < it->second) it->second = std::move(extended);
      }
    }
    level = std::move(next);
  }
  return level;
}

}  // namespace

std::vector<Transformation> word_tables(const FiniteIFS& ifs, std::size_t k) {
  std::vector<Transformation> out;
  for (auto& [table, word] : tables_with_words(ifs, k)) out.push_back(table);
  return out;
}

FiniteIFS power_system(const FiniteIFS& ifs, std::size_t k) {
  auto level = tables_with_words(ifs, k);
  std::vector<std::pair<std::vector<std::size_t>, Transformation>> ordered;
  for (auto& [table, word] : level) ordered.emplace_back(word, table);
  std::sort(ordered.begin(), ordered.end());
  std::vector<std::string> labels;
  std::vector<Transformation> maps;
  for (auto& [word, table] : ordered) {
    std::string name;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (i) name += '.';
      name += ifs.labels()[word[i]];
    }
    labels.push_back(std::move(name));
    maps.push_back(std::move(table));
  }
  return FiniteIFS(ifs.num_states(), std::move(labels), std::move(maps), ifs.metric());
}

MinimalSetReport minimal_sets(const FiniteIFS& ifs, std::size_t n) {
  if (n == 0) throw InputError("n must be positive");
  const std::size_t size = ifs.num_states();

  // Exactly-n-step successors of each state.
  std::vector<StateSet> step(size);
  for (State y = 0; y < size; ++y) {
    StateSet reach{y};
    for (std::size_t i = 0; i < n; ++i) reach = image_of_set(ifs, reach);
    step[y] = std::move(reach);
  }

  // A minimal set is the orbit closure of any of its points under the n-step
  // moves, and every length-n table permutes it.
  std::set<StateSet> found;
  for (State x = 0; x < size; ++x) {
    std::vector<char> in(size, 0);
    std::deque<State> queue{x};
    in[x] = 1;
    while (!queue.empty()) {
      const State y = queue.front();
      queue.pop_front();
      for (State z : step[y]) {
        if (!in[z]) {
          in[z] = 1;
          queue.push_back(z);
        }
      }
    }
    StateSet closure;
    for (State y = 0; y < size; ++y)
      if (in[y]) closure.push_back(y);
    if (found.count(closure)) continue;
    if (!some_word_collapses(ifs, closure, n)) found.insert(std::move(closure));
  }

  MinimalSetReport report;
  report.n = n;
  report.sets.assign(found.begin(), found.end());
  std::sort(report.sets.begin(), report.sets.end(),
            [](const StateSet& a, const StateSet& b) { return a.front() < b.front(); });
  report.is_whole_space = report.sets.size() == 1 && report.sets.front().size() == size;
  return report;
}

bool is_minimal(const FiniteIFS& ifs) {
  for (State x = 0; x < ifs.num_states(); ++x) {
    const auto seen = reachable_nonempty(ifs, x);
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) return false;
  }
  return true;
}

bool NMSet::contains(std::size_t n) const {
  return std::binary_search(members.begin(), members.end(), n);
}

NMSet nm_set(const FiniteIFS& ifs, std::size_t bound) {
  if (bound == 0) throw InputError("bound must be positive");
  if (!is_minimal(ifs)) throw InputError("NM(F) is only defined for minimal systems");
  NMSet nm;
  nm.bound = bound;
  nm.members.push_back(1);
  std::set<StateSet> earlier;
  for (const auto& m : minimal_sets(ifs, 1).sets) earlier.insert(m);
  for (std::size_t i = 2; i <= bound; ++i) {
    const auto level = minimal_sets(ifs, i).sets;
    const bool fresh = std::any_of(level.begin(), level.end(),
                                   [&](const StateSet& m) { return !earlier.count(m); });
    if (fresh) nm.members.push_back(i);
    earlier.insert(level.begin(), level.end());
  }
  return nm;
}

std::map<std::uint64_t, unsigned> nm_prime_multiplicity(const NMSet& nm) {
  std::map<std::uint64_t, unsigned> out;
  for (std::size_t s : nm.members) {
    for (const auto& [p, e] : factorize(s)) {
      auto& slot = out[p];
      slot = std::max(slot, e);
    }
  }
  return out;
}

MinimalSetReport canonical_cover(const FiniteIFS& ifs, std::size_t n) {
  if (n == 0) throw InputError("n must be positive");
  if (!nm_set(ifs, n).contains(n))
    throw InputError(std::to_string(n) + " is not in NM(F)");
  if (n == 1) {
    MinimalSetReport whole;
    whole.n = 1;
    whole.sets.push_back(ifs.all_states());
    whole.is_whole_space = true;
    return whole;
  }
  auto report = minimal_sets(ifs, n);
  std::vector<int> owner(ifs.num_states(), -1);
  for (std::size_t b = 0; b < report.sets.size(); ++b)
    for (State x : report.sets[b]) owner[x] = static_cast<int>(b);
  const bool covers = std::find(owner.begin(), owner.end(), -1) == owner.end();
  if (report.sets.size() != n || !covers)
    throw InputError("no canonical cover at n = " + std::to_string(n) + ": the F^" +
                     std::to_string(n) + "-minimal sets do not partition X into " +
                     std::to_string(n) + " blocks");
  return report;
}

StateSet regularly_recurrent_points(const FiniteIFS& ifs, std::size_t horizon) {
  StateSet out;
  for (State x = 0; x < ifs.num_states(); ++x) {
    // R_n = F^n({x}); x qualifies iff R_n = {x} for some n <= horizon, since
    // then R_{kn} = {x} for every k.
    std::set<StateSet> seen;
    StateSet reach{x};
    for (std::size_t n = 1; n <= horizon; ++n) {
      reach = image_of_set(ifs, reach);
      if (reach.size() == 1 && reach.front() == x) {
        out.push_back(x);
        break;
      }
      if (!seen.insert(reach).second) break;
    }
  }
  return out;
}

StateSet periodic_points(const FiniteIFS& ifs) {
  StateSet out;
  for (State x = 0; x < ifs.num_states(); ++x)
    if (reachable_nonempty(ifs, x)[x]) out.push_back(x);
  return out;
}

bool has_shadowing(const FiniteIFS& ifs, const mpq_class& delta, const mpq_class& epsilon) {
  require_single_map(ifs, "shadowing");
  const std::size_t size = ifs.num_states();
  if (size > 64) throw InputError("shadowing check supports at most 64 states");
  const Transformation& f = ifs.map(0);

  std::vector<std::uint64_t> near(size, 0);  // epsilon-balls
  std::vector<std::vector<State>> jumps(size);  // x -> admissible x'
  for (State x = 0; x < size; ++x) {
    for (State y = 0; y < size; ++y) {
      if (ifs.distance(x, y) < epsilon) near[x] |= std::uint64_t{1} << y;
      if (ifs.distance(f(x), y) <= delta) jumps[x].push_back(y);
    }
  }
  auto advance = [&](std::uint64_t positions) {
    std::uint64_t out = 0;
    for (State y = 0; y < size; ++y)
      if (positions >> y & 1) out |= std::uint64_t{1} << f(y);
    return out;
  };

  // State (x_k, P_k): P_k is the set of f^k(y) over the y that shadow the
  // pseudo-orbit so far. An infinite pseudo-orbit is shadowed iff P_k never
  // empties, by finiteness of X.
  std::set<std::pair<State, std::uint64_t>> seen;
  std::deque<std::pair<State, std::uint64_t>> queue;
  for (State x = 0; x < size; ++x) {
    if (near[x] == 0) return false;
    if (seen.emplace(x, near[x]).second) queue.emplace_back(x, near[x]);
  }
  while (!queue.empty()) {
    const auto [x, positions] = queue.front();
    queue.pop_front();
    const std::uint64_t moved = advance(positions);
    for (State next : jumps[x]) {
      const std::uint64_t kept = moved & near[next];
      if (kept == 0) return false;
      if (seen.emplace(next, kept).second) queue.emplace_back(next, kept);
    }
  }
  return true;
}

bool is_sensitive(const FiniteIFS& ifs, const mpq_class& delta) {
  require_single_map(ifs, "sensitivity");
  const std::size_t size = ifs.num_states();
  const Transformation& f = ifs.map(0);
  // Minimal nonempty open sets: the intersection of all open balls around x.
  // The smallest ball around y containing x is {z : d(y,z) <= d(y,x)}.
  for (State x = 0; x < size; ++x) {
    StateSet atom;
    for (State z = 0; z < size; ++z) {
      bool in_all = true;
      for (State y = 0; y < size && in_all; ++y)
        in_all = ifs.distance(y, z) <= ifs.distance(y, x);
      if (in_all) atom.push_back(z);
    }
    // Iterates of a set are eventually periodic; scan until a repeat.
    std::set<StateSet> seen;
    StateSet image = atom;
    bool spreads = false;
    while (true) {
      image = f.apply(image);
      if (ifs.diameter(image) > delta) {
        spreads = true;
        break;
      }
      if (!seen.insert(image).second) break;
    }
    if (!spreads) return false;
  }
  return true;
}

}  // namespace addm
