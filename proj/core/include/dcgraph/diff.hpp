/* Copyright 2026 The dcgraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dcgraph/types.hpp"

namespace dcgraph {

/// Two-dimensional timestamp <graph version, IFE iteration> under the product
/// partial order. operator< is only the lexicographic storage order.
struct Timestamp2D {
  std::int64_t version = 0;
  Iteration iteration = 0;

  /// Product partial order.
  bool precedes_or_equals(const Timestamp2D& o) const { return version <= o.version && iteration <= o.iteration; }
  Timestamp2D lub(const Timestamp2D& o) const {
    return {std::max(version, o.version), std::max(iteration, o.iteration)};
  }

  friend auto operator<=>(const Timestamp2D&, const Timestamp2D&) = default;
};

/// Value carried by a difference. `seed` marks the iteration-0 tuple that an
/// aggregation input holds for its own key, so aggregates that ignore the
/// initial state after iteration 0 can tell it apart from contributions.
struct Tuple {
  State state;
  bool seed = false;

  friend bool operator==(const Tuple&, const Tuple&) = default;
  friend std::strong_ordering operator<=>(const Tuple& a, const Tuple& b) {
    if (auto c = a.state <=> b.state; c != 0) return c;
    return a.seed <=> b.seed;
  }
};

/// A multiset with signed multiplicities, kept sorted by tuple with no zero
/// entries. Doubles as collection content when every multiplicity is positive.
class DiffSet {
 public:
  struct Entry {
    Tuple tuple;
    std::int64_t multiplicity = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  DiffSet() = default;
  DiffSet(std::initializer_list<Entry> entries);
  static DiffSet from_states(std::span<const State> states);

  void add(const Tuple& t, std::int64_t multiplicity);
  void add(const DiffSet& other, std::int64_t scale = 1);
  DiffSet operator+(const DiffSet& o) const;
  DiffSet operator-(const DiffSet& o) const;

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<State> positive_states() const;
  bool all_positive() const;

  friend bool operator==(const DiffSet&, const DiffSet&) = default;

 private:
  std::vector<Entry> entries_;
};

/// Sums any number of difference sets; zero-sum tuples vanish.
DiffSet diffset_sum(std::span<const DiffSet> sets);

/// Indexed store of difference sets for one collection, keyed by
/// (key, timestamp). Reassembly sums every stored set at or below a timestamp.
class DiffTrace2D {
 public:
  using Column = std::map<Timestamp2D, DiffSet>;

  /// Raw addition into the set at (key, t).
  void add(Key key, Timestamp2D t, const DiffSet& delta);

  /// Content of `key` at `t`: sum of every set at s <= t.
  DiffSet reassemble(Key key, Timestamp2D t) const;
  /// Sum of every set at s <= t with s != t.
  DiffSet reassemble_before(Key key, Timestamp2D t) const;

  /// Stores `content - reassemble_before(key, t)` at t, replacing any set
  /// already there. Returns the stored delta; nothing is kept when empty.
  DiffSet record_delta(Key key, Timestamp2D t, const DiffSet& content);

  const DiffSet* at(Key key, Timestamp2D t) const;
  const Column* column(Key key) const;
  bool has_difference(Key key, Timestamp2D t) const { return at(key, t) != nullptr; }

  /// Sums every set at <h, iteration> with h <= version into <version, iteration>.
  void merge_row(std::int64_t version, Iteration iteration);

  std::vector<Key> keys() const;
  /// Number of stored (key, timestamp, tuple) records.
  std::size_t entry_count() const;
  void clear() { data_.clear(); }

  /// Lines `collection version iteration sign key state multiplicity`,
  /// lexicographically sorted.
  std::vector<std::string> dump(const std::string& collection,
                                const std::function<std::string(Key)>& key_name) const;

 private:
  std::unordered_map<Key, Column> data_;
};

/// Drops negative multiplicities from a key's one-dimensional difference
/// history, leaving one (iteration, state) pair per changed iteration.
/// Throws ConsistencyError when an iteration holds two positive states.
std::vector<std::pair<Iteration, State>> elide_negatives(const std::map<Iteration, DiffSet>& history);

/// Per-key sorted list of (iteration, state) change points, negatives elided.
/// A key's state at iteration i is the state at the latest stored i* <= i.
class MergedTrace {
 public:
  struct Entry {
    Iteration iteration;
    State state;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  MergedTrace() = default;
  explicit MergedTrace(std::size_t key_count) : rows_(key_count) {}

  std::size_t key_count() const { return rows_.size(); }
  void resize(std::size_t key_count) { rows_.resize(key_count); }

  std::optional<State> lookup(Key key, Iteration i) const;
  /// Latest stored iteration <= i.
  std::optional<Iteration> latest_at_or_before(Key key, Iteration i) const;
  std::optional<State> entry_at(Key key, Iteration i) const;
  /// Stored iterations strictly greater than `i`.
  std::vector<Iteration> iterations_after(Key key, Iteration i) const;
  /// The last stored state for `key`.
  std::optional<State> latest(Key key) const;

  void set(Key key, Iteration i, const State& s);
  bool erase(Key key, Iteration i);

  std::span<const Entry> entries(Key key) const;
  /// Every (key, state) stored at exactly iteration `i`, ordered by key.
  std::vector<std::pair<Key, State>> row(Iteration i) const;
  std::size_t entry_count() const { return count_; }

 private:
  std::vector<std::vector<Entry>> rows_;
  std::size_t count_ = 0;
};

/// Collapses a fully merged 2-D trace (one column per row) into a MergedTrace.
MergedTrace to_merged_trace(const DiffTrace2D& trace, std::size_t key_count);

/// Keys scheduled for aggregation, bucketed by iteration. Scheduling is
/// idempotent per (key, iteration); draining yields the lowest pending
/// iteration, so drained iterations never decrease.
class Frontier {
 public:
  /// Returns true when (key, iteration) was not already pending.
  bool schedule(Key key, Iteration iteration);
  bool contains(Key key, Iteration iteration) const;
  /// Lowest nonempty iteration and its keys (sorted), or nullopt at end of work.
  std::optional<std::pair<Iteration, std::vector<Key>>> drain_next();
  /// Iteration drain_next would return, without draining.
  std::optional<Iteration> peek() const;
  bool empty() const { return pending_ == 0; }
  Iteration max_bound() const { return static_cast<Iteration>(buckets_.size()) - 1; }
  /// Iteration of the most recent drain; -1 before the first.
  Iteration last_drained() const { return last_drained_; }
  void reset();

 private:
  std::vector<std::unordered_set<Key>> buckets_;
  std::size_t pending_ = 0;
  Iteration cursor_ = 0;
  Iteration last_drained_ = -1;
};

}  // namespace dcgraph
