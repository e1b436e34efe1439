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

#include "dcgraph/diff.hpp"

#include <algorithm>

namespace dcgraph {

DiffSet::DiffSet(std::initializer_list<Entry> entries) {
  for (const auto& e : entries) add(e.tuple, e.multiplicity);
}

DiffSet DiffSet::from_states(std::span<const State> states) {
  DiffSet d;
  for (const auto& s : states) d.add(Tuple{s}, 1);
  return d;
}

void DiffSet::add(const Tuple& t, std::int64_t multiplicity) {
  if (multiplicity == 0) return;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), t,
                             [](const Entry& e, const Tuple& v) { return e.tuple < v; });
  if (it != entries_.end() && it->tuple == t) {
    it->multiplicity += multiplicity;
    if (it->multiplicity == 0) entries_.erase(it);
  } else {
    entries_.insert(it, Entry{t, multiplicity});
  }
}

void DiffSet::add(const DiffSet& other, std::int64_t scale) {
  // Linear merge of two sorted runs.
  std::vector<Entry> merged;
  merged.reserve(entries_.size() + other.entries_.size());
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() || (a != entries_.end() && a->tuple < b->tuple)) {
      merged.push_back(*a++);
    } else if (a == entries_.end() || b->tuple < a->tuple) {
      merged.push_back({b->tuple, b->multiplicity * scale});
      ++b;
    } else {
      auto m = a->multiplicity + b->multiplicity * scale;
      if (m != 0) merged.push_back({a->tuple, m});
      ++a;
      ++b;
    }
  }
  entries_ = std::move(merged);
}

DiffSet DiffSet::operator+(const DiffSet& o) const {
  DiffSet r = *this;
  r.add(o, 1);
  return r;
}

DiffSet DiffSet::operator-(const DiffSet& o) const {
  DiffSet r = *this;
  r.add(o, -1);
  return r;
}

std::vector<State> DiffSet::positive_states() const {
  std::vector<State> out;
  for (const auto& e : entries_) {
    for (std::int64_t i = 0; i < e.multiplicity; ++i) out.push_back(e.tuple.state);
  }
  return out;
}

bool DiffSet::all_positive() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.multiplicity > 0; });
}

DiffSet diffset_sum(std::span<const DiffSet> sets) {
  DiffSet out;
  for (const auto& s : sets) out.add(s, 1);
  return out;
}

void DiffTrace2D::add(Key key, Timestamp2D t, const DiffSet& delta) {
  if (delta.empty()) return;
  auto& column = data_[key];
  auto& slot = column[t];
  slot.add(delta, 1);
  if (slot.empty()) {
    column.erase(t);
    if (column.empty()) data_.erase(key);
  }
}

DiffSet DiffTrace2D::reassemble(Key key, Timestamp2D t) const {
  DiffSet out;
  auto it = data_.find(key);
  if (it == data_.end()) return out;
  for (const auto& [ts, set] : it->second) {
    if (ts.version > t.version) break;
    if (ts.precedes_or_equals(t)) out.add(set, 1);
  }
  return out;
}

DiffSet DiffTrace2D::reassemble_before(Key key, Timestamp2D t) const {
  DiffSet out;
  auto it = data_.find(key);
  if (it == data_.end()) return out;
  for (const auto& [ts, set] : it->second) {
    if (ts.version > t.version) break;
    if (ts.precedes_or_equals(t) && ts != t) out.add(set, 1);
  }
  return out;
}

DiffSet DiffTrace2D::record_delta(Key key, Timestamp2D t, const DiffSet& content) {
  DiffSet delta = content - reassemble_before(key, t);
  auto it = data_.find(key);
  if (it != data_.end()) {
    it->second.erase(t);
    if (it->second.empty()) data_.erase(it);
  }
  add(key, t, delta);
  return delta;
}

const DiffSet* DiffTrace2D::at(Key key, Timestamp2D t) const {
  auto it = data_.find(key);
  if (it == data_.end()) return nullptr;
  auto jt = it->second.find(t);
  return jt == it->second.end() ? nullptr : &jt->second;
}

const DiffTrace2D::Column* DiffTrace2D::column(Key key) const {
  auto it = data_.find(key);
  return it == data_.end() ? nullptr : &it->second;
}

void DiffTrace2D::merge_row(std::int64_t version, Iteration iteration) {
  for (auto kit = data_.begin(); kit != data_.end();) {
    auto& column = kit->second;
    DiffSet merged;
    bool touched = false;
    for (auto it = column.begin(); it != column.end();) {
      if (it->first.iteration == iteration && it->first.version <= version) {
        merged.add(it->second, 1);
        it = column.erase(it);
        touched = true;
      } else {
        ++it;
      }
    }
    if (touched && !merged.empty()) column[{version, iteration}] = std::move(merged);
    if (column.empty()) {
      kit = data_.erase(kit);
    } else {
      ++kit;
    }
  }
}

std::vector<Key> DiffTrace2D::keys() const {
  std::vector<Key> out;
  out.reserve(data_.size());
  for (const auto& [k, _] : data_) out.push_back(k);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t DiffTrace2D::entry_count() const {
  std::size_t n = 0;
  for (const auto& [_, column] : data_) {
    for (const auto& [__, set] : column) n += set.size();
  }
  return n;
}

std::vector<std::string> DiffTrace2D::dump(const std::string& collection,
                                           const std::function<std::string(Key)>& key_name) const {
  std::vector<std::string> lines;
  for (const auto& [key, column] : data_) {
    for (const auto& [ts, set] : column) {
      for (const auto& e : set.entries()) {
        lines.push_back(collection + " " + std::to_string(ts.version) + " " + std::to_string(ts.iteration) + " " +
                        (e.multiplicity > 0 ? "+" : "-") + " " + key_name(key) + " " + e.tuple.state.to_string() +
                        " " + std::to_string(e.multiplicity > 0 ? e.multiplicity : -e.multiplicity));
      }
    }
  }
  std::sort(lines.begin(), lines.end());
  return lines;
}

std::vector<std::pair<Iteration, State>> elide_negatives(const std::map<Iteration, DiffSet>& history) {
  std::vector<std::pair<Iteration, State>> out;
  for (const auto& [iteration, set] : history) {
    std::optional<State> positive;
    for (const auto& e : set.entries()) {
      if (e.multiplicity <= 0) continue;
      if (positive || e.multiplicity > 1) {
        throw ConsistencyError("two positive states at iteration " + std::to_string(iteration));
      }
      positive = e.tuple.state;
    }
    if (positive) out.emplace_back(iteration, *positive);
  }
  return out;
}

namespace {

auto upper(std::span<const MergedTrace::Entry> list, Iteration i) {
  return std::upper_bound(list.begin(), list.end(), i,
                          [](Iteration v, const MergedTrace::Entry& e) { return v < e.iteration; });
}

}  // namespace

std::optional<State> MergedTrace::lookup(Key key, Iteration i) const {
  auto list = entries(key);
  auto it = upper(list, i);
  if (it == list.begin()) return std::nullopt;
  return std::prev(it)->state;
}

std::optional<Iteration> MergedTrace::latest_at_or_before(Key key, Iteration i) const {
  auto list = entries(key);
  auto it = upper(list, i);
  if (it == list.begin()) return std::nullopt;
  return std::prev(it)->iteration;
}

std::optional<State> MergedTrace::entry_at(Key key, Iteration i) const {
  auto list = entries(key);
  auto it = upper(list, i);
  if (it == list.begin() || std::prev(it)->iteration != i) return std::nullopt;
  return std::prev(it)->state;
}

std::vector<Iteration> MergedTrace::iterations_after(Key key, Iteration i) const {
  auto list = entries(key);
  std::vector<Iteration> out;
  for (auto it = upper(list, i); it != list.end(); ++it) out.push_back(it->iteration);
  return out;
}

std::optional<State> MergedTrace::latest(Key key) const {
  auto list = entries(key);
  if (list.empty()) return std::nullopt;
  return list.back().state;
}

void MergedTrace::set(Key key, Iteration i, const State& s) {
  if (key >= rows_.size()) rows_.resize(key + 1);
  auto& list = rows_[key];
  auto it = std::lower_bound(list.begin(), list.end(), i,
                             [](const Entry& e, Iteration v) { return e.iteration < v; });
  if (it != list.end() && it->iteration == i) {
    it->state = s;
  } else {
    list.insert(it, Entry{i, s});
    ++count_;
  }
}

bool MergedTrace::erase(Key key, Iteration i) {
  if (key >= rows_.size()) return false;
  auto& list = rows_[key];
  auto it = std::lower_bound(list.begin(), list.end(), i,
                             [](const Entry& e, Iteration v) { return e.iteration < v; });
  if (it == list.end() || it->iteration != i) return false;
  list.erase(it);
  --count_;
  return true;
}

std::span<const MergedTrace::Entry> MergedTrace::entries(Key key) const {
  if (key >= rows_.size()) return {};
  return rows_[key];
}

std::vector<std::pair<Key, State>> MergedTrace::row(Iteration i) const {
  std::vector<std::pair<Key, State>> out;
  for (Key k = 0; k < rows_.size(); ++k) {
    if (auto s = entry_at(k, i)) out.emplace_back(k, *s);
  }
  return out;
}

MergedTrace to_merged_trace(const DiffTrace2D& trace, std::size_t key_count) {
  MergedTrace out(key_count);
  for (Key key : trace.keys()) {
    std::map<Iteration, DiffSet> history;
    for (const auto& [ts, set] : *trace.column(key)) history[ts.iteration].add(set, 1);
    for (const auto& [i, s] : elide_negatives(history)) out.set(key, i, s);
  }
  return out;
}

bool Frontier::schedule(Key key, Iteration iteration) {
  if (iteration <= last_drained_) {
    throw ConsistencyError("cannot schedule iteration " + std::to_string(iteration) + " after draining " +
                           std::to_string(last_drained_));
  }
  if (static_cast<std::size_t>(iteration) >= buckets_.size()) buckets_.resize(static_cast<std::size_t>(iteration) + 1);
  bool inserted = buckets_[static_cast<std::size_t>(iteration)].insert(key).second;
  if (inserted) {
    ++pending_;
    cursor_ = std::min(cursor_, iteration);
  }
  return inserted;
}

bool Frontier::contains(Key key, Iteration iteration) const {
  if (iteration < 0 || static_cast<std::size_t>(iteration) >= buckets_.size()) return false;
  return buckets_[static_cast<std::size_t>(iteration)].contains(key);
}

std::optional<std::pair<Iteration, std::vector<Key>>> Frontier::drain_next() {
  if (pending_ == 0) return std::nullopt;
  while (buckets_[static_cast<std::size_t>(cursor_)].empty()) ++cursor_;
  auto& bucket = buckets_[static_cast<std::size_t>(cursor_)];
  std::vector<Key> keys(bucket.begin(), bucket.end());
  std::sort(keys.begin(), keys.end());
  pending_ -= bucket.size();
  bucket.clear();
  last_drained_ = cursor_;
  return std::make_pair(cursor_, std::move(keys));
}

std::optional<Iteration> Frontier::peek() const {
  if (pending_ == 0) return std::nullopt;
  auto i = cursor_;
  while (buckets_[static_cast<std::size_t>(i)].empty()) ++i;
  return i;
}

void Frontier::reset() {
  buckets_.clear();
  pending_ = 0;
  cursor_ = 0;
  last_drained_ = -1;
}

}  // namespace dcgraph
