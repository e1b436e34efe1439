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

#include "dcgraph/engine.hpp"

#include <algorithm>
#include <limits>

namespace dcgraph {

Counters& Counters::operator+=(const Counters& o) {
  aggregate_reruns += o.aggregate_reruns;
  join_reconstructions += o.join_reconstructions;
  differences_written += o.differences_written;
  differences_retracted += o.differences_retracted;
  recomputations += o.recomputations;
  drops += o.drops;
  return *this;
}

Counters operator-(Counters a, const Counters& b) {
  a.aggregate_reruns -= b.aggregate_reruns;
  a.join_reconstructions -= b.join_reconstructions;
  a.differences_written -= b.differences_written;
  a.differences_retracted -= b.differences_retracted;
  a.recomputations -= b.recomputations;
  a.drops -= b.drops;
  return a;
}

Engine::Engine(std::unique_ptr<IfeOperator> op) : op_(std::move(op)) {
  if (!op_) throw ConfigError("engine needs an operator");
}

void Engine::check_sequence(const Graph& graph, const UpdateBatch& batch) const {
  if (version_ < 0) throw SequencingError("maintain() before initial_run()");
  if (batch.version != version_ + 1) {
    throw SequencingError("batch version " + std::to_string(batch.version) + " does not follow " +
                          std::to_string(version_));
  }
  if (graph.version() != batch.version) {
    throw SequencingError("graph is at version " + std::to_string(graph.version()) + ", batch produces " +
                          std::to_string(batch.version));
  }
}

std::vector<OutputChange> Engine::publish(const std::vector<std::pair<Key, State>>& fresh) {
  std::vector<OutputChange> out;
  for (const auto& [key, s] : fresh) {
    if (states_[key] == s) continue;
    out.push_back({key, states_[key], -1});
    out.push_back({key, s, +1});
    states_[key] = s;
  }
  std::sort(out.begin(), out.end(), [](const OutputChange& a, const OutputChange& b) {
    return a.key != b.key ? a.key < b.key : a.sign < b.sign;
  });
  return out;
}

namespace {

constexpr Iteration kLastRow = std::numeric_limits<Iteration>::max();

void tally(Counters& c, const DiffSet& delta) {
  for (const auto& e : delta.entries()) {
    if (e.multiplicity > 0) {
      c.differences_written += static_cast<std::uint64_t>(e.multiplicity);
    } else {
      c.differences_retracted += static_cast<std::uint64_t>(-e.multiplicity);
    }
  }
}

std::uint64_t vt_key(Key key, Iteration i) { return (static_cast<std::uint64_t>(key) << 24) | static_cast<std::uint64_t>(i); }

}  // namespace

// ---------------------------------------------------------------------------
// VDC

State VdcEngine::d_state(Key key, Timestamp2D t) const {
  auto content = trace_d_.reassemble(key, t);
  auto states = content.positive_states();
  if (states.size() != 1 || !content.all_positive()) {
    throw ConsistencyError("D of key " + std::to_string(key) + " does not hold exactly one state");
  }
  return states.front();
}

void VdcEngine::initial_run(const Graph& graph) {
  version_ = graph.version();
  trace_j_.clear();
  trace_d_.clear();
  trace_e_.clear();
  max_iteration_ = 0;
  for (const auto& e : graph.edges()) trace_e_.emplace_back(version_, EdgeUpdate{e, Sign::kInsert});

  const auto n = op_->key_count();
  states_.assign(n, State::infinite());
  for (Key v = 0; v < n; ++v) {
    auto init = op_->init(v);
    trace_j_.add(v, {version_, 0}, DiffSet{{Tuple{init, true}, 1}});
    trace_d_.add(v, {version_, 0}, DiffSet{{Tuple{init}, 1}});
    states_[v] = init;
  }
  run_version(graph, version_, {}, true);
  for (Key v = 0; v < n; ++v) states_[v] = d_state(v, {version_, kLastRow});
}

std::vector<OutputChange> VdcEngine::maintain(const Graph& graph, const UpdateBatch& batch) {
  check_sequence(graph, batch);
  const auto k = batch.version;
  std::vector<Key> affected;
  std::vector<KeyEdge> key_edges;
  for (const auto& u : batch.entries) {
    trace_e_.emplace_back(k, u);
    key_edges.clear();
    op_->edge_keys(graph, u.edge, key_edges);
    for (const auto& ke : key_edges) affected.push_back(ke.dst);
  }
  std::sort(affected.begin(), affected.end());
  affected.erase(std::unique(affected.begin(), affected.end()), affected.end());

  run_version(graph, k, affected, false);
  version_ = k;

  std::vector<std::pair<Key, State>> fresh;
  for (Key v = 0; v < op_->key_count(); ++v) {
    const auto* column = trace_d_.column(v);
    if (!column) continue;
    bool changed = std::any_of(column->begin(), column->end(), [&](const auto& kv) { return kv.first.version == k; });
    if (changed) fresh.emplace_back(v, d_state(v, {k, kLastRow}));
  }
  return publish(fresh);
}

void VdcEngine::run_version(const Graph& graph, std::int64_t k, const std::vector<Key>& affected, bool initial) {
  const auto& op = *op_;
  const auto n = op.key_count();
  const Iteration prev_max = max_iteration_;
  Iteration last_diff = 0;

  std::vector<Key> changed_prev;
  if (initial) {
    for (Key v = 0; v < n; ++v) changed_prev.push_back(v);
  }
  // First iteration at which J^v gained a difference in version k.
  std::unordered_map<Key, Iteration> j_first;
  std::vector<State> contrib;

  for (Iteration i = 1;; ++i) {
    if (i > prev_max + 1 && changed_prev.empty()) break;
    if (i > op.row_limit()) {
      if (op.bounded() || changed_prev.empty()) break;
      throw NonterminationError("no fixpoint within " + std::to_string(op.row_limit()) + " iterations");
    }

    // Join at <k, i>: keys whose edges changed, plus out-keys of keys whose D
    // changed at <k, i-1>.
    std::vector<Key> join_keys = affected;
    for (Key u : changed_prev) op.for_each_out(graph, u, [&](Key x) { join_keys.push_back(x); });
    std::sort(join_keys.begin(), join_keys.end());
    join_keys.erase(std::unique(join_keys.begin(), join_keys.end()), join_keys.end());

    std::unordered_map<Key, State> cache;
    auto read = [&](Key w) -> State {
      auto it = cache.find(w);
      if (it != cache.end()) return it->second;
      return cache.emplace(w, d_state(w, {k, i - 1})).first->second;
    };

    std::vector<Key> min_keys;
    for (Key v : join_keys) {
      ++counters_.join_reconstructions;
      op.gather(graph, v, read, contrib);
      DiffSet content{{Tuple{op.init(v), true}, 1}};
      for (const auto& c : contrib) content.add(Tuple{c}, 1);
      auto delta = trace_j_.record_delta(v, {k, i}, content);
      if (!delta.empty()) {
        tally(counters_, delta);
        min_keys.push_back(v);
        j_first.try_emplace(v, i);
      }
    }

    // Aggregate: direct rule, plus upper bounds of an earlier difference in
    // this version with a difference of an older version in this iteration.
    if (initial && i == 1) {
      for (Key v = 0; v < n; ++v) min_keys.push_back(v);
    }
    for (const auto& [v, first] : j_first) {
      if (first >= i) continue;
      const auto* column = trace_j_.column(v);
      bool older = std::any_of(column->begin(), column->end(),
                               [&](const auto& kv) { return kv.first.iteration == i && kv.first.version < k; });
      if (older) min_keys.push_back(v);
    }
    std::sort(min_keys.begin(), min_keys.end());
    min_keys.erase(std::unique(min_keys.begin(), min_keys.end()), min_keys.end());

    std::vector<Key> d_changed;
    for (Key v : min_keys) {
      note_rerun(v, i);
      auto content = trace_j_.reassemble(v, {k, i});
      if (!content.all_positive()) throw ConsistencyError("negative multiplicity in reassembled J");
      contrib.clear();
      for (const auto& e : content.entries()) {
        if (e.tuple.seed) continue;
        for (std::int64_t m = 0; m < e.multiplicity; ++m) contrib.push_back(e.tuple.state);
      }
      auto s = op.aggregate(v, i, contrib);
      auto delta = trace_d_.record_delta(v, {k, i}, DiffSet{{Tuple{s}, 1}});
      if (!delta.empty()) {
        tally(counters_, delta);
        d_changed.push_back(v);
      }
    }
    if (!d_changed.empty()) last_diff = i;
    changed_prev = std::move(d_changed);
  }
  max_iteration_ = std::max({Iteration{1}, prev_max, last_diff});
}

DifferenceCounts VdcEngine::count_differences(const ByteModel& model) const {
  DifferenceCounts c;
  c.e = trace_e_.size();
  c.j = trace_j_.entry_count();
  c.d = trace_d_.entry_count();
  c.bytes = c.total() * (model.d + model.s);
  return c;
}

std::vector<std::string> VdcEngine::dump_e(const Graph& graph) const {
  std::vector<std::string> lines;
  for (const auto& [version, u] : trace_e_) {
    lines.push_back("E " + std::to_string(version) + " 0 " + (u.sign == Sign::kInsert ? "+" : "-") + " " +
                    graph.vertex_names().name(u.edge.src) + " " + graph.vertex_names().name(u.edge.dst) + ":" +
                    std::to_string(u.edge.weight) + " 1");
  }
  std::sort(lines.begin(), lines.end());
  return lines;
}

// ---------------------------------------------------------------------------
// JOD

JodEngine::JodEngine(std::unique_ptr<IfeOperator> op, std::optional<DropConfig> drops)
    : Engine(std::move(op)), drops_(std::move(drops)) {}

void JodEngine::setup_store(const Graph& graph) {
  store_.reset();
  if (!drops_) return;
  drops_->policy.resolve(graph);
  if (!drops_->policy.can_drop()) return;
  if (drops_->store == StoreKind::kDet) {
    store_ = std::make_unique<DetStore>();
    return;
  }
  std::size_t expected = 0;
  if (drops_->bloom_expected_entries) {
    expected = *drops_->bloom_expected_entries;
  } else {
    // Undropped warm-up: count the differences the policy would drop.
    auto saved = counters_;
    auto* log = rerun_log_;
    rerun_log_ = nullptr;
    begin_initial(graph);
    while (step()) {
    }
    for (Key v = 0; v < op_->key_count(); ++v) {
      auto deg = drops_->policy.degree_of(graph, op_->vertex_of(v));
      for (const auto& e : trace_.entries(v)) {
        if (e.iteration >= 1 && drops_->policy.should_drop(v, e.iteration, graph.version(), deg)) ++expected;
      }
    }
    counters_ = saved;
    rerun_log_ = log;
    // Later batches drop too; an empty warm-up must not yield a zero-bit filter.
    expected = std::max<std::size_t>(expected, op_->key_count());
  }
  store_ = BloomStore::sized(expected, drops_->bloom_bits_per_entry, drops_->bloom_hashes);
}

void JodEngine::begin_initial(const Graph& graph) {
  const auto n = op_->key_count();
  trace_ = MergedTrace(n);
  for (Key v = 0; v < n; ++v) trace_.set(v, 0, op_->init(v));
  max_iteration_ = 0;
  graph_ = &graph;
  batch_version_ = graph.version();
  initial_ = true;
  frontier_.reset();
  ub_from_.clear();
  extra_in_.clear();
  touched_.clear();
  memo_.clear();
  for (Key v = 0; v < n; ++v) schedule(v, 1);
}

void JodEngine::initial_run(const Graph& graph) {
  version_ = graph.version();
  setup_store(graph);
  begin_initial(graph);
  while (step()) {
  }
  max_iteration_ = std::max(max_iteration_, Iteration{1});
  const auto n = op_->key_count();
  states_.assign(n, State::infinite());
  for (Key v = 0; v < n; ++v) states_[v] = access(v, max_iteration_);
  graph_ = nullptr;
}

std::vector<OutputChange> JodEngine::maintain(const Graph& graph, const UpdateBatch& batch) {
  begin_batch(graph, batch);
  while (step()) {
  }
  return finish();
}

void JodEngine::begin_batch(const Graph& graph, const UpdateBatch& batch) {
  check_sequence(graph, batch);
  graph_ = &graph;
  batch_version_ = batch.version;
  initial_ = false;
  frontier_.reset();
  ub_from_.clear();
  extra_in_.clear();
  touched_.clear();
  memo_.clear();

  std::vector<KeyEdge> key_edges;
  for (const auto& u : batch.entries) op_->edge_keys(graph, u.edge, key_edges);
  // Sources of changed edges count as in-neighbours for this batch even when
  // the edge is gone, since the old J was built from them.
  for (const auto& ke : key_edges) extra_in_[ke.dst].push_back(ke.src);
  for (const auto& ke : key_edges) {
    if (auto r = first_finite_row(ke.src)) schedule(ke.dst, *r + 1);
  }
}

std::optional<Iteration> JodEngine::first_finite_row(Key key) const {
  const auto list = trace_.entries(key);
  if (!list.empty() && list.front().state.is_finite()) return list.front().iteration;
  std::optional<Iteration> found;
  for (const auto& e : list) {
    if (e.state.is_finite()) {
      found = e.iteration;
      break;
    }
  }
  if (store_) {
    auto hi = found ? *found - 1 : max_iteration_;
    auto marks = store_->iterations_in(key, 1, hi);
    if (!marks.empty()) found = marks.front();
  }
  return found;
}

void JodEngine::schedule(Key key, Iteration i) {
  if (i > op_->row_limit()) {
    if (op_->bounded()) return;
    throw NonterminationError("no fixpoint within " + std::to_string(op_->row_limit()) + " iterations");
  }
  frontier_.schedule(key, i);
  if (!initial_) apply_upper_bound(key, i);
}

void JodEngine::apply_upper_bound(Key key, Iteration i) {
  Iteration hi = std::min(max_iteration_ + 1, op_->row_limit());
  auto [it, fresh] = ub_from_.try_emplace(key, i);
  if (!fresh) {
    if (it->second <= i) return;
    hi = std::min(hi, it->second - 1);
    it->second = i;
  }
  if (hi <= i) return;

  auto add = [&](Iteration j) {
    if (j > i && j <= hi) frontier_.schedule(key, j);
  };
  auto list = trace_.entries(key);
  for (auto e = std::upper_bound(list.begin(), list.end(), i,
                                 [](Iteration v, const MergedTrace::Entry& x) { return v < x.iteration; });
       e != list.end() && e->iteration <= hi; ++e) {
    add(e->iteration);
  }
  if (store_) {
    for (auto j : store_->iterations_in(key, i + 1, hi)) add(j);
  }

  auto scan_in = [&](Key w) {
    auto wl = trace_.entries(w);
    for (auto e = std::lower_bound(wl.begin(), wl.end(), i,
                                   [](const MergedTrace::Entry& x, Iteration v) { return x.iteration < v; });
         e != wl.end() && e->iteration < hi; ++e) {
      add(e->iteration + 1);
    }
    if (store_) {
      for (auto j : store_->iterations_in(w, i, hi - 1)) add(j + 1);
    }
  };
  op_->for_each_in(*graph_, key, [&](Key w, Weight) { scan_in(w); });
  if (auto ex = extra_in_.find(key); ex != extra_in_.end()) {
    for (Key w : ex->second) scan_in(w);
  }
}

std::optional<Iteration> JodEngine::step() {
  auto next = frontier_.drain_next();
  if (!next) return std::nullopt;
  for (Key v : next->second) process(v, next->first);
  return next->first;
}

void JodEngine::process(Key key, Iteration i) {
  const auto& graph = *graph_;
  note_rerun(key, i);
  touched_.insert(key);
  ++counters_.join_reconstructions;

  std::vector<State> contrib;
  op_->gather(graph, key, [&](Key w) { return access(w, i - 1); }, contrib);
  const State s = op_->aggregate(key, i, contrib);
  const State prev = access(key, i - 1);

  const auto old_entry = trace_.entry_at(key, i);
  const Status old_status = old_entry                             ? Status::kPresent
                            : (store_ && store_->contains(key, i)) ? Status::kDropped
                                                                   : Status::kAbsent;
  Status now;
  if (s == prev) {
    if (old_entry) {
      trace_.erase(key, i);
      ++counters_.differences_retracted;
    }
    if (store_) store_->forget(key, i);
    now = Status::kAbsent;
  } else if (store_ &&
             drops_->policy.should_drop(key, i, batch_version_, drops_->policy.degree_of(graph, op_->vertex_of(key)))) {
    if (old_entry) {
      trace_.erase(key, i);
      ++counters_.differences_retracted;
    }
    if (!store_->contains(key, i)) store_->record(key, i);
    ++counters_.drops;
    memo_[vt_key(key, i)] = s;
    now = Status::kDropped;
  } else {
    if (!old_entry || *old_entry != s) {
      if (old_entry) ++counters_.differences_retracted;
      ++counters_.differences_written;
      trace_.set(key, i, s);
    }
    if (store_) store_->forget(key, i);
    now = Status::kPresent;
  }
  if (now != Status::kAbsent) max_iteration_ = std::max(max_iteration_, i);

  bool fire = old_status != now || now == Status::kDropped || old_status == Status::kDropped ||
              (now == Status::kPresent && *old_entry != s);
  if (fire) op_->for_each_out(graph, key, [&](Key x) { schedule(x, i + 1); });
}

State JodEngine::access(Key key, Iteration i) {
  auto g = trace_.latest_at_or_before(key, i);
  if (!g) throw ConsistencyError("key " + std::to_string(key) + " has no state at iteration 0");
  if (!store_ || store_->size() == 0) return *trace_.lookup(key, i);
  auto d = store_->latest_in(key, *g, i);
  if (!d) return *trace_.lookup(key, i);

  auto vt = vt_key(key, *d);
  if (auto it = memo_.find(vt); it != memo_.end()) return it->second;
  if (!graph_) throw ConsistencyError("dropped state read outside maintenance");
  std::vector<State> contrib;
  const Iteration below = *d - 1;
  op_->gather(*graph_, key, [&](Key w) { return access(w, below); }, contrib);
  auto s = op_->aggregate(key, *d, contrib);
  ++counters_.recomputations;
  memo_.emplace(vt, s);
  return s;
}

std::vector<OutputChange> JodEngine::finish() {
  std::vector<Key> keys(touched_.begin(), touched_.end());
  std::sort(keys.begin(), keys.end());
  std::vector<std::pair<Key, State>> fresh;
  fresh.reserve(keys.size());
  for (Key v : keys) fresh.emplace_back(v, access(v, max_iteration_));
  version_ = batch_version_;
  graph_ = nullptr;
  return publish(fresh);
}

DifferenceCounts JodEngine::count_differences(const ByteModel& model) const {
  DifferenceCounts c;
  c.d = trace_.entry_count();
  if (store_) {
    c.dropped = store_->size();
    c.store_bytes = store_->bytes(model.d);
  }
  c.bytes = c.total() * (model.d + model.s) + c.store_bytes;
  return c;
}

}  // namespace dcgraph
