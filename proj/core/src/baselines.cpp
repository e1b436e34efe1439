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

#include "dcgraph/baselines.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>

namespace dcgraph {

std::vector<State> scratch_run(const Graph& graph, const IfeOperator& op, std::uint64_t* evaluations) {
  const auto n = op.key_count();
  std::vector<State> state(n);
  for (Key v = 0; v < n; ++v) state[v] = op.init(v);

  std::vector<Key> candidates(n);
  std::iota(candidates.begin(), candidates.end(), Key{0});
  std::vector<State> contrib;
  std::vector<char> mark(n, 0);
  std::uint64_t evals = 0;

  for (Iteration i = 1; !candidates.empty(); ++i) {
    if (i > op.row_limit()) {
      if (op.bounded()) break;
      throw NonterminationError("no fixpoint within " + std::to_string(op.row_limit()) + " iterations");
    }
    // Synchronous round: every candidate reads the previous round's states.
    std::vector<std::pair<Key, State>> changed;
    for (Key v : candidates) {
      ++evals;
      op.gather(graph, v, [&](Key w) { return state[w]; }, contrib);
      auto s = op.aggregate(v, i, contrib);
      if (s != state[v]) changed.emplace_back(v, s);
    }
    candidates.clear();
    for (const auto& [v, s] : changed) state[v] = s;
    for (const auto& [v, s] : changed) {
      op.for_each_out(graph, v, [&](Key x) {
        if (!mark[x]) {
          mark[x] = 1;
          candidates.push_back(x);
        }
      });
    }
    for (Key x : candidates) mark[x] = 0;
    std::sort(candidates.begin(), candidates.end());
  }
  if (evaluations) *evaluations += evals;
  return state;
}

void ScratchEngine::initial_run(const Graph& graph) {
  version_ = graph.version();
  states_ = scratch_run(graph, *op_, &counters_.aggregate_reruns);
  max_iteration_ = 0;
}

std::vector<OutputChange> ScratchEngine::maintain(const Graph& graph, const UpdateBatch& batch) {
  check_sequence(graph, batch);
  auto fresh_states = scratch_run(graph, *op_, &counters_.aggregate_reruns);
  version_ = batch.version;
  std::vector<std::pair<Key, State>> fresh;
  fresh.reserve(fresh_states.size());
  for (Key v = 0; v < fresh_states.size(); ++v) fresh.emplace_back(v, fresh_states[v]);
  return publish(fresh);
}

std::vector<VertexId> landmark_select(const Graph& graph, std::size_t count) {
  if (graph.vertex_count() < count) {
    throw ConfigError("cannot select " + std::to_string(count) + " landmarks from " +
                      std::to_string(graph.vertex_count()) + " vertices");
  }
  std::vector<VertexId> order(graph.vertex_count());
  std::iota(order.begin(), order.end(), VertexId{0});
  auto degree = [&](VertexId v) { return graph.out_degree(v) + graph.in_degree(v); };
  std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return degree(a) > degree(b); });
  order.resize(count);
  return order;
}

LandmarkIndex::LandmarkIndex(VertexId landmark, std::size_t vertex_count)
    : landmark_(landmark),
      forward_(std::make_unique<JodEngine>(make_sssp(vertex_count, landmark, false))),
      backward_(std::make_unique<JodEngine>(make_sssp(vertex_count, landmark, true))) {}

void LandmarkIndex::initial_run(const Graph& graph) {
  forward_->initial_run(graph);
  backward_->initial_run(graph);
}

void LandmarkIndex::maintain(const Graph& graph, const UpdateBatch& batch) {
  forward_->maintain(graph, batch);
  backward_->maintain(graph, batch);
}

LandmarkSet::LandmarkSet(const Graph& graph, std::size_t count) {
  for (auto l : landmark_select(graph, count)) {
    indices_.emplace_back(l, graph.vertex_count());
    indices_.back().initial_run(graph);
  }
}

void LandmarkSet::maintain(const Graph& graph, const UpdateBatch& batch) {
  for (auto& idx : indices_) idx.maintain(graph, batch);
}

State LandmarkSet::upper(VertexId s, VertexId d) const {
  if (s == d) return State::integer(0);
  State best = State::infinite();
  for (const auto& idx : indices_) {
    const auto& a = idx.to(s);
    const auto& b = idx.from(d);
    if (a.is_finite() && b.is_finite()) best = std::min(best, State::integer(a.as_integer() + b.as_integer()));
  }
  return best;
}

State LandmarkSet::lower(VertexId v, VertexId d) const {
  if (v == d) return State::integer(0);
  std::int64_t best = 0;
  for (const auto& idx : indices_) {
    // dist(v->l) <= dist(v->d) + dist(d->l)
    const auto& vl = idx.to(v);
    const auto& dl = idx.to(d);
    if (vl.is_infinite() && dl.is_finite()) return State::infinite();
    if (vl.is_finite() && dl.is_finite()) best = std::max(best, vl.as_integer() - dl.as_integer());
    // dist(l->d) <= dist(l->v) + dist(v->d)
    const auto& ld = idx.from(d);
    const auto& lv = idx.from(v);
    if (lv.is_finite() && ld.is_infinite()) return State::infinite();
    if (lv.is_finite() && ld.is_finite()) best = std::max(best, ld.as_integer() - lv.as_integer());
  }
  return State::integer(best);
}

Bounds landmark_bounds(const LandmarkSet& set, VertexId s, VertexId d) { return {set.lower(s, d), set.upper(s, d)}; }

namespace {

template <typename Prune>
SpspResult prioritized_search(const Graph& graph, VertexId s, VertexId d, Prune&& prune) {
  SpspResult r{State::infinite(), 0};
  const auto n = graph.vertex_count();
  std::vector<std::int64_t> dist(n, -1);
  std::vector<char> done(n, 0);
  using Item = std::pair<std::int64_t, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[s] = 0;
  heap.emplace(0, s);
  while (!heap.empty()) {
    auto [k, v] = heap.top();
    heap.pop();
    if (done[v] || k != dist[v]) continue;
    done[v] = 1;
    if (v == d) {
      r.distance = State::integer(k);
      ++r.expanded;
      break;
    }
    if (prune(v, k)) continue;
    ++r.expanded;
    for (const auto& e : graph.out_edges(v)) {
      auto nk = k + e.weight;
      if (dist[e.other] < 0 || nk < dist[e.other]) {
        dist[e.other] = nk;
        heap.emplace(nk, e.other);
      }
    }
  }
  return r;
}

}  // namespace

SpspResult scratch_spsp(const Graph& graph, VertexId s, VertexId d) {
  return prioritized_search(graph, s, d, [](VertexId, std::int64_t) { return false; });
}

SpspResult scratch_landmark_spsp(const Graph& graph, const LandmarkSet& set, VertexId s, VertexId d) {
  const State ub = set.upper(s, d);
  return prioritized_search(graph, s, d, [&](VertexId v, std::int64_t k) {
    auto lb = set.lower(v, d);
    if (lb.is_infinite()) return true;
    return ub.is_finite() && k + lb.as_integer() > ub.as_integer();
  });
}

}  // namespace dcgraph
