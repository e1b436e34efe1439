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

// Reference implementations that share no code with the library's engines.

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <queue>
#include <vector>

#include "dcgraph/graph.hpp"
#include "dcgraph/query.hpp"

namespace oracle {

using dcgraph::Graph;
using dcgraph::State;
using dcgraph::VertexId;

/// Textbook Dijkstra. reversed=true gives distances *to* s.
inline std::vector<State> dijkstra(const Graph& g, VertexId s, bool reversed = false) {
  const auto n = g.vertex_count();
  std::vector<std::int64_t> dist(n, -1);
  using Item = std::pair<std::int64_t, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[s] = 0;
  pq.emplace(0, s);
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d != dist[v]) continue;
    for (const auto& e : reversed ? g.in_edges(v) : g.out_edges(v)) {
      auto nd = d + e.weight;
      if (dist[e.other] < 0 || nd < dist[e.other]) {
        dist[e.other] = nd;
        pq.emplace(nd, e.other);
      }
    }
  }
  std::vector<State> out(n, State::infinite());
  for (VertexId v = 0; v < n; ++v) {
    if (dist[v] >= 0) out[v] = State::integer(dist[v]);
  }
  return out;
}

/// BFS hop counts, truncated at depth k.
inline std::vector<State> bfs(const Graph& g, VertexId s, int k) {
  const auto n = g.vertex_count();
  std::vector<int> depth(n, -1);
  std::deque<VertexId> q{s};
  depth[s] = 0;
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    if (depth[v] == k) continue;
    for (const auto& e : g.out_edges(v)) {
      if (depth[e.other] < 0) {
        depth[e.other] = depth[v] + 1;
        q.push_back(e.other);
      }
    }
  }
  std::vector<State> out(n, State::infinite());
  for (VertexId v = 0; v < n; ++v) {
    if (depth[v] >= 0) out[v] = State::integer(depth[v]);
  }
  return out;
}

/// Union-find over undirected edges; each vertex maps to its component's
/// smallest id.
inline std::vector<State> components(const Graph& g) {
  const auto n = g.vertex_count();
  std::vector<VertexId> parent(n);
  std::iota(parent.begin(), parent.end(), VertexId{0});
  std::function<VertexId(VertexId)> find = [&](VertexId x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (VertexId v = 0; v < n; ++v) {
    for (const auto& e : g.out_edges(v)) {
      auto a = find(v);
      auto b = find(e.other);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<State> out(n);
  for (VertexId v = 0; v < n; ++v) out[v] = State::integer(find(v));
  return out;
}

/// Dense power iteration: r' = (1-d)/n + d * A^T (r / outdeg); dangling mass
/// is dropped.
inline std::vector<double> power_iteration(const Graph& g, int iterations, double damping = 0.85) {
  const auto n = g.vertex_count();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (VertexId u = 0; u < n; ++u) {
    for (const auto& e : g.out_edges(u)) m[e.other][u] += 1.0 / static_cast<double>(g.out_degree(u));
  }
  std::vector<double> r(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> next(n, (1.0 - damping) / static_cast<double>(n));
    for (VertexId v = 0; v < n; ++v) {
      double acc = 0.0;
      for (VertexId u = 0; u < n; ++u) acc += m[v][u] * r[u];
      next[v] += damping * acc;
    }
    r = std::move(next);
  }
  return r;
}

/// BFS over the product of the graph and the automaton; per (vertex, state)
/// key the fewest edges to reach it from (s, start).
inline std::vector<State> product_bfs(const Graph& g, VertexId s, const dcgraph::LabelAutomaton& a) {
  const auto n = g.vertex_count();
  const auto q = a.states;
  std::vector<int> depth(n * q, -1);
  std::deque<std::pair<VertexId, std::uint32_t>> frontier{{s, a.start}};
  depth[s * q + a.start] = 0;
  while (!frontier.empty()) {
    auto [v, st] = frontier.front();
    frontier.pop_front();
    for (const auto& e : g.out_edges(v)) {
      for (const auto& t : a.transitions) {
        if (t.from != st || t.label != e.label) continue;
        auto key = e.other * q + t.to;
        if (depth[key] < 0) {
          depth[key] = depth[v * q + st] + 1;
          frontier.emplace_back(e.other, t.to);
        }
      }
    }
  }
  std::vector<State> out(n * q, State::infinite());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (depth[k] >= 0) out[k] = State::integer(depth[k]);
  }
  return out;
}

/// Vertices at the end of some path from s whose label sequence is exactly
/// `labels` (brute-force enumeration).
inline std::vector<VertexId> labeled_path_ends(const Graph& g, VertexId s, const std::vector<dcgraph::Label>& labels) {
  std::vector<char> hit(g.vertex_count(), 0);
  std::function<void(VertexId, std::size_t)> walk = [&](VertexId v, std::size_t depth) {
    if (depth == labels.size()) {
      hit[v] = 1;
      return;
    }
    for (const auto& e : g.out_edges(v)) {
      if (e.label == labels[depth]) walk(e.other, depth + 1);
    }
  };
  walk(s, 0);
  std::vector<VertexId> out;
  for (VertexId v = 0; v < hit.size(); ++v) {
    if (hit[v]) out.push_back(v);
  }
  return out;
}

/// Expected converged key states for a query, computed by the matching oracle.
inline std::vector<State> expected_states(const Graph& g, const dcgraph::QuerySpec& spec) {
  using dcgraph::QueryKind;
  switch (spec.kind) {
    case QueryKind::kSpsp:
      return dijkstra(g, *spec.source, spec.reversed);
    case QueryKind::kKhop:
      return bfs(g, *spec.source, *spec.k_max);
    case QueryKind::kRpq:
      return product_bfs(g, *spec.source, *spec.automaton);
    case QueryKind::kWcc:
      return components(g);
    case QueryKind::kPageRank: {
      auto r = power_iteration(g, spec.fixed_iterations.value_or(10), spec.damping);
      std::vector<State> out;
      for (double x : r) out.push_back(State::real(x));
      return out;
    }
  }
  return {};
}

}  // namespace oracle
