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

#include <doctest.h>

#include <algorithm>

#include "dcgraph/baselines.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dcgraph;

TEST_CASE("scratch run after the first batch") {
  auto ex = fixture::running_example();
  ex.graph.apply_batch(ex.batches[0]);
  auto op = make_sssp(5, ex.id("a"));
  std::uint64_t evals = 0;
  auto s = scratch_run(ex.graph, *op, &evals);
  CHECK(s[ex.id("d")] == State::integer(50));
  CHECK(evals > 0);
}

TEST_CASE("landmark selection by total degree") {
  auto ex = fixture::running_example();
  auto lm = landmark_select(ex.graph, 2);
  std::sort(lm.begin(), lm.end());
  CHECK(lm == std::vector<VertexId>{ex.id("a"), ex.id("d")});
  CHECK(landmark_select(ex.graph, 5).size() == 5);
  CHECK_THROWS(landmark_select(ex.graph, 6));
}

TEST_CASE("landmark bounds bracket the distance and stay fresh") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto sc = fixture::random_scenario(seed, 40, 160, 15, 0.3);
    Graph g = sc.graph;
    LandmarkSet set(g, 4);
    auto check_all = [&] {
      for (VertexId s = 0; s < g.vertex_count(); s += 3) {
        auto dist = oracle::dijkstra(g, s);
        for (VertexId d = 0; d < g.vertex_count(); d += 5) {
          auto b = landmark_bounds(set, s, d);
          CHECK(b.lower <= dist[d]);
          CHECK(dist[d] <= b.upper);
        }
      }
    };
    check_all();
    for (const auto& b : sc.batches) {
      g.apply_batch(b);
      set.maintain(g, b);
    }
    check_all();
  }
}

TEST_CASE("pruned search returns exact distances") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto sc = fixture::random_scenario(seed, 60, 300, 1, 0.0);
    const Graph& g = sc.graph;
    LandmarkSet set(g, 5);
    for (VertexId s = 0; s < g.vertex_count(); s += 7) {
      auto dist = oracle::dijkstra(g, s);
      for (VertexId d = 1; d < g.vertex_count(); d += 6) {
        auto plain = scratch_spsp(g, s, d);
        auto pruned = scratch_landmark_spsp(g, set, s, d);
        CHECK(plain.distance == dist[d]);
        CHECK(pruned.distance == dist[d]);
        CHECK(pruned.expanded <= plain.expanded);
      }
    }
  }
}

TEST_CASE("scratch engine tracks updates") {
  auto ex = fixture::running_example();
  QuerySpec q{.kind = QueryKind::kSpsp, .source = ex.id("a"), .target = ex.id("d")};
  ScratchEngine eng(make_operator(q, 5));
  eng.initial_run(ex.graph);
  CHECK(eng.states()[ex.id("d")] == State::integer(20));
  for (const auto& b : ex.batches) {
    ex.graph.apply_batch(b);
    eng.maintain(ex.graph, b);
  }
  CHECK(eng.states() == oracle::dijkstra(ex.graph, ex.id("a")));
}
