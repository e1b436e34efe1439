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

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dcgraph/engine.hpp"
#include "dcgraph/graph.hpp"
#include "dcgraph/query.hpp"

namespace fixture {

using namespace dcgraph;

// Five-vertex weighted graph with two scripted weight changes.
inline constexpr const char* kRunningExample =
    "a b 30\n"
    "b c 10\n"
    "c d 10\n"
    "a d 20\n"
    "d e 10\n"
    "a e 10\n"
    "d c 20\n";

struct Running {
  EdgeList list;
  Graph graph;
  std::vector<UpdateBatch> batches;

  VertexId id(const char* name) const { return *list.vertices.find(name); }
};

inline Running running_example() {
  Running r;
  r.list = parse_edge_list(kRunningExample, {.weighted = true, .labeled = false});
  r.graph = build_graph(r.list);
  auto a = r.id("a"), b = r.id("b"), c = r.id("c"), d = r.id("d");
  r.batches.push_back({{{{a, d, 0, 20}, Sign::kDelete}, {{a, d, 0, 100}, Sign::kInsert}}, 1});
  r.batches.push_back({{{{b, c, 0, 10}, Sign::kDelete}, {{b, c, 0, 100}, Sign::kInsert}}, 2});
  return r;
}

/// Random small-graph scenario used by equivalence properties.
struct Scenario {
  Graph graph;
  std::vector<UpdateBatch> batches;
};

inline Scenario random_scenario(std::uint64_t seed, std::size_t n, std::size_t m, std::size_t batch_count,
                                double delete_fraction, std::uint32_t labels = 1, std::size_t batch_size = 1) {
  auto edges = random_edges(n, m, seed, 10, labels);
  auto list = make_edge_list(n, edges, labels);
  auto split = split_for_dynamism(list.edges, seed * 7 + 1, 0.9);
  Scenario s;
  s.graph = build_graph(list, split.initial);
  // Top the insertion stream up with fresh random edges when it is short.
  auto stream = split.updates;
  auto extra = random_edges(n, batch_count * batch_size, seed * 13 + 5, 10, labels);
  stream.insert(stream.end(), extra.begin(), extra.end());
  stream.resize(batch_count * batch_size);
  auto batches = make_insertion_batches(stream, batch_size);
  s.batches = make_deletion_workload(batches, delete_fraction, seed * 31 + 3, s.graph);
  return s;
}

}  // namespace fixture
