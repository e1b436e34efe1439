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
#include <filesystem>
#include <fstream>
#include <numeric>
#include <tuple>

#include "dcgraph/graph.hpp"
#include "fixtures.hpp"

using namespace dcgraph;

namespace {

std::size_t degree_sum(const Graph& g, bool out) {
  std::size_t s = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) s += out ? g.out_degree(v) : g.in_degree(v);
  return s;
}

}  // namespace

TEST_CASE("loading the running example") {
  auto ex = fixture::running_example();
  CHECK(ex.graph.vertex_count() == 5);
  CHECK(ex.graph.edge_count() == 7);
  CHECK(ex.id("a") == 0);
  CHECK(ex.id("b") == 1);
  CHECK(ex.id("e") == 4);
  CHECK(ex.graph.out_degree(ex.id("a")) == 3);
  CHECK(ex.graph.in_degree(ex.id("c")) == 2);
}

TEST_CASE("edge list parsing") {
  SUBCASE("empty input") {
    auto list = parse_edge_list("", {});
    auto g = build_graph(list);
    CHECK(g.vertex_count() == 0);
    CHECK(g.edge_count() == 0);
  }
  SUBCASE("malformed weight reports the line") {
    try {
      parse_edge_list("3 5 x\n", {.weighted = true, .labeled = false});
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
    }
  }
  SUBCASE("negative weight") { CHECK_THROWS_AS(parse_edge_list("1 2 -4\n", {.weighted = true}), ValidationError); }
  SUBCASE("comments, unweighted, duplicates") {
    auto list = parse_edge_list("# header\n7 9\n\n9 7\n7 9\n", {});
    CHECK(list.vertices.size() == 2);
    CHECK(list.vertices.name(0) == "7");
    REQUIRE(list.edges.size() == 3);
    CHECK(list.edges[0] == Edge{0, 1, 0, 1});
    CHECK(list.edges[2] == Edge{0, 1, 0, 1});
    auto g = build_graph(list);
    CHECK(g.out_degree(0) == 2);
  }
  SUBCASE("labels") {
    auto list = parse_edge_list("a b 3 knows\nb c 1 likes\nc a 2 knows\n", {.weighted = true, .labeled = true});
    CHECK(list.labels.size() == 2);
    CHECK(list.edges[2].label == *list.labels.find("knows"));
    CHECK(list.edges[2].weight == 2);
  }
  SUBCASE("too few fields") { CHECK_THROWS_AS(parse_edge_list("1 2\n", {.weighted = true}), ParseError); }
  SUBCASE("extra columns are ignored") { CHECK(parse_edge_list("1 2 3 4\n", {.weighted = true}).edges.size() == 1); }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_edge_list("/nonexistent/edges.txt", {}), IoError); }
}

TEST_CASE("loading from a file") {
  auto path = std::filesystem::temp_directory_path() / "dcgraph_test_edges.txt";
  {
    std::ofstream f(path);
    f << fixture::kRunningExample;
  }
  auto list = load_edge_list(path, {.weighted = true, .labeled = false});
  std::filesystem::remove(path);
  CHECK(build_graph(list).edge_count() == 7);
}

TEST_CASE("applying batches") {
  auto ex = fixture::running_example();
  auto& g = ex.graph;
  const auto a = ex.id("a"), d = ex.id("d");

  SUBCASE("weight change") {
    g.apply_batch(ex.batches[0]);
    CHECK(g.version() == 1);
    CHECK(g.contains({a, d, 0, 100}));
    CHECK_FALSE(g.contains({a, d, 0, 20}));
    CHECK(g.edge_count() == 7);
  }
  SUBCASE("empty batch bumps the version") {
    g.apply_batch({{}, 1});
    CHECK(g.version() == 1);
    CHECK(g.edge_count() == 7);
  }
  SUBCASE("deleting an absent edge leaves the graph alone") {
    Graph before = g;
    UpdateBatch bad{{{{a, d, 0, 100}, Sign::kInsert}, {{a, ex.id("c"), 0, 5}, Sign::kDelete}}, 1};
    CHECK_THROWS_AS(g.apply_batch(bad), UpdateError);
    CHECK(g == before);
  }
  SUBCASE("version skew") { CHECK_THROWS_AS(g.apply_batch({{}, 3}), SequencingError); }
}

TEST_CASE("forward replay then inverse replay restores the graph") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto sc = fixture::random_scenario(seed, 15, 40, 20, 0.4, 2, 3);
    Graph g = sc.graph;
    const Graph original = g;
    for (const auto& b : sc.batches) {
      g.apply_batch(b);
      CHECK(degree_sum(g, true) == g.edge_count());
      CHECK(degree_sum(g, false) == g.edge_count());
    }
    auto version = g.version();
    for (auto it = sc.batches.rbegin(); it != sc.batches.rend(); ++it) g.apply_batch(inverse_batch(*it, ++version));
    // Adjacency is a multiset; re-inserted edges land at the end of their lists.
    auto by_value = [](std::vector<Edge> es) {
      std::sort(es.begin(), es.end(), [](const Edge& x, const Edge& y) {
        return std::tie(x.src, x.dst, x.label, x.weight) < std::tie(y.src, y.dst, y.label, y.weight);
      });
      return es;
    };
    CHECK(by_value(g.edges()) == by_value(original.edges()));
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      CHECK(g.out_degree(v) == original.out_degree(v));
      CHECK(g.in_degree(v) == original.in_degree(v));
    }
  }
}

TEST_CASE("splitting for dynamism") {
  auto edges = random_edges(30, 100, 3);
  auto s = split_for_dynamism(edges, 42, 0.9);
  CHECK(s.initial.size() == 90);
  CHECK(s.updates.size() == 10);
  auto again = split_for_dynamism(edges, 42, 0.9);
  CHECK(again.initial == s.initial);
  CHECK(again.updates == s.updates);

  auto one = split_for_dynamism(std::vector<Edge>{{0, 1, 0, 1}}, 1, 0.9);
  CHECK(one.initial.empty());
  CHECK(one.updates.size() == 1);

  CHECK_THROWS_AS(split_for_dynamism(edges, 1, 1.0), ConfigError);
  CHECK_THROWS_AS(split_for_dynamism(edges, 1, 0.0), ConfigError);
}

TEST_CASE("deletion workloads") {
  auto edges = random_edges(40, 400, 5);
  auto list = make_edge_list(40, edges);
  auto split = split_for_dynamism(list.edges, 5, 0.75);
  Graph g = build_graph(list, split.initial);
  auto batches = make_insertion_batches(split.updates, 1);
  REQUIRE(batches.size() == 100);

  auto count_deletes = [](const std::vector<UpdateBatch>& bs) {
    return std::count_if(bs.begin(), bs.end(), [](const UpdateBatch& b) {
      return !b.entries.empty() && b.entries.front().sign == Sign::kDelete;
    });
  };
  CHECK(count_deletes(make_deletion_workload(batches, 0.25, 9, g)) == 25);
  auto half = make_deletion_workload(batches, 0.5, 9, g);
  CHECK(count_deletes(half) == 50);
  CHECK(half.size() == 100);

  auto none = make_deletion_workload(batches, 0.0, 9, g);
  REQUIRE(none.size() == batches.size());
  for (std::size_t i = 0; i < none.size(); ++i) CHECK(none[i].entries == batches[i].entries);

  // Every generated batch applies cleanly.
  Graph replay = g;
  for (const auto& b : half) replay.apply_batch(b);

  Graph empty(4);
  std::vector<UpdateBatch> one{{{}, 1}};
  CHECK_THROWS_AS(make_deletion_workload(one, 1.0, 1, empty), WorkloadError);
}

TEST_CASE("update stream text round trip") {
  auto ex = fixture::running_example();
  auto text = format_update_stream(ex.batches, ex.graph);
  CHECK(text == "- a d 20 0\n+ a d 100 0\n\n- b c 10 0\n+ b c 100 0\n");
  Graph g = ex.graph;
  auto parsed = parse_update_stream(text, g);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].entries == ex.batches[0].entries);
  CHECK(parsed[1].version == 2);
  CHECK_THROWS_AS(parse_update_stream("+ a zz 1 0\n", g), Error);
}
