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
#include <set>

#include "dcgraph/baselines.hpp"
#include "dcgraph/engine.hpp"
#include "fixtures.hpp"
#include "golden.hpp"
#include "oracles.hpp"

using namespace dcgraph;

namespace {

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

QuerySpec sssp_spec(VertexId s) {
  QuerySpec q;
  q.kind = QueryKind::kSpsp;
  q.source = s;
  return q;
}

std::vector<std::string> upto_version(const std::vector<std::string>& lines, int version) {
  std::vector<std::string> out;
  for (const auto& l : lines) {
    if (l[2] - '0' <= version) out.push_back(l);
  }
  return sorted(out);
}

}  // namespace

TEST_CASE("vdc reproduces the running example trace column by column") {
  auto ex = fixture::running_example();
  VdcEngine vdc(make_sssp(5, ex.id("a")));
  auto name = [&](Key k) { return ex.list.vertices.name(static_cast<std::uint32_t>(k)); };
  vdc.initial_run(ex.graph);
  CHECK(vdc.trace_j().dump("J", name) == upto_version(golden::kTraceJ, 0));
  CHECK(vdc.trace_d().dump("D", name) == upto_version(golden::kTraceD, 0));
  CHECK(vdc.states() == std::vector<State>{State::integer(0), State::integer(30), State::integer(40),
                                           State::integer(20), State::integer(10)});
  for (int v = 1; v <= 2; ++v) {
    CAPTURE(v);
    const auto& b = ex.batches[v - 1];
    ex.graph.apply_batch(b);
    vdc.maintain(ex.graph, b);
    CHECK(vdc.trace_j().dump("J", name) == upto_version(golden::kTraceJ, v));
    CHECK(vdc.trace_d().dump("D", name) == upto_version(golden::kTraceD, v));
  }
  auto e = vdc.dump_e(ex.graph);
  CHECK(std::count_if(e.begin(), e.end(), [](const std::string& l) { return l.rfind("E 0 0 +", 0) == 0; }) == 7);
  CHECK(std::find(e.begin(), e.end(), "E 1 0 - a d:20 1") != e.end());
  CHECK(std::find(e.begin(), e.end(), "E 2 0 + b c:100 1") != e.end());

  // Stored entries counted one per (key, timestamp, state), so +(c,40) with
  // multiplicity 2 is one entry.
  auto counts = vdc.count_differences();
  CHECK(counts.j == golden::kTraceJ.size());
  CHECK(counts.d == golden::kTraceD.size());
  CHECK(counts.bytes == (golden::kTraceJ.size() + golden::kTraceD.size()) * 16);
}

TEST_CASE("vdc first batch output is the net change of d") {
  auto ex = fixture::running_example();
  VdcEngine vdc(make_sssp(5, ex.id("a")));
  vdc.initial_run(ex.graph);
  ex.graph.apply_batch(ex.batches[0]);
  auto out = vdc.maintain(ex.graph, ex.batches[0]);
  REQUIRE(out.size() == 2);
  CHECK(out[0] == OutputChange{ex.id("d"), State::integer(20), -1});
  CHECK(out[1] == OutputChange{ex.id("d"), State::integer(50), +1});
}

TEST_CASE("jod merged row 1 after the second batch's first iteration") {
  auto ex = fixture::running_example();
  JodEngine jod(make_sssp(5, ex.id("a")));
  jod.initial_run(ex.graph);
  ex.graph.apply_batch(ex.batches[0]);
  jod.maintain(ex.graph, ex.batches[0]);
  ex.graph.apply_batch(ex.batches[1]);
  jod.begin_batch(ex.graph, ex.batches[1]);
  while (jod.next_iteration() && *jod.next_iteration() <= 1) jod.step();
  auto row = jod.trace().row(1);
  CHECK(row == std::vector<std::pair<Key, State>>{
                   {ex.id("b"), State::integer(30)}, {ex.id("d"), State::integer(100)}, {ex.id("e"), State::integer(10)}});
  while (jod.step()) {
  }
  jod.finish();
  CHECK(jod.states()[ex.id("d")] == State::integer(100));
  CHECK(jod.states()[ex.id("c")] == State::integer(120));
}

TEST_CASE("jod stores d with negatives elided") {
  auto ex = fixture::running_example();
  JodEngine jod(make_sssp(5, ex.id("a")));
  jod.initial_run(ex.graph);
  ex.graph.apply_batch(ex.batches[0]);
  jod.maintain(ex.graph, ex.batches[0]);
  auto d = jod.trace().entries(ex.id("d"));
  CHECK(std::vector<MergedTrace::Entry>(d.begin(), d.end()) ==
        std::vector<MergedTrace::Entry>{{0, State::infinite()}, {1, State::integer(100)}, {3, State::integer(50)}});
}

TEST_CASE("jod rerun schedule for the first batch") {
  auto ex = fixture::running_example();
  VdcEngine vdc(make_sssp(5, ex.id("a")));
  JodEngine jod(make_sssp(5, ex.id("a")));
  vdc.initial_run(ex.graph);
  jod.initial_run(ex.graph);
  std::vector<std::pair<Key, Iteration>> vlog, jlog;
  vdc.set_rerun_log(&vlog);
  jod.set_rerun_log(&jlog);
  ex.graph.apply_batch(ex.batches[0]);
  vdc.maintain(ex.graph, ex.batches[0]);
  jod.maintain(ex.graph, ex.batches[0]);
  std::set<std::pair<Key, Iteration>> j(jlog.begin(), jlog.end()), v(vlog.begin(), vlog.end());
  // d at 1 (its edge changed), d at 3 (in-neighbour c has a difference at 2),
  // c and e at 2 and 4 (d changed at 1 and 3).
  const auto c = ex.id("c"), d = ex.id("d"), e = ex.id("e");
  CHECK(j == std::set<std::pair<Key, Iteration>>{{d, 1}, {c, 2}, {e, 2}, {d, 3}, {c, 4}, {e, 4}});
  CHECK(std::includes(j.begin(), j.end(), v.begin(), v.end()));
}

TEST_CASE("jod reruns where vdc sees cancelling join differences") {
  // u has two in-edges whose weights swap; the join multiset is unchanged.
  auto list = parse_edge_list("s w1 1\ns w2 1\nw1 u 10\nw2 u 20\n", {.weighted = true, .labeled = false});
  Graph g = build_graph(list);
  auto id = [&](const char* n) { return *list.vertices.find(n); };
  UpdateBatch swap{{{{id("w1"), id("u"), 0, 10}, Sign::kDelete},
                    {{id("w1"), id("u"), 0, 20}, Sign::kInsert},
                    {{id("w2"), id("u"), 0, 20}, Sign::kDelete},
                    {{id("w2"), id("u"), 0, 10}, Sign::kInsert}},
                   1};
  VdcEngine vdc(make_sssp(4, id("s")));
  JodEngine jod(make_sssp(4, id("s")));
  vdc.initial_run(g);
  jod.initial_run(g);
  std::vector<std::pair<Key, Iteration>> vlog, jlog;
  vdc.set_rerun_log(&vlog);
  jod.set_rerun_log(&jlog);
  g.apply_batch(swap);
  CHECK(vdc.maintain(g, swap).empty());
  CHECK(jod.maintain(g, swap).empty());
  CHECK(vlog.empty());
  CHECK(std::find(jlog.begin(), jlog.end(), std::pair<Key, Iteration>{id("u"), 2}) != jlog.end());
  CHECK(jod.states() == vdc.states());
  CHECK(jod.states()[id("u")] == State::integer(11));
}

TEST_CASE("dropped states are recomputed on demand") {
  auto ex = fixture::running_example();
  // Out-degree below 2 drops b, c and e above iteration 0, b's +30 at 1 among them.
  DropConfig dc;
  dc.policy = parse_policy("degree:p=0,tau_min=2,tau_max=100");
  JodEngine plain(make_sssp(5, ex.id("a")));
  JodEngine drop(make_sssp(5, ex.id("a")), dc);
  plain.initial_run(ex.graph);
  drop.initial_run(ex.graph);
  REQUIRE(drop.store()->contains(ex.id("b"), 1));
  CHECK_FALSE(drop.trace().entry_at(ex.id("b"), 1));
  for (const auto& b : ex.batches) {
    ex.graph.apply_batch(b);
    auto before = drop.counters().recomputations;
    CHECK(plain.maintain(ex.graph, b) == drop.maintain(ex.graph, b));
    CHECK(drop.states() == plain.states());
    if (b.version == 2) CHECK(drop.counters().recomputations > before);
  }
  CHECK(drop.count_differences().d < plain.count_differences().d);
}

TEST_CASE("updates in another component rerun nothing") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    // Two disjoint random halves: ids [0, 10) and [10, 20).
    auto left = random_edges(10, 25, seed);
    auto right = random_edges(10, 25, seed + 100);
    for (auto& e : right) {
      e.src += 10;
      e.dst += 10;
    }
    left.insert(left.end(), right.begin(), right.end());
    auto list = make_edge_list(20, left);
    Graph g = build_graph(list);
    VdcEngine vdc(make_sssp(20, 0));
    JodEngine jod(make_sssp(20, 0));
    vdc.initial_run(g);
    jod.initial_run(g);
    vdc.reset_counters();
    jod.reset_counters();
    UpdateBatch b{{{{12, 15, 0, 3}, Sign::kInsert}}, 1};
    g.apply_batch(b);
    CHECK(vdc.maintain(g, b).empty());
    CHECK(jod.maintain(g, b).empty());
    CHECK(vdc.counters().aggregate_reruns == 0);
    CHECK(jod.counters().aggregate_reruns == 0);
  }
}

TEST_CASE("jod matches vdc on the running example") {
  auto ex = fixture::running_example();
  VdcEngine vdc(make_sssp(5, ex.id("a")));
  JodEngine jod(make_sssp(5, ex.id("a")));
  vdc.initial_run(ex.graph);
  jod.initial_run(ex.graph);
  CHECK(jod.states() == vdc.states());
  for (const auto& b : ex.batches) {
    ex.graph.apply_batch(b);
    auto o1 = vdc.maintain(ex.graph, b);
    auto o2 = jod.maintain(ex.graph, b);
    CHECK(o1 == o2);
    CHECK(jod.states() == vdc.states());
    CHECK(jod.states() == oracle::dijkstra(ex.graph, ex.id("a")));
  }
  CHECK(jod.count_differences().j == 0);
}

TEST_CASE("engines agree with oracles on random scenarios") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    for (double del : {0.0, 0.25, 0.5}) {
      auto sc = fixture::random_scenario(seed, 20, 60, 15, del, 3);
      std::vector<QuerySpec> specs;
      specs.push_back(sssp_spec(0));
      QuerySpec kh;
      kh.kind = QueryKind::kKhop;
      kh.source = 1;
      kh.k_max = 3;
      specs.push_back(kh);
      QuerySpec rpq;
      rpq.kind = QueryKind::kRpq;
      rpq.source = 2;
      std::vector<Label> labels{0, 1};
      rpq.automaton = rpq_template("Q2", labels);
      specs.push_back(rpq);
      QuerySpec wcc;
      wcc.kind = QueryKind::kWcc;
      specs.push_back(wcc);

      for (const auto& spec : specs) {
        CAPTURE(seed);
        CAPTURE(del);
        CAPTURE(to_string(spec.kind));
        Graph g = sc.graph;
        std::vector<std::unique_ptr<Engine>> engines;
        engines.push_back(std::make_unique<VdcEngine>(make_operator(spec, g.vertex_count())));
        engines.push_back(std::make_unique<JodEngine>(make_operator(spec, g.vertex_count())));
        DropConfig det;
        det.policy.p = 0.5;
        det.policy.seed = seed;
        engines.push_back(std::make_unique<JodEngine>(make_operator(spec, g.vertex_count()), det));
        DropConfig all = det;
        all.policy.p = 1.0;
        engines.push_back(std::make_unique<JodEngine>(make_operator(spec, g.vertex_count()), all));
        DropConfig bloom = det;
        bloom.store = StoreKind::kBloom;
        engines.push_back(std::make_unique<JodEngine>(make_operator(spec, g.vertex_count()), bloom));
        engines.push_back(std::make_unique<ScratchEngine>(make_operator(spec, g.vertex_count())));
        for (auto& e : engines) e->initial_run(g);
        for (auto& e : engines) REQUIRE(e->states() == oracle::expected_states(g, spec));
        for (const auto& b : sc.batches) {
          g.apply_batch(b);
          auto expect = oracle::expected_states(g, spec);
          for (std::size_t i = 0; i < engines.size(); ++i) {
            CAPTURE(i);
            CAPTURE(b.version);
            engines[i]->maintain(g, b);
            REQUIRE(engines[i]->states() == expect);
          }
        }
      }
    }
  }
}

TEST_CASE("pagerank tracks power iteration") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto sc = fixture::random_scenario(seed, 15, 40, 10, 0.25);
    QuerySpec pr;
    pr.kind = QueryKind::kPageRank;
    pr.fixed_iterations = 10;
    Graph g = sc.graph;
    VdcEngine vdc(make_operator(pr, g.vertex_count()));
    JodEngine jod(make_operator(pr, g.vertex_count()));
    DropConfig det;
    det.policy.p = 0.5;
    JodEngine drop(make_operator(pr, g.vertex_count()), det);
    vdc.initial_run(g);
    jod.initial_run(g);
    drop.initial_run(g);
    for (const auto& b : sc.batches) {
      g.apply_batch(b);
      vdc.maintain(g, b);
      jod.maintain(g, b);
      drop.maintain(g, b);
      auto expect = oracle::power_iteration(g, 10);
      for (VertexId v = 0; v < g.vertex_count(); ++v) {
        CHECK(std::abs(vdc.states()[v].as_real() - expect[v]) <= 1e-9);
        CHECK(std::abs(jod.states()[v].as_real() - expect[v]) <= 1e-9);
        CHECK(std::abs(drop.states()[v].as_real() - expect[v]) <= 1e-9);
      }
    }
  }
}
