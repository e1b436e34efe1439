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

#include <random>

#include "dcgraph/diff.hpp"

using namespace dcgraph;

namespace {

Tuple t(std::int64_t v) { return {State::integer(v)}; }
const Tuple kInf{State::infinite()};

}  // namespace

TEST_CASE("diffset sums cancel and stay sorted") {
  DiffSet a{{t(20), 1}};
  DiffSet b{{t(20), -1}, {t(50), 1}};
  CHECK(a + b == DiffSet{{t(50), 1}});
  CHECK((a - a).empty());
  DiffSet c{{t(50), 1}, {t(10), 2}, {t(10), -2}};
  CHECK(c.entries().size() == 1);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> val(0, 5), mult(-2, 2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<DiffSet> sets(3);
    for (auto& s : sets)
      for (int k = 0; k < 4; ++k) s.add(t(val(rng)), mult(rng));
    CHECK((sets[0] + sets[1]) + sets[2] == sets[0] + (sets[1] + sets[2]));
    CHECK(diffset_sum(sets) == sets[2] + sets[1] + sets[0]);
    for (std::size_t i = 1; i < sets[0].entries().size(); ++i)
      CHECK(sets[0].entries()[i - 1].tuple < sets[0].entries()[i].tuple);
  }
}

TEST_CASE("reassembly sums the lower set") {
  DiffTrace2D tr;
  const Key d = 3;
  tr.add(d, {0, 0}, {{kInf, 1}});
  tr.add(d, {0, 1}, {{kInf, -1}, {t(20), 1}});
  tr.add(d, {1, 1}, {{t(20), -1}, {t(100), 1}});
  tr.add(d, {1, 2}, {{t(100), -1}, {t(50), 1}});
  CHECK(tr.reassemble(d, {0, 0}) == DiffSet{{kInf, 1}});
  CHECK(tr.reassemble(d, {0, 3}) == DiffSet{{t(20), 1}});
  CHECK(tr.reassemble(d, {1, 1}) == DiffSet{{t(100), 1}});
  CHECK(tr.reassemble(d, {1, 3}) == DiffSet{{t(50), 1}});
  CHECK(tr.reassemble_before(d, {1, 1}) == DiffSet{{t(20), 1}});
  CHECK(tr.reassemble(99, {5, 5}).empty());
}

TEST_CASE("record_delta stores only the difference") {
  DiffTrace2D tr;
  tr.add(1, {0, 0}, {{t(5), 1}});
  CHECK(tr.record_delta(1, {1, 0}, {{t(5), 1}}).empty());
  CHECK_FALSE(tr.has_difference(1, {1, 0}));
  auto delta = tr.record_delta(1, {1, 0}, {{t(7), 1}});
  CHECK(delta == DiffSet{{t(5), -1}, {t(7), 1}});
  CHECK(tr.reassemble(1, {1, 0}) == DiffSet{{t(7), 1}});
  // Replacing restores the old content.
  tr.record_delta(1, {1, 0}, {{t(5), 1}});
  CHECK_FALSE(tr.has_difference(1, {1, 0}));
  CHECK(tr.entry_count() == 1);
}

TEST_CASE("merge_row folds earlier versions") {
  DiffTrace2D tr;
  tr.add(2, {0, 1}, {{t(4), 1}});
  tr.add(2, {1, 1}, {{t(4), -1}, {t(3), 1}});
  tr.add(2, {2, 1}, {{t(3), -1}, {t(9), 1}});
  auto before = tr.reassemble(2, {2, 1});
  tr.merge_row(2, 1);
  CHECK(tr.reassemble(2, {2, 1}) == before);
  CHECK(tr.at(2, {0, 1}) == nullptr);
  CHECK(tr.at(2, {1, 1}) == nullptr);
  REQUIRE(tr.at(2, {2, 1}) != nullptr);
  CHECK(*tr.at(2, {2, 1}) == DiffSet{{t(9), 1}});
}

TEST_CASE("eliding negatives") {
  std::map<Iteration, DiffSet> h{{0, {{kInf, 1}}}, {1, {{kInf, -1}, {t(100), 1}}}, {3, {{t(100), -1}, {t(50), 1}}}};
  auto e = elide_negatives(h);
  REQUIRE(e.size() == 3);
  CHECK(e[0] == std::pair<Iteration, State>{0, State::infinite()});
  CHECK(e[1] == std::pair<Iteration, State>{1, State::integer(100)});
  CHECK(e[2] == std::pair<Iteration, State>{3, State::integer(50)});

  std::map<Iteration, DiffSet> bad{{0, {{t(1), 1}, {t(2), 1}}}};
  CHECK_THROWS_AS(elide_negatives(bad), ConsistencyError);
}

TEST_CASE("merged trace lookups agree with a linear scan") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> it(0, 30), val(0, 100);
  MergedTrace mt(4);
  std::map<std::pair<Key, Iteration>, State> shadow;
  for (int op = 0; op < 400; ++op) {
    Key k = rng() % 4;
    Iteration i = it(rng);
    if (rng() % 4 == 0) {
      CHECK(mt.erase(k, i) == (shadow.erase({k, i}) == 1));
    } else {
      auto s = State::integer(val(rng));
      mt.set(k, i, s);
      shadow[{k, i}] = s;
    }
    Key qk = rng() % 4;
    Iteration qi = it(rng);
    std::optional<State> want;
    std::optional<Iteration> at;
    for (const auto& [ki, s] : shadow)
      if (ki.first == qk && ki.second <= qi) want = s, at = ki.second;
    CHECK(mt.lookup(qk, qi) == want);
    CHECK(mt.latest_at_or_before(qk, qi) == at);
    CHECK(mt.entry_count() == shadow.size());
  }
}

TEST_CASE("frontier is idempotent and drains in order") {
  Frontier f;
  CHECK(f.empty());
  CHECK_FALSE(f.peek());
  CHECK(f.schedule(4, 3));
  CHECK_FALSE(f.schedule(4, 3));
  CHECK(f.schedule(2, 3));
  CHECK(f.schedule(9, 1));
  CHECK(f.contains(4, 3));
  CHECK(f.peek() == 1);
  auto first = f.drain_next();
  REQUIRE(first);
  CHECK(first->first == 1);
  CHECK(first->second == std::vector<Key>{9});
  CHECK(f.schedule(1, 2));
  CHECK(f.peek() == 2);
  CHECK(f.drain_next()->first == 2);
  auto third = f.drain_next();
  CHECK(third->second == std::vector<Key>{2, 4});
  CHECK(f.last_drained() == 3);
  CHECK_FALSE(f.drain_next());
  CHECK(f.empty());
}
