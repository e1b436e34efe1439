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

#include "dcgraph/query.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace dcgraph {

bool LabelAutomaton::is_accepting(std::uint32_t q) const {
  return std::find(accepting.begin(), accepting.end(), q) != accepting.end();
}

void LabelAutomaton::validate() const {
  if (states == 0 || start >= states) throw QueryError("automaton start state out of range");
  for (auto q : accepting) {
    if (q >= states) throw QueryError("accepting state out of range");
  }
  for (const auto& t : transitions) {
    if (t.from >= states || t.to >= states) throw QueryError("transition endpoint out of range");
  }
}

LabelAutomaton rpq_template(std::string_view name, std::span<const Label> labels) {
  auto need = [&](std::size_t n) {
    if (labels.size() != n) {
      throw QueryError(std::string(name) + " takes " + std::to_string(n) + " labels, got " +
                       std::to_string(labels.size()));
    }
  };
  LabelAutomaton a;
  if (name == "Q1") {
    need(1);
    a.states = 1;
    a.accepting = {0};
    a.transitions = {{0, labels[0], 0}};
  } else if (name == "Q2") {
    need(2);
    a.states = 2;
    a.accepting = {1};
    a.transitions = {{0, labels[0], 1}, {1, labels[1], 1}};
  } else if (name == "Q3") {
    need(5);
    a.states = 6;
    a.accepting = {5};
    for (std::uint32_t q = 0; q < 5; ++q) a.transitions.push_back({q, labels[q], q + 1});
  } else {
    throw QueryError("unknown RPQ template '" + std::string(name) + "'");
  }
  return a;
}

std::string_view to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::kSpsp:
      return "spsp";
    case QueryKind::kKhop:
      return "khop";
    case QueryKind::kRpq:
      return "rpq";
    case QueryKind::kWcc:
      return "wcc";
    case QueryKind::kPageRank:
      return "pagerank";
  }
  return "?";
}

void QuerySpec::validate(std::size_t vertex_count) const {
  auto check_vertex = [&](const std::optional<VertexId>& v, const char* what) {
    if (!v) throw QueryError(std::string(to_string(kind)) + " requires a " + what);
    if (*v >= vertex_count) throw QueryError(std::string(what) + " vertex out of range");
  };
  switch (kind) {
    case QueryKind::kSpsp:
      check_vertex(source, "source");
      if (target) check_vertex(target, "target");
      break;
    case QueryKind::kKhop:
      check_vertex(source, "source");
      if (!k_max || *k_max < 1) throw QueryError("khop requires k >= 1");
      break;
    case QueryKind::kRpq:
      check_vertex(source, "source");
      if (!automaton) throw QueryError("rpq requires an automaton");
      automaton->validate();
      break;
    case QueryKind::kWcc:
      break;
    case QueryKind::kPageRank:
      if (vertex_count == 0) throw QueryError("pagerank on an empty graph");
      break;
  }
}

namespace {

std::optional<State> min_contribution(const State& s, Weight w) {
  if (s.is_infinite()) return std::nullopt;
  return s.plus(w);
}

State min_of(State init, std::span<const State> contributions) {
  for (const auto& c : contributions) init = std::min(init, c);
  return init;
}

Iteration fixpoint_limit(std::size_t keys) { return static_cast<Iteration>(std::max<std::size_t>(keys, 1)); }

class SsspOperator final : public IfeOperator {
 public:
  SsspOperator(std::size_t n, VertexId source, bool reversed) : n_(n), source_(source), reversed_(reversed) {}

  QueryKind kind() const override { return QueryKind::kSpsp; }
  std::size_t key_count() const override { return n_; }
  State init(Key key) const override { return key == source_ ? State::integer(0) : State::infinite(); }

  void for_each_in(const Graph& g, Key key, InFn fn) const override {
    auto v = static_cast<VertexId>(key);
    for (const auto& e : reversed_ ? g.out_edges(v) : g.in_edges(v)) fn(e.other, e.weight);
  }
  void for_each_out(const Graph& g, Key key, OutFn fn) const override {
    auto v = static_cast<VertexId>(key);
    for (const auto& e : reversed_ ? g.in_edges(v) : g.out_edges(v)) fn(e.other);
  }
  std::optional<State> propagate(const Graph&, Key, const State& s, Weight w) const override {
    return min_contribution(s, w);
  }
  State aggregate(Key key, Iteration, std::span<const State> c) const override { return min_of(init(key), c); }
  void edge_keys(const Graph&, const Edge& e, std::vector<KeyEdge>& out) const override {
    if (reversed_) {
      out.push_back({e.dst, e.src});
    } else {
      out.push_back({e.src, e.dst});
    }
  }
  Iteration row_limit() const override { return fixpoint_limit(n_); }
  bool bounded() const override { return false; }

 private:
  std::size_t n_;
  VertexId source_;
  bool reversed_;
};

class KhopOperator final : public IfeOperator {
 public:
  KhopOperator(std::size_t n, VertexId source, int k) : n_(n), source_(source), k_(k) {}

  QueryKind kind() const override { return QueryKind::kKhop; }
  std::size_t key_count() const override { return n_; }
  State init(Key key) const override { return key == source_ ? State::integer(0) : State::infinite(); }

  void for_each_in(const Graph& g, Key key, InFn fn) const override {
    for (const auto& e : g.in_edges(static_cast<VertexId>(key))) fn(e.other, 1);
  }
  void for_each_out(const Graph& g, Key key, OutFn fn) const override {
    for (const auto& e : g.out_edges(static_cast<VertexId>(key))) fn(e.other);
  }
  std::optional<State> propagate(const Graph&, Key, const State& s, Weight) const override {
    return min_contribution(s, 1);
  }
  State aggregate(Key key, Iteration, std::span<const State> c) const override { return min_of(init(key), c); }
  void edge_keys(const Graph&, const Edge& e, std::vector<KeyEdge>& out) const override {
    out.push_back({e.src, e.dst});
  }
  Iteration row_limit() const override { return k_; }
  bool bounded() const override { return true; }

 private:
  std::size_t n_;
  VertexId source_;
  int k_;
};

class RpqOperator final : public IfeOperator {
 public:
  RpqOperator(std::size_t n, VertexId source, LabelAutomaton a)
      : n_(n), q_(a.states), source_(source), automaton_(std::move(a)), forward_(q_), backward_(q_) {
    automaton_.validate();
    for (const auto& t : automaton_.transitions) {
      forward_[t.from].push_back({t.label, t.to});
      backward_[t.to].push_back({t.label, t.from});
    }
  }

  QueryKind kind() const override { return QueryKind::kRpq; }
  std::size_t key_count() const override { return n_ * q_; }
  VertexId vertex_of(Key key) const override { return static_cast<VertexId>(key / q_); }
  State init(Key key) const override {
    return key == pack(source_, automaton_.start) ? State::integer(0) : State::infinite();
  }

  void for_each_in(const Graph& g, Key key, InFn fn) const override {
    auto v = static_cast<VertexId>(key / q_);
    auto q = static_cast<std::uint32_t>(key % q_);
    for (const auto& e : g.in_edges(v)) {
      for (const auto& [label, from] : backward_[q]) {
        if (label == e.label) fn(pack(e.other, from), 1);
      }
    }
  }
  void for_each_out(const Graph& g, Key key, OutFn fn) const override {
    auto v = static_cast<VertexId>(key / q_);
    auto q = static_cast<std::uint32_t>(key % q_);
    for (const auto& e : g.out_edges(v)) {
      for (const auto& [label, to] : forward_[q]) {
        if (label == e.label) fn(pack(e.other, to));
      }
    }
  }
  std::optional<State> propagate(const Graph&, Key, const State& s, Weight) const override {
    return min_contribution(s, 1);
  }
  State aggregate(Key key, Iteration, std::span<const State> c) const override { return min_of(init(key), c); }
  void edge_keys(const Graph&, const Edge& e, std::vector<KeyEdge>& out) const override {
    for (const auto& t : automaton_.transitions) {
      if (t.label == e.label) out.push_back({pack(e.src, t.from), pack(e.dst, t.to)});
    }
  }
  Iteration row_limit() const override { return fixpoint_limit(key_count()); }
  bool bounded() const override { return false; }

  const LabelAutomaton& automaton() const { return automaton_; }

 private:
  Key pack(VertexId v, std::uint32_t q) const { return static_cast<Key>(v) * q_ + q; }

  std::size_t n_;
  std::uint32_t q_;
  VertexId source_;
  LabelAutomaton automaton_;
  std::vector<std::vector<std::pair<Label, std::uint32_t>>> forward_;
  std::vector<std::vector<std::pair<Label, std::uint32_t>>> backward_;
};

class WccOperator final : public IfeOperator {
 public:
  explicit WccOperator(std::size_t n) : n_(n) {}

  QueryKind kind() const override { return QueryKind::kWcc; }
  std::size_t key_count() const override { return n_; }
  State init(Key key) const override { return State::integer(static_cast<std::int64_t>(key)); }

  void for_each_in(const Graph& g, Key key, InFn fn) const override {
    auto v = static_cast<VertexId>(key);
    for (const auto& e : g.in_edges(v)) fn(e.other, 0);
    for (const auto& e : g.out_edges(v)) fn(e.other, 0);
  }
  void for_each_out(const Graph& g, Key key, OutFn fn) const override {
    auto v = static_cast<VertexId>(key);
    for (const auto& e : g.out_edges(v)) fn(e.other);
    for (const auto& e : g.in_edges(v)) fn(e.other);
  }
  std::optional<State> propagate(const Graph&, Key, const State& s, Weight) const override { return s; }
  State aggregate(Key key, Iteration, std::span<const State> c) const override { return min_of(init(key), c); }
  void edge_keys(const Graph&, const Edge& e, std::vector<KeyEdge>& out) const override {
    out.push_back({e.src, e.dst});
    out.push_back({e.dst, e.src});
  }
  Iteration row_limit() const override { return fixpoint_limit(n_); }
  bool bounded() const override { return false; }

 private:
  std::size_t n_;
};

class PageRankOperator final : public IfeOperator {
 public:
  PageRankOperator(std::size_t n, int iterations, double damping)
      : n_(n), iterations_(iterations), damping_(damping) {}

  QueryKind kind() const override { return QueryKind::kPageRank; }
  std::size_t key_count() const override { return n_; }
  State init(Key) const override { return State::real(1.0 / static_cast<double>(n_)); }

  void for_each_in(const Graph& g, Key key, InFn fn) const override {
    for (const auto& e : g.in_edges(static_cast<VertexId>(key))) fn(e.other, 1);
  }
  void for_each_out(const Graph& g, Key key, OutFn fn) const override {
    for (const auto& e : g.out_edges(static_cast<VertexId>(key))) fn(e.other);
  }
  std::optional<State> propagate(const Graph& g, Key src, const State& s, Weight) const override {
    auto deg = g.out_degree(static_cast<VertexId>(src));
    if (deg == 0) return std::nullopt;
    return State::real(s.as_real() / static_cast<double>(deg));
  }
  State aggregate(Key, Iteration, std::span<const State> c) const override {
    // Summation order is fixed by sorting, so equal multisets give equal bits.
    std::vector<double> values;
    values.reserve(c.size());
    for (const auto& s : c) values.push_back(s.as_real());
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    return State::real((1.0 - damping_) / static_cast<double>(n_) + damping_ * sum);
  }
  void edge_keys(const Graph& g, const Edge& e, std::vector<KeyEdge>& out) const override {
    // The source's out-degree changed, so every out-neighbour's share did too.
    out.push_back({e.src, e.dst});
    for (const auto& a : g.out_edges(e.src)) out.push_back({e.src, a.other});
  }
  Iteration row_limit() const override { return iterations_; }
  bool bounded() const override { return true; }

 private:
  std::size_t n_;
  int iterations_;
  double damping_;
};

}  // namespace

std::unique_ptr<IfeOperator> make_sssp(std::size_t vertex_count, VertexId source, bool reversed) {
  return std::make_unique<SsspOperator>(vertex_count, source, reversed);
}

std::unique_ptr<IfeOperator> make_khop(std::size_t vertex_count, VertexId source, int k_max) {
  if (k_max < 1) throw QueryError("khop requires k >= 1");
  return std::make_unique<KhopOperator>(vertex_count, source, k_max);
}

std::unique_ptr<IfeOperator> make_rpq(std::size_t vertex_count, VertexId source, LabelAutomaton automaton) {
  return std::make_unique<RpqOperator>(vertex_count, source, std::move(automaton));
}

std::unique_ptr<IfeOperator> make_wcc(std::size_t vertex_count) { return std::make_unique<WccOperator>(vertex_count); }

std::unique_ptr<IfeOperator> make_pagerank(std::size_t vertex_count, int iterations, double damping) {
  if (vertex_count == 0) throw QueryError("pagerank on an empty graph");
  return std::make_unique<PageRankOperator>(vertex_count, iterations, damping);
}

std::unique_ptr<IfeOperator> make_operator(const QuerySpec& spec, std::size_t vertex_count) {
  spec.validate(vertex_count);
  switch (spec.kind) {
    case QueryKind::kSpsp:
      return make_sssp(vertex_count, *spec.source, spec.reversed);
    case QueryKind::kKhop:
      return make_khop(vertex_count, *spec.source, *spec.k_max);
    case QueryKind::kRpq:
      return make_rpq(vertex_count, *spec.source, *spec.automaton);
    case QueryKind::kWcc:
      return make_wcc(vertex_count);
    case QueryKind::kPageRank:
      return make_pagerank(vertex_count, spec.fixed_iterations.value_or(10), spec.damping);
  }
  throw QueryError("unknown query kind");
}

QueryAnswer answer(const QuerySpec& spec, const IfeOperator& op, std::span<const State> states) {
  QueryAnswer out;
  switch (spec.kind) {
    case QueryKind::kSpsp:
      if (spec.target) {
        out.values.emplace_back(*spec.target, states[*spec.target]);
        break;
      }
      [[fallthrough]];
    case QueryKind::kKhop:
      for (VertexId v = 0; v < states.size(); ++v) {
        if (states[v].is_finite()) out.values.emplace_back(v, states[v]);
      }
      break;
    case QueryKind::kRpq: {
      const auto& a = *spec.automaton;
      std::vector<State> best(op.key_count() / a.states, State::infinite());
      for (Key k = 0; k < states.size(); ++k) {
        if (a.is_accepting(static_cast<std::uint32_t>(k % a.states))) {
          auto v = op.vertex_of(k);
          best[v] = std::min(best[v], states[k]);
        }
      }
      for (VertexId v = 0; v < best.size(); ++v) {
        if (best[v].is_finite()) out.values.emplace_back(v, best[v]);
      }
      break;
    }
    case QueryKind::kWcc:
    case QueryKind::kPageRank:
      for (VertexId v = 0; v < states.size(); ++v) out.values.emplace_back(v, states[v]);
      break;
  }
  return out;
}

namespace {

VertexId resolve_vertex(const Graph& g, const std::string& name, std::size_t line) {
  auto id = g.vertex_names().find(name);
  if (!id) throw QueryError("line " + std::to_string(line) + ": unknown vertex '" + name + "'");
  return *id;
}

int parse_int(const std::string& s, std::size_t line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("expected an integer, got '" + s + "'", line);
  return v;
}

}  // namespace

std::vector<QuerySpec> parse_queries(std::string_view text, const Graph& graph) {
  std::vector<QuerySpec> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;
    QuerySpec q;
    const auto& kind = tok[0];
    if (kind == "spsp") {
      if (tok.size() != 3) throw ParseError("spsp takes src dst", line);
      q.kind = QueryKind::kSpsp;
      q.source = resolve_vertex(graph, tok[1], line);
      q.target = resolve_vertex(graph, tok[2], line);
    } else if (kind == "khop") {
      if (tok.size() != 3) throw ParseError("khop takes src k", line);
      q.kind = QueryKind::kKhop;
      q.source = resolve_vertex(graph, tok[1], line);
      q.k_max = parse_int(tok[2], line);
    } else if (kind == "rpq") {
      if (tok.size() < 4) throw ParseError("rpq takes src template label...", line);
      q.kind = QueryKind::kRpq;
      q.source = resolve_vertex(graph, tok[1], line);
      q.rpq_name = tok[2];
      std::vector<Label> labels;
      for (std::size_t i = 3; i < tok.size(); ++i) {
        auto id = graph.labels().find(tok[i]);
        if (!id) throw QueryError("line " + std::to_string(line) + ": label '" + tok[i] + "' not in graph");
        labels.push_back(*id);
        q.rpq_labels.push_back(tok[i]);
      }
      q.automaton = rpq_template(q.rpq_name, labels);
    } else if (kind == "wcc") {
      q.kind = QueryKind::kWcc;
    } else if (kind == "pagerank") {
      q.kind = QueryKind::kPageRank;
      q.fixed_iterations = 10;
    } else {
      throw ParseError("unknown query kind '" + kind + "'", line);
    }
    q.validate(graph.vertex_count());
    out.push_back(std::move(q));
  }
  return out;
}

std::string format_query(const QuerySpec& spec, const Graph& graph) {
  auto name = [&](VertexId v) { return graph.vertex_names().name(v); };
  std::string s(to_string(spec.kind));
  switch (spec.kind) {
    case QueryKind::kSpsp:
      s += " " + name(*spec.source) + " " + name(spec.target.value_or(*spec.source));
      break;
    case QueryKind::kKhop:
      s += " " + name(*spec.source) + " " + std::to_string(*spec.k_max);
      break;
    case QueryKind::kRpq:
      s += " " + name(*spec.source) + " " + spec.rpq_name;
      for (const auto& l : spec.rpq_labels) s += " " + l;
      break;
    case QueryKind::kWcc:
    case QueryKind::kPageRank:
      break;
  }
  return s;
}

}  // namespace dcgraph
