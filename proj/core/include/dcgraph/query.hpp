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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dcgraph/function_ref.hpp"
#include "dcgraph/graph.hpp"
#include "dcgraph/types.hpp"

namespace dcgraph {

/// Finite automaton over edge labels. Transitions are stored per state as
/// (label, target) pairs.
struct LabelAutomaton {
  std::uint32_t states = 1;
  std::uint32_t start = 0;
  std::vector<std::uint32_t> accepting;
  struct Transition {
    std::uint32_t from;
    Label label;
    std::uint32_t to;
  };
  std::vector<Transition> transitions;

  bool is_accepting(std::uint32_t q) const;
  /// Throws QueryError when a state id is out of range.
  void validate() const;
};

/// Q1 = a*, Q2 = a b*, Q3 = a b c d e over the given (already resolved) labels.
LabelAutomaton rpq_template(std::string_view name, std::span<const Label> labels);

enum class QueryKind { kSpsp, kKhop, kRpq, kWcc, kPageRank };

std::string_view to_string(QueryKind kind);

struct QuerySpec {
  QueryKind kind = QueryKind::kSpsp;
  std::optional<VertexId> source;
  std::optional<VertexId> target;
  std::optional<int> k_max;
  std::optional<LabelAutomaton> automaton;
  std::optional<int> fixed_iterations;
  double damping = 0.85;
  /// Shortest paths over reversed edges (distances *to* the source).
  bool reversed = false;
  /// RPQ template name and label names as written in a query file.
  std::string rpq_name;
  std::vector<std::string> rpq_labels;

  /// Throws QueryError when required fields are missing.
  void validate(std::size_t vertex_count) const;
};

/// Source/target edge between two keys, produced by a graph edge.
struct KeyEdge {
  Key src;
  Key dst;
};

/// One iterative frontier expansion computation. Keys are graph vertices,
/// except for RPQ where a key packs (vertex, automaton state).
///
/// The state of key v at iteration i >= 1 is
///   aggregate(v, i, { propagate(u, state of u at i-1, e) : in-edge e = (u, v) })
/// with suppressed contributions left out.
class IfeOperator {
 public:
  virtual ~IfeOperator() = default;

  virtual QueryKind kind() const = 0;
  virtual std::size_t key_count() const = 0;
  virtual VertexId vertex_of(Key key) const { return static_cast<VertexId>(key); }

  virtual State init(Key key) const = 0;

  using InFn = FunctionRef<void(Key src, Weight weight)>;
  using OutFn = FunctionRef<void(Key dst)>;

  /// Calls fn once per key-level in-edge of `key` in `graph`.
  virtual void for_each_in(const Graph& graph, Key key, InFn fn) const = 0;
  virtual void for_each_out(const Graph& graph, Key key, OutFn fn) const = 0;

  /// Contribution of `src` in state `s` over an edge of `weight`, or nullopt.
  virtual std::optional<State> propagate(const Graph& graph, Key src, const State& s, Weight weight) const = 0;

  /// Deterministic in the multiset `contributions` (order is irrelevant).
  virtual State aggregate(Key key, Iteration i, std::span<const State> contributions) const = 0;

  /// Key-level edges whose contribution changes when `edge` is inserted into
  /// or deleted from `graph` (the graph after the change).
  virtual void edge_keys(const Graph& graph, const Edge& edge, std::vector<KeyEdge>& out) const = 0;

  /// Highest iteration that is ever computed.
  virtual Iteration row_limit() const = 0;
  /// True when hitting row_limit is the normal stop (K-hop, PageRank); false
  /// when it signals nontermination.
  virtual bool bounded() const = 0;

  /// Collects contributions to `key` given a reader for in-key states.
  template <typename Read>
  void gather(const Graph& graph, Key key, Read&& read, std::vector<State>& out) const {
    out.clear();
    for_each_in(graph, key, [&](Key src, Weight w) {
      if (auto c = propagate(graph, src, read(src), w)) out.push_back(*c);
    });
  }
};

/// Shortest paths from `source` (or to it when `reversed`), min aggregation.
std::unique_ptr<IfeOperator> make_sssp(std::size_t vertex_count, VertexId source, bool reversed = false);
std::unique_ptr<IfeOperator> make_khop(std::size_t vertex_count, VertexId source, int k_max);
std::unique_ptr<IfeOperator> make_rpq(std::size_t vertex_count, VertexId source, LabelAutomaton automaton);
std::unique_ptr<IfeOperator> make_wcc(std::size_t vertex_count);
std::unique_ptr<IfeOperator> make_pagerank(std::size_t vertex_count, int iterations = 10, double damping = 0.85);

std::unique_ptr<IfeOperator> make_operator(const QuerySpec& spec, std::size_t vertex_count);

/// Per-vertex answer of a query given converged key states. For SPSP this is
/// the distance to the target only; RPQ maps a vertex to 0 when accepted and
/// infinity otherwise.
struct QueryAnswer {
  std::vector<std::pair<VertexId, State>> values;
};
QueryAnswer answer(const QuerySpec& spec, const IfeOperator& op, std::span<const State> states);

/// Query description file: one query per line,
/// `spsp src dst | khop src k | rpq src Q1|Q2|Q3 label... | wcc | pagerank`.
/// Vertex and label names resolve through `graph`.
std::vector<QuerySpec> parse_queries(std::string_view text, const Graph& graph);
std::string format_query(const QuerySpec& spec, const Graph& graph);

}  // namespace dcgraph
