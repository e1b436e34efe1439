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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dcgraph/types.hpp"

namespace dcgraph {

struct Edge {
  VertexId src = 0;
  VertexId dst = 0;
  Label label = 0;
  Weight weight = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// One side of an adjacency entry: the other endpoint plus edge properties.
struct AdjEntry {
  VertexId other = 0;
  Label label = 0;
  Weight weight = 1;

  friend bool operator==(const AdjEntry&, const AdjEntry&) = default;
};

enum class Sign : std::int8_t { kDelete = -1, kInsert = 1 };

struct EdgeUpdate {
  Edge edge;
  Sign sign = Sign::kInsert;

  friend bool operator==(const EdgeUpdate&, const EdgeUpdate&) = default;
};

struct UpdateBatch {
  std::vector<EdgeUpdate> entries;
  /// Graph version this batch produces.
  std::int64_t version = 0;
};

/// Bidirectional string <-> dense id map, first-seen order.
class Dictionary {
 public:
  std::uint32_t intern(std::string_view name);
  std::optional<std::uint32_t> find(std::string_view name) const;
  const std::string& name(std::uint32_t id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> names_;
};

/// Mutable directed multigraph with forward/backward adjacency and a version
/// counter. The vertex set is fixed at construction; vertices without edges
/// are simply isolated.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t vertex_count);

  std::size_t vertex_count() const { return forward_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::int64_t version() const { return version_; }

  std::span<const AdjEntry> out_edges(VertexId v) const { return forward_[v]; }
  std::span<const AdjEntry> in_edges(VertexId v) const { return backward_[v]; }
  std::size_t out_degree(VertexId v) const { return forward_[v].size(); }
  std::size_t in_degree(VertexId v) const { return backward_[v].size(); }

  void add_edge(const Edge& e);
  /// Removes one occurrence of `e`; false if no such edge exists.
  bool remove_edge(const Edge& e);
  bool contains(const Edge& e) const;

  /// Applies `batch` atomically. Throws SequencingError on version skew and
  /// UpdateError (leaving the graph untouched) if a deletion has no match.
  void apply_batch(const UpdateBatch& batch);

  std::vector<Edge> edges() const;

  Dictionary& vertex_names() { return vertex_names_; }
  const Dictionary& vertex_names() const { return vertex_names_; }
  Dictionary& labels() { return labels_; }
  const Dictionary& labels() const { return labels_; }

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::vector<std::vector<AdjEntry>> forward_;
  std::vector<std::vector<AdjEntry>> backward_;
  std::size_t edge_count_ = 0;
  std::int64_t version_ = 0;
  Dictionary vertex_names_;
  Dictionary labels_;
};

struct LoadOptions {
  bool weighted = false;
  bool labeled = false;
};

/// Result of parsing an edge list: the id dictionaries and every edge, in
/// file order. `build_graph` turns a subset of the edges into a Graph.
struct EdgeList {
  Dictionary vertices;
  Dictionary labels;
  std::vector<Edge> edges;
};

EdgeList parse_edge_list(std::string_view text, const LoadOptions& opts);
EdgeList load_edge_list(const std::filesystem::path& path, const LoadOptions& opts);
Graph build_graph(const EdgeList& list, std::span<const Edge> edges);
inline Graph build_graph(const EdgeList& list) { return build_graph(list, list.edges); }

struct DynamicSplit {
  std::vector<Edge> initial;
  std::vector<Edge> updates;
};

/// Shuffles with a seeded PRNG and keeps floor(fraction * |E|) edges as the
/// initial graph; the rest become the insertion stream in shuffle order.
DynamicSplit split_for_dynamism(std::span<const Edge> edges, std::uint64_t seed,
                                double initial_fraction = 0.9);

/// Groups an insertion stream into batches of `batch_size`, numbered from
/// `first_version`. A trailing partial batch is kept.
std::vector<UpdateBatch> make_insertion_batches(std::span<const Edge> stream, std::size_t batch_size,
                                                std::int64_t first_version = 1);

/// Turns round(fraction * |batches|) seeded-chosen batches into deletions of
/// uniformly random edges present at that point; the others keep inserting
/// from the stream. `graph` is the initial graph and is not modified.
std::vector<UpdateBatch> make_deletion_workload(const std::vector<UpdateBatch>& batches,
                                                double deletion_fraction, std::uint64_t seed,
                                                const Graph& graph);

/// Update-stream text format: `+|- src dst weight label` per line, blank
/// line between batches. Vertex and label names resolve through `graph`'s
/// dictionaries; unknown vertices are an error.
std::vector<UpdateBatch> parse_update_stream(std::string_view text, Graph& graph,
                                             std::int64_t first_version = 1);
std::string format_update_stream(const std::vector<UpdateBatch>& batches, const Graph& graph);

/// Returns the inverse of `batch` (signs flipped, order reversed).
UpdateBatch inverse_batch(const UpdateBatch& batch, std::int64_t version);

// Synthetic inputs for tests and desk-scale experiments.

/// Uniform random multigraph with weights in [1, max_weight].
std::vector<Edge> random_edges(std::size_t vertices, std::size_t edges, std::uint64_t seed,
                               Weight max_weight = 10, std::uint32_t label_count = 1);

/// Chung-Lu style power-law graph: endpoints drawn proportional to
/// i^(-1/(gamma-1)); self loops are rejected.
std::vector<Edge> power_law_edges(std::size_t vertices, std::size_t edges, std::uint64_t seed,
                                  double gamma = 2.1, Weight max_weight = 10, std::uint32_t label_count = 1);

/// Wraps synthetic edges in an EdgeList whose vertex names are "0".."n-1".
EdgeList make_edge_list(std::size_t vertices, std::vector<Edge> edges, std::uint32_t label_count = 1);

}  // namespace dcgraph
