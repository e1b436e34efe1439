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
#include <vector>

#include "dcgraph/engine.hpp"

namespace dcgraph {

/// Frontier label propagation over the whole current graph: only keys whose
/// state changed in the previous iteration push to their out-keys.
/// `evaluations` (optional) receives the number of aggregate executions.
std::vector<State> scratch_run(const Graph& graph, const IfeOperator& op, std::uint64_t* evaluations = nullptr);

/// Recomputes from scratch on every batch; keeps no differences.
class ScratchEngine final : public Engine {
 public:
  using Engine::Engine;

  void initial_run(const Graph& graph) override;
  std::vector<OutputChange> maintain(const Graph& graph, const UpdateBatch& batch) override;
  DifferenceCounts count_differences(const ByteModel& = {}) const override { return {}; }
};

/// The `count` vertices of highest total degree, ties to the smaller id.
/// Throws ConfigError when the graph has fewer vertices.
std::vector<VertexId> landmark_select(const Graph& graph, std::size_t count = 10);

/// Distances from and to one landmark, each kept current by a JOD engine
/// (forward SSSP, and SSSP over reversed edges).
class LandmarkIndex {
 public:
  LandmarkIndex(VertexId landmark, std::size_t vertex_count);

  void initial_run(const Graph& graph);
  void maintain(const Graph& graph, const UpdateBatch& batch);

  VertexId landmark() const { return landmark_; }
  /// dist(landmark -> v)
  const State& from(VertexId v) const { return forward_->states()[v]; }
  /// dist(v -> landmark)
  const State& to(VertexId v) const { return backward_->states()[v]; }

  const JodEngine& forward() const { return *forward_; }
  const JodEngine& backward() const { return *backward_; }

 private:
  VertexId landmark_;
  std::unique_ptr<JodEngine> forward_;
  std::unique_ptr<JodEngine> backward_;
};

class LandmarkSet {
 public:
  LandmarkSet() = default;
  LandmarkSet(const Graph& graph, std::size_t count = 10);

  void maintain(const Graph& graph, const UpdateBatch& batch);

  /// min over l of dist(s -> l) + dist(l -> d).
  State upper(VertexId s, VertexId d) const;
  /// Lower bound on dist(v -> d); infinite when some landmark proves d is
  /// unreachable from v.
  State lower(VertexId v, VertexId d) const;

  const std::vector<LandmarkIndex>& indices() const { return indices_; }

 private:
  std::vector<LandmarkIndex> indices_;
};

struct Bounds {
  State lower;
  State upper;
};
Bounds landmark_bounds(const LandmarkSet& set, VertexId s, VertexId d);

struct SpspResult {
  State distance;
  /// Vertices whose out-edges were relaxed.
  std::size_t expanded = 0;
};

/// Prioritized label propagation from s, stopping once d is settled.
SpspResult scratch_spsp(const Graph& graph, VertexId s, VertexId d);
/// Same search, but a vertex reached at distance k is not expanded when
/// k + lower(v, d) > upper(s, d).
SpspResult scratch_landmark_spsp(const Graph& graph, const LandmarkSet& set, VertexId s, VertexId d);

}  // namespace dcgraph
