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
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dcgraph/diff.hpp"
#include "dcgraph/dropping.hpp"
#include "dcgraph/graph.hpp"
#include "dcgraph/query.hpp"

namespace dcgraph {

struct Counters {
  std::uint64_t aggregate_reruns = 0;
  std::uint64_t join_reconstructions = 0;
  std::uint64_t differences_written = 0;
  std::uint64_t differences_retracted = 0;
  /// Aggregations re-executed only to recover a dropped state.
  std::uint64_t recomputations = 0;
  std::uint64_t drops = 0;

  Counters& operator+=(const Counters& o);
  friend Counters operator-(Counters a, const Counters& b);
};

/// Bytes per stored difference are d (VT pair) + s (state).
struct ByteModel {
  std::size_t d = 8;
  std::size_t s = 8;
};

struct DifferenceCounts {
  std::size_t e = 0;
  std::size_t j = 0;
  std::size_t d = 0;
  std::size_t dropped = 0;
  std::size_t store_bytes = 0;
  /// (j + d) * (d + s) + store_bytes.
  std::size_t bytes = 0;

  std::size_t total() const { return j + d; }
};

/// One line of a maintenance result: (key, state, +1 | -1).
struct OutputChange {
  Key key;
  State state;
  int sign;

  friend bool operator==(const OutputChange&, const OutputChange&) = default;
};

/// Incrementally maintained query. The caller applies each batch to the graph
/// first and then hands the updated graph plus the batch to maintain().
class Engine {
 public:
  explicit Engine(std::unique_ptr<IfeOperator> op);
  virtual ~Engine() = default;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const IfeOperator& op() const { return *op_; }

  virtual void initial_run(const Graph& graph) = 0;
  virtual std::vector<OutputChange> maintain(const Graph& graph, const UpdateBatch& batch) = 0;
  virtual DifferenceCounts count_differences(const ByteModel& model = {}) const = 0;

  /// Converged state per key after the last run.
  const std::vector<State>& states() const { return states_; }
  std::int64_t version() const { return version_; }
  Iteration max_iteration() const { return max_iteration_; }

  const Counters& counters() const { return counters_; }
  void reset_counters() { counters_ = {}; }

  /// When set, every aggregate execution appends (key, iteration).
  void set_rerun_log(std::vector<std::pair<Key, Iteration>>* log) { rerun_log_ = log; }

 protected:
  void check_sequence(const Graph& graph, const UpdateBatch& batch) const;
  /// Rewrites states_ for `keys` and returns the net change.
  std::vector<OutputChange> publish(const std::vector<std::pair<Key, State>>& fresh);
  void note_rerun(Key key, Iteration i) {
    ++counters_.aggregate_reruns;
    if (rerun_log_) rerun_log_->emplace_back(key, i);
  }

  std::unique_ptr<IfeOperator> op_;
  std::vector<State> states_;
  std::int64_t version_ = -1;
  Iteration max_iteration_ = 0;
  Counters counters_;
  std::vector<std::pair<Key, Iteration>>* rerun_log_ = nullptr;
};

/// Stores difference traces of J and D over 2-D timestamps and reruns Join
/// and the aggregate where the direct and upper-bound rules require.
class VdcEngine final : public Engine {
 public:
  using Engine::Engine;

  void initial_run(const Graph& graph) override;
  std::vector<OutputChange> maintain(const Graph& graph, const UpdateBatch& batch) override;
  DifferenceCounts count_differences(const ByteModel& model = {}) const override;

  const DiffTrace2D& trace_j() const { return trace_j_; }
  const DiffTrace2D& trace_d() const { return trace_d_; }
  /// Edge differences as (version, update).
  const std::vector<std::pair<std::int64_t, EdgeUpdate>>& trace_e() const { return trace_e_; }

  /// Dump lines for E with state `dst:weight` keyed by the source name.
  std::vector<std::string> dump_e(const Graph& graph) const;

 private:
  void run_version(const Graph& graph, std::int64_t k, const std::vector<Key>& affected, bool initial);
  State d_state(Key key, Timestamp2D t) const;

  DiffTrace2D trace_j_;
  DiffTrace2D trace_d_;
  std::vector<std::pair<std::int64_t, EdgeUpdate>> trace_e_;
};

struct DropConfig {
  DropPolicy policy;
  StoreKind store = StoreKind::kDet;
  double bloom_bits_per_entry = 10.0;
  int bloom_hashes = 7;
  /// Bloom sizing override; otherwise estimated from an undropped warm-up.
  std::optional<std::size_t> bloom_expected_entries;
};

/// Never stores J; keeps D as a merged one-dimensional trace with negative
/// multiplicities elided. Optionally drops part of D.
class JodEngine final : public Engine {
 public:
  explicit JodEngine(std::unique_ptr<IfeOperator> op, std::optional<DropConfig> drops = std::nullopt);

  void initial_run(const Graph& graph) override;
  std::vector<OutputChange> maintain(const Graph& graph, const UpdateBatch& batch) override;
  DifferenceCounts count_differences(const ByteModel& model = {}) const override;

  // Row-at-a-time maintenance: begin_batch, step until it returns nullopt,
  // then finish. maintain() is exactly that sequence.
  void begin_batch(const Graph& graph, const UpdateBatch& batch);
  /// Processes the lowest pending iteration and returns it.
  std::optional<Iteration> step();
  /// Iteration the next step() would process.
  std::optional<Iteration> next_iteration() const { return frontier_.peek(); }
  std::vector<OutputChange> finish();

  const MergedTrace& trace() const { return trace_; }
  const DropStore* store() const { return store_.get(); }
  const std::optional<DropConfig>& drop_config() const { return drops_; }

  /// State of `key` at iteration `i`, recomputing dropped states as needed.
  State access(Key key, Iteration i);

 private:
  enum class Status { kAbsent, kPresent, kDropped };

  void begin_initial(const Graph& graph);
  void schedule(Key key, Iteration i);
  void apply_upper_bound(Key key, Iteration i);
  void process(Key key, Iteration i);
  std::optional<Iteration> first_finite_row(Key key) const;
  void setup_store(const Graph& graph);

  std::optional<DropConfig> drops_;
  std::unique_ptr<DropStore> store_;
  MergedTrace trace_;

  // Per-batch state.
  const Graph* graph_ = nullptr;
  std::int64_t batch_version_ = 0;
  bool initial_ = false;
  Frontier frontier_;
  std::unordered_map<Key, Iteration> ub_from_;
  std::unordered_map<Key, std::vector<Key>> extra_in_;
  std::unordered_set<Key> touched_;
  std::unordered_map<std::uint64_t, State> memo_;
};

}  // namespace dcgraph
