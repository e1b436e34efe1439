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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcgraph/engine.hpp"
#include "dcgraph/graph.hpp"
#include "dcgraph/query.hpp"

namespace dcgraph {

enum class EngineKind { kScratch, kScratchLandmark, kVdc, kJod, kDetDrop, kProbDrop };

std::string_view to_string(EngineKind kind);
EngineKind parse_engine(std::string_view name);

/// Seeded query generator, written `kind:count=N,seed=S[,k=K][,template=Q2,labels=a;b]`.
/// SPSP draws (source, target) pairs, K-hop draws sources.
struct QueryGenerator {
  QueryKind kind = QueryKind::kKhop;
  std::size_t count = 1;
  std::uint64_t seed = 1;
  int k = 5;
  std::string rpq_template = "Q1";
  std::vector<std::string> rpq_labels;
};
QueryGenerator parse_query_generator(std::string_view text);
std::string format_query_generator(const QueryGenerator& gen);

/// Queries generated for `graph`. Sources are drawn among vertices with at
/// least one out-edge. A larger count extends a smaller one's list.
std::vector<QuerySpec> generate_queries(const QueryGenerator& gen, const Graph& graph);

struct RunConfig {
  /// Edge-list path, or `powerlaw:n=N,m=M[,seed=S,labels=L,gamma=G]` /
  /// `uniform:n=N,m=M[,...]` for a synthetic graph.
  std::string dataset;
  LoadOptions load{.weighted = true, .labeled = false};
  /// Query file; used when `generator` is unset.
  std::string query_file;
  std::optional<QueryGenerator> generator;
  /// Scripted update stream. When set, the whole dataset is the initial
  /// graph and batch_size / batch_count / delete_fraction are ignored.
  std::string updates;

  EngineKind engine = EngineKind::kJod;
  std::string policy = "random:p=0.5";
  double bloom_bits_per_entry = 10.0;
  int bloom_hashes = 7;
  /// Bloom sizing override; unset estimates it from a warm-up run.
  std::optional<std::size_t> bloom_expected_entries;
  std::size_t landmarks = 10;

  std::size_t batch_size = 1;
  std::size_t batch_count = 100;
  double delete_fraction = 0.0;
  double initial_fraction = 0.9;
  /// Modeled difference bytes allowed; unset means unlimited.
  std::optional<std::size_t> budget;
  ByteModel model;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::filesystem::path out;

  /// Throws ConfigError.
  void validate() const;
};

/// Totals across all registered queries for one batch (version 0 is the
/// initial run). Counter fields are per-batch deltas.
struct MetricsRecord {
  std::int64_t version = 0;
  double batch_ms = 0;
  double cumulative_ms = 0;
  DifferenceCounts diffs;
  Counters counters;
  /// Vertices expanded by prioritized SPSP searches (scratch engines only).
  std::uint64_t expanded = 0;
  bool oom = false;
};

struct Workload {
  Graph graph;
  std::vector<UpdateBatch> batches;
  std::vector<QuerySpec> queries;
};

/// Loads or generates the graph, splits it, builds the batches and the query
/// list. Throws Error on IO or configuration problems.
Workload prepare_workload(const RunConfig& config);

struct RunResult {
  std::vector<MetricsRecord> records;
  bool oom = false;
  /// Per query, the answer after the last completed batch.
  std::vector<QueryAnswer> answers;
};

/// Replays the workload against one engine instance per query. Halts with
/// the OOM flag once modeled bytes exceed the budget.
RunResult run_workload(const RunConfig& config, Workload workload);

/// prepare_workload + run_workload; writes the metrics file when
/// `config.out` is set.
RunResult run_experiment(const RunConfig& config);

/// Self-describing metrics text: `# key<TAB>value` config lines, a header
/// row, then one tab-separated record per line.
void write_metrics(std::ostream& out, const RunConfig& config, const RunResult& result);

struct MetricsFile {
  std::map<std::string, std::string> config;
  std::vector<MetricsRecord> records;
};
MetricsFile read_metrics(std::istream& in);
MetricsFile read_metrics(const std::filesystem::path& path);

struct CapacityRow {
  EngineKind engine;
  std::size_t queries = 0;
  /// Smallest feasible grid value; unset when nothing fits.
  std::optional<double> p;
  bool feasible = false;
  double total_ms = 0;
  std::size_t peak_bytes = 0;
};

/// For each query count, runs the template with that many generated
/// queries and searches the p grid in ascending order for the first run
/// that stays within budget. VDC and JOD run once with p = 0.
std::vector<CapacityRow> capacity_sweep(const RunConfig& config, const std::vector<std::size_t>& query_counts,
                                        const std::vector<double>& p_grid);
/// Largest feasible query count in `rows`, 0 when none.
std::size_t max_feasible_queries(const std::vector<CapacityRow>& rows);
std::string format_capacity_table(const std::vector<CapacityRow>& rows);

struct Report {
  std::string text;
  std::string csv;
};
/// One row per metrics file, in input order. Ratio columns compare each
/// run to the first VDC run and stay empty when there is none.
Report emit_report(const std::vector<MetricsFile>& files);
Report emit_report(const std::vector<std::filesystem::path>& paths);

}  // namespace dcgraph
