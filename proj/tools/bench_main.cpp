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

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "dcgraph/bench.hpp"

namespace {

using namespace dcgraph;

struct Flags {
  std::string dataset;
  std::string queries;
  std::string updates;
  std::string engine = "jod";
  std::string policy = "random:p=0.5";
  bool unweighted = false;
  bool labeled = false;
  std::size_t batch_size = 1;
  std::size_t batches = 100;
  double delete_frac = 0.0;
  std::size_t budget = 0;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::size_t landmarks = 10;
  double bloom_bpe = 10.0;
  int bloom_hashes = 7;
  std::size_t bloom_expected = 0;
};

void add_workload_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--dataset", f.dataset, "edge-list file, or powerlaw:n=N,m=M / uniform:n=N,m=M")->required();
  cmd->add_option("--queries", f.queries, "query file, or generator such as khop:count=10,seed=1")->required();
  cmd->add_option("--updates", f.updates, "scripted update stream (replaces generated batches)");
  cmd->add_option("--engine", f.engine, "scratch | scratch-landmark | vdc | jod | det-drop | prob-drop");
  cmd->add_option("--policy", f.policy, "drop policy, e.g. random:p=0.5 or degree:p=0.5,tau_min=2");
  cmd->add_flag("--unweighted", f.unweighted, "edge list has no weight column");
  cmd->add_flag("--labeled", f.labeled, "edge list has a label column");
  cmd->add_option("--batches", f.batches, "number of update batches");
  cmd->add_option("--batch-size", f.batch_size, "updates per batch");
  cmd->add_option("--delete-frac", f.delete_frac, "fraction of batches that delete edges");
  cmd->add_option("--budget", f.budget, "modeled difference bytes allowed (0 = unlimited)");
  cmd->add_option("--seed", f.seed, "workload seed");
  cmd->add_option("--workers", f.workers, "query worker threads");
  cmd->add_option("--landmarks", f.landmarks, "landmark count for scratch-landmark");
  cmd->add_option("--bloom-bits-per-entry", f.bloom_bpe, "Bloom bits per expected entry");
  cmd->add_option("--bloom-hashes", f.bloom_hashes, "Bloom hash functions");
  cmd->add_option("--bloom-expected-entries", f.bloom_expected, "Bloom sizing (0 = estimate from a warm-up run)");
}

RunConfig to_config(const Flags& f) {
  RunConfig c;
  c.dataset = f.dataset;
  c.load = {.weighted = !f.unweighted, .labeled = f.labeled};
  if (std::ifstream(f.queries)) {
    c.query_file = f.queries;
  } else {
    c.generator = parse_query_generator(f.queries);
  }
  c.updates = f.updates;
  c.engine = parse_engine(f.engine);
  c.policy = f.policy;
  c.batch_size = f.batch_size;
  c.batch_count = f.batches;
  c.delete_fraction = f.delete_frac;
  if (f.budget > 0) c.budget = f.budget;
  c.seed = f.seed;
  c.workers = f.workers;
  c.landmarks = f.landmarks;
  c.bloom_bits_per_entry = f.bloom_bpe;
  c.bloom_hashes = f.bloom_hashes;
  if (f.bloom_expected > 0) c.bloom_expected_entries = f.bloom_expected;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential IFE query benchmark harness"};
  app.require_subcommand(1);

  Flags flags;
  std::string out;
  auto* run = app.add_subcommand("run", "replay one workload and write per-batch metrics");
  add_workload_flags(run, flags);
  run->add_option("--out", out, "metrics output file")->required();

  Flags sweep_flags;
  std::size_t q_from = 1, q_to = 1, q_step = 1;
  std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "find the lowest feasible drop probability per query count");
  add_workload_flags(sweep, sweep_flags);
  sweep->add_option("--queries-from", q_from, "smallest query count")->required();
  sweep->add_option("--queries-to", q_to, "largest query count")->required();
  sweep->add_option("--queries-step", q_step, "query count increment")->check(CLI::PositiveNumber);
  sweep->add_option("--p-grid", grid, "comma-separated drop probabilities")->delimiter(',');
  sweep->add_option("--out", sweep_out, "write the capacity table here instead of stdout");

  std::vector<std::string> reports;
  std::string csv_out;
  auto* report = app.add_subcommand("report", "summarize metrics files");
  report->add_option("metrics", reports, "metrics files")->required();
  report->add_option("--csv", csv_out, "also write the table as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto config = to_config(flags);
      config.out = out;
      auto result = run_experiment(config);
      if (result.oom) std::cerr << "run exceeded the memory budget; metrics flag OOM\n";
    } else if (*sweep) {
      auto config = to_config(sweep_flags);
      if (!config.generator) throw ConfigError("sweep needs a query generator, not a query file");
      std::vector<std::size_t> counts;
      for (auto q = q_from; q <= q_to; q += q_step) counts.push_back(q);
      auto table = format_capacity_table(capacity_sweep(config, counts, grid));
      if (sweep_out.empty()) {
        std::cout << table;
      } else {
        std::ofstream f(sweep_out);
        if (!(f << table)) throw IoError("cannot write " + sweep_out);
      }
    } else if (*report) {
      std::vector<std::filesystem::path> paths(reports.begin(), reports.end());
      auto rep = emit_report(paths);
      std::cout << rep.text;
      if (!csv_out.empty()) {
        std::ofstream f(csv_out);
        if (!(f << rep.csv)) throw IoError("cannot write " + csv_out);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
