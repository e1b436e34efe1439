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

#include "dcgraph/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include "dcgraph/baselines.hpp"
#include "dcgraph/dropping.hpp"

namespace dcgraph {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// "name:k=v,k=v" -> (name, {k: v})
std::pair<std::string, std::map<std::string, std::string>> parse_spec(std::string_view text) {
  std::pair<std::string, std::map<std::string, std::string>> out;
  auto colon = text.find(':');
  out.first = std::string(text.substr(0, colon));
  if (colon == std::string_view::npos) return out;
  for (const auto& item : split(text.substr(colon + 1), ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value in '" + std::string(text) + "'");
    out.second[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

template <typename T>
T number(const std::map<std::string, std::string>& kv, const std::string& key, T fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::istringstream in(it->second);
  T v{};
  in >> v;
  if (!in || !in.eof()) throw ConfigError("bad value for " + key + ": '" + it->second + "'");
  return v;
}

std::size_t template_arity(std::string_view name) {
  if (name == "Q1") return 1;
  if (name == "Q2") return 2;
  if (name == "Q3") return 5;
  throw QueryError("unknown RPQ template '" + std::string(name) + "'");
}

bool is_synthetic(std::string_view dataset) {
  return dataset.starts_with("powerlaw:") || dataset.starts_with("uniform:");
}

EdgeList load_dataset(const RunConfig& config) {
  if (!is_synthetic(config.dataset)) return load_edge_list(config.dataset, config.load);
  auto [kind, kv] = parse_spec(config.dataset);
  const auto n = number<std::size_t>(kv, "n", 0);
  const auto m = number<std::size_t>(kv, "m", 0);
  const auto seed = number<std::uint64_t>(kv, "seed", config.seed);
  const auto labels = number<std::uint32_t>(kv, "labels", 1);
  const auto max_w = number<Weight>(kv, "w", 10);
  if (n < 2 || labels == 0) throw ConfigError("synthetic dataset needs n >= 2 and labels >= 1");
  auto edges = kind == "powerlaw" ? power_law_edges(n, m, seed, number<double>(kv, "gamma", 2.1), max_w, labels)
                                  : random_edges(n, m, seed, max_w, labels);
  return make_edge_list(n, std::move(edges), labels);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename F>
void parallel_for(std::size_t n, std::size_t workers, F&& f) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  workers = std::min(workers, n);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i; (i = next.fetch_add(1)) < n;) f(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// One registered query. SPSP under the scratch engines runs a prioritized
// search per batch instead of a full engine.
struct Slot {
  QuerySpec spec;
  std::unique_ptr<Engine> engine;
  SpspResult search;
  std::uint64_t expanded = 0;
  Counters last_counters;

  QueryAnswer result() const {
    if (engine) return answer(spec, engine->op(), engine->states());
    QueryAnswer a;
    a.values.emplace_back(*spec.target, search.distance);
    return a;
  }
};

std::unique_ptr<Engine> make_engine(const RunConfig& config, const QuerySpec& spec, std::size_t n) {
  auto op = make_operator(spec, n);
  switch (config.engine) {
    case EngineKind::kScratch:
    case EngineKind::kScratchLandmark:
      return std::make_unique<ScratchEngine>(std::move(op));
    case EngineKind::kVdc:
      return std::make_unique<VdcEngine>(std::move(op));
    case EngineKind::kJod:
      return std::make_unique<JodEngine>(std::move(op));
    case EngineKind::kDetDrop:
    case EngineKind::kProbDrop: {
      DropConfig dc;
      dc.policy = parse_policy(config.policy);
      dc.store = config.engine == EngineKind::kDetDrop ? StoreKind::kDet : StoreKind::kBloom;
      dc.bloom_bits_per_entry = config.bloom_bits_per_entry;
      dc.bloom_hashes = config.bloom_hashes;
      dc.bloom_expected_entries = config.bloom_expected_entries;
      return std::make_unique<JodEngine>(std::move(op), dc);
    }
  }
  throw ConfigError("unknown engine");
}

void add_counts(DifferenceCounts& acc, const DifferenceCounts& c) {
  acc.e += c.e;
  acc.j += c.j;
  acc.d += c.d;
  acc.dropped += c.dropped;
  acc.store_bytes += c.store_bytes;
  acc.bytes += c.bytes;
}

std::string format_ms(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string format_ratio(double num, double den) {
  if (den == 0) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", num / den);
  return buf;
}

constexpr const char* kMetricsMagic = "# dcgraph-metrics\t1";
constexpr const char* kColumns[] = {"version", "batch_ms", "cumulative_ms", "e", "j", "d", "dropped", "store_bytes",
                                    "bytes", "recomputations", "aggregate_reruns", "join_reconstructions", "drops",
                                    "expanded", "oom"};

}  // namespace

std::string_view to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::kScratch:
      return "scratch";
    case EngineKind::kScratchLandmark:
      return "scratch-landmark";
    case EngineKind::kVdc:
      return "vdc";
    case EngineKind::kJod:
      return "jod";
    case EngineKind::kDetDrop:
      return "det-drop";
    case EngineKind::kProbDrop:
      return "prob-drop";
  }
  return "?";
}

EngineKind parse_engine(std::string_view name) {
  for (auto k : {EngineKind::kScratch, EngineKind::kScratchLandmark, EngineKind::kVdc, EngineKind::kJod,
                 EngineKind::kDetDrop, EngineKind::kProbDrop}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown engine '" + std::string(name) + "'");
}

QueryGenerator parse_query_generator(std::string_view text) {
  auto [kind, kv] = parse_spec(text);
  QueryGenerator g;
  if (kind == "spsp") {
    g.kind = QueryKind::kSpsp;
  } else if (kind == "khop") {
    g.kind = QueryKind::kKhop;
  } else if (kind == "rpq") {
    g.kind = QueryKind::kRpq;
  } else if (kind == "wcc") {
    g.kind = QueryKind::kWcc;
  } else if (kind == "pagerank") {
    g.kind = QueryKind::kPageRank;
  } else {
    throw ConfigError("unknown query kind '" + kind + "'");
  }
  g.count = number<std::size_t>(kv, "count", 1);
  g.seed = number<std::uint64_t>(kv, "seed", 1);
  g.k = number<int>(kv, "k", 5);
  if (auto it = kv.find("template"); it != kv.end()) g.rpq_template = it->second;
  if (auto it = kv.find("labels"); it != kv.end()) g.rpq_labels = split(it->second, ';');
  for (const auto& [key, value] : kv) {
    if (key != "count" && key != "seed" && key != "k" && key != "template" && key != "labels") {
      throw ConfigError("unknown query generator key '" + key + "'");
    }
  }
  return g;
}

std::string format_query_generator(const QueryGenerator& gen) {
  std::string out = std::string(to_string(gen.kind)) + ":count=" + std::to_string(gen.count) +
                    ",seed=" + std::to_string(gen.seed);
  if (gen.kind == QueryKind::kKhop) out += ",k=" + std::to_string(gen.k);
  if (gen.kind == QueryKind::kRpq) {
    out += ",template=" + gen.rpq_template;
    if (!gen.rpq_labels.empty()) {
      out += ",labels=";
      for (std::size_t i = 0; i < gen.rpq_labels.size(); ++i) out += (i ? ";" : "") + gen.rpq_labels[i];
    }
  }
  return out;
}

std::vector<QuerySpec> generate_queries(const QueryGenerator& gen, const Graph& graph) {
  const auto n = graph.vertex_count();
  if (n == 0) throw ConfigError("cannot generate queries on an empty graph");
  std::vector<VertexId> sources;
  for (VertexId v = 0; v < n; ++v) {
    if (graph.out_degree(v) > 0) sources.push_back(v);
  }
  if (sources.empty()) {
    sources.resize(n);
    for (VertexId v = 0; v < n; ++v) sources[v] = v;
  }
  std::mt19937_64 rng(gen.seed);
  std::uniform_int_distribution<std::size_t> pick_source(0, sources.size() - 1);
  std::uniform_int_distribution<VertexId> pick_vertex(0, static_cast<VertexId>(n - 1));

  std::vector<Label> labels;
  std::vector<std::string> label_names = gen.rpq_labels;
  if (gen.kind == QueryKind::kRpq) {
    if (label_names.empty()) {
      const auto arity = template_arity(gen.rpq_template);
      const auto available = std::max<std::size_t>(graph.labels().size(), 1);
      for (std::size_t i = 0; i < arity; ++i) {
        label_names.push_back(graph.labels().size() ? graph.labels().name(static_cast<std::uint32_t>(i % available))
                                                    : "l0");
      }
    }
    for (const auto& name : label_names) {
      auto id = graph.labels().find(name);
      if (!id) throw QueryError("label '" + name + "' not in graph");
      labels.push_back(*id);
    }
  }

  std::vector<QuerySpec> out;
  for (std::size_t i = 0; i < gen.count; ++i) {
    QuerySpec q;
    q.kind = gen.kind;
    switch (gen.kind) {
      case QueryKind::kSpsp: {
        q.source = sources[pick_source(rng)];
        VertexId d;
        do {
          d = pick_vertex(rng);
        } while (n > 1 && d == *q.source);
        q.target = d;
        break;
      }
      case QueryKind::kKhop:
        q.source = sources[pick_source(rng)];
        q.k_max = gen.k;
        break;
      case QueryKind::kRpq:
        q.source = sources[pick_source(rng)];
        q.rpq_name = gen.rpq_template;
        q.rpq_labels = label_names;
        q.automaton = rpq_template(gen.rpq_template, labels);
        break;
      case QueryKind::kWcc:
        break;
      case QueryKind::kPageRank:
        q.fixed_iterations = 10;
        break;
    }
    out.push_back(std::move(q));
  }
  return out;
}

void RunConfig::validate() const {
  if (dataset.empty()) throw ConfigError("dataset is required");
  if (!generator && query_file.empty()) throw ConfigError("a query file or generator is required");
  if (updates.empty()) {
    if (batch_size == 0) throw ConfigError("batch size must be positive");
    if (delete_fraction < 0 || delete_fraction > 1) throw ConfigError("deletion fraction must lie in [0, 1]");
  }
  if (budget && *budget == 0) throw ConfigError("memory budget must be positive");
  if (workers == 0) throw ConfigError("worker count must be positive");
  if (engine == EngineKind::kDetDrop || engine == EngineKind::kProbDrop) parse_policy(policy);
  if (engine == EngineKind::kProbDrop) {
    if (!(bloom_bits_per_entry > 0) || bloom_hashes < 1) throw ConfigError("bloom sizing must be positive");
    if (bloom_expected_entries && *bloom_expected_entries == 0) throw ConfigError("bloom expected entries must be positive");
  }
  if (engine == EngineKind::kScratchLandmark && landmarks == 0) throw ConfigError("landmark count must be positive");
}

Workload prepare_workload(const RunConfig& config) {
  config.validate();
  auto list = load_dataset(config);
  Workload w;
  if (!config.updates.empty()) {
    w.graph = build_graph(list);
    w.batches = parse_update_stream(read_file(config.updates), w.graph);
  } else {
    auto split = split_for_dynamism(list.edges, config.seed, config.initial_fraction);
    w.graph = build_graph(list, split.initial);
    const auto need = config.batch_count * config.batch_size;
    if (split.updates.size() < need) {
      throw WorkloadError("insertion stream has " + std::to_string(split.updates.size()) + " edges, " +
                          std::to_string(need) + " needed");
    }
    auto stream = std::span<const Edge>(split.updates).first(need);
    auto batches = make_insertion_batches(stream, config.batch_size);
    w.batches = make_deletion_workload(batches, config.delete_fraction, config.seed * 31 + 7, w.graph);
  }
  if (config.generator) {
    w.queries = generate_queries(*config.generator, w.graph);
  } else {
    w.queries = parse_queries(read_file(config.query_file), w.graph);
  }
  for (const auto& q : w.queries) {
    q.validate(w.graph.vertex_count());
    if (config.engine == EngineKind::kScratchLandmark && q.kind != QueryKind::kSpsp) {
      throw ConfigError("scratch-landmark only answers spsp queries");
    }
  }
  return w;
}

RunResult run_workload(const RunConfig& config, Workload workload) {
  Graph& graph = workload.graph;
  const auto n = graph.vertex_count();
  const bool searching = config.engine == EngineKind::kScratch || config.engine == EngineKind::kScratchLandmark;

  std::vector<Slot> slots(workload.queries.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    slots[i].spec = workload.queries[i];
    if (!(searching && slots[i].spec.kind == QueryKind::kSpsp)) {
      slots[i].engine = make_engine(config, slots[i].spec, n);
    }
  }
  std::optional<LandmarkSet> landmarks;

  auto evaluate = [&](std::size_t i, const UpdateBatch* batch) {
    auto& s = slots[i];
    if (s.engine) {
      if (batch) {
        s.engine->maintain(graph, *batch);
      } else {
        s.engine->initial_run(graph);
      }
      return;
    }
    s.search = landmarks ? scratch_landmark_spsp(graph, *landmarks, *s.spec.source, *s.spec.target)
                         : scratch_spsp(graph, *s.spec.source, *s.spec.target);
    s.expanded += s.search.expanded;
  };

  RunResult result;
  double cumulative = 0;
  auto record = [&](std::int64_t version, double ms) {
    MetricsRecord r;
    r.version = version;
    r.batch_ms = ms;
    cumulative += ms;
    r.cumulative_ms = cumulative;
    for (auto& s : slots) {
      if (!s.engine) {
        r.expanded += s.expanded;
        s.expanded = 0;
        continue;
      }
      add_counts(r.diffs, s.engine->count_differences(config.model));
      const auto now = s.engine->counters();
      r.counters += now - s.last_counters;
      s.last_counters = now;
    }
    if (landmarks) {
      for (const auto& idx : landmarks->indices()) {
        add_counts(r.diffs, idx.forward().count_differences(config.model));
        add_counts(r.diffs, idx.backward().count_differences(config.model));
      }
    }
    r.oom = config.budget && r.diffs.bytes > *config.budget;
    result.oom = r.oom;
    result.records.push_back(r);
    return !r.oom;
  };

  auto t0 = Clock::now();
  if (config.engine == EngineKind::kScratchLandmark) landmarks.emplace(graph, config.landmarks);
  parallel_for(slots.size(), config.workers, [&](std::size_t i) { evaluate(i, nullptr); });
  bool ok = record(graph.version(), ms_since(t0));

  for (std::size_t b = 0; ok && b < workload.batches.size(); ++b) {
    const auto& batch = workload.batches[b];
    graph.apply_batch(batch);
    t0 = Clock::now();
    if (landmarks) landmarks->maintain(graph, batch);
    parallel_for(slots.size(), config.workers, [&](std::size_t i) { evaluate(i, &batch); });
    ok = record(batch.version, ms_since(t0));
  }

  for (const auto& s : slots) result.answers.push_back(s.result());
  return result;
}

RunResult run_experiment(const RunConfig& config) {
  auto result = run_workload(config, prepare_workload(config));
  if (!config.out.empty()) {
    std::ofstream out(config.out, std::ios::binary);
    if (!out) throw IoError("cannot write " + config.out.string());
    write_metrics(out, config, result);
    if (!out) throw IoError("write failed: " + config.out.string());
  }
  return result;
}

void write_metrics(std::ostream& out, const RunConfig& config, const RunResult& result) {
  out << kMetricsMagic << '\n';
  auto kv = [&](const char* key, const std::string& value) { out << "# " << key << '\t' << value << '\n'; };
  kv("engine", std::string(to_string(config.engine)));
  kv("dataset", config.dataset);
  kv("queries", config.generator ? format_query_generator(*config.generator) : config.query_file);
  kv("query_count", std::to_string(result.answers.size()));
  kv("policy", config.engine == EngineKind::kDetDrop || config.engine == EngineKind::kProbDrop
                   ? format_policy(parse_policy(config.policy))
                   : "none");
  if (config.engine == EngineKind::kProbDrop) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "bits_per_entry=%g,hashes=%d", config.bloom_bits_per_entry, config.bloom_hashes);
    std::string bloom = buf;
    if (config.bloom_expected_entries) bloom += ",expected=" + std::to_string(*config.bloom_expected_entries);
    kv("bloom", bloom);
  }
  if (config.updates.empty()) {
    kv("batch_size", std::to_string(config.batch_size));
    kv("batch_count", std::to_string(config.batch_count));
    kv("delete_fraction", std::to_string(config.delete_fraction));
  } else {
    kv("updates", config.updates);
  }
  kv("budget", config.budget ? std::to_string(*config.budget) : "none");
  kv("byte_model", "d=" + std::to_string(config.model.d) + ",s=" + std::to_string(config.model.s));
  kv("seed", std::to_string(config.seed));
  kv("oom", result.oom ? "1" : "0");

  for (std::size_t c = 0; c < std::size(kColumns); ++c) out << (c ? "\t" : "") << kColumns[c];
  out << '\n';
  for (const auto& r : result.records) {
    out << r.version << '\t' << format_ms(r.batch_ms) << '\t' << format_ms(r.cumulative_ms) << '\t' << r.diffs.e
        << '\t' << r.diffs.j << '\t' << r.diffs.d << '\t' << r.diffs.dropped << '\t' << r.diffs.store_bytes << '\t'
        << r.diffs.bytes << '\t' << r.counters.recomputations << '\t' << r.counters.aggregate_reruns << '\t'
        << r.counters.join_reconstructions << '\t' << r.counters.drops << '\t' << r.expanded << '\t'
        << (r.oom ? 1 : 0) << '\n';
  }
}

MetricsFile read_metrics(std::istream& in) {
  MetricsFile f;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != kMetricsMagic) throw ParseError("not a metrics file", line_no);
      continue;
    }
    if (line.empty()) continue;
    if (line.starts_with("# ")) {
      auto tab = line.find('\t');
      if (tab == std::string::npos) throw ParseError("malformed config line", line_no);
      f.config[line.substr(2, tab - 2)] = line.substr(tab + 1);
      continue;
    }
    auto fields = split(line, '\t');
    if (fields.size() != std::size(kColumns)) {
      throw ParseError("expected " + std::to_string(std::size(kColumns)) + " fields", line_no);
    }
    if (!header) {
      for (std::size_t c = 0; c < fields.size(); ++c) {
        if (fields[c] != kColumns[c]) throw ParseError("unexpected column '" + fields[c] + "'", line_no);
      }
      header = true;
      continue;
    }
    try {
      MetricsRecord r;
      std::size_t c = 0;
      auto u = [&] { return static_cast<std::size_t>(std::stoull(fields[c++])); };
      r.version = std::stoll(fields[c++]);
      r.batch_ms = std::stod(fields[c++]);
      r.cumulative_ms = std::stod(fields[c++]);
      r.diffs.e = u();
      r.diffs.j = u();
      r.diffs.d = u();
      r.diffs.dropped = u();
      r.diffs.store_bytes = u();
      r.diffs.bytes = u();
      r.counters.recomputations = u();
      r.counters.aggregate_reruns = u();
      r.counters.join_reconstructions = u();
      r.counters.drops = u();
      r.expanded = u();
      r.oom = u() != 0;
      f.records.push_back(r);
    } catch (const std::logic_error&) {
      throw ParseError("malformed number", line_no);
    }
  }
  if (!header) throw ParseError("missing header row", line_no);
  return f;
}

MetricsFile read_metrics(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return read_metrics(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

std::vector<CapacityRow> capacity_sweep(const RunConfig& config, const std::vector<std::size_t>& query_counts,
                                        const std::vector<double>& p_grid) {
  switch (config.engine) {
    case EngineKind::kVdc:
    case EngineKind::kJod:
    case EngineKind::kDetDrop:
    case EngineKind::kProbDrop:
      break;
    default:
      throw ConfigError("capacity sweep needs vdc, jod, det-drop or prob-drop");
  }
  if (!config.generator) throw ConfigError("capacity sweep needs a query generator");
  if (query_counts.empty()) return {};

  RunConfig base = config;
  base.out.clear();
  base.generator->count = *std::max_element(query_counts.begin(), query_counts.end());
  const Workload full = prepare_workload(base);

  const bool dropping = config.engine == EngineKind::kDetDrop || config.engine == EngineKind::kProbDrop;
  std::vector<double> grid = dropping ? p_grid : std::vector<double>{0.0};
  std::sort(grid.begin(), grid.end());
  const DropPolicy policy = dropping ? parse_policy(config.policy) : DropPolicy{};

  std::vector<CapacityRow> rows;
  for (auto q : query_counts) {
    Workload w = full;
    w.queries.resize(q);
    CapacityRow row;
    row.engine = config.engine;
    row.queries = q;
    for (double p : grid) {
      RunConfig c = base;
      if (dropping) {
        DropPolicy pol = policy;
        pol.p = p;
        c.policy = format_policy(pol);
      }
      auto r = run_workload(c, w);
      row.total_ms = r.records.back().cumulative_ms;
      row.peak_bytes = 0;
      for (const auto& rec : r.records) row.peak_bytes = std::max(row.peak_bytes, rec.diffs.bytes);
      if (!r.oom) {
        row.p = p;
        row.feasible = true;
        break;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::size_t max_feasible_queries(const std::vector<CapacityRow>& rows) {
  std::size_t best = 0;
  for (const auto& r : rows) {
    if (r.feasible) best = std::max(best, r.queries);
  }
  return best;
}

std::string format_capacity_table(const std::vector<CapacityRow>& rows) {
  std::ostringstream out;
  out << "engine\tqueries\tp\tfeasible\ttotal_ms\tpeak_bytes\n";
  for (const auto& r : rows) {
    out << to_string(r.engine) << '\t' << r.queries << '\t' << (r.p ? std::to_string(*r.p) : "none") << '\t'
        << (r.feasible ? 1 : 0) << '\t' << format_ms(r.total_ms) << '\t' << r.peak_bytes << '\n';
  }
  return out.str();
}

Report emit_report(const std::vector<MetricsFile>& files) {
  if (files.empty()) throw ConfigError("report needs at least one metrics file");
  struct Row {
    std::string engine;
    std::string queries;
    std::size_t batches = 0;
    double total_ms = 0;
    std::size_t peak_bytes = 0;
    std::uint64_t recomputations = 0;
    std::uint64_t reruns = 0;
    bool oom = false;
  };
  std::vector<Row> rows;
  for (const auto& f : files) {
    Row r;
    auto get = [&](const char* key) {
      auto it = f.config.find(key);
      return it == f.config.end() ? std::string("?") : it->second;
    };
    r.engine = get("engine");
    r.queries = get("query_count");
    for (std::size_t i = 0; i < f.records.size(); ++i) {
      const auto& rec = f.records[i];
      // Record 0 is the initial run.
      if (i > 0) {
        ++r.batches;
        r.total_ms += rec.batch_ms;
      }
      r.peak_bytes = std::max(r.peak_bytes, rec.diffs.bytes);
      r.recomputations += rec.counters.recomputations;
      r.reruns += rec.counters.aggregate_reruns;
      r.oom = r.oom || rec.oom;
    }
    rows.push_back(r);
  }
  const Row* ref = nullptr;
  for (const auto& r : rows) {
    if (r.engine == "vdc") {
      ref = &r;
      break;
    }
  }

  static constexpr const char* kHeader[] = {"engine",         "queries",          "batches",   "total_batch_ms",
                                            "peak_bytes",     "recomputations",   "aggregate_reruns",
                                            "oom",            "time_vs_vdc",      "bytes_vs_vdc"};
  std::vector<std::vector<std::string>> table;
  table.emplace_back(std::begin(kHeader), std::end(kHeader));
  for (const auto& r : rows) {
    table.push_back({r.engine, r.queries, std::to_string(r.batches), format_ms(r.total_ms),
                     std::to_string(r.peak_bytes), std::to_string(r.recomputations), std::to_string(r.reruns),
                     r.oom ? "1" : "0", ref ? format_ratio(r.total_ms, ref->total_ms) : "",
                     ref ? format_ratio(static_cast<double>(r.peak_bytes), static_cast<double>(ref->peak_bytes))
                         : ""});
  }

  Report rep;
  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], std::max<std::size_t>(row[c].size(), 1));
  }
  std::ostringstream text, csv;
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto& cell = row[c].empty() ? std::string("-") : row[c];
      text << (c ? "  " : "") << cell;
      if (c + 1 < row.size()) text << std::string(width[c] - cell.size(), ' ');
      csv << (c ? "," : "") << row[c];
    }
    text << '\n';
    csv << '\n';
  }
  rep.text = text.str();
  rep.csv = csv.str();
  return rep;
}

Report emit_report(const std::vector<std::filesystem::path>& paths) {
  std::vector<MetricsFile> files;
  for (const auto& p : paths) files.push_back(read_metrics(p));
  return emit_report(files);
}

}  // namespace dcgraph
