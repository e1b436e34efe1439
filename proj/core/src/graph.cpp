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

#include "dcgraph/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace dcgraph {

std::uint32_t Dictionary::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<std::uint32_t> Dictionary::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

Graph::Graph(std::size_t vertex_count) : forward_(vertex_count), backward_(vertex_count) {}

void Graph::add_edge(const Edge& e) {
  forward_.at(e.src).push_back({e.dst, e.label, e.weight});
  backward_.at(e.dst).push_back({e.src, e.label, e.weight});
  ++edge_count_;
}

namespace {

bool erase_one(std::vector<AdjEntry>& list, const AdjEntry& entry) {
  auto it = std::find(list.begin(), list.end(), entry);
  if (it == list.end()) return false;
  list.erase(it);
  return true;
}

std::string describe(const Edge& e) {
  return "(" + std::to_string(e.src) + "," + std::to_string(e.dst) + ",label " + std::to_string(e.label) +
         ",weight " + std::to_string(e.weight) + ")";
}

}  // namespace

bool Graph::remove_edge(const Edge& e) {
  if (e.src >= vertex_count() || e.dst >= vertex_count()) return false;
  if (!erase_one(forward_[e.src], {e.dst, e.label, e.weight})) return false;
  erase_one(backward_[e.dst], {e.src, e.label, e.weight});
  --edge_count_;
  return true;
}

bool Graph::contains(const Edge& e) const {
  if (e.src >= vertex_count() || e.dst >= vertex_count()) return false;
  const auto& out = forward_[e.src];
  return std::find(out.begin(), out.end(), AdjEntry{e.dst, e.label, e.weight}) != out.end();
}

void Graph::apply_batch(const UpdateBatch& batch) {
  if (batch.version != version_ + 1) {
    throw SequencingError("batch produces version " + std::to_string(batch.version) + " but graph is at version " +
                          std::to_string(version_));
  }
  std::size_t applied = 0;
  try {
    for (const auto& u : batch.entries) {
      if (u.edge.src >= vertex_count() || u.edge.dst >= vertex_count()) {
        throw UpdateError("update references unknown vertex in " + describe(u.edge));
      }
      if (u.sign == Sign::kInsert) {
        add_edge(u.edge);
      } else if (!remove_edge(u.edge)) {
        throw UpdateError("cannot delete absent edge " + describe(u.edge));
      }
      ++applied;
    }
  } catch (...) {
    // Roll back the prefix so a failed batch leaves the graph untouched.
    for (std::size_t i = applied; i-- > 0;) {
      const auto& u = batch.entries[i];
      if (u.sign == Sign::kInsert) {
        remove_edge(u.edge);
      } else {
        add_edge(u.edge);
      }
    }
    throw;
  }
  version_ = batch.version;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (VertexId v = 0; v < forward_.size(); ++v) {
    for (const auto& a : forward_[v]) out.push_back({v, a.other, a.label, a.weight});
  }
  return out;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.forward_ == b.forward_ && a.backward_ == b.backward_ && a.edge_count_ == b.edge_count_;
}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

Weight parse_weight(std::string_view tok, std::size_t line_no) {
  Weight w = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), w);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("malformed weight '" + std::string(tok) + "'", line_no);
  }
  if (w < 1) {
    throw ValidationError("line " + std::to_string(line_no) + ": weight must be positive, got " + std::to_string(w));
  }
  return w;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    fn(line, line_no);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

EdgeList parse_edge_list(std::string_view text, const LoadOptions& opts) {
  EdgeList list;
  const std::size_t need = 2 + (opts.weighted ? 1 : 0) + (opts.labeled ? 1 : 0);
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    auto toks = tokenize(line);
    if (toks.empty() || toks.front().front() == '#') return;
    if (toks.size() < need) {
      throw ParseError("expected " + std::to_string(need) + " fields, got " + std::to_string(toks.size()), line_no);
    }
    Edge e;
    Weight w = opts.weighted ? parse_weight(toks[2], line_no) : 1;
    e.src = list.vertices.intern(toks[0]);
    e.dst = list.vertices.intern(toks[1]);
    e.weight = w;
    e.label = opts.labeled ? list.labels.intern(toks[opts.weighted ? 3 : 2]) : 0;
    list.edges.push_back(e);
  });
  return list;
}

EdgeList load_edge_list(const std::filesystem::path& path, const LoadOptions& opts) {
  return parse_edge_list(read_file(path), opts);
}

Graph build_graph(const EdgeList& list, std::span<const Edge> edges) {
  Graph g(list.vertices.size());
  for (std::size_t i = 0; i < list.vertices.size(); ++i) g.vertex_names().intern(list.vertices.name(i));
  for (std::size_t i = 0; i < list.labels.size(); ++i) g.labels().intern(list.labels.name(i));
  for (const auto& e : edges) g.add_edge(e);
  return g;
}

DynamicSplit split_for_dynamism(std::span<const Edge> edges, std::uint64_t seed, double initial_fraction) {
  if (!(initial_fraction > 0.0 && initial_fraction < 1.0)) {
    throw ConfigError("initial fraction must lie strictly between 0 and 1");
  }
  std::vector<Edge> shuffled(edges.begin(), edges.end());
  std::mt19937_64 rng(seed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto cut = static_cast<std::size_t>(std::floor(initial_fraction * static_cast<double>(shuffled.size())));
  DynamicSplit split;
  split.initial.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(cut));
  split.updates.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(cut), shuffled.end());
  return split;
}

std::vector<UpdateBatch> make_insertion_batches(std::span<const Edge> stream, std::size_t batch_size,
                                                std::int64_t first_version) {
  if (batch_size == 0) throw ConfigError("batch size must be positive");
  std::vector<UpdateBatch> out;
  for (std::size_t i = 0; i < stream.size(); i += batch_size) {
    UpdateBatch b;
    b.version = first_version + static_cast<std::int64_t>(out.size());
    for (std::size_t j = i; j < std::min(stream.size(), i + batch_size); ++j) {
      b.entries.push_back({stream[j], Sign::kInsert});
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<UpdateBatch> make_deletion_workload(const std::vector<UpdateBatch>& batches, double deletion_fraction,
                                                std::uint64_t seed, const Graph& graph) {
  if (!(deletion_fraction >= 0.0 && deletion_fraction <= 1.0)) {
    throw ConfigError("deletion fraction must lie in [0, 1]");
  }
  if (deletion_fraction == 0.0) return batches;
  const std::size_t n = batches.size();
  const auto deletions = static_cast<std::size_t>(std::llround(deletion_fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> is_delete(n, false);
  for (std::size_t i = 0; i < deletions; ++i) is_delete[order[i]] = true;

  // Multiset of present edges, mirrored as the workload is generated.
  std::vector<Edge> present = graph.edges();
  std::vector<UpdateBatch> out;
  std::size_t next_insert = 0;
  std::vector<EdgeUpdate> inserts;
  for (const auto& b : batches) {
    for (const auto& u : b.entries) inserts.push_back(u);
  }
  for (std::size_t i = 0; i < n; ++i) {
    UpdateBatch b;
    b.version = batches[i].version;
    const std::size_t size = std::max<std::size_t>(1, batches[i].entries.size());
    if (is_delete[i]) {
      for (std::size_t j = 0; j < size; ++j) {
        if (present.empty()) throw WorkloadError("deletion requested on an empty graph");
        std::uniform_int_distribution<std::size_t> pick(0, present.size() - 1);
        auto idx = pick(rng);
        b.entries.push_back({present[idx], Sign::kDelete});
        present[idx] = present.back();
        present.pop_back();
      }
    } else {
      for (std::size_t j = 0; j < size && next_insert < inserts.size(); ++j) {
        const auto& u = inserts[next_insert++];
        b.entries.push_back(u);
        present.push_back(u.edge);
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<UpdateBatch> parse_update_stream(std::string_view text, Graph& graph, std::int64_t first_version) {
  std::vector<UpdateBatch> out;
  UpdateBatch current;
  auto flush = [&] {
    if (current.entries.empty()) return;
    current.version = first_version + static_cast<std::int64_t>(out.size());
    out.push_back(std::move(current));
    current = UpdateBatch{};
  };
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    auto toks = tokenize(line);
    if (toks.empty()) {
      flush();
      return;
    }
    if (toks.front().front() == '#') return;
    if (toks.size() < 4 || (toks[0] != "+" && toks[0] != "-")) {
      throw ParseError("expected '+|- src dst weight [label]'", line_no);
    }
    auto src = graph.vertex_names().find(toks[1]);
    auto dst = graph.vertex_names().find(toks[2]);
    if (!src || !dst) throw ParseError("unknown vertex in update", line_no);
    Edge e{*src, *dst, 0, parse_weight(toks[3], line_no)};
    if (toks.size() >= 5) {
      auto label = graph.labels().find(toks[4]);
      if (label) {
        e.label = *label;
      } else if (toks[4] == "0" && graph.labels().size() == 0) {
        e.label = 0;
      } else {
        e.label = graph.labels().intern(toks[4]);
      }
    }
    current.entries.push_back({e, toks[0] == "+" ? Sign::kInsert : Sign::kDelete});
  });
  flush();
  return out;
}

std::string format_update_stream(const std::vector<UpdateBatch>& batches, const Graph& graph) {
  std::ostringstream os;
  const auto& names = graph.vertex_names();
  auto label_name = [&](Label l) { return l < graph.labels().size() ? graph.labels().name(l) : std::to_string(l); };
  for (std::size_t i = 0; i < batches.size(); ++i) {
    if (i > 0) os << '\n';
    for (const auto& u : batches[i].entries) {
      os << (u.sign == Sign::kInsert ? '+' : '-') << ' ' << names.name(u.edge.src) << ' ' << names.name(u.edge.dst)
         << ' ' << u.edge.weight << ' ' << label_name(u.edge.label) << '\n';
    }
  }
  return os.str();
}

UpdateBatch inverse_batch(const UpdateBatch& batch, std::int64_t version) {
  UpdateBatch inv;
  inv.version = version;
  for (auto it = batch.entries.rbegin(); it != batch.entries.rend(); ++it) {
    inv.entries.push_back({it->edge, it->sign == Sign::kInsert ? Sign::kDelete : Sign::kInsert});
  }
  return inv;
}

std::vector<Edge> random_edges(std::size_t vertices, std::size_t edges, std::uint64_t seed, Weight max_weight,
                               std::uint32_t label_count) {
  std::vector<Edge> out;
  if (vertices == 0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> vert(0, static_cast<VertexId>(vertices - 1));
  std::uniform_int_distribution<Weight> wt(1, max_weight);
  std::uniform_int_distribution<Label> lab(0, label_count - 1);
  out.reserve(edges);
  for (std::size_t i = 0; i < edges; ++i) {
    Edge e;
    e.src = vert(rng);
    e.dst = vert(rng);
    e.weight = wt(rng);
    e.label = lab(rng);
    out.push_back(e);
  }
  return out;
}

std::vector<Edge> power_law_edges(std::size_t vertices, std::size_t edges, std::uint64_t seed, double gamma,
                                  Weight max_weight, std::uint32_t label_count) {
  std::vector<Edge> out;
  if (vertices < 2) return out;
  std::vector<double> weights(vertices);
  const double exponent = -1.0 / (gamma - 1.0);
  for (std::size_t i = 0; i < vertices; ++i) weights[i] = std::pow(static_cast<double>(i + 1), exponent);
  std::mt19937_64 rng(seed);
  std::discrete_distribution<VertexId> pick(weights.begin(), weights.end());
  // Independent id permutation so that high degree is not tied to low ids.
  std::vector<VertexId> perm(vertices);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_int_distribution<Weight> wt(1, max_weight);
  std::uniform_int_distribution<Label> lab(0, label_count - 1);
  out.reserve(edges);
  while (out.size() < edges) {
    VertexId s = perm[pick(rng)];
    VertexId d = perm[pick(rng)];
    if (s == d) continue;
    out.push_back({s, d, lab(rng), wt(rng)});
  }
  return out;
}

EdgeList make_edge_list(std::size_t vertices, std::vector<Edge> edges, std::uint32_t label_count) {
  EdgeList list;
  for (std::size_t i = 0; i < vertices; ++i) list.vertices.intern(std::to_string(i));
  for (std::uint32_t l = 0; l < label_count; ++l) list.labels.intern("l" + std::to_string(l));
  list.edges = std::move(edges);
  return list;
}

}  // namespace dcgraph
