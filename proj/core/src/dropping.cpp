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

#include "dcgraph/dropping.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace dcgraph {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

}  // namespace

bool DropPolicy::should_drop(Key key, Iteration iteration, std::int64_t version, std::size_t deg) const {
  if (mode == Mode::kDegree) {
    if (deg < tau_min) return true;
    if (deg > tau_max) return false;
  }
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  std::uint64_t h = mix(seed);
  h = mix(h ^ key);
  h = mix(h ^ static_cast<std::uint64_t>(iteration));
  h = mix(h ^ static_cast<std::uint64_t>(version));
  return unit(h) < p;
}

std::size_t DropPolicy::degree_of(const Graph& graph, VertexId v) const {
  switch (degree) {
    case DegreeKind::kOut:
      return graph.out_degree(v);
    case DegreeKind::kIn:
      return graph.in_degree(v);
    case DegreeKind::kTotal:
      return graph.out_degree(v) + graph.in_degree(v);
  }
  return 0;
}

void DropPolicy::resolve(const Graph& graph) {
  if (tau_max_pct) tau_max = degree_percentile(graph, *tau_max_pct, degree);
  if (mode == Mode::kDegree && tau_min > tau_max) {
    throw ConfigError("tau_min " + std::to_string(tau_min) + " exceeds tau_max " + std::to_string(tau_max));
  }
}

std::size_t degree_percentile(const Graph& graph, double pct, DropPolicy::DegreeKind kind) {
  if (graph.vertex_count() == 0) return 0;
  DropPolicy probe;
  probe.degree = kind;
  std::vector<std::size_t> deg(graph.vertex_count());
  for (VertexId v = 0; v < deg.size(); ++v) deg[v] = probe.degree_of(graph, v);
  std::sort(deg.begin(), deg.end());
  auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(deg.size())));
  rank = std::clamp<std::size_t>(rank, 1, deg.size());
  return deg[rank - 1];
}

namespace {

double parse_double(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

DropPolicy parse_policy(std::string_view text) {
  DropPolicy policy;
  auto colon = text.find(':');
  auto mode = text.substr(0, colon);
  if (mode == "random") {
    policy.mode = DropPolicy::Mode::kRandom;
  } else if (mode == "degree") {
    policy.mode = DropPolicy::Mode::kDegree;
    policy.tau_max_pct = 80.0;
  } else {
    throw ConfigError("unknown drop policy '" + std::string(mode) + "'");
  }
  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  while (!rest.empty()) {
    auto comma = rest.find(',');
    auto item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value in policy, got '" + std::string(item) + "'");
    auto key = item.substr(0, eq);
    auto value = item.substr(eq + 1);
    if (key == "p") {
      policy.p = parse_double(value);
      if (policy.p < 0.0 || policy.p > 1.0) throw ConfigError("p must be in [0,1]");
    } else if (key == "tau_min") {
      policy.tau_min = static_cast<std::size_t>(parse_double(value));
    } else if (key == "tau_max") {
      policy.tau_max = static_cast<std::size_t>(parse_double(value));
      policy.tau_max_pct.reset();
    } else if (key == "tau_max_pct") {
      policy.tau_max_pct = parse_double(value);
    } else if (key == "degree") {
      if (value == "out") {
        policy.degree = DropPolicy::DegreeKind::kOut;
      } else if (value == "in") {
        policy.degree = DropPolicy::DegreeKind::kIn;
      } else if (value == "total") {
        policy.degree = DropPolicy::DegreeKind::kTotal;
      } else {
        throw ConfigError("degree must be out, in or total");
      }
    } else if (key == "seed") {
      policy.seed = static_cast<std::uint64_t>(parse_double(value));
    } else {
      throw ConfigError("unknown policy field '" + std::string(key) + "'");
    }
  }
  return policy;
}

std::string format_policy(const DropPolicy& policy) {
  std::ostringstream os;
  if (policy.mode == DropPolicy::Mode::kRandom) {
    os << "random:p=" << policy.p;
  } else {
    os << "degree:p=" << policy.p << ",tau_min=" << policy.tau_min;
    if (policy.tau_max_pct) {
      os << ",tau_max_pct=" << *policy.tau_max_pct;
    } else {
      os << ",tau_max=" << policy.tau_max;
    }
  }
  return os.str();
}

void DetStore::record(Key key, Iteration i) {
  auto& list = pairs_[key];
  auto it = std::lower_bound(list.begin(), list.end(), i);
  if (it != list.end() && *it == i) return;
  list.insert(it, i);
  ++count_;
}

void DetStore::forget(Key key, Iteration i) {
  auto kit = pairs_.find(key);
  if (kit == pairs_.end()) return;
  auto& list = kit->second;
  auto it = std::lower_bound(list.begin(), list.end(), i);
  if (it == list.end() || *it != i) return;
  list.erase(it);
  --count_;
  if (list.empty()) pairs_.erase(kit);
}

bool DetStore::contains(Key key, Iteration i) const {
  auto kit = pairs_.find(key);
  return kit != pairs_.end() && std::binary_search(kit->second.begin(), kit->second.end(), i);
}

std::optional<Iteration> DetStore::latest_in(Key key, Iteration lo, Iteration hi) const {
  auto kit = pairs_.find(key);
  if (kit == pairs_.end()) return std::nullopt;
  const auto& list = kit->second;
  auto it = std::upper_bound(list.begin(), list.end(), hi);
  if (it == list.begin()) return std::nullopt;
  --it;
  if (*it <= lo) return std::nullopt;
  return *it;
}

std::vector<Iteration> DetStore::iterations_in(Key key, Iteration lo, Iteration hi) const {
  auto kit = pairs_.find(key);
  if (kit == pairs_.end()) return {};
  const auto& list = kit->second;
  return {std::lower_bound(list.begin(), list.end(), lo), std::upper_bound(list.begin(), list.end(), hi)};
}

void DetStore::clear() {
  pairs_.clear();
  count_ = 0;
}

BloomStore::BloomStore(std::size_t bits, int hashes)
    : bits_(bits), hashes_(std::max(hashes, 1)), words_((bits + 63) / 64, 0) {}

std::unique_ptr<BloomStore> BloomStore::sized(std::size_t expected_entries, double bits_per_entry, int hashes) {
  auto bits = static_cast<std::size_t>(std::ceil(bits_per_entry * static_cast<double>(expected_entries)));
  return std::make_unique<BloomStore>(bits, hashes);
}

std::uint64_t BloomStore::pack(Key key, Iteration i) {
  if (i < 0 || i >= (1 << kIterationBits)) throw ConsistencyError("iteration does not fit the packed VT key");
  return (static_cast<std::uint64_t>(key) << kIterationBits) | static_cast<std::uint64_t>(i);
}

void BloomStore::record(Key key, Iteration i) {
  ++inserted_;
  if (bits_ == 0) return;
  auto x = pack(key, i);
  auto h1 = mix(x);
  auto h2 = mix(x ^ 0x5851F42D4C957F2DULL) | 1;
  for (int j = 0; j < hashes_; ++j) {
    auto bit = (h1 + static_cast<std::uint64_t>(j) * h2) % bits_;
    words_[bit / 64] |= std::uint64_t{1} << (bit % 64);
  }
}

bool BloomStore::contains(Key key, Iteration i) const {
  // A zero-size filter that has seen an insert must answer yes to everything.
  if (bits_ == 0) return inserted_ > 0;
  auto x = pack(key, i);
  auto h1 = mix(x);
  auto h2 = mix(x ^ 0x5851F42D4C957F2DULL) | 1;
  for (int j = 0; j < hashes_; ++j) {
    auto bit = (h1 + static_cast<std::uint64_t>(j) * h2) % bits_;
    if (!(words_[bit / 64] >> (bit % 64) & 1)) return false;
  }
  return true;
}

std::optional<Iteration> BloomStore::latest_in(Key key, Iteration lo, Iteration hi) const {
  if (inserted_ == 0) return std::nullopt;
  for (Iteration i = hi; i > lo; --i) {
    if (contains(key, i)) return i;
  }
  return std::nullopt;
}

std::vector<Iteration> BloomStore::iterations_in(Key key, Iteration lo, Iteration hi) const {
  std::vector<Iteration> out;
  if (inserted_ == 0) return out;
  for (Iteration i = std::max(lo, 1); i <= hi; ++i) {
    if (contains(key, i)) out.push_back(i);
  }
  return out;
}

void BloomStore::clear() {
  std::fill(words_.begin(), words_.end(), 0);
  inserted_ = 0;
}

}  // namespace dcgraph
