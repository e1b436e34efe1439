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
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dcgraph/graph.hpp"
#include "dcgraph/types.hpp"

namespace dcgraph {

/// Decides which freshly produced differences are dropped.
struct DropPolicy {
  enum class Mode { kRandom, kDegree };
  enum class DegreeKind { kOut, kIn, kTotal };

  Mode mode = Mode::kRandom;
  double p = 0.0;
  std::size_t tau_min = 2;
  std::size_t tau_max = std::numeric_limits<std::size_t>::max();
  /// When set, tau_max is resolved as this percentile of the initial degree
  /// distribution by `resolve`.
  std::optional<double> tau_max_pct;
  DegreeKind degree = DegreeKind::kOut;
  std::uint64_t seed = 0;

  /// Pure function of (seed, key, iteration, version, degree): equal inputs
  /// always agree, and for fixed inputs the dropped set only grows with p.
  bool should_drop(Key key, Iteration iteration, std::int64_t version, std::size_t degree) const;
  /// False when should_drop is false for every input.
  bool can_drop() const { return p > 0.0 || (mode == Mode::kDegree && tau_min > 0); }

  std::size_t degree_of(const Graph& graph, VertexId v) const;
  /// Fixes tau_max from tau_max_pct against `graph`. Throws ConfigError when
  /// tau_min > tau_max afterwards.
  void resolve(const Graph& graph);
};

/// `random:p=0.5` or `degree:p=0.5,tau_min=2,tau_max_pct=80[,tau_max=N][,degree=out|in|total]`.
DropPolicy parse_policy(std::string_view text);
std::string format_policy(const DropPolicy& policy);

/// Smallest degree d such that at least `pct` percent of vertices have
/// degree <= d.
std::size_t degree_percentile(const Graph& graph, double pct, DropPolicy::DegreeKind kind = DropPolicy::DegreeKind::kOut);

/// Record of dropped (key, iteration) pairs.
class DropStore {
 public:
  virtual ~DropStore() = default;

  virtual void record(Key key, Iteration i) = 0;
  /// Exact stores forget the pair; approximate ones cannot and ignore it.
  virtual void forget(Key key, Iteration i) = 0;
  virtual bool contains(Key key, Iteration i) const = 0;
  /// Latest recorded iteration in (lo, hi], probing downwards from hi.
  virtual std::optional<Iteration> latest_in(Key key, Iteration lo, Iteration hi) const = 0;
  /// Every recorded iteration in [lo, hi], ascending.
  virtual std::vector<Iteration> iterations_in(Key key, Iteration lo, Iteration hi) const = 0;
  /// Modeled bytes given `d` bytes per VT pair.
  virtual std::size_t bytes(std::size_t d) const = 0;
  /// Number of record() calls that added a new pair (Det) or all calls (Bloom).
  virtual std::size_t size() const = 0;
  virtual void clear() = 0;
};

/// Exact map from key to sorted dropped iterations.
class DetStore final : public DropStore {
 public:
  void record(Key key, Iteration i) override;
  void forget(Key key, Iteration i) override;
  bool contains(Key key, Iteration i) const override;
  std::optional<Iteration> latest_in(Key key, Iteration lo, Iteration hi) const override;
  std::vector<Iteration> iterations_in(Key key, Iteration lo, Iteration hi) const override;
  std::size_t bytes(std::size_t d) const override { return count_ * d; }
  std::size_t size() const override { return count_; }
  void clear() override;

 private:
  std::unordered_map<Key, std::vector<Iteration>> pairs_;
  std::size_t count_ = 0;
};

/// Single global Bloom filter over packed (key << 24 | iteration) words with
/// double hashing. Never returns a false negative.
class BloomStore final : public DropStore {
 public:
  static constexpr int kIterationBits = 24;

  BloomStore(std::size_t bits, int hashes);
  /// Sized as bits_per_entry * expected_entries.
  static std::unique_ptr<BloomStore> sized(std::size_t expected_entries, double bits_per_entry = 10.0,
                                           int hashes = 7);

  void record(Key key, Iteration i) override;
  void forget(Key, Iteration) override {}
  bool contains(Key key, Iteration i) const override;
  std::optional<Iteration> latest_in(Key key, Iteration lo, Iteration hi) const override;
  std::vector<Iteration> iterations_in(Key key, Iteration lo, Iteration hi) const override;
  std::size_t bytes(std::size_t) const override { return (bits_ + 7) / 8; }
  std::size_t size() const override { return inserted_; }
  void clear() override;

  std::size_t bit_count() const { return bits_; }
  int hash_count() const { return hashes_; }

 private:
  static std::uint64_t pack(Key key, Iteration i);

  std::size_t bits_;
  int hashes_;
  std::vector<std::uint64_t> words_;
  std::size_t inserted_ = 0;
};

enum class StoreKind { kDet, kBloom };

/// Modeled footprint of a store in bytes (d bytes per pair for Det, m/8 for Bloom).
inline std::size_t memory_footprint(const DropStore& store, std::size_t d = 8) { return store.bytes(d); }

}  // namespace dcgraph
