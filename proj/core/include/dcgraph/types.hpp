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

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dcgraph {

using VertexId = std::uint32_t;
/// Partition key of a collection. Plain vertex ids for most queries, packed
/// (vertex, automaton state) pairs for regular path queries.
using Key = std::uint64_t;
using Weight = std::int64_t;
using Label = std::uint32_t;
using Iteration = std::int32_t;

// Error hierarchy. Everything thrown by the library derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};
class ValidationError : public Error {
  using Error::Error;
};
class UpdateError : public Error {
  using Error::Error;
};
class SequencingError : public Error {
  using Error::Error;
};
class QueryError : public Error {
  using Error::Error;
};
class ConsistencyError : public Error {
  using Error::Error;
};
class NonterminationError : public Error {
  using Error::Error;
};
class WorkloadError : public Error {
  using Error::Error;
};
class ConfigError : public Error {
  using Error::Error;
};
class IoError : public Error {
  using Error::Error;
};

/// Vertex state: a tagged scalar shared by every query kind. Infinity is a
/// tag rather than a sentinel so that `inf + w` stays `inf`.
class State {
 public:
  enum class Kind : std::uint8_t { kInteger = 0, kReal = 1, kInfinite = 2 };

  constexpr State() = default;

  static constexpr State infinite() { return State(Kind::kInfinite, 0, 0.0); }
  static constexpr State integer(std::int64_t v) { return State(Kind::kInteger, v, 0.0); }
  static constexpr State real(double v) { return State(Kind::kReal, 0, v); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_infinite() const { return kind_ == Kind::kInfinite; }
  constexpr bool is_finite() const { return kind_ != Kind::kInfinite; }
  constexpr std::int64_t as_integer() const { return int_; }
  constexpr double as_real() const { return real_; }

  /// Saturating addition for distances and hop counts.
  constexpr State plus(std::int64_t w) const {
    return is_infinite() ? *this : State::integer(int_ + w);
  }

  // Reals compare bit-exactly for equality: difference detection must be
  // reproducible. Ordering puts every finite value below infinity.
  friend bool operator==(const State& a, const State& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case Kind::kInteger:
        return a.int_ == b.int_;
      case Kind::kReal:
        return std::bit_cast<std::uint64_t>(a.real_) == std::bit_cast<std::uint64_t>(b.real_);
      case Kind::kInfinite:
        return true;
    }
    return false;
  }
  friend std::strong_ordering operator<=>(const State& a, const State& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    switch (a.kind_) {
      case Kind::kInteger:
        return a.int_ <=> b.int_;
      case Kind::kReal: {
        if (a.real_ < b.real_) return std::strong_ordering::less;
        if (a.real_ > b.real_) return std::strong_ordering::greater;
        return std::bit_cast<std::uint64_t>(a.real_) <=> std::bit_cast<std::uint64_t>(b.real_);
      }
      case Kind::kInfinite:
        return std::strong_ordering::equal;
    }
    return std::strong_ordering::equal;
  }

  std::string to_string() const;
  friend std::ostream& operator<<(std::ostream& os, const State& s) { return os << s.to_string(); }

 private:
  constexpr State(Kind k, std::int64_t i, double r) : kind_(k), int_(i), real_(r) {}

  Kind kind_ = Kind::kInfinite;
  std::int64_t int_ = 0;
  double real_ = 0.0;
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    std::uint64_t bits = s.kind() == State::Kind::kReal ? std::bit_cast<std::uint64_t>(s.as_real())
                                                        : static_cast<std::uint64_t>(s.as_integer());
    return std::hash<std::uint64_t>{}(bits * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(s.kind()));
  }
};

}  // namespace dcgraph
