// Shared vocabulary types, error hierarchy and small numeric helpers.

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsssp {

using NodeId = std::uint32_t;
using ChannelId = std::uint32_t;
using Round = std::uint64_t;
using Dist = std::int64_t;

inline constexpr Dist kInfinity = std::numeric_limits<Dist>::max() / 4;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

inline bool is_finite(Dist d) { return d < kInfinity; }

/// Saturating addition: anything involving kInfinity stays infinite.
inline Dist add_dist(Dist a, Dist b) {
  if (!is_finite(a) || !is_finite(b)) return kInfinity;
  Dist s = a + b;
  return s >= kInfinity ? kInfinity : s;
}

/// Distances of every node from one source.
struct DistanceTable {
  NodeId source = 0;
  std::vector<Dist> dist;

  bool operator==(const DistanceTable&) const = default;
};

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DSSSP_DECLARE_ERROR(Name)          \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

DSSSP_DECLARE_ERROR(TopologyError);
DSSSP_DECLARE_ERROR(CapacityViolation);
DSSSP_DECLARE_ERROR(PayloadViolation);
DSSSP_DECLARE_ERROR(RoundCapExceeded);
DSSSP_DECLARE_ERROR(InfeasibleSpec);
DSSSP_DECLARE_ERROR(RangeError);
DSSSP_DECLARE_ERROR(NegativeWeight);
DSSSP_DECLARE_ERROR(ParamError);
DSSSP_DECLARE_ERROR(PromiseViolation);
DSSSP_DECLARE_ERROR(ConsistencyError);
DSSSP_DECLARE_ERROR(RecursionDepthExceeded);
DSSSP_DECLARE_ERROR(InsufficientData);
DSSSP_DECLARE_ERROR(IoError);

#undef DSSSP_DECLARE_ERROR

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// ---------------------------------------------------------------------------
// Deterministic randomness. Draws are portable across standard libraries.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix64(seed)) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform real in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Integer helpers

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

/// floor(log2(x)) + 1 for x >= 1, and 1 for x == 0.
inline int bit_width_at_least_one(std::uint64_t x) {
  int w = 0;
  while (x) {
    ++w;
    x >>= 1;
  }
  return w == 0 ? 1 : w;
}

/// ceil(log2(x)) for x >= 1.
inline int ceil_log2(std::uint64_t x) {
  int r = 0;
  std::uint64_t p = 1;
  while (p < x) {
    p <<= 1;
    ++r;
  }
  return r;
}

/// Ceiling of a real-valued parameter formula. Values within a relative 1e-9
/// of an integer are snapped to it so exact powers (4096^{3/4} = 512) do not
/// drift upward through floating-point error.
std::int64_t ceil_param(double x);

}  // namespace dsssp
