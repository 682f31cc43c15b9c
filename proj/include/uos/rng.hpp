#pragma once

#include "uos/types.hpp"

#include <cmath>
#include <cstdint>

namespace uos {

// Finalizer with full avalanche; used both for output mixing and for
// deriving independent stream states from (seed, tag, indices).
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xFF51AFD7ED558CCDull;
  z ^= z >> 33;
  z *= 0xC4CEB9FE1A85EC53ull;
  z ^= z >> 33;
  return z;
}

// Stream tags keep different uses of the same master seed statistically
// independent (basis draws never collide with mask draws, etc.).
namespace rngtag {
constexpr std::uint64_t kBasis = 0x6261736973755501ull;
constexpr std::uint64_t kCoeff = 0x636F656666755502ull;
constexpr std::uint64_t kMask = 0x6D61736B75550303ull;
constexpr std::uint64_t kKmeans = 0x6B6D65616E735504ull;
constexpr std::uint64_t kSphere = 0x7370686572655505ull;
constexpr std::uint64_t kTrial = 0x747269616C755506ull;
constexpr std::uint64_t kPerturb = 0x70657274755507ull;
constexpr std::uint64_t kBootstrap = 0x626F6F7475550808ull;
constexpr std::uint64_t kPower = 0x706F776572550909ull;
}  // namespace rngtag

// Counter-based SplitMix64 stream.  Cheap to derive, cheap to fork, and a
// pure function of its 64-bit state, which is what makes generation
// independent of iteration order and thread scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t state) : state_(state) {}

  static RngStream derive(std::uint64_t seed, std::uint64_t tag,
                          std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t s = mix64(seed + 0x9E3779B97F4A7C15ull);
    s = mix64(s ^ mix64(tag + 0xBF58476D1CE4E5B9ull));
    s = mix64(s ^ mix64(a + 0x94D049BB133111EBull));
    s = mix64(s ^ mix64(b + 0xD6E8FEB86659FD93ull));
    return RngStream(s);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double next_open_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Unbiased uniform integer in [0, bound).
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Box-Muller; consumes exactly two uniforms per call.
  double next_gaussian() {
    const double u1 = next_open_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  Vector gaussian_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = next_gaussian();
    return v;
  }

  // Uniform on the unit sphere in R^d.
  Vector unit_sphere(Index d) {
    for (;;) {
      Vector v = gaussian_vector(d);
      const double norm = v.norm();
      if (norm > 1e-12) return v / norm;
    }
  }

  // Uniform random k-subset of {0..n-1} via partial Fisher-Yates; returned
  // sorted ascending.
  IndexList random_subset(Index n, Index k, std::vector<Index>& scratch);
  IndexList random_subset(Index n, Index k) {
    std::vector<Index> scratch;
    return random_subset(n, k, scratch);
  }

 private:
  std::uint64_t state_;
};

}  // namespace uos
