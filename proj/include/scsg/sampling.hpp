#ifndef SCSG_SAMPLING_HPP
#define SCSG_SAMPLING_HPP

// Seedable randomness: geometric epoch lengths and uniform index batches.
//
// Everything is built on std::mt19937_64, whose output sequence is fixed by
// the standard, plus hand-written conversions to doubles and bounded
// integers (the <random> distributions are implementation-defined), so a
// seed reproduces the same draws on every platform.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "scsg/core.hpp"

namespace scsg {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a, used to turn run labels into stream ids.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed of run `run_id` under `base_seed`.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t run_id) {
  return splitmix64(base_seed ^ splitmix64(run_id));
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  /// Independent stream for run `run_id` under a base seed.
  static RngStream derive(std::uint64_t base_seed, std::uint64_t run_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound), unbiased by rejection.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound must be > 0");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  double normal() {
    // Box-Muller; only used for synthetic data and test fixtures.
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

inline RngStream RngStream::derive(std::uint64_t base_seed, std::uint64_t run_id) {
  return RngStream(derive_seed(base_seed, run_id));
}

/// N ~ Geom(gamma) with P(N = k) = (1 - gamma) gamma^k, k = 0, 1, ...
/// Inverse CDF: P(N >= k) = gamma^k = P(U <= gamma^k).
inline std::uint64_t sample_geometric(double gamma, RngStream& rng) {
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw std::invalid_argument("sample_geometric: gamma must lie in [0, 1)");
  if (gamma == 0.0) return 0;
  const double u = rng.uniform_open01();
  const double k = std::floor(std::log(u) / std::log(gamma));
  if (!(k < 1.8e19)) return UINT64_MAX;
  return static_cast<std::uint64_t>(k);
}

/// `size` distinct indices drawn uniformly from {0, ..., n-1}.
///
/// Dense requests use a partial Fisher-Yates shuffle over an index buffer,
/// sparse ones use Floyd's algorithm; both are exactly uniform over subsets.
inline std::vector<Index> sample_subset(std::size_t n, std::size_t size, RngStream& rng) {
  if (size == 0 || size > n)
    throw std::invalid_argument("sample_subset: need 1 <= size <= n");
  std::vector<Index> out;
  out.reserve(size);
  if (size == n) {
    for (Index i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  if (static_cast<double>(size) > 0.1 * static_cast<double>(n)) {
    std::vector<Index> buf(n);
    for (Index i = 0; i < n; ++i) buf[i] = i;
    for (std::size_t k = 0; k < size; ++k) {
      const std::size_t j = k + rng.uniform_below(n - k);
      std::swap(buf[k], buf[j]);
      out.push_back(buf[k]);
    }
    return out;
  }
  std::unordered_set<Index> seen;
  seen.reserve(size * 2);
  for (std::size_t j = n - size; j < n; ++j) {
    const Index t = rng.uniform_below(j + 1);
    const Index pick = seen.insert(t).second ? t : j;
    if (pick == j) seen.insert(j);
    out.push_back(pick);
  }
  return out;
}

/// `size` indices drawn i.i.d. uniformly (duplicates allowed).
inline std::vector<Index> sample_with_replacement(std::size_t n, std::size_t size,
                                                  RngStream& rng) {
  if (size == 0 || n == 0)
    throw std::invalid_argument("sample_with_replacement: need n, size >= 1");
  std::vector<Index> out(size);
  for (auto& i : out) i = rng.uniform_below(n);
  return out;
}

/// Monte-Carlo check of E(D_N - D_{N+1}) = (1/gamma - 1)(D_0 - E D_N).
struct GeometrizationGap {
  double lhs = 0.0;             // mean of D_N - D_{N+1}
  double rhs = 0.0;             // (1/gamma - 1)(D_0 - mean D_N)
  double gap = 0.0;             // |lhs - rhs|
  double standard_error = 0.0;  // of the per-draw difference
};

inline GeometrizationGap geometrization_identity_gap(
    const std::function<double(std::uint64_t)>& seq, double gamma,
    std::size_t num_samples, RngStream& rng) {
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw std::invalid_argument("geometrization_identity_gap: gamma must lie in [0, 1)");
  if (num_samples < 2)
    throw std::invalid_argument("geometrization_identity_gap: need >= 2 samples");
  if (gamma == 0.0) {
    // N = 0 almost surely; the identity reads D_0 - D_1 = inf * 0.
    const double d = seq(0) - seq(1);
    return {d, d, 0.0, 0.0};
  }
  const double coef = 1.0 / gamma - 1.0;
  const double d0 = seq(0);
  double sum_l = 0.0, sum_dn = 0.0, sum_z = 0.0, sum_z2 = 0.0;
  for (std::size_t s = 0; s < num_samples; ++s) {
    const std::uint64_t k = sample_geometric(gamma, rng);
    const double dn = seq(k);
    const double l = dn - seq(k + 1);
    const double z = l - coef * (d0 - dn);
    sum_l += l;
    sum_dn += dn;
    sum_z += z;
    sum_z2 += z * z;
  }
  const double m = static_cast<double>(num_samples);
  GeometrizationGap out;
  out.lhs = sum_l / m;
  out.rhs = coef * (d0 - sum_dn / m);
  out.gap = std::abs(out.lhs - out.rhs);
  const double mean_z = sum_z / m;
  const double var_z = std::max(0.0, (sum_z2 - m * mean_z * mean_z) / (m - 1.0));
  out.standard_error = std::sqrt(var_z / m);
  return out;
}

}  // namespace scsg

#endif  // SCSG_SAMPLING_HPP
