#pragma once

#include <cstdint>
#include <random>

namespace obart {

// Deterministic random stream. Every distribution below is derived from the
// raw 64-bit engine output through fixed transformations (inverse-CDF normal,
// Marsaglia-Tsang gamma), so a seed pins the entire sequence of draws
// independently of the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  // Unbiased integer in [0, n), n >= 1.
  std::size_t uniform_index(std::size_t n);

  bool bernoulli(double p) { return uniform() < p; }

  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Gamma with given shape and unit scale.
  double gamma(double shape);
  double chi_square(double df) { return 2.0 * gamma(0.5 * df); }
  double beta(double a, double b);

  // Inverse gamma: density proportional to x^{-shape-1} exp(-scale/x).
  double inv_gamma(double shape, double scale) { return scale / gamma(shape); }

  // Standard normal conditioned on exceeding `lower`. Inverse-CDF via the
  // complementary tail for lower <= 8, Robert's exponential rejection beyond.
  double trunc_std_normal_above(double lower);

  // N(mean, 1) truncated to (0, inf) / (-inf, 0].
  double trunc_normal_positive(double mean);
  double trunc_normal_nonpositive(double mean);

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer; used to derive independent per-chain/per-job seeds.
std::uint64_t mix64(std::uint64_t x);

// Seed for chain (or parallel job) k derived from a master seed.
std::uint64_t chain_seed(std::uint64_t master, std::uint64_t k);

}  // namespace obart
