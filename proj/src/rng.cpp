#include "obart/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "obart/mathutil.hpp"

namespace obart {

double Rng::uniform() {
  // (0,1): offset by half an ulp of the 53-bit grid so 0 and 1 never occur.
  return (static_cast<double>(engine_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n == 0");
  const std::uint64_t bound = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= bound);
  return static_cast<std::size_t>(x % n);
}

double Rng::normal() { return norm_quantile(uniform()); }

double Rng::gamma(double shape) {
  if (shape <= 0.0) throw std::invalid_argument("gamma: shape <= 0");
  if (shape < 1.0) {
    // Boost to shape+1 and scale back (Marsaglia-Tsang, eq. for a < 1).
    return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

double Rng::trunc_std_normal_above(double lower) {
  if (lower <= 8.0) {
    const double tail = norm_upper_tail(lower);
    return -norm_quantile(uniform() * tail);
  }
  // Far tail: exponential proposal with Robert's optimal rate.
  const double rate = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
  for (;;) {
    const double x = lower - std::log(uniform()) / rate;
    const double diff = x - rate;
    if (std::log(uniform()) < -0.5 * diff * diff) return x;
  }
}

double Rng::trunc_normal_positive(double mean) {
  return mean + trunc_std_normal_above(-mean);
}

double Rng::trunc_normal_nonpositive(double mean) {
  return mean - trunc_std_normal_above(mean);
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t chain_seed(std::uint64_t master, std::uint64_t k) {
  return mix64(master ^ mix64(k + 1));
}

}  // namespace obart
