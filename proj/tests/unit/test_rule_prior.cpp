#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "obart/mathutil.hpp"
#include "obart/rng.hpp"
#include "obart/rule_prior.hpp"

using namespace obart;

namespace {

constexpr int kDraws = 100000;
// chi-square critical values at the 0.001 level
constexpr double kChi2Crit[] = {0.0, 10.827566170662733, 13.815510557964274,
                                16.26623619623813, 18.46682695290317};
// limiting Kolmogorov critical value at the 0.001 level
constexpr double kKsCrit = 1.9494746035045818;

double binom_pmf(int k, int n, double p) {
  double logc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(logc + k * std::log(p) + (n - k) * std::log1p(-p));
}

// One-sample KS statistic against a cdf, scaled by sqrt(n).
template <typename Cdf>
double ks_stat(std::vector<double> xs, Cdf&& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d * std::sqrt(n);
}

}  // namespace

TEST_CASE("rule kind probability is p_cat / p") {
  Rng rng(31);
  CHECK(draw_rule_kind(3, 0, rng) == RuleKind::kContinuous);
  CHECK(draw_rule_kind(0, 2, rng) == RuleKind::kCategorical);
  int cat = 0;
  for (int i = 0; i < kDraws; ++i)
    if (draw_rule_kind(3, 1, rng) == RuleKind::kCategorical) ++cat;
  CHECK(static_cast<double>(cat) / kDraws == doctest::Approx(0.25).epsilon(0.04));
  CHECK_THROWS(draw_rule_kind(0, 0, rng));
}

TEST_CASE("draw_phi endpoints: theta 0 and theta 1") {
  Rng rng(32);
  const PhiProposal zero = draw_phi(0.0, 3, rng);
  CHECK(zero.all_zero);
  for (double v : zero.phi) CHECK(v == 0.0);

  for (int i = 0; i < 50; ++i) {
    const PhiProposal one = draw_phi(1.0, 1, rng);
    CHECK_FALSE(one.all_zero);
    CHECK(std::fabs(std::fabs(one.phi[0]) - 1.0) < 1e-12);
  }
}

TEST_CASE("draw_phi: unit norm, support matches gamma, all-zero rate") {
  Rng rng(33);
  int zero_count = 0;
  for (int i = 0; i < kDraws; ++i) {
    const PhiProposal p = draw_phi(0.5, 2, rng);
    if (p.all_zero) {
      ++zero_count;
      continue;
    }
    double norm2 = 0.0;
    for (int j = 0; j < 2; ++j) {
      norm2 += p.phi[j] * p.phi[j];
      CHECK((p.phi[j] != 0.0) == (p.gamma[j] == 1));
    }
    CHECK(std::fabs(std::sqrt(norm2) - 1.0) < 1e-12);
  }
  // P(all zero) = (1-theta)^p = 0.25
  CHECK(static_cast<double>(zero_count) / kDraws == doctest::Approx(0.25).epsilon(0.04));
}

TEST_CASE("sparsity law: nonzero count is Binomial(p_cont, theta)") {
  Rng rng(34);
  const int p = 4;
  const double theta = 0.35;
  std::vector<long> counts(p + 1, 0);
  for (int i = 0; i < kDraws; ++i) {
    const PhiProposal prop = draw_phi(theta, p, rng);
    int k = 0;
    for (auto g : prop.gamma) k += g;
    ++counts[k];
  }
  double chi2 = 0.0;
  for (int k = 0; k <= p; ++k) {
    const double expected = kDraws * binom_pmf(k, p, theta);
    const double d = counts[k] - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < kChi2Crit[4]);  // df = 5 cells - 1
}

TEST_CASE("direction isotropy given support size") {
  Rng rng(35);
  // k = 3: first coordinate of a uniform point on S^2 is Uniform(-1,1)
  std::vector<double> first3;
  while (first3.size() < 20000) {
    const PhiProposal p = draw_phi(1.0, 3, rng);
    first3.push_back(p.phi[0]);
  }
  CHECK(ks_stat(first3, [](double t) { return (t + 1.0) / 2.0; }) < kKsCrit);

  // k = 2: first coordinate has the arcsine law on (-1,1)
  std::vector<double> first2;
  while (first2.size() < 20000) {
    const PhiProposal p = draw_phi(1.0, 2, rng);
    first2.push_back(p.phi[0]);
  }
  CHECK(ks_stat(first2, [](double t) {
          return 0.5 + std::asin(std::clamp(t, -1.0, 1.0)) / std::acos(-1.0);
        }) < kKsCrit);
}

TEST_CASE("axis_aligned_phi picks a single uniform axis") {
  Rng rng(36);
  CHECK(axis_aligned_phi(1, rng).phi == std::vector<double>{1.0});
  std::vector<long> counts(4, 0);
  for (int i = 0; i < kDraws; ++i) {
    const PhiProposal p = axis_aligned_phi(4, rng);
    int nz = 0, axis = -1;
    for (int j = 0; j < 4; ++j) {
      if (p.phi[j] != 0.0) {
        ++nz;
        axis = j;
        CHECK(p.phi[j] == 1.0);
      }
    }
    REQUIRE(nz == 1);
    ++counts[axis];
  }
  for (long c : counts)
    CHECK(static_cast<double>(c) / kDraws == doctest::Approx(0.25).epsilon(0.04));
}

TEST_CASE("categorical subset rule: membership, mean size, empty level set") {
  Rng rng(37);
  // |A| = 1: C is empty or the singleton, each about half the time
  int singleton = 0;
  for (int i = 0; i < kDraws; ++i) {
    const DecisionRule r = draw_categorical_rule({7}, 0, 2, rng);
    const auto& cat = std::get<CategoricalRule>(r);
    REQUIRE(cat.in_left.size() <= 1);
    if (!cat.in_left.empty()) {
      CHECK(cat.in_left[0] == 7);
      ++singleton;
    }
  }
  CHECK(static_cast<double>(singleton) / kDraws == doctest::Approx(0.5).epsilon(0.02));

  // |A| = 3: E|C| = 1.5 and C subset of A
  const std::vector<int> avail{1, 4, 9};
  double total = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const DecisionRule r = draw_categorical_rule(avail, 2, 2, rng);
    const auto& cat = std::get<CategoricalRule>(r);
    for (int code : cat.in_left)
      CHECK(std::find(avail.begin(), avail.end(), code) != avail.end());
    total += static_cast<double>(cat.in_left.size());
  }
  CHECK(total / kDraws == doctest::Approx(1.5).epsilon(0.015));

  // empty A degenerates to the all-zero-phi continuous rule
  const DecisionRule degen = draw_categorical_rule({}, 0, 2, rng);
  const auto& cont = std::get<ContinuousRule>(degen);
  CHECK(cont.all_zero());
  CHECK(cont.cut == 1.0);
}

TEST_CASE("cutpoint draw: uniform interior, degenerate point, inverted error") {
  Rng rng(38);
  CHECK(draw_cutpoint(0.3, 0.3, rng) == 0.3);
  double total = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double c = draw_cutpoint(-1.0, 1.0, rng);
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
    total += c;
  }
  CHECK(total / kDraws == doctest::Approx(0.0).scale(1).epsilon(0.01));
  CHECK_THROWS(draw_cutpoint(1.0, 0.5, rng));
  CHECK(draw_cutpoint(0.5, 0.5 + 1e-13, rng) == 0.5);
}
