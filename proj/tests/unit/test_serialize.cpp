#include <doctest.h>

#include <sstream>

#include "obart/rng.hpp"
#include "obart/serialize.hpp"
#include "obart/tree.hpp"

using namespace obart;

namespace {

// A small random ensemble with both rule types and nontrivial state.
FrozenEnsemble make_ensemble(std::uint64_t seed) {
  EnsembleConfig cfg;
  cfg.num_trees = 4;
  cfg.p_cont = 2;
  cfg.p_cat = 1;
  cfg.tau = 0.37;
  cfg.lambda = 0.195;
  cfg.a_theta = 4.0;
  cfg.b_theta = 4.0;
  Ensemble e(cfg);
  Rng rng(seed);
  for (auto& tree : e.trees) {
    const int grows = static_cast<int>(rng.uniform_index(4));
    for (int g = 0; g < grows; ++g) {
      const auto leaves = tree.leaf_ids();
      const NodeId target = leaves[rng.uniform_index(leaves.size())];
      if (rng.bernoulli(0.3)) {
        CategoricalRule rule;
        rule.predictor = 0;
        if (rng.bernoulli(0.5)) rule.in_left.push_back(0);
        if (rng.bernoulli(0.5)) rule.in_left.push_back(2);
        tree.grow(target, rule);
      } else {
        const double a = rng.normal(), b = rng.normal();
        const double n = std::sqrt(a * a + b * b);
        tree.grow(target, ContinuousRule{{a / n, b / n}, rng.uniform(-1.0, 1.0)});
      }
    }
    for (NodeId leaf : tree.leaf_ids()) tree.set_leaf_value(leaf, rng.normal());
  }
  e.sigma2 = 0.8317234;
  e.theta = 1.0 / 3.0;
  return freeze(e);
}

}  // namespace

TEST_CASE("ensemble text round-trips byte for byte") {
  const FrozenEnsemble e = make_ensemble(99);
  std::ostringstream first;
  write_ensemble(first, e);
  CHECK(first.str().rfind("obliquebart v1\n", 0) == 0);

  std::istringstream in(first.str());
  const FrozenEnsemble back = read_ensemble(in);
  std::ostringstream second;
  write_ensemble(second, back);
  CHECK(first.str() == second.str());

  // and evaluates identically
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    std::vector<int> c{static_cast<int>(rng.uniform_index(3))};
    CHECK(e.predict(x, c) == back.predict(x, c));
  }
  CHECK(back.sigma2 == e.sigma2);
  CHECK(back.theta == e.theta);
}

TEST_CASE("seventeen significant digits round-trip exactly") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-12.0, 12.0));
    CHECK(parse_double(fmt_double(v)) == v);
  }
  CHECK(parse_double(fmt_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("malformed ensemble text is rejected") {
  std::istringstream bad1("not-a-header\n");
  CHECK_THROWS(read_ensemble(bad1));
  std::istringstream bad2("obliquebart v1\nconfig 1 1 0 oblique 0.95 2 1 3 0.2 1 1 -1 1 0.5\nD 0.5\n");
  CHECK_THROWS(read_ensemble(bad2));  // truncated tree line
}

TEST_CASE("token escaping handles spaces, percents and empties") {
  for (const std::string s : {"plain", "two words", "100%", "a,b", "", " lead", "%%"})
    CHECK(unescape_token(escape_token(s)) == s);
  CHECK(escape_token("two words").find(' ') == std::string::npos);
}
