#include "obart/rule_prior.hpp"

#include <cmath>
#include <stdexcept>

namespace obart {

RuleKind draw_rule_kind(int p_cont, int p_cat, Rng& rng) {
  if (p_cont + p_cat <= 0)
    throw std::invalid_argument("draw_rule_kind: no predictors");
  const double prob = static_cast<double>(p_cat) / (p_cont + p_cat);
  return draw_rule_kind_with_prob(prob, rng);
}

RuleKind draw_rule_kind_with_prob(double prob_categorical, Rng& rng) {
  if (prob_categorical <= 0.0) return RuleKind::kContinuous;
  if (prob_categorical >= 1.0) return RuleKind::kCategorical;
  return rng.bernoulli(prob_categorical) ? RuleKind::kCategorical
                                         : RuleKind::kContinuous;
}

PhiProposal draw_phi(double theta, int p_cont, Rng& rng) {
  if (p_cont < 1) throw std::invalid_argument("draw_phi: p_cont < 1");
  PhiProposal out;
  out.gamma.resize(static_cast<std::size_t>(p_cont), 0);
  out.phi.assign(static_cast<std::size_t>(p_cont), 0.0);
  double norm2 = 0.0;
  for (int j = 0; j < p_cont; ++j) {
    if (!rng.bernoulli(theta)) continue;
    out.gamma[j] = 1;
    const double v = rng.normal();  // exact zeros kept as drawn
    out.phi[j] = v;
    norm2 += v * v;
  }
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : out.phi) v *= inv;
    out.all_zero = false;
  }
  return out;
}

PhiProposal axis_aligned_phi(int p_cont, Rng& rng) {
  if (p_cont < 1) throw std::invalid_argument("axis_aligned_phi: p_cont < 1");
  PhiProposal out;
  out.gamma.resize(static_cast<std::size_t>(p_cont), 0);
  out.phi.assign(static_cast<std::size_t>(p_cont), 0.0);
  const auto axis = rng.uniform_index(static_cast<std::size_t>(p_cont));
  out.gamma[axis] = 1;
  out.phi[axis] = 1.0;
  out.all_zero = false;
  return out;
}

DecisionRule draw_categorical_rule(const std::vector<int>& available, int predictor,
                                   int p_cont, Rng& rng) {
  if (available.empty())
    return ContinuousRule{std::vector<double>(static_cast<std::size_t>(p_cont), 0.0),
                          1.0};
  CategoricalRule rule;
  rule.predictor = predictor;
  for (int code : available)
    if (rng.bernoulli(0.5)) rule.in_left.push_back(code);
  return rule;
}

double draw_cutpoint(double lo, double hi, Rng& rng) {
  if (lo > hi + 1e-9)
    throw std::logic_error("draw_cutpoint: inverted interval (polytope inconsistency)");
  if (hi - lo < 1e-12) return lo;
  return rng.uniform(lo, hi);
}

}  // namespace obart
