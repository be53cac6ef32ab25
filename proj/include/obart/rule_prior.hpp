#pragma once

#include <cstdint>
#include <vector>

#include "obart/rng.hpp"
#include "obart/tree.hpp"

namespace obart {

enum class RuleKind { kContinuous, kCategorical };

// Spike-and-slab direction draw: gamma_j ~ Bernoulli(theta) pick the support,
// included entries are standard normal, and the vector is rescaled to unit
// norm unless every entry is zero.
struct PhiProposal {
  std::vector<std::uint8_t> gamma;
  std::vector<double> phi;
  bool all_zero = true;
};

// Categorical with probability p_cat / (p_cont + p_cat).
RuleKind draw_rule_kind(int p_cont, int p_cat, Rng& rng);
RuleKind draw_rule_kind_with_prob(double prob_categorical, Rng& rng);

PhiProposal draw_phi(double theta, int p_cont, Rng& rng);

// Axis-aligned special case: one uniformly chosen coordinate set to 1.
PhiProposal axis_aligned_phi(int p_cont, Rng& rng);

// Subset rule over the valid level set `available`: each element joins the
// left-branch subset independently with probability 1/2. An empty level set
// degenerates to the all-zero-phi continuous rule (everything goes left).
DecisionRule draw_categorical_rule(const std::vector<int>& available, int predictor,
                                   int p_cont, Rng& rng);

// Uniform on [lo, hi]; a point interval returns lo without consuming
// randomness. lo > hi beyond 1e-9 signals a polytope inconsistency.
double draw_cutpoint(double lo, double hi, Rng& rng);

}  // namespace obart
