#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "obart/rng.hpp"
#include "obart/tree.hpp"

namespace obart {

// Per-node sufficient statistics driving leaf draws and acceptance ratios:
// precision = n * sigma^-2 + tau^-2, weighted_sum = sigma^-2 * sum of
// residuals over the node. Defined for empty nodes as well.
struct SuffStats {
  long n = 0;
  double precision = 0.0;     // P
  double weighted_sum = 0.0;  // Theta
};

SuffStats node_suffstats(long n, double resid_sum, double sigma2, double leaf_sd);
SuffStats node_suffstats(std::span<const int> indices, std::span<const double> residuals,
                         double sigma2, double leaf_sd);

// Log of the grow-move Metropolis-Hastings ratio (before the min with 1).
// The rule prior/proposal ratio is identically 1 because grow proposals draw
// rules from the prior, so only the structure and fit terms appear.
double log_grow_ratio(const SuffStats& parent, const SuffStats& left,
                      const SuffStats& right, int depth, int nleaf_cur,
                      int nnog_proposed, double alpha, double beta, double leaf_sd);
double grow_acceptance(const SuffStats& parent, const SuffStats& left,
                       const SuffStats& right, int depth, int nleaf_cur,
                       int nnog_proposed, double alpha, double beta, double leaf_sd);

// Log of the prune-move ratio: the reciprocal structure and fit terms.
double log_prune_ratio(const SuffStats& parent, const SuffStats& left,
                       const SuffStats& right, int depth, int nnog_cur,
                       int nleaf_proposed, double alpha, double beta, double leaf_sd);
double prune_acceptance(const SuffStats& parent, const SuffStats& left,
                        const SuffStats& right, int depth, int nnog_cur,
                        int nleaf_proposed, double alpha, double beta, double leaf_sd);

enum class Task { kRegression, kClassification };

struct DiagnosticsRecord {
  long iter = 0;
  double sigma2 = 0.0;
  double theta = 0.0;
  double mean_depth = 0.0;
  long total_leaves = 0;
  double grow_accept_rate = 0.0;
  double prune_accept_rate = 0.0;
  double axis_aligned_rule_fraction = 0.0;
};

// Census of the continuous rules in an ensemble: nonzero/zero phi entries
// (for the theta update) and the count of axis-aligned rules (diagnostics).
struct RuleCensus {
  long nonzero = 0;     // n_phi
  long zero = 0;        // z_phi
  long continuous = 0;  // number of continuous rules
  long axis = 0;        // continuous rules with exactly one nonzero entry
};
RuleCensus rule_census(const Ensemble& e);

// Mutable sampler state: the ensemble, the standardized training data, the
// regression target (observed y or probit latents), and cached per-tree fits.
struct FitState {
  Ensemble ensemble;
  Task task = Task::kRegression;

  int n = 0;
  std::vector<double> xcont;      // n x p_cont, row-major
  std::vector<int> xcat;          // n x p_cat, row-major
  std::vector<int> cat_levels;    // |K_j| per categorical predictor
  std::vector<double> y;          // observed outcome (standardized / binary)
  std::vector<double> target;     // regression target for the sweep
  std::vector<double> tree_fit;   // M x n cached fits
  std::vector<double> total_fit;  // n

  Rng rng{0};
  long iteration = 0;

  // proposal bookkeeping for the current iteration
  long grow_proposed = 0, grow_accepted = 0;
  long prune_proposed = 0, prune_accepted = 0;

  std::span<const double> row_cont(int i) const {
    return {xcont.data() + static_cast<std::size_t>(i) * ensemble.config.p_cont,
            static_cast<std::size_t>(ensemble.config.p_cont)};
  }
  std::span<const int> row_cat(int i) const {
    return {xcat.data() + static_cast<std::size_t>(i) * ensemble.config.p_cat,
            static_cast<std::size_t>(ensemble.config.p_cat)};
  }
  double leaf_sd() const { return ensemble.config.leaf_prior_sd(); }
};

// All trees start as root leaves with output 0; sigma^2 = 1 on the
// standardized scale; theta at its prior mean.
FitState make_fit_state(EnsembleConfig config, Task task, std::vector<double> xcont,
                        std::vector<int> xcat, std::vector<int> cat_levels,
                        std::vector<double> y, std::uint64_t seed);

// r_i = target_i - sum_{m' != m} fit_{m'}, computed from the cached totals.
std::vector<double> partial_residuals(const FitState& state, int m);

// One grow-or-prune MH update of tree m followed by a fresh conditional draw
// of all its leaf outputs and a cache refresh.
void update_tree(FitState& state, int m);

// Independent N(P^-1 Theta, P^-1) draws for every leaf. `leaf_of_row[i]` is
// the id of the leaf observation i reaches; rows of empty leaves absent.
void draw_leaf_outputs(DecisionTree& tree, std::span<const double> residuals,
                       std::span<const NodeId> leaf_of_row, double sigma2,
                       double leaf_sd, Rng& rng);

void update_sigma2(FitState& state);
void update_theta(FitState& state);

// Albert-Chib probit latents: z_i ~ N(f(x_i), 1) truncated to the side of 0
// dictated by the binary outcome. Becomes the sweep's regression target.
void update_latents(FitState& state);

DiagnosticsRecord gibbs_iteration(FitState& state);

// Max |cached fit - fresh evaluate| over the given rows (debug validation).
double max_cache_error(const FitState& state, std::span<const int> rows);

}  // namespace obart
