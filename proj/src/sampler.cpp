#include "obart/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "obart/polytope.hpp"
#include "obart/rule_prior.hpp"

namespace obart {

SuffStats node_suffstats(long n, double resid_sum, double sigma2, double leaf_sd) {
  SuffStats s;
  s.n = n;
  const double prec_e = 1.0 / sigma2;
  s.precision = static_cast<double>(n) * prec_e + 1.0 / (leaf_sd * leaf_sd);
  s.weighted_sum = prec_e * resid_sum;
  return s;
}

SuffStats node_suffstats(std::span<const int> indices, std::span<const double> residuals,
                         double sigma2, double leaf_sd) {
  double sum = 0.0;
  for (int i : indices) sum += residuals[static_cast<std::size_t>(i)];
  return node_suffstats(static_cast<long>(indices.size()), sum, sigma2, leaf_sd);
}

namespace {

double log_structure_grow(int depth, double alpha, double beta) {
  const double d = static_cast<double>(depth);
  const double p_split = alpha * std::pow(1.0 + d, -beta);
  const double p_child_stop = 1.0 - alpha * std::pow(2.0 + d, -beta);
  return std::log(p_split) + 2.0 * std::log(p_child_stop) - std::log1p(-p_split);
}

double exp_term(const SuffStats& s) {
  return s.weighted_sum * s.weighted_sum / (2.0 * s.precision);
}

}  // namespace

double log_grow_ratio(const SuffStats& parent, const SuffStats& left,
                      const SuffStats& right, int depth, int nleaf_cur,
                      int nnog_proposed, double alpha, double beta, double leaf_sd) {
  const double structure = log_structure_grow(depth, alpha, beta) +
                           std::log(static_cast<double>(nleaf_cur)) -
                           std::log(static_cast<double>(nnog_proposed));
  const double fit = -std::log(leaf_sd) -
                     0.5 * (std::log(left.precision) + std::log(right.precision) -
                            std::log(parent.precision)) +
                     exp_term(left) + exp_term(right) - exp_term(parent);
  return structure + fit;
}

double grow_acceptance(const SuffStats& parent, const SuffStats& left,
                       const SuffStats& right, int depth, int nleaf_cur,
                       int nnog_proposed, double alpha, double beta, double leaf_sd) {
  return std::min(1.0, std::exp(log_grow_ratio(parent, left, right, depth, nleaf_cur,
                                               nnog_proposed, alpha, beta, leaf_sd)));
}

double log_prune_ratio(const SuffStats& parent, const SuffStats& left,
                       const SuffStats& right, int depth, int nnog_cur,
                       int nleaf_proposed, double alpha, double beta, double leaf_sd) {
  const double structure = -log_structure_grow(depth, alpha, beta) +
                           std::log(static_cast<double>(nnog_cur)) -
                           std::log(static_cast<double>(nleaf_proposed));
  const double fit = std::log(leaf_sd) -
                     0.5 * (std::log(parent.precision) - std::log(left.precision) -
                            std::log(right.precision)) +
                     exp_term(parent) - exp_term(left) - exp_term(right);
  return structure + fit;
}

double prune_acceptance(const SuffStats& parent, const SuffStats& left,
                        const SuffStats& right, int depth, int nnog_cur,
                        int nleaf_proposed, double alpha, double beta, double leaf_sd) {
  return std::min(1.0, std::exp(log_prune_ratio(parent, left, right, depth, nnog_cur,
                                                nleaf_proposed, alpha, beta, leaf_sd)));
}

RuleCensus rule_census(const Ensemble& e) {
  RuleCensus c;
  for (const auto& tree : e.trees) {
    tree.for_each_rule([&c](const DecisionRule& rule) {
      const auto* cont = std::get_if<ContinuousRule>(&rule);
      if (!cont) return;
      ++c.continuous;
      long nz = 0;
      for (double v : cont->phi) {
        if (v != 0.0)
          ++nz;
        else
          ++c.zero;
      }
      c.nonzero += nz;
      if (nz == 1) ++c.axis;
    });
  }
  return c;
}

FitState make_fit_state(EnsembleConfig config, Task task, std::vector<double> xcont,
                        std::vector<int> xcat, std::vector<int> cat_levels,
                        std::vector<double> y, std::uint64_t seed) {
  config.validate();
  FitState state;
  state.ensemble = Ensemble(config);
  state.task = task;
  state.n = static_cast<int>(y.size());
  if (config.p_cont > 0 &&
      xcont.size() != static_cast<std::size_t>(state.n) * config.p_cont)
    throw std::invalid_argument("make_fit_state: continuous block size mismatch");
  if (config.p_cat > 0 && xcat.size() != static_cast<std::size_t>(state.n) * config.p_cat)
    throw std::invalid_argument("make_fit_state: categorical block size mismatch");
  if (static_cast<int>(cat_levels.size()) != config.p_cat)
    throw std::invalid_argument("make_fit_state: level-count list size mismatch");
  state.xcont = std::move(xcont);
  state.xcat = std::move(xcat);
  state.cat_levels = std::move(cat_levels);
  state.y = std::move(y);
  state.target = state.y;
  state.tree_fit.assign(static_cast<std::size_t>(config.num_trees) * state.n, 0.0);
  state.total_fit.assign(static_cast<std::size_t>(state.n), 0.0);
  state.rng = Rng(seed);
  if (task == Task::kClassification) {
    state.ensemble.sigma2 = 1.0;
    for (double v : state.y)
      if (v != 0.0 && v != 1.0)
        throw std::invalid_argument("make_fit_state: classification outcome must be 0/1");
  }
  for (auto& tree : state.ensemble.trees) tree.set_leaf_value(tree.root(), 0.0);
  return state;
}

std::vector<double> partial_residuals(const FitState& state, int m) {
  std::vector<double> r(static_cast<std::size_t>(state.n));
  const double* fit_m = state.tree_fit.data() + static_cast<std::size_t>(m) * state.n;
  for (int i = 0; i < state.n; ++i)
    r[i] = state.target[i] - (state.total_fit[i] - fit_m[i]);
  return r;
}

namespace {

// Draw a rule for a grow proposal at leaf `id` from the prior. Degenerate
// situations (all-zero phi, empty level set, empty polytope) yield rules that
// route every training point to one side; the MH step prices them via the
// complexity penalty.
DecisionRule propose_rule(FitState& state, const DecisionTree& tree, NodeId id) {
  const EnsembleConfig& cfg = state.ensemble.config;
  const RuleKind kind = draw_rule_kind_with_prob(cfg.categorical_prob(), state.rng);
  if (kind == RuleKind::kCategorical) {
    const int j = static_cast<int>(state.rng.uniform_index(
        static_cast<std::size_t>(cfg.p_cat)));
    const auto avail = available_levels(tree, id, j, state.cat_levels[j]);
    return draw_categorical_rule(avail, j, cfg.p_cont, state.rng);
  }
  PhiProposal prop = (cfg.mode == RuleMode::kAxisAligned)
                         ? axis_aligned_phi(cfg.p_cont, state.rng)
                         : draw_phi(state.ensemble.theta, cfg.p_cont, state.rng);
  if (prop.all_zero) return ContinuousRule{std::move(prop.phi), 1.0};
  const LeafPolytope poly = leaf_polytope(tree, id, cfg.p_cont);
  const auto range = phi_range(poly, prop.phi);
  if (!range) return ContinuousRule{std::move(prop.phi), 0.0};
  const double cut = draw_cutpoint(range->first, range->second, state.rng);
  return ContinuousRule{std::move(prop.phi), cut};
}

}  // namespace

void draw_leaf_outputs(DecisionTree& tree, std::span<const double> residuals,
                       std::span<const NodeId> leaf_of_row, double sigma2,
                       double leaf_sd, Rng& rng) {
  std::unordered_map<NodeId, std::pair<long, double>> acc;
  for (std::size_t i = 0; i < leaf_of_row.size(); ++i) {
    auto& entry = acc[leaf_of_row[i]];
    entry.first += 1;
    entry.second += residuals[i];
  }
  for (NodeId leaf : tree.leaf_ids()) {
    long n = 0;
    double sum = 0.0;
    if (auto it = acc.find(leaf); it != acc.end()) {
      n = it->second.first;
      sum = it->second.second;
    }
    const SuffStats s = node_suffstats(n, sum, sigma2, leaf_sd);
    const double mean = s.weighted_sum / s.precision;
    tree.set_leaf_value(leaf, mean + rng.normal() / std::sqrt(s.precision));
  }
}

void update_tree(FitState& state, int m) {
  DecisionTree& tree = state.ensemble.trees[static_cast<std::size_t>(m)];
  const EnsembleConfig& cfg = state.ensemble.config;
  const double sigma2 = state.ensemble.sigma2;
  const double leaf_sd = state.leaf_sd();

  const std::vector<double> resid = partial_residuals(state, m);
  std::vector<NodeId> leaf_of_row(static_cast<std::size_t>(state.n));
  for (int i = 0; i < state.n; ++i)
    leaf_of_row[i] = tree.traverse(state.row_cont(i), state.row_cat(i));

  const bool try_grow = state.rng.uniform() < 0.5;
  if (try_grow) {
    ++state.grow_proposed;
    const auto leaves = tree.leaf_ids();
    const NodeId target =
        leaves[state.rng.uniform_index(leaves.size())];
    DecisionRule rule = propose_rule(state, tree, target);

    long n_left = 0, n_parent = 0;
    double sum_left = 0.0, sum_parent = 0.0;
    std::vector<int> rows;
    for (int i = 0; i < state.n; ++i) {
      if (leaf_of_row[i] != target) continue;
      rows.push_back(i);
      ++n_parent;
      sum_parent += resid[i];
      if (rule_sends_left(rule, state.row_cont(i), state.row_cat(i))) {
        ++n_left;
        sum_left += resid[i];
      }
    }
    const SuffStats parent = node_suffstats(n_parent, sum_parent, sigma2, leaf_sd);
    const SuffStats left = node_suffstats(n_left, sum_left, sigma2, leaf_sd);
    const SuffStats right =
        node_suffstats(n_parent - n_left, sum_parent - sum_left, sigma2, leaf_sd);

    // nnog after growing: the target becomes a nog; its parent stops being
    // one if the sibling is also a leaf.
    int nnog_next = tree.nnog() + 1;
    const TreeNode& tnode = tree.node(target);
    if (tnode.parent != kNoNode) {
      const TreeNode& par = tree.node(tnode.parent);
      const NodeId sibling = (par.left == target) ? par.right : par.left;
      if (tree.node(sibling).is_leaf()) --nnog_next;
    }
    const double log_ratio =
        log_grow_ratio(parent, left, right, tnode.depth, static_cast<int>(leaves.size()),
                       nnog_next, cfg.alpha, cfg.beta, leaf_sd);
    if (std::log(state.rng.uniform()) < log_ratio) {
      ++state.grow_accepted;
      const auto [lid, rid] = tree.grow(target, rule);
      const DecisionRule& placed = *tree.node(target).rule;
      for (int i : rows)
        leaf_of_row[i] =
            rule_sends_left(placed, state.row_cont(i), state.row_cat(i)) ? lid : rid;
    }
  } else {
    ++state.prune_proposed;
    const auto nogs = tree.nog_ids();
    if (!nogs.empty()) {
      const NodeId target = nogs[state.rng.uniform_index(nogs.size())];
      const TreeNode& tnode = tree.node(target);
      long n_left = 0, n_right = 0;
      double sum_left = 0.0, sum_right = 0.0;
      for (int i = 0; i < state.n; ++i) {
        if (leaf_of_row[i] == tnode.left) {
          ++n_left;
          sum_left += resid[i];
        } else if (leaf_of_row[i] == tnode.right) {
          ++n_right;
          sum_right += resid[i];
        }
      }
      const SuffStats left = node_suffstats(n_left, sum_left, sigma2, leaf_sd);
      const SuffStats right = node_suffstats(n_right, sum_right, sigma2, leaf_sd);
      const SuffStats parent =
          node_suffstats(n_left + n_right, sum_left + sum_right, sigma2, leaf_sd);
      const double log_ratio = log_prune_ratio(
          parent, left, right, tnode.depth, static_cast<int>(nogs.size()),
          tree.nleaf() - 1, cfg.alpha, cfg.beta, leaf_sd);
      if (std::log(state.rng.uniform()) < log_ratio) {
        ++state.prune_accepted;
        const NodeId old_left = tnode.left;
        const NodeId old_right = tnode.right;
        tree.prune(target);
        for (auto& leaf : leaf_of_row)
          if (leaf == old_left || leaf == old_right) leaf = target;
      }
    }
  }

  draw_leaf_outputs(tree, resid, leaf_of_row, sigma2, leaf_sd, state.rng);

  double* fit_m = state.tree_fit.data() + static_cast<std::size_t>(m) * state.n;
  for (int i = 0; i < state.n; ++i) {
    const double g = *tree.node(leaf_of_row[i]).mu;
    state.total_fit[i] += g - fit_m[i];
    fit_m[i] = g;
  }
}

void update_sigma2(FitState& state) {
  if (state.task == Task::kClassification) return;  // sigma^2 fixed at 1
  const EnsembleConfig& cfg = state.ensemble.config;
  double sse = 0.0;
  for (int i = 0; i < state.n; ++i) {
    const double e = state.y[i] - state.total_fit[i];
    sse += e * e;
  }
  const double shape = 0.5 * (cfg.nu + state.n);
  const double scale = 0.5 * (cfg.nu * cfg.lambda + sse);
  state.ensemble.sigma2 = state.rng.inv_gamma(shape, scale);
}

void update_theta(FitState& state) {
  const EnsembleConfig& cfg = state.ensemble.config;
  const RuleCensus c = rule_census(state.ensemble);
  state.ensemble.theta = state.rng.beta(cfg.a_theta + static_cast<double>(c.nonzero),
                                        cfg.b_theta + static_cast<double>(c.zero));
}

void update_latents(FitState& state) {
  for (int i = 0; i < state.n; ++i) {
    state.target[i] = (state.y[i] == 1.0)
                          ? state.rng.trunc_normal_positive(state.total_fit[i])
                          : state.rng.trunc_normal_nonpositive(state.total_fit[i]);
  }
}

DiagnosticsRecord gibbs_iteration(FitState& state) {
  state.grow_proposed = state.grow_accepted = 0;
  state.prune_proposed = state.prune_accepted = 0;
  if (state.task == Task::kClassification) update_latents(state);
  for (int m = 0; m < state.ensemble.config.num_trees; ++m) update_tree(state, m);
  update_sigma2(state);
  update_theta(state);
  ++state.iteration;

  DiagnosticsRecord rec;
  rec.iter = state.iteration;
  rec.sigma2 = state.ensemble.sigma2;
  rec.theta = state.ensemble.theta;
  long leaves = 0;
  double depth_sum = 0.0;
  for (const auto& tree : state.ensemble.trees) {
    leaves += tree.nleaf();
    depth_sum += tree.depth();
  }
  rec.total_leaves = leaves;
  rec.mean_depth = depth_sum / state.ensemble.config.num_trees;
  rec.grow_accept_rate =
      state.grow_proposed ? static_cast<double>(state.grow_accepted) / state.grow_proposed
                          : 0.0;
  rec.prune_accept_rate =
      state.prune_proposed
          ? static_cast<double>(state.prune_accepted) / state.prune_proposed
          : 0.0;
  const RuleCensus c = rule_census(state.ensemble);
  rec.axis_aligned_rule_fraction =
      c.continuous ? static_cast<double>(c.axis) / c.continuous : 0.0;
  return rec;
}

double max_cache_error(const FitState& state, std::span<const int> rows) {
  double worst = 0.0;
  for (int i : rows) {
    double fresh = 0.0;
    for (const auto& tree : state.ensemble.trees)
      fresh += tree.evaluate(state.row_cont(i), state.row_cat(i));
    worst = std::max(worst, std::fabs(fresh - state.total_fit[i]));
    double per_tree = 0.0;
    for (int m = 0; m < state.ensemble.config.num_trees; ++m)
      per_tree += state.tree_fit[static_cast<std::size_t>(m) * state.n + i];
    worst = std::max(worst, std::fabs(per_tree - state.total_fit[i]));
  }
  return worst;
}

}  // namespace obart
