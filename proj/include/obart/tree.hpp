#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace obart {

// Continuous decision: send x left iff phi . x_cont < cut. phi is either an
// all-zero vector (degenerate rule, cut pinned to 1 so everything goes left)
// or has unit Euclidean norm.
struct ContinuousRule {
  std::vector<double> phi;
  double cut = 1.0;

  bool all_zero() const {
    for (double v : phi)
      if (v != 0.0) return false;
    return true;
  }
  // Exactly one nonzero coordinate.
  bool axis_aligned() const {
    int nz = 0;
    for (double v : phi)
      if (v != 0.0) ++nz;
    return nz == 1;
  }
};

// Categorical decision on predictor `predictor` (0-based within the
// categorical block): send x left iff its level code is in `in_left`.
// Codes are kept sorted; code -1 marks a level unseen at training time and
// is never a member, so unseen levels always go right.
struct CategoricalRule {
  int predictor = 0;
  std::vector<int> in_left;

  bool contains(int code) const;
};

using DecisionRule = std::variant<ContinuousRule, CategoricalRule>;

// True iff the rule routes x to the left child: phi . x_cont < cut for
// continuous rules, level membership in the subset for categorical ones.
bool rule_sends_left(const DecisionRule& rule, std::span<const double> xcont,
                     std::span<const int> xcat);

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

struct TreeNode {
  NodeId id = kNoNode;
  NodeId parent = kNoNode;
  int depth = 0;
  NodeId left = kNoNode;   // kNoNode iff leaf
  NodeId right = kNoNode;
  std::optional<DecisionRule> rule;  // engaged iff decision node
  std::optional<double> mu;          // engaged iff leaf with a drawn output

  bool is_leaf() const { return left == kNoNode; }
};

// Compact immutable snapshot used for kept posterior draws, prediction and
// serialization. Nodes in pre-order; `right` is the pre-order index of the
// right child (the left child always follows its parent directly).
struct FrozenNode {
  int right = -1;  // -1 => leaf
  DecisionRule rule{ContinuousRule{}};
  double mu = 0.0;
};

struct FrozenTree {
  std::vector<FrozenNode> nodes;

  double evaluate(std::span<const double> xcont, std::span<const int> xcat) const;
  int depth() const;
  int nleaf() const;
};

// Binary regression tree with by-value rules and stable node ids: ids are
// assigned at creation and never reused within the tree's lifetime, so
// proposal bookkeeping can hold ids across edits.
class DecisionTree {
 public:
  DecisionTree();  // a single root leaf at depth 0, output unset

  NodeId root() const { return 0; }
  const TreeNode& node(NodeId id) const;
  bool alive(NodeId id) const;

  int nleaf() const;
  int nnog() const;  // decision nodes whose both children are leaves
  int num_decision_nodes() const;
  int depth() const;  // max node depth; 0 for a root-only tree

  std::vector<NodeId> leaf_ids() const;
  std::vector<NodeId> nog_ids() const;

  // Path from the root to `id`, inclusive.
  std::vector<NodeId> path_from_root(NodeId id) const;

  NodeId traverse(std::span<const double> xcont, std::span<const int> xcat) const;
  double evaluate(std::span<const double> xcont, std::span<const int> xcat) const;

  // Turn leaf `id` into a decision node holding `rule` with two fresh leaf
  // children (outputs unset). Returns (left id, right id).
  std::pair<NodeId, NodeId> grow(NodeId id, DecisionRule rule);

  // Collapse nog node `id` back into a leaf (output unset).
  void prune(NodeId id);

  void set_leaf_value(NodeId id, double mu);

  // Visit every decision node's rule.
  void for_each_rule(const std::function<void(const DecisionRule&)>& fn) const;

  FrozenTree freeze() const;

 private:
  TreeNode& node_mut(NodeId id);
  std::vector<TreeNode> nodes_;  // indexed by id; retired slots stay dead
  std::vector<char> alive_;
};

enum class RuleMode { kOblique, kAxisAligned };

struct EnsembleConfig {
  int num_trees = 200;
  double alpha = 0.95;   // branching prior: split prob alpha*(1+depth)^-beta
  double beta = 2.0;
  double tau = 0.5;      // marginal prior sd of f(x); leaf sd is tau/sqrt(M)
  double nu = 3.0;       // sigma^2 ~ IG(nu/2, nu*lambda/2)
  double lambda = 0.2;
  double a_theta = 200.0;
  double b_theta = 600.0;
  int p_cont = 0;
  int p_cat = 0;
  RuleMode mode = RuleMode::kOblique;
  // Probability a proposed rule is categorical; negative means the default
  // p_cat / (p_cont + p_cat).
  double prob_categorical = -1.0;

  double leaf_prior_sd() const;
  double categorical_prob() const;
  void validate() const;  // throws std::invalid_argument
};

struct Ensemble {
  EnsembleConfig config;
  std::vector<DecisionTree> trees;
  double sigma2 = 1.0;
  double theta = 0.25;

  explicit Ensemble(EnsembleConfig cfg);
  Ensemble() = default;

  double predict(std::span<const double> xcont, std::span<const int> xcat) const;
};

// Snapshot of one posterior draw.
struct FrozenEnsemble {
  EnsembleConfig config;
  std::vector<FrozenTree> trees;
  double sigma2 = 1.0;
  double theta = 0.25;

  double predict(std::span<const double> xcont, std::span<const int> xcat) const;
};

FrozenEnsemble freeze(const Ensemble& e);

}  // namespace obart
