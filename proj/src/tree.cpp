#include "obart/tree.hpp"

#include <algorithm>
#include <cmath>

namespace obart {

bool CategoricalRule::contains(int code) const {
  return std::binary_search(in_left.begin(), in_left.end(), code);
}

bool rule_sends_left(const DecisionRule& rule, std::span<const double> xcont,
                     std::span<const int> xcat) {
  if (const auto* cont = std::get_if<ContinuousRule>(&rule)) {
    double dot = 0.0;
    for (std::size_t j = 0; j < cont->phi.size(); ++j) dot += cont->phi[j] * xcont[j];
    return dot < cont->cut;
  }
  const auto& cat = std::get<CategoricalRule>(rule);
  return cat.contains(xcat[cat.predictor]);
}

double FrozenTree::evaluate(std::span<const double> xcont, std::span<const int> xcat) const {
  int i = 0;
  while (nodes[i].right >= 0) {
    i = rule_sends_left(nodes[i].rule, xcont, xcat) ? i + 1 : nodes[i].right;
  }
  return nodes[i].mu;
}

int FrozenTree::depth() const {
  int best = 0;
  // depth via an explicit stack of (index, depth)
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (nodes[i].right >= 0) {
      stack.push_back({i + 1, d + 1});
      stack.push_back({nodes[i].right, d + 1});
    }
  }
  return best;
}

int FrozenTree::nleaf() const {
  int k = 0;
  for (const auto& n : nodes)
    if (n.right < 0) ++k;
  return k;
}

DecisionTree::DecisionTree() {
  TreeNode root;
  root.id = 0;
  nodes_.push_back(root);
  alive_.push_back(1);
}

const TreeNode& DecisionTree::node(NodeId id) const {
  if (!alive(id)) throw std::invalid_argument("DecisionTree::node: dead or unknown id");
  return nodes_[static_cast<std::size_t>(id)];
}

TreeNode& DecisionTree::node_mut(NodeId id) {
  if (!alive(id)) throw std::invalid_argument("DecisionTree::node: dead or unknown id");
  return nodes_[static_cast<std::size_t>(id)];
}

bool DecisionTree::alive(NodeId id) const {
  return id >= 0 && id < static_cast<NodeId>(nodes_.size()) &&
         alive_[static_cast<std::size_t>(id)];
}

int DecisionTree::nleaf() const {
  int k = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (alive_[i] && nodes_[i].is_leaf()) ++k;
  return k;
}

int DecisionTree::num_decision_nodes() const {
  int k = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (alive_[i] && !nodes_[i].is_leaf()) ++k;
  return k;
}

int DecisionTree::nnog() const {
  int k = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!alive_[i] || nodes_[i].is_leaf()) continue;
    const TreeNode& n = nodes_[i];
    if (nodes_[static_cast<std::size_t>(n.left)].is_leaf() &&
        nodes_[static_cast<std::size_t>(n.right)].is_leaf())
      ++k;
  }
  return k;
}

int DecisionTree::depth() const {
  int best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (alive_[i]) best = std::max(best, nodes_[i].depth);
  return best;
}

std::vector<NodeId> DecisionTree::leaf_ids() const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (alive_[i] && nodes_[i].is_leaf()) out.push_back(static_cast<NodeId>(i));
  return out;
}

std::vector<NodeId> DecisionTree::nog_ids() const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!alive_[i] || nodes_[i].is_leaf()) continue;
    const TreeNode& n = nodes_[i];
    if (nodes_[static_cast<std::size_t>(n.left)].is_leaf() &&
        nodes_[static_cast<std::size_t>(n.right)].is_leaf())
      out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

std::vector<NodeId> DecisionTree::path_from_root(NodeId id) const {
  std::vector<NodeId> path;
  NodeId cur = id;
  while (cur != kNoNode) {
    path.push_back(cur);
    cur = node(cur).parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

NodeId DecisionTree::traverse(std::span<const double> xcont, std::span<const int> xcat) const {
  NodeId cur = root();
  const TreeNode* n = &nodes_[0];
  while (!n->is_leaf()) {
    cur = rule_sends_left(*n->rule, xcont, xcat) ? n->left : n->right;
    n = &nodes_[static_cast<std::size_t>(cur)];
  }
  return cur;
}

double DecisionTree::evaluate(std::span<const double> xcont, std::span<const int> xcat) const {
  const TreeNode& leaf = nodes_[static_cast<std::size_t>(traverse(xcont, xcat))];
  if (!leaf.mu) throw std::logic_error("evaluate: leaf output unset");
  return *leaf.mu;
}

std::pair<NodeId, NodeId> DecisionTree::grow(NodeId id, DecisionRule rule) {
  TreeNode& target = node_mut(id);
  if (!target.is_leaf()) throw std::invalid_argument("grow: target is not a leaf");
  const NodeId lid = static_cast<NodeId>(nodes_.size());
  const NodeId rid = lid + 1;
  TreeNode l, r;
  l.id = lid;
  r.id = rid;
  l.parent = r.parent = id;
  l.depth = r.depth = target.depth + 1;
  nodes_.push_back(l);
  nodes_.push_back(r);
  alive_.push_back(1);
  alive_.push_back(1);
  TreeNode& t = nodes_[static_cast<std::size_t>(id)];  // re-fetch after push_back
  t.left = lid;
  t.right = rid;
  t.rule = std::move(rule);
  t.mu.reset();
  return {lid, rid};
}

void DecisionTree::prune(NodeId id) {
  TreeNode& target = node_mut(id);
  if (target.is_leaf()) throw std::invalid_argument("prune: target is a leaf");
  TreeNode& l = node_mut(target.left);
  TreeNode& r = node_mut(target.right);
  if (!l.is_leaf() || !r.is_leaf())
    throw std::invalid_argument("prune: target is not a nog node");
  alive_[static_cast<std::size_t>(target.left)] = 0;
  alive_[static_cast<std::size_t>(target.right)] = 0;
  target.left = target.right = kNoNode;
  target.rule.reset();
  target.mu.reset();
}

void DecisionTree::set_leaf_value(NodeId id, double mu) {
  TreeNode& n = node_mut(id);
  if (!n.is_leaf()) throw std::invalid_argument("set_leaf_value: not a leaf");
  n.mu = mu;
}

void DecisionTree::for_each_rule(const std::function<void(const DecisionRule&)>& fn) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (alive_[i] && !nodes_[i].is_leaf()) fn(*nodes_[i].rule);
}

FrozenTree DecisionTree::freeze() const {
  FrozenTree out;
  // pre-order emit; children resolved with a patch list
  struct Item {
    NodeId id;
    int parent_slot;  // index in out.nodes whose `right` needs this node, or -1
  };
  std::vector<Item> stack{{root(), -1}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const TreeNode& n = node(it.id);
    const int slot = static_cast<int>(out.nodes.size());
    if (it.parent_slot >= 0) out.nodes[static_cast<std::size_t>(it.parent_slot)].right = slot;
    FrozenNode fn;
    if (n.is_leaf()) {
      if (!n.mu) throw std::logic_error("freeze: leaf output unset");
      fn.mu = *n.mu;
      fn.right = -1;
      out.nodes.push_back(std::move(fn));
    } else {
      fn.rule = *n.rule;
      fn.right = -2;  // patched when the right child is emitted
      out.nodes.push_back(std::move(fn));
      // right pushed first so the left child lands at slot+1
      stack.push_back({n.right, slot});
      stack.push_back({n.left, -1});
    }
  }
  return out;
}

double EnsembleConfig::leaf_prior_sd() const {
  return tau / std::sqrt(static_cast<double>(num_trees));
}

double EnsembleConfig::categorical_prob() const {
  if (prob_categorical >= 0.0) return prob_categorical;
  const int p = p_cont + p_cat;
  return p == 0 ? 0.0 : static_cast<double>(p_cat) / p;
}

void EnsembleConfig::validate() const {
  if (num_trees < 1) throw std::invalid_argument("config: M < 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("config: alpha outside (0,1)");
  if (beta < 0.0) throw std::invalid_argument("config: beta < 0");
  if (!(tau > 0.0)) throw std::invalid_argument("config: tau <= 0");
  if (!(nu > 0.0)) throw std::invalid_argument("config: nu <= 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("config: lambda <= 0");
  if (!(a_theta > 0.0) || !(b_theta > 0.0))
    throw std::invalid_argument("config: theta prior parameters must be positive");
  if (p_cont < 0 || p_cat < 0 || p_cont + p_cat == 0)
    throw std::invalid_argument("config: need at least one predictor");
  if (prob_categorical > 1.0)
    throw std::invalid_argument("config: prob_categorical > 1");
}

Ensemble::Ensemble(EnsembleConfig cfg) : config(cfg) {
  config.validate();
  trees.resize(static_cast<std::size_t>(config.num_trees));
  theta = config.a_theta / (config.a_theta + config.b_theta);
}

double Ensemble::predict(std::span<const double> xcont, std::span<const int> xcat) const {
  double s = 0.0;
  for (const auto& t : trees) s += t.evaluate(xcont, xcat);
  return s;
}

double FrozenEnsemble::predict(std::span<const double> xcont, std::span<const int> xcat) const {
  double s = 0.0;
  for (const auto& t : trees) s += t.evaluate(xcont, xcat);
  return s;
}

FrozenEnsemble freeze(const Ensemble& e) {
  FrozenEnsemble out;
  out.config = e.config;
  out.sigma2 = e.sigma2;
  out.theta = e.theta;
  out.trees.reserve(e.trees.size());
  for (const auto& t : e.trees) out.trees.push_back(t.freeze());
  return out;
}

}  // namespace obart
