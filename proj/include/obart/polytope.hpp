#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "obart/tree.hpp"

namespace obart {

// One ancestor constraint: a . x < b (left branch) or a . x >= b (right
// branch). The solver works on the closure, so the strictness only records
// which side of the cut the node lies on.
struct Halfspace {
  std::vector<double> a;
  double b = 0.0;
  bool less = true;
};

// Box [-1,1]^dim intersected with the accumulated halfspaces.
struct LeafPolytope {
  int dim = 0;
  std::vector<Halfspace> halfspaces;

  explicit LeafPolytope(int dimension = 0) : dim(dimension) {}
  void add(std::vector<double> a, double b, bool less) {
    halfspaces.push_back({std::move(a), b, less});
  }
};

struct LpSolution {
  double value = 0.0;
  std::vector<double> point;
};

// Optimize objective . x over the polytope with a two-phase dense primal
// simplex (Bland's anti-cycling rule). Returns nullopt when the polytope is
// empty; throws std::runtime_error if the pivot cap is hit.
std::optional<LpSolution> lp_solve(const LeafPolytope& poly,
                                   std::span<const double> objective, bool maximize);

// (min, max) of phi . x over the polytope; nullopt when empty.
std::optional<std::pair<double, double>> phi_range(const LeafPolytope& poly,
                                                   std::span<const double> phi);

// Polytope of the region routed to `id`: box plus one halfspace per
// continuous ancestor rule. Categorical ancestors contribute nothing.
LeafPolytope leaf_polytope(const DecisionTree& tree, NodeId id, int p_cont);

// Valid level codes of categorical predictor `predictor` at node `id`,
// starting from {0, ..., n_levels-1} and intersecting with each categorical
// ancestor's subset (left branch) or its complement (right branch).
std::vector<int> available_levels(const DecisionTree& tree, NodeId id, int predictor,
                                  int n_levels);

}  // namespace obart
