#include "obart/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace obart {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;
constexpr int kMaxPivots = 20000;

// Dense tableau kept fully reduced: basis columns are unit vectors and the
// right-hand side stays nonnegative.
struct Tableau {
  int m = 0;  // rows
  int n = 0;  // columns
  std::vector<std::vector<double>> a;
  std::vector<double> rhs;
  std::vector<int> basis;

  void pivot(int row, int col) {
    const double piv = a[row][col];
    const double inv = 1.0 / piv;
    for (int j = 0; j < n; ++j) a[row][j] *= inv;
    rhs[row] *= inv;
    a[row][col] = 1.0;  // kill residual rounding on the pivot itself
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = a[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) a[i][j] -= f * a[row][j];
      rhs[i] -= f * rhs[row];
      a[i][col] = 0.0;
      if (rhs[i] < 0.0 && rhs[i] > -kFeasTol) rhs[i] = 0.0;
    }
    basis[row] = col;
  }
};

// Maximize cost over the tableau with Bland's rule: entering column is the
// smallest-index column with positive reduced cost, leaving row breaks ratio
// ties by smallest basic column index. Returns false only on unboundedness.
bool run_simplex(Tableau& t, const std::vector<double>& cost,
                 const std::vector<char>& allowed) {
  for (int iter = 0; iter < kMaxPivots; ++iter) {
    int enter = -1;
    for (int j = 0; j < t.n; ++j) {
      if (!allowed[j]) continue;
      double rc = cost[j];
      for (int i = 0; i < t.m; ++i) {
        const double cb = cost[t.basis[i]];
        if (cb != 0.0) rc -= cb * t.a[i][j];
      }
      if (rc > kReducedCostTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return true;  // optimal

    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < t.m; ++i) {
      const double coef = t.a[i][enter];
      if (coef <= kPivotTol) continue;
      const double ratio = t.rhs[i] / coef;
      if (leave < 0 || ratio < best_ratio - kPivotTol ||
          (ratio < best_ratio + kPivotTol && t.basis[i] < t.basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) return false;  // unbounded
    t.pivot(leave, enter);
  }
  throw std::runtime_error("lp_solve: simplex exceeded pivot cap");
}

}  // namespace

std::optional<LpSolution> lp_solve(const LeafPolytope& poly,
                                   std::span<const double> objective, bool maximize) {
  const int p = poly.dim;
  if (static_cast<int>(objective.size()) != p)
    throw std::invalid_argument("lp_solve: objective dimension mismatch");

  // Shift to u = x + 1 (u >= 0, u <= 2) and collect every row as a.u <= b.
  const int h = static_cast<int>(poly.halfspaces.size());
  const int m = p + h;
  std::vector<std::vector<double>> rows(m, std::vector<double>(p, 0.0));
  std::vector<double> rhs(m, 0.0);
  for (int j = 0; j < p; ++j) {
    rows[j][j] = 1.0;
    rhs[j] = 2.0;
  }
  for (int i = 0; i < h; ++i) {
    const Halfspace& hs = poly.halfspaces[i];
    if (static_cast<int>(hs.a.size()) != p)
      throw std::invalid_argument("lp_solve: halfspace dimension mismatch");
    double shift = 0.0;
    for (int j = 0; j < p; ++j) shift += hs.a[j];
    const double sign = hs.less ? 1.0 : -1.0;
    for (int j = 0; j < p; ++j) rows[p + i][j] = sign * hs.a[j];
    rhs[p + i] = sign * (hs.b + shift);
  }

  // Columns: p structural, m slacks, then one artificial per negative row.
  int n_art = 0;
  for (int i = 0; i < m; ++i)
    if (rhs[i] < 0.0) ++n_art;
  Tableau t;
  t.m = m;
  t.n = p + m + n_art;
  t.a.assign(m, std::vector<double>(t.n, 0.0));
  t.rhs.resize(m);
  t.basis.resize(m);
  int art = p + m;
  for (int i = 0; i < m; ++i) {
    const double sign = rhs[i] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < p; ++j) t.a[i][j] = sign * rows[i][j];
    t.a[i][p + i] = sign;  // slack
    t.rhs[i] = sign * rhs[i];
    if (sign < 0.0) {
      t.a[i][art] = 1.0;
      t.basis[i] = art;
      ++art;
    } else {
      t.basis[i] = p + i;
    }
  }

  std::vector<char> allowed(t.n, 1);
  if (n_art > 0) {
    // Phase 1: minimize the artificial sum.
    std::vector<double> cost(t.n, 0.0);
    for (int j = p + m; j < t.n; ++j) cost[j] = -1.0;
    run_simplex(t, cost, allowed);  // bounded by construction
    double art_sum = 0.0;
    for (int i = 0; i < m; ++i)
      if (t.basis[i] >= p + m) art_sum += t.rhs[i];
    if (art_sum > kFeasTol) return std::nullopt;  // empty polytope

    // Drive residual zero-level artificials out of the basis; rows that have
    // no real pivot left are redundant and get dropped.
    for (int i = t.m - 1; i >= 0; --i) {
      if (t.basis[i] < p + m) continue;
      int col = -1;
      for (int j = 0; j < p + m; ++j) {
        if (std::fabs(t.a[i][j]) > kPivotTol) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        t.pivot(i, col);
      } else {
        t.a.erase(t.a.begin() + i);
        t.rhs.erase(t.rhs.begin() + i);
        t.basis.erase(t.basis.begin() + i);
        --t.m;
      }
    }
    for (int j = p + m; j < t.n; ++j) allowed[j] = 0;
  }

  // Phase 2 on the real objective.
  std::vector<double> cost(t.n, 0.0);
  for (int j = 0; j < p; ++j) cost[j] = maximize ? objective[j] : -objective[j];
  if (!run_simplex(t, cost, allowed))
    throw std::runtime_error("lp_solve: unbounded (box constraints missing?)");

  LpSolution sol;
  sol.point.assign(static_cast<std::size_t>(p), 0.0);
  for (int i = 0; i < t.m; ++i)
    if (t.basis[i] < p) sol.point[static_cast<std::size_t>(t.basis[i])] = t.rhs[i];
  for (int j = 0; j < p; ++j) {
    double u = std::clamp(sol.point[static_cast<std::size_t>(j)], 0.0, 2.0);
    sol.point[static_cast<std::size_t>(j)] = u - 1.0;
  }
  sol.value = 0.0;
  for (int j = 0; j < p; ++j)
    sol.value += objective[j] * sol.point[static_cast<std::size_t>(j)];
  return sol;
}

std::optional<std::pair<double, double>> phi_range(const LeafPolytope& poly,
                                                   std::span<const double> phi) {
  bool any = false;
  for (double v : phi)
    if (v != 0.0) any = true;
  if (!any) throw std::invalid_argument("phi_range: phi is all-zero");

  auto hi = lp_solve(poly, phi, true);
  if (!hi) return std::nullopt;
  auto lo = lp_solve(poly, phi, false);
  if (!lo) return std::nullopt;
  double a = lo->value;
  double b = hi->value;
  if (a > b) {
    // Numerical inversion can only happen on (near-)point polytopes.
    const double mid = 0.5 * (a + b);
    a = b = mid;
  }
  return std::make_pair(a, b);
}

LeafPolytope leaf_polytope(const DecisionTree& tree, NodeId id, int p_cont) {
  LeafPolytope poly(p_cont);
  const auto path = tree.path_from_root(id);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const TreeNode& parent = tree.node(path[i]);
    const bool went_left = parent.left == path[i + 1];
    if (const auto* cont = std::get_if<ContinuousRule>(&*parent.rule))
      poly.add(cont->phi, cont->cut, went_left);
  }
  return poly;
}

std::vector<int> available_levels(const DecisionTree& tree, NodeId id, int predictor,
                                  int n_levels) {
  std::vector<char> in(static_cast<std::size_t>(n_levels), 1);
  const auto path = tree.path_from_root(id);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const TreeNode& parent = tree.node(path[i]);
    const auto* cat = std::get_if<CategoricalRule>(&*parent.rule);
    if (!cat || cat->predictor != predictor) continue;
    const bool went_left = parent.left == path[i + 1];
    for (int code = 0; code < n_levels; ++code) {
      const bool member = cat->contains(code);
      if (member != went_left) in[static_cast<std::size_t>(code)] = 0;
    }
  }
  std::vector<int> out;
  for (int code = 0; code < n_levels; ++code)
    if (in[static_cast<std::size_t>(code)]) out.push_back(code);
  return out;
}

}  // namespace obart
