#pragma once

// Independent oracles shared by the unit and acceptance suites. Everything
// here recomputes the quantity under test from first principles and must not
// call the implementation path it checks.

#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "obart/polytope.hpp"
#include "obart/rng.hpp"
#include "obart/rule_prior.hpp"
#include "obart/tree.hpp"

namespace obart::testing {

// ---- brute-force vertex enumeration over box + halfspaces ----

struct OracleRange {
  bool empty = true;
  double lo = 0.0;
  double hi = 0.0;
};

namespace detail {

// Solve a p x p system by Gaussian elimination with partial pivoting;
// returns false when (near) singular.
inline bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                         std::vector<double>& x) {
  const int p = static_cast<int>(b.size());
  for (int col = 0; col < p; ++col) {
    int piv = col;
    for (int r = col + 1; r < p; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-12) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < p; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < p; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(static_cast<std::size_t>(p), 0.0);
  for (int r = p - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < p; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return true;
}

}  // namespace detail

// All constraints as (a, b, upper?) meaning a.x <= b when upper else a.x >= b.
inline OracleRange oracle_phi_range(const LeafPolytope& poly,
                                    std::span<const double> phi) {
  const int p = poly.dim;
  struct Row {
    std::vector<double> a;
    double b;
    bool upper;
  };
  std::vector<Row> rows;
  for (int j = 0; j < p; ++j) {
    std::vector<double> e(static_cast<std::size_t>(p), 0.0);
    e[j] = 1.0;
    rows.push_back({e, 1.0, true});
    rows.push_back({e, -1.0, false});
  }
  for (const auto& h : poly.halfspaces) rows.push_back({h.a, h.b, h.less});

  auto feasible = [&rows](const std::vector<double>& x) {
    for (const auto& r : rows) {
      double dot = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) dot += r.a[j] * x[j];
      if (r.upper && dot > r.b + 1e-9) return false;
      if (!r.upper && dot < r.b - 1e-9) return false;
    }
    return true;
  };

  OracleRange out;
  const int m = static_cast<int>(rows.size());
  std::vector<int> pick(static_cast<std::size_t>(p));
  // enumerate all p-subsets of constraint indices
  std::vector<int> idx(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) idx[j] = j;
  for (;;) {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int j = 0; j < p; ++j) {
      a.push_back(rows[static_cast<std::size_t>(idx[j])].a);
      b.push_back(rows[static_cast<std::size_t>(idx[j])].b);
    }
    std::vector<double> x;
    if (detail::solve_square(a, b, x) && feasible(x)) {
      double v = 0.0;
      for (int j = 0; j < p; ++j) v += phi[j] * x[j];
      if (out.empty) {
        out = {false, v, v};
      } else {
        out.lo = std::min(out.lo, v);
        out.hi = std::max(out.hi, v);
      }
    }
    // next combination
    int j = p - 1;
    while (j >= 0 && idx[j] == m - p + j) --j;
    if (j < 0) break;
    ++idx[j];
    for (int k = j + 1; k < p; ++k) idx[k] = idx[k - 1] + 1;
  }
  return out;
}

// ---- generative random polytopes (nonempty by construction) ----

// Grow a tree with `cuts` random unit directions, each cutpoint drawn inside
// the current leaf's valid interval, then return a random leaf's polytope.
inline LeafPolytope random_polytope(int dim, int cuts, Rng& rng) {
  DecisionTree tree;
  for (int c = 0; c < cuts; ++c) {
    const auto leaves = tree.leaf_ids();
    const NodeId target = leaves[rng.uniform_index(leaves.size())];
    std::vector<double> phi(static_cast<std::size_t>(dim));
    double norm2 = 0.0;
    for (auto& v : phi) {
      v = rng.normal();
      norm2 += v * v;
    }
    for (auto& v : phi) v /= std::sqrt(norm2);
    const LeafPolytope poly = leaf_polytope(tree, target, dim);
    const auto range = phi_range(poly, phi);
    if (!range || range->second - range->first < 1e-6) continue;
    const double cut = rng.uniform(range->first + 0.05 * (range->second - range->first),
                                   range->second - 0.05 * (range->second - range->first));
    tree.grow(target, ContinuousRule{phi, cut});
  }
  const auto leaves = tree.leaf_ids();
  return leaf_polytope(tree, leaves[rng.uniform_index(leaves.size())], dim);
}

// ---- batch moment helpers ----

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;
  double se_mean = 0.0;
  double se_variance = 0.0;
};

// Moments with iid standard errors (for independent reference samples).
inline MomentSummary iid_moments(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  MomentSummary s;
  for (double x : v) s.mean += x;
  s.mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - s.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m4 /= n;
  s.variance = m2 * n / (n - 1.0);
  s.se_mean = std::sqrt(m2 / n);
  s.se_variance = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
  return s;
}

// Moments with batch-means standard errors (for autocorrelated chains).
inline MomentSummary batch_moments(const std::vector<double>& v, int batches) {
  MomentSummary s = iid_moments(v);
  const std::size_t len = v.size() / static_cast<std::size_t>(batches);
  std::vector<double> bmean, bvar;
  for (int b = 0; b < batches; ++b) {
    double m = 0.0;
    for (std::size_t i = 0; i < len; ++i) m += v[b * len + i];
    m /= static_cast<double>(len);
    bmean.push_back(m);
    double q = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const double d = v[b * len + i] - s.mean;  // overall mean on purpose
      q += d * d;
    }
    bvar.push_back(q / static_cast<double>(len));
  }
  auto se_of = [batches](const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(batches);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / (batches * (batches - 1.0)));
  };
  s.se_mean = se_of(bmean);
  s.se_variance = se_of(bvar);
  return s;
}

inline double zscore(double a, double se_a, double b, double se_b) {
  return (a - b) / std::sqrt(se_a * se_a + se_b * se_b);
}

}  // namespace obart::testing
