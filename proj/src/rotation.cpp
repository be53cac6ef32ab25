#include "obart/rotation.hpp"

#include <Eigen/Dense>
#include <stdexcept>

#include "obart/rng.hpp"

namespace obart {

RotationTransform::RotationTransform(int p_cont, const RotationSpec& spec) {
  if (p_cont < 1) throw std::invalid_argument("rotation: p_cont < 1");
  if (spec.rotations < 1) throw std::invalid_argument("rotation: R < 1");
  p_ = p_cont;
  rotations_ = spec.rotations;
  Rng rng(spec.seed);
  for (int r = 0; r < rotations_; ++r) {
    Eigen::MatrixXd g(p_, p_);
    for (int i = 0; i < p_; ++i)
      for (int j = 0; j < p_; ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd rm = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < p_; ++j)
      if (rm(j, j) < 0.0) q.col(j) = -q.col(j);
    if (q.determinant() < 0.0) q.col(p_ - 1) = -q.col(p_ - 1);
    std::vector<double> flat(static_cast<std::size_t>(p_) * p_);
    for (int i = 0; i < p_; ++i)
      for (int j = 0; j < p_; ++j) flat[static_cast<std::size_t>(i) * p_ + j] = q(i, j);
    q_.push_back(std::move(flat));
  }
}

RotationTransform RotationTransform::identity(int p_cont, int rotations) {
  RotationTransform t;
  t.p_ = p_cont;
  t.rotations_ = rotations;
  for (int r = 0; r < rotations; ++r) {
    std::vector<double> flat(static_cast<std::size_t>(p_cont) * p_cont, 0.0);
    for (int i = 0; i < p_cont; ++i) flat[static_cast<std::size_t>(i) * p_cont + i] = 1.0;
    t.q_.push_back(std::move(flat));
  }
  return t;
}

double RotationTransform::determinant(int r) const {
  Eigen::MatrixXd q(p_, p_);
  const auto& flat = q_[static_cast<std::size_t>(r)];
  for (int i = 0; i < p_; ++i)
    for (int j = 0; j < p_; ++j) q(i, j) = flat[static_cast<std::size_t>(i) * p_ + j];
  return q.determinant();
}

std::vector<double> RotationTransform::rotate(std::span<const double> x, long n) const {
  if (x.size() != static_cast<std::size_t>(n) * p_)
    throw std::invalid_argument("rotation: block size mismatch");
  const int w = width();
  std::vector<double> out(static_cast<std::size_t>(n) * w, 0.0);
  for (long i = 0; i < n; ++i) {
    const double* row = x.data() + static_cast<std::size_t>(i) * p_;
    for (int r = 0; r < rotations_; ++r) {
      const auto& q = q_[static_cast<std::size_t>(r)];
      for (int j = 0; j < p_; ++j) {
        double v = 0.0;
        for (int k = 0; k < p_; ++k) v += row[k] * q[static_cast<std::size_t>(k) * p_ + j];
        out[static_cast<std::size_t>(i) * w + r * p_ + j] = v;
      }
    }
  }
  return out;
}

std::vector<double> RotationTransform::fit_transform(std::span<const double> x, long n) {
  std::vector<double> rotated = rotate(x, n);
  const int w = width();
  col_min_max_.assign(static_cast<std::size_t>(w), {0.0, 0.0});
  for (int j = 0; j < w; ++j) {
    double mn = rotated[static_cast<std::size_t>(j)];
    double mx = mn;
    for (long i = 1; i < n; ++i) {
      const double v = rotated[static_cast<std::size_t>(i) * w + j];
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    col_min_max_[static_cast<std::size_t>(j)] = {mn, mx};
  }
  for (long i = 0; i < n; ++i) {
    for (int j = 0; j < w; ++j) {
      const auto [mn, mx] = col_min_max_[static_cast<std::size_t>(j)];
      double& v = rotated[static_cast<std::size_t>(i) * w + j];
      v = (mx > mn) ? 2.0 * (v - mn) / (mx - mn) - 1.0 : 0.0;
    }
  }
  return rotated;
}

std::vector<double> RotationTransform::transform(std::span<const double> x, long n) const {
  if (col_min_max_.empty())
    throw std::logic_error("rotation: transform before fit_transform");
  std::vector<double> rotated = rotate(x, n);
  const int w = width();
  for (long i = 0; i < n; ++i) {
    for (int j = 0; j < w; ++j) {
      const auto [mn, mx] = col_min_max_[static_cast<std::size_t>(j)];
      double& v = rotated[static_cast<std::size_t>(i) * w + j];
      v = (mx > mn) ? 2.0 * (v - mn) / (mx - mn) - 1.0 : 0.0;
    }
  }
  return rotated;
}

}  // namespace obart
