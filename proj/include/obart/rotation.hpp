#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace obart {

struct RotationSpec {
  int rotations = 1;  // R
  std::uint64_t seed = 0;
};

// Random-rotation feature augmentation: R rotation matrices drawn uniformly
// from SO(p) (QR of a standard-normal matrix, R-diagonal sign correction,
// determinant forced to +1). The augmented block stacks X Q_r for r = 1..R,
// each column affinely rescaled to [-1,1] by statistics learned in
// fit_transform.
class RotationTransform {
 public:
  RotationTransform(int p_cont, const RotationSpec& spec);

  // Test hook: R copies of the identity rotation.
  static RotationTransform identity(int p_cont, int rotations);

  int input_dim() const { return p_; }
  int width() const { return p_ * rotations_; }

  // Row-major p x p rotation matrix r.
  const std::vector<double>& matrix(int r) const { return q_[static_cast<std::size_t>(r)]; }
  double determinant(int r) const;

  // Rotated columns without rescaling; x is n x p row-major.
  std::vector<double> rotate(std::span<const double> x, long n) const;

  // Learn per-column (min, max) from this block and return it rescaled.
  std::vector<double> fit_transform(std::span<const double> x, long n);

  // Apply the learned rescaling to new rows (values may leave [-1,1]).
  std::vector<double> transform(std::span<const double> x, long n) const;

 private:
  RotationTransform() = default;
  int p_ = 0;
  int rotations_ = 1;
  std::vector<std::vector<double>> q_;
  std::vector<std::pair<double, double>> col_min_max_;  // set by fit_transform
};

}  // namespace obart
