#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace obart {

enum class SyntheticFn { kRotatedAxes, kSinusoid };

// Two-valued test functions on [-1,1]^2 observed with unit Gaussian noise.
struct SyntheticSpec {
  SyntheticFn fn = SyntheticFn::kRotatedAxes;
  double theta = 0.0;  // rotation angle in [0, pi/4] or sine amplitude in [0, 1]
  double delta = 1.0;  // jump size
  long n = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

// +delta when the theta-rotated point has coordinates of equal sign.
double rotated_axes_f(double x1, double x2, double theta, double delta);

// +delta when x2 lies above theta * sin(10 x1).
double sinusoid_f(double x1, double x2, double theta, double delta);

struct SyntheticData {
  long n = 0;
  std::vector<double> x;  // n x 2 row-major, Uniform([-1,1]^2)
  std::vector<double> f;  // noiseless function values
  std::vector<double> y;  // f + N(0,1)
};

SyntheticData generate(const SyntheticSpec& spec);

// CSV with header x1,x2,y; 17 significant digits, so a spec pins the bytes.
void write_synthetic_csv(std::ostream& os, const SyntheticData& data);

}  // namespace obart
