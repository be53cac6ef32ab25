#include <doctest.h>

#include <cmath>
#include <sstream>

#include "obart/synthetic.hpp"

using namespace obart;

TEST_CASE("rotated axes function: quadrants and rotation convention") {
  const double pi4 = std::atan(1.0);
  CHECK(rotated_axes_f(0.5, 0.5, 0.0, 4.0) == 4.0);    // same-sign quadrant
  CHECK(rotated_axes_f(-0.5, 0.5, 0.0, 4.0) == -4.0);  // mixed signs
  // theta = pi/4, x = (1, 0): u = (cos t, sin t) = (s2/2, s2/2) -> +delta
  CHECK(rotated_axes_f(1.0, 0.0, pi4, 2.0) == 2.0);
  // and a point that lands on a mixed quadrant after rotation
  CHECK(rotated_axes_f(1.0, -1.0, pi4, 2.0) == -2.0);
}

TEST_CASE("sinusoid function: boundary strictness and amplitude") {
  CHECK(sinusoid_f(0.7, 0.0, 0.0, 4.0) == -4.0);  // x2 = 0 is not > 0
  CHECK(sinusoid_f(0.7, 0.1, 0.0, 4.0) == 4.0);
  CHECK(sinusoid_f(0.0, 0.5, 1.0, 4.0) == 4.0);   // sin(0) = 0 < 0.5
  const double pi = std::acos(-1.0);
  // sin(10 * pi/20) = 1 > 0.5
  CHECK(sinusoid_f(pi / 20.0, 0.5, 1.0, 4.0) == -4.0);
}

TEST_CASE("generator: domain, noise scale and determinism") {
  SyntheticSpec spec;
  spec.fn = SyntheticFn::kSinusoid;
  spec.theta = 0.5;
  spec.delta = 2.0;
  spec.n = 4000;
  spec.seed = 77;
  const SyntheticData a = generate(spec);
  const SyntheticData b = generate(spec);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);

  double noise_ss = 0.0;
  for (long i = 0; i < a.n; ++i) {
    CHECK(std::fabs(a.x[static_cast<std::size_t>(i) * 2]) <= 1.0);
    CHECK(std::fabs(a.x[static_cast<std::size_t>(i) * 2 + 1]) <= 1.0);
    CHECK(std::fabs(a.f[static_cast<std::size_t>(i)]) == 2.0);
    const double e = a.y[static_cast<std::size_t>(i)] - a.f[static_cast<std::size_t>(i)];
    noise_ss += e * e;
  }
  CHECK(noise_ss / a.n == doctest::Approx(1.0).epsilon(0.06));
}

TEST_CASE("csv bytes are pinned by the spec") {
  SyntheticSpec spec;
  spec.fn = SyntheticFn::kRotatedAxes;
  spec.theta = 0.3;
  spec.delta = 1.0;
  spec.n = 50;
  spec.seed = 5;
  std::ostringstream a, b;
  write_synthetic_csv(a, generate(spec));
  write_synthetic_csv(b, generate(spec));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("x1,x2,y\n", 0) == 0);
}

TEST_CASE("spec validation") {
  SyntheticSpec bad;
  bad.fn = SyntheticFn::kRotatedAxes;
  bad.theta = 1.0;  // above pi/4
  CHECK_THROWS(bad.validate());
  bad.fn = SyntheticFn::kSinusoid;
  CHECK_NOTHROW(bad.validate());
  bad.theta = 1.5;
  CHECK_THROWS(bad.validate());
}
