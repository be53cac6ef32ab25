#include "obart/synthetic.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "obart/rng.hpp"
#include "obart/serialize.hpp"

namespace obart {

void SyntheticSpec::validate() const {
  if (fn == SyntheticFn::kRotatedAxes) {
    if (theta < 0.0 || theta > std::atan(1.0) + 1e-12)
      throw std::invalid_argument("rotated-axes: theta outside [0, pi/4]");
  } else {
    if (theta < 0.0 || theta > 1.0)
      throw std::invalid_argument("sinusoid: amplitude outside [0, 1]");
  }
  if (!(delta > 0.0)) throw std::invalid_argument("synthetic: delta <= 0");
  if (n < 1) throw std::invalid_argument("synthetic: n < 1");
}

double rotated_axes_f(double x1, double x2, double theta, double delta) {
  // counter-clockwise rotation of x by theta
  const double u1 = std::cos(theta) * x1 - std::sin(theta) * x2;
  const double u2 = std::sin(theta) * x1 + std::cos(theta) * x2;
  return (u1 * u2 > 0.0) ? delta : -delta;
}

double sinusoid_f(double x1, double x2, double theta, double delta) {
  return (x2 > theta * std::sin(10.0 * x1)) ? delta : -delta;
}

SyntheticData generate(const SyntheticSpec& spec) {
  spec.validate();
  SyntheticData d;
  d.n = spec.n;
  d.x.resize(static_cast<std::size_t>(spec.n) * 2);
  d.f.resize(static_cast<std::size_t>(spec.n));
  d.y.resize(static_cast<std::size_t>(spec.n));
  Rng rng(spec.seed);
  for (long i = 0; i < spec.n; ++i) {
    const double x1 = rng.uniform(-1.0, 1.0);
    const double x2 = rng.uniform(-1.0, 1.0);
    d.x[static_cast<std::size_t>(i) * 2] = x1;
    d.x[static_cast<std::size_t>(i) * 2 + 1] = x2;
    const double f = (spec.fn == SyntheticFn::kRotatedAxes)
                         ? rotated_axes_f(x1, x2, spec.theta, spec.delta)
                         : sinusoid_f(x1, x2, spec.theta, spec.delta);
    d.f[static_cast<std::size_t>(i)] = f;
    d.y[static_cast<std::size_t>(i)] = f + rng.normal();
  }
  return d;
}

void write_synthetic_csv(std::ostream& os, const SyntheticData& data) {
  os << "x1,x2,y\n";
  for (long i = 0; i < data.n; ++i) {
    os << fmt_double(data.x[static_cast<std::size_t>(i) * 2]) << ','
       << fmt_double(data.x[static_cast<std::size_t>(i) * 2 + 1]) << ','
       << fmt_double(data.y[static_cast<std::size_t>(i)]) << '\n';
  }
}

}  // namespace obart
