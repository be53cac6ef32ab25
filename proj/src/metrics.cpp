#include "obart/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "obart/mathutil.hpp"

namespace obart {

double smse(std::span<const double> y_test, std::span<const double> y_hat,
            double y_train_mean) {
  if (y_test.size() != y_hat.size())
    throw std::invalid_argument("smse: length mismatch");
  if (y_test.empty()) throw std::invalid_argument("smse: empty input");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < y_test.size(); ++i) {
    const double e = y_test[i] - y_hat[i];
    const double b = y_test[i] - y_train_mean;
    num += e * e;
    den += b * b;
  }
  if (den == 0.0)
    throw std::runtime_error("smse: test outcomes all equal the training mean");
  return num / den;
}

double accuracy(std::span<const int> y_test, std::span<const int> labels) {
  if (y_test.size() != labels.size())
    throw std::invalid_argument("accuracy: length mismatch");
  if (y_test.empty()) throw std::invalid_argument("accuracy: empty input");
  long hits = 0;
  for (std::size_t i = 0; i < y_test.size(); ++i)
    if (y_test[i] == labels[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(y_test.size());
}

PairedTResult paired_one_sided_t(std::span<const double> errors_a,
                                 std::span<const double> errors_b) {
  if (errors_a.size() != errors_b.size())
    throw std::invalid_argument("paired_t: length mismatch");
  const std::size_t n = errors_a.size();
  if (n < 2) throw std::invalid_argument("paired_t: need at least 2 pairs");

  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += errors_a[i] - errors_b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = errors_a[i] - errors_b[i] - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  PairedTResult out;
  if (sd == 0.0) {
    out.degenerate = true;
    if (mean == 0.0) {
      out.p = 0.5;
    } else {
      out.t = mean < 0.0 ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
      out.p = mean < 0.0 ? 0.0 : 1.0;
    }
    return out;
  }
  out.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  out.p = student_t_cdf(out.t, static_cast<double>(n - 1));
  return out;
}

}  // namespace obart
