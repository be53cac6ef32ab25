#pragma once

#include <span>

namespace obart {

// Standardized out-of-sample MSE: model squared error over the squared error
// of predicting the training mean. Throws when the denominator vanishes.
double smse(std::span<const double> y_test, std::span<const double> y_hat,
            double y_train_mean);

double accuracy(std::span<const int> y_test, std::span<const int> labels);

struct PairedTResult {
  double p = 0.5;
  double t = 0.0;
  bool degenerate = false;
};

// One-sided paired t-test of H1: mean(a - b) < 0 ("a has smaller error").
// All-zero differences flag degenerate with p = 0.5; zero variance with a
// nonzero mean flags degenerate with the limiting p of 0 or 1.
PairedTResult paired_one_sided_t(std::span<const double> errors_a,
                                 std::span<const double> errors_b);

}  // namespace obart
