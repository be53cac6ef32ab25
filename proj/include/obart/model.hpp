#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "obart/data.hpp"
#include "obart/sampler.hpp"
#include "obart/tree.hpp"

namespace obart {

struct FitSpec {
  Task task = Task::kRegression;
  RuleMode mode = RuleMode::kOblique;
  int num_trees = 200;
  int burn = 1000;
  int kept = 1000;
  int chains = 1;
  std::uint64_t seed = 0;
  // Optional overrides; NaN / negative means "use the default".
  double alpha = -1.0;
  double beta = -1.0;
  double nu = -1.0;
  double a_theta = -1.0;
  double b_theta = -1.0;
  double prob_categorical = -1.0;

  void validate() const;
};

struct PosteriorSamples {
  Task task = Task::kRegression;
  DataSchema schema;
  ScalingInfo scaling;
  EnsembleConfig config;
  std::vector<FrozenEnsemble> draws;         // kept x chains
  std::vector<DiagnosticsRecord> diagnostics;  // kept iterations, chain-major
};

// tau = (max - min) / (2k): under the marginal N(0, tau^2) prior for f(x),
// +-(k tau) brackets the observed (midrange-centered) outcome exactly.
double calibrate_tau(double y_standardized_min, double y_standardized_max,
                     double k = 2.0);

// lambda such that P(sigma^2 < s2) = q under sigma^2 ~ IG(nu/2, nu lambda/2).
double calibrate_lambda(double s2, double nu, double q = 0.9);

// Build the full ensemble configuration from the data and spec, applying the
// default calibrations (tau from the outcome range, lambda from the outcome
// variance, a_theta = M, b_theta targeting prior mean 1/p_cont).
EnsembleConfig make_config(const Dataset& data, const FitSpec& spec);

PosteriorSamples fit(const Dataset& data, const FitSpec& spec);

struct Prediction {
  std::vector<double> mean;    // posterior mean on the original scale
  std::vector<double> lo;      // empirical 2.5% quantile
  std::vector<double> hi;      // empirical 97.5% quantile
  std::vector<double> prob;    // classification: posterior mean of Phi(f(x))
  std::vector<int> label;      // classification: prob > 0.5 (ties to 0)
};

// Rows must match the training schema; unseen categorical levels route to
// the non-subset branch. Classification reports mean/lo/hi on the latent
// f(x) scale plus prob/label.
Prediction predict(const PosteriorSamples& samples, const RawTable& x);

// Per-draw latent sums (standardized scale), row-major [row][draw]; the
// building block for predict and for the python bindings.
std::vector<double> predict_draws(const PosteriorSamples& samples, const Dataset& x);

void save_model(std::ostream& os, const PosteriorSamples& samples);
void save_model(const std::string& path, const PosteriorSamples& samples);
PosteriorSamples load_model(std::istream& is);
PosteriorSamples load_model(const std::string& path);

void write_diagnostics(std::ostream& os, const std::vector<DiagnosticsRecord>& recs);

}  // namespace obart
