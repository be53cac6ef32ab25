#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace obart {

enum class ColumnRole { kContinuous, kCategorical, kOutcome, kIgnore };

// Column role assignment by header name. Unlisted columns take
// `default_role` (continuous unless stated otherwise).
struct CsvSchema {
  std::string outcome;                    // empty: no outcome column required
  std::vector<std::string> categorical;
  std::vector<std::string> ignore;
  ColumnRole default_role = ColumnRole::kContinuous;
};

// Typed parse of a CSV: continuous columns as doubles, categorical columns
// as raw string labels (encoding happens at standardization time so test
// splits never leak levels into the training vocabulary).
struct RawTable {
  long n = 0;
  std::vector<std::string> cont_names;
  std::vector<std::vector<double>> cont;         // per column, length n
  std::vector<std::string> cat_names;
  std::vector<std::vector<std::string>> cat;     // per column, length n
  std::string outcome_name;
  std::vector<double> outcome;                   // empty if no outcome column

  RawTable subset(const std::vector<long>& rows) const;
};

// Comma-delimited, header row, '.' decimal separator, no quoting. Parse
// failures report row and column. Empty cells are a hard error.
RawTable load_csv(const std::string& path, const CsvSchema& schema);
RawTable parse_csv(const std::string& text, const CsvSchema& schema,
                   const std::string& origin);

struct ScalingInfo {
  // Per continuous column training (min, max); constant columns map to 0.
  std::vector<std::pair<double, double>> cont_min_max;
  double y_center = 0.0;
  double y_half_range = 1.0;
};

struct DataSchema {
  std::vector<std::string> cont_names;
  std::vector<std::string> cat_names;
  std::vector<std::vector<std::string>> cat_levels;  // labels, frozen at training
  std::string outcome_name;
};

// Code for a level unseen at training time; never a member of any rule
// subset, so traversal routes it right at every split on that predictor.
inline constexpr int kUnseenLevel = -1;

// Sampler-ready design: continuous block affinely mapped to [-1,1] by
// training statistics, categorical block as level codes, outcome centered at
// its training midrange (regression) or kept 0/1 (classification).
struct Dataset {
  long n = 0;
  int p_cont = 0;
  int p_cat = 0;
  std::vector<double> xcont;  // n x p_cont row-major
  std::vector<int> xcat;      // n x p_cat row-major
  std::vector<int> cat_level_counts;
  std::vector<double> y;
  DataSchema schema;
  ScalingInfo scaling;
};

// Build a Dataset from training data: derive scaling statistics and freeze
// categorical level sets in first-appearance order. `center_outcome` is off
// for classification.
Dataset standardize(const RawTable& raw, bool center_outcome);

// Map new data through an existing schema/scaling (test sets, prediction).
// Values outside the training range extrapolate outside [-1,1] (no clamp);
// unseen categorical labels become kUnseenLevel.
Dataset apply_scaling(const RawTable& raw, const DataSchema& schema,
                      const ScalingInfo& scaling, bool center_outcome,
                      bool require_outcome);

double destandardize_outcome(double standardized, const ScalingInfo& scaling);

// Reproducible uniform partition; both sides nonempty or it throws.
std::pair<RawTable, RawTable> split(const RawTable& raw, double fraction,
                                    std::uint64_t seed);

}  // namespace obart
