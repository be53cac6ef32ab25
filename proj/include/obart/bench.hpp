#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "obart/data.hpp"
#include "obart/model.hpp"

namespace obart {

// One comparison arm: the sampler's oblique or axis-aligned mode, or an
// axis-aligned fit on R randomly rotated copies of the continuous block.
struct BenchMode {
  enum class Kind { kOblique, kAxis, kRotation };
  Kind kind = Kind::kOblique;
  int rotations = 0;

  std::string name() const;
};

// Parse "oblique", "axis" or "rotation:R".
BenchMode parse_bench_mode(const std::string& text);

struct BenchSpec {
  int splits = 20;
  double fraction = 0.75;
  std::uint64_t seed = 0;
  std::vector<BenchMode> modes;  // empty: oblique + axis
  FitSpec fit;                   // task, budget, overrides; mode is per-arm
  int jobs = 1;
};

struct BenchRow {
  std::string split;  // split index, "mean", or "pvalue_vs_oblique"
  std::string mode;
  std::string metric;
  double value = 0.0;
  double seconds = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
};

// K random train/test splits x modes; per-split SMSE (regression) or
// accuracy (classification), per-mode means, and one-sided paired t-tests of
// whether the oblique arm's error is smaller.
BenchResult run_bench(const RawTable& raw, const BenchSpec& spec);

// Delimiter-separated table with header split,mode,metric,value,seconds.
void write_bench_table(std::ostream& os, const BenchResult& result);

}  // namespace obart
