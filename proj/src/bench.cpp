#include "obart/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "obart/metrics.hpp"
#include "obart/rng.hpp"
#include "obart/rotation.hpp"
#include "obart/serialize.hpp"

namespace obart {

std::string BenchMode::name() const {
  switch (kind) {
    case Kind::kOblique:
      return "oblique";
    case Kind::kAxis:
      return "axis";
    case Kind::kRotation:
      return "rotation:" + std::to_string(rotations);
  }
  return "?";
}

BenchMode parse_bench_mode(const std::string& text) {
  BenchMode m;
  if (text == "oblique") {
    m.kind = BenchMode::Kind::kOblique;
  } else if (text == "axis") {
    m.kind = BenchMode::Kind::kAxis;
  } else if (text.rfind("rotation:", 0) == 0) {
    m.kind = BenchMode::Kind::kRotation;
    m.rotations = std::stoi(text.substr(9));
    if (m.rotations < 1) throw std::invalid_argument("bench: rotation count < 1");
  } else {
    throw std::invalid_argument("bench: unknown mode '" + text + "'");
  }
  return m;
}

namespace {

// Replace the continuous block by R rotated copies; categorical columns and
// the outcome pass through.
RawTable rotated_table(const RawTable& base, const RotationTransform& rot,
                       const std::vector<double>& block) {
  RawTable out;
  out.n = base.n;
  out.cat_names = base.cat_names;
  out.cat = base.cat;
  out.outcome_name = base.outcome_name;
  out.outcome = base.outcome;
  const int w = rot.width();
  out.cont_names.resize(static_cast<std::size_t>(w));
  out.cont.assign(static_cast<std::size_t>(w), std::vector<double>(base.n));
  for (int j = 0; j < w; ++j) {
    out.cont_names[static_cast<std::size_t>(j)] =
        "rot" + std::to_string(j / rot.input_dim()) + "_" +
        base.cont_names[static_cast<std::size_t>(j % rot.input_dim())];
    for (long i = 0; i < base.n; ++i)
      out.cont[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          block[static_cast<std::size_t>(i) * w + j];
  }
  return out;
}

std::vector<double> flatten_cont(const RawTable& t) {
  const int p = static_cast<int>(t.cont.size());
  std::vector<double> x(static_cast<std::size_t>(t.n) * p);
  for (long i = 0; i < t.n; ++i)
    for (int j = 0; j < p; ++j)
      x[static_cast<std::size_t>(i) * p + j] = t.cont[j][static_cast<std::size_t>(i)];
  return x;
}

struct JobOutcome {
  double metric = 0.0;
  double seconds = 0.0;
};

JobOutcome run_job(const RawTable& train_raw, const RawTable& test_raw,
                   const BenchMode& mode, const FitSpec& base_spec,
                   std::uint64_t job_seed) {
  const auto t0 = std::chrono::steady_clock::now();

  FitSpec spec = base_spec;
  spec.seed = job_seed;
  spec.mode = (mode.kind == BenchMode::Kind::kOblique) ? RuleMode::kOblique
                                                       : RuleMode::kAxisAligned;

  const bool center = spec.task == Task::kRegression;
  Dataset train;
  RawTable test_view;
  if (mode.kind == BenchMode::Kind::kRotation && !train_raw.cont_names.empty()) {
    RotationTransform rot(static_cast<int>(train_raw.cont_names.size()),
                          {mode.rotations, mix64(job_seed)});
    RotationTransform rot_fit = rot;  // stats learned on train
    const std::vector<double> train_block =
        rot_fit.fit_transform(flatten_cont(train_raw), train_raw.n);
    const std::vector<double> test_block =
        rot_fit.transform(flatten_cont(test_raw), test_raw.n);
    const RawTable train_rot = rotated_table(train_raw, rot_fit, train_block);
    test_view = rotated_table(test_raw, rot_fit, test_block);
    train = standardize(train_rot, center);
  } else {
    train = standardize(train_raw, center);
    test_view = test_raw;
  }

  const PosteriorSamples samples = fit(train, spec);
  const Prediction pred = predict(samples, test_view);

  JobOutcome out;
  if (spec.task == Task::kRegression) {
    double train_mean = 0.0;
    for (double v : train_raw.outcome) train_mean += v;
    train_mean /= static_cast<double>(train_raw.outcome.size());
    out.metric = smse(test_raw.outcome, pred.mean, train_mean);
  } else {
    std::vector<int> truth(test_raw.outcome.size());
    for (std::size_t i = 0; i < truth.size(); ++i)
      truth[i] = test_raw.outcome[i] != 0.0 ? 1 : 0;
    out.metric = accuracy(truth, pred.label);
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace

BenchResult run_bench(const RawTable& raw, const BenchSpec& spec) {
  if (spec.splits < 1) throw std::invalid_argument("bench: splits < 1");
  if (raw.outcome.empty()) throw std::invalid_argument("bench: data has no outcome");
  std::vector<BenchMode> modes = spec.modes;
  if (modes.empty())
    modes = {BenchMode{BenchMode::Kind::kOblique, 0}, BenchMode{BenchMode::Kind::kAxis, 0}};

  struct Job {
    int split;
    std::size_t mode_idx;
  };
  std::vector<Job> jobs;
  std::vector<std::pair<RawTable, RawTable>> split_data;
  split_data.reserve(static_cast<std::size_t>(spec.splits));
  for (int s = 0; s < spec.splits; ++s) {
    split_data.push_back(split(raw, spec.fraction, chain_seed(spec.seed, s)));
    for (std::size_t m = 0; m < modes.size(); ++m) jobs.push_back({s, m});
  }

  std::vector<JobOutcome> outcomes(jobs.size());
  const int workers = std::max(1, spec.jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const Job& job = jobs[j];
      const auto& [train_raw, test_raw] = split_data[static_cast<std::size_t>(job.split)];
      const std::uint64_t job_seed =
          chain_seed(chain_seed(spec.seed, job.split), 1000 + job.mode_idx);
      outcomes[j] = run_job(train_raw, test_raw, modes[job.mode_idx], spec.fit, job_seed);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  const std::string metric =
      spec.fit.task == Task::kRegression ? "smse" : "accuracy";
  BenchResult result;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    result.rows.push_back({std::to_string(jobs[j].split), modes[jobs[j].mode_idx].name(),
                           metric, outcomes[j].metric, outcomes[j].seconds});
  }

  // Per-mode means and paired one-sided tests against the oblique arm.
  std::vector<std::vector<double>> per_mode(modes.size());
  std::vector<double> per_mode_seconds(modes.size(), 0.0);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    per_mode[jobs[j].mode_idx].push_back(outcomes[j].metric);
    per_mode_seconds[jobs[j].mode_idx] += outcomes[j].seconds;
  }
  for (std::size_t m = 0; m < modes.size(); ++m) {
    double mean = 0.0;
    for (double v : per_mode[m]) mean += v;
    mean /= static_cast<double>(per_mode[m].size());
    result.rows.push_back({"mean", modes[m].name(), metric, mean, per_mode_seconds[m]});
  }
  std::ptrdiff_t oblique_idx = -1;
  for (std::size_t m = 0; m < modes.size(); ++m)
    if (modes[m].kind == BenchMode::Kind::kOblique) oblique_idx = static_cast<std::ptrdiff_t>(m);
  if (oblique_idx >= 0 && spec.splits >= 2) {
    // errors: smse directly, 1 - accuracy for classification
    auto as_errors = [&](const std::vector<double>& vals) {
      std::vector<double> e = vals;
      if (spec.fit.task == Task::kClassification)
        for (double& v : e) v = 1.0 - v;
      return e;
    };
    const std::vector<double> obl = as_errors(per_mode[static_cast<std::size_t>(oblique_idx)]);
    for (std::size_t m = 0; m < modes.size(); ++m) {
      if (static_cast<std::ptrdiff_t>(m) == oblique_idx) continue;
      const PairedTResult t = paired_one_sided_t(obl, as_errors(per_mode[m]));
      result.rows.push_back({"pvalue_vs_oblique", modes[m].name(), "p", t.p, 0.0});
    }
  }
  return result;
}

void write_bench_table(std::ostream& os, const BenchResult& result) {
  os << "split,mode,metric,value,seconds\n";
  for (const auto& r : result.rows) {
    os << r.split << ',' << r.mode << ',' << r.metric << ',' << fmt_double(r.value)
       << ',' << fmt_double(r.seconds) << '\n';
  }
}

}  // namespace obart
