#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "obart/bench.hpp"
#include "obart/data.hpp"
#include "obart/model.hpp"
#include "obart/serialize.hpp"
#include "obart/synthetic.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  return f;
}

void write_to(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  auto f = open_out(path);
  f << content;
}

struct DataFlags {
  std::string path;
  std::string outcome;
  std::string categorical;
  std::string ignore;

  obart::RawTable load(bool need_outcome) const {
    obart::CsvSchema schema;
    schema.outcome = outcome;
    schema.categorical = split_commas(categorical);
    schema.ignore = split_commas(ignore);
    obart::RawTable t = obart::load_csv(path, schema);
    if (need_outcome && t.outcome.empty())
      throw std::runtime_error("an --outcome column is required");
    return t;
  }
};

void add_data_flags(CLI::App* cmd, DataFlags& flags, bool need_outcome) {
  cmd->add_option("--data", flags.path, "input CSV file")->required();
  auto* oc = cmd->add_option("--outcome", flags.outcome, "outcome column name");
  if (need_outcome) oc->required();
  cmd->add_option("--categorical", flags.categorical,
                  "comma-separated categorical column names");
  cmd->add_option("--ignore", flags.ignore, "comma-separated columns to drop");
}

struct FitFlags {
  std::string task = "regression";
  std::string mode = "oblique";
  int trees = 200;
  int burn = 1000;
  int iters = 1000;
  int chains = 1;
  std::uint64_t seed = 0;
  bool fast = false;
  double alpha = -1.0, beta = -1.0, nu = -1.0;
  double a_theta = -1.0, b_theta = -1.0, prob_categorical = -1.0;

  obart::FitSpec spec() const {
    obart::FitSpec s;
    if (task == "regression") {
      s.task = obart::Task::kRegression;
    } else if (task == "classification") {
      s.task = obart::Task::kClassification;
    } else {
      throw std::runtime_error("unknown --task '" + task + "'");
    }
    if (mode == "oblique") {
      s.mode = obart::RuleMode::kOblique;
    } else if (mode == "axis") {
      s.mode = obart::RuleMode::kAxisAligned;
    } else {
      throw std::runtime_error("unknown --mode '" + mode + "'");
    }
    s.num_trees = trees;
    s.burn = burn;
    s.kept = iters;
    if (fast) {
      s.num_trees = 50;
      s.burn = 500;
      s.kept = 500;
    }
    s.chains = chains;
    s.seed = seed;
    s.alpha = alpha;
    s.beta = beta;
    s.nu = nu;
    s.a_theta = a_theta;
    s.b_theta = b_theta;
    s.prob_categorical = prob_categorical;
    return s;
  }
};

void add_fit_flags(CLI::App* cmd, FitFlags& flags, bool with_mode) {
  cmd->add_option("--task", flags.task, "regression|classification");
  if (with_mode) cmd->add_option("--mode", flags.mode, "oblique|axis");
  cmd->add_option("--trees", flags.trees, "ensemble size M");
  cmd->add_option("--burn", flags.burn, "burn-in iterations");
  cmd->add_option("--iters", flags.iters, "kept iterations");
  cmd->add_option("--chains", flags.chains, "independent chains");
  cmd->add_option("--seed", flags.seed, "master rng seed");
  cmd->add_flag("--fast", flags.fast, "preset: 50 trees, 500+500 iterations");
  cmd->add_option("--alpha", flags.alpha, "branching prior base");
  cmd->add_option("--beta", flags.beta, "branching prior power");
  cmd->add_option("--nu", flags.nu, "sigma^2 prior df");
  cmd->add_option("--a-theta", flags.a_theta, "theta prior shape a");
  cmd->add_option("--b-theta", flags.b_theta, "theta prior shape b");
  cmd->add_option("--prob-categorical", flags.prob_categorical,
                  "probability a proposed rule is categorical");
}

int run_simulate(const std::string& fn, double theta, double delta, long n,
                 std::uint64_t seed, const std::string& out) {
  obart::SyntheticSpec spec;
  if (fn == "rotated-axes") {
    spec.fn = obart::SyntheticFn::kRotatedAxes;
  } else if (fn == "sinusoid") {
    spec.fn = obart::SyntheticFn::kSinusoid;
  } else {
    throw std::runtime_error("unknown --fn '" + fn + "'");
  }
  spec.theta = theta;
  spec.delta = delta;
  spec.n = n;
  spec.seed = seed;
  std::ostringstream os;
  obart::write_synthetic_csv(os, obart::generate(spec));
  write_to(out, os.str());
  return 0;
}

int run_fit(const DataFlags& data, const FitFlags& flags, const std::string& out,
            const std::string& diagnostics) {
  const obart::RawTable raw = data.load(true);
  const obart::FitSpec spec = flags.spec();
  const obart::Dataset train =
      obart::standardize(raw, spec.task == obart::Task::kRegression);
  const obart::PosteriorSamples samples = obart::fit(train, spec);
  obart::save_model(out, samples);
  if (!diagnostics.empty()) {
    auto f = open_out(diagnostics);
    obart::write_diagnostics(f, samples.diagnostics);
  }
  std::cerr << "fit: " << samples.draws.size() << " posterior draws -> " << out << "\n";
  return 0;
}

int run_predict(const std::string& model_path, const DataFlags& data,
                const std::string& out) {
  const obart::PosteriorSamples samples = obart::load_model(model_path);
  DataFlags d = data;
  d.outcome.clear();  // outcome column, if present, is simply not used
  obart::CsvSchema schema;
  schema.categorical = samples.schema.cat_names;
  schema.ignore = split_commas(data.ignore);
  // Columns that the model does not know about are dropped.
  {
    std::ifstream probe(d.path);
    if (!probe) throw std::runtime_error("cannot open '" + d.path + "'");
    std::string header;
    std::getline(probe, header);
    std::istringstream hs(header);
    std::string col;
    while (std::getline(hs, col, ',')) {
      if (!col.empty() && col.back() == '\r') col.pop_back();
      const bool known =
          std::find(samples.schema.cont_names.begin(), samples.schema.cont_names.end(),
                    col) != samples.schema.cont_names.end() ||
          std::find(samples.schema.cat_names.begin(), samples.schema.cat_names.end(),
                    col) != samples.schema.cat_names.end();
      if (!known) schema.ignore.push_back(col);
    }
  }
  const obart::RawTable raw = obart::load_csv(d.path, schema);
  const obart::Prediction pred = obart::predict(samples, raw);

  std::ostringstream os;
  const bool classify = samples.task == obart::Task::kClassification;
  os << "row,mean,lo2.5,hi97.5";
  if (classify) os << ",prob,label";
  os << '\n';
  for (std::size_t i = 0; i < pred.mean.size(); ++i) {
    os << i << ',' << obart::fmt_double(pred.mean[i]) << ','
       << obart::fmt_double(pred.lo[i]) << ',' << obart::fmt_double(pred.hi[i]);
    if (classify)
      os << ',' << obart::fmt_double(pred.prob[i]) << ',' << pred.label[i];
    os << '\n';
  }
  write_to(out, os.str());
  return 0;
}

int run_bench_cmd(const DataFlags& data, const FitFlags& flags, int splits,
                  double fraction, const std::string& modes, int jobs,
                  const std::string& out) {
  const obart::RawTable raw = data.load(true);
  obart::BenchSpec spec;
  spec.splits = splits;
  spec.fraction = fraction;
  spec.seed = flags.seed;
  spec.jobs = jobs;
  spec.fit = flags.spec();
  for (const auto& m : split_commas(modes))
    spec.modes.push_back(obart::parse_bench_mode(m));
  const obart::BenchResult result = obart::run_bench(raw, spec);
  std::ostringstream os;
  obart::write_bench_table(os, result);
  write_to(out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian additive regression trees with oblique decision rules"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset CSV");
  std::string sim_fn = "rotated-axes";
  double sim_theta = 0.0, sim_delta = 1.0;
  long sim_n = 1000;
  std::uint64_t sim_seed = 0;
  std::string sim_out = "-";
  sim->add_option("--fn", sim_fn, "rotated-axes|sinusoid")->required();
  sim->add_option("--theta", sim_theta, "rotation angle or sine amplitude");
  sim->add_option("--delta", sim_delta, "jump size");
  sim->add_option("--n", sim_n, "number of rows");
  sim->add_option("--seed", sim_seed, "rng seed");
  sim->add_option("--out", sim_out, "output CSV path ('-' for stdout)");

  // fit
  auto* fitc = app.add_subcommand("fit", "fit a model to a CSV");
  DataFlags fit_data;
  FitFlags fit_flags;
  std::string fit_out, fit_diag;
  add_data_flags(fitc, fit_data, true);
  add_fit_flags(fitc, fit_flags, true);
  fitc->add_option("--out", fit_out, "model file path")->required();
  fitc->add_option("--diagnostics", fit_diag, "per-iteration diagnostics CSV path");

  // predict
  auto* predc = app.add_subcommand("predict", "predict with a saved model");
  DataFlags pred_data;
  std::string pred_model, pred_out = "-";
  predc->add_option("--model", pred_model, "model file path")->required();
  predc->add_option("--data", pred_data.path, "input CSV file")->required();
  predc->add_option("--ignore", pred_data.ignore, "comma-separated columns to drop");
  predc->add_option("--out", pred_out, "predictions CSV path ('-' for stdout)");

  // bench
  auto* benchc = app.add_subcommand("bench", "train/test split benchmark harness");
  DataFlags bench_data;
  FitFlags bench_flags;
  int bench_splits = 20, bench_jobs = 1;
  double bench_fraction = 0.75;
  std::string bench_modes = "oblique,axis";
  std::string bench_out = "-";
  add_data_flags(benchc, bench_data, true);
  add_fit_flags(benchc, bench_flags, false);
  benchc->add_option("--splits", bench_splits, "number of random splits");
  benchc->add_option("--fraction", bench_fraction, "training fraction");
  benchc->add_option("--modes", bench_modes, "comma list: oblique,axis,rotation:R");
  benchc->add_option("--jobs", bench_jobs, "parallel jobs");
  benchc->add_option("--out", bench_out, "results table path ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return run_simulate(sim_fn, sim_theta, sim_delta, sim_n, sim_seed, sim_out);
    if (fitc->parsed()) return run_fit(fit_data, fit_flags, fit_out, fit_diag);
    if (predc->parsed()) return run_predict(pred_model, pred_data, pred_out);
    if (benchc->parsed())
      return run_bench_cmd(bench_data, bench_flags, bench_splits, bench_fraction,
                           bench_modes, bench_jobs, bench_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
