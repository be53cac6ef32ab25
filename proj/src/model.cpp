#include "obart/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "obart/mathutil.hpp"
#include "obart/rng.hpp"
#include "obart/serialize.hpp"

namespace obart {

void FitSpec::validate() const {
  if (num_trees < 1) throw std::invalid_argument("fit: trees < 1");
  if (burn < 0) throw std::invalid_argument("fit: burn < 0");
  if (kept < 1) throw std::invalid_argument("fit: kept iterations < 1");
  if (chains < 1) throw std::invalid_argument("fit: chains < 1");
}

double calibrate_tau(double y_standardized_min, double y_standardized_max, double k) {
  if (!(y_standardized_min < y_standardized_max))
    throw std::invalid_argument("calibrate_tau: constant outcome");
  if (!(k > 0.0)) throw std::invalid_argument("calibrate_tau: k <= 0");
  return (y_standardized_max - y_standardized_min) / (2.0 * k);
}

double calibrate_lambda(double s2, double nu, double q) {
  if (!(s2 > 0.0)) throw std::invalid_argument("calibrate_lambda: s2 <= 0");
  return s2 * chi2_quantile(nu, 1.0 - q) / nu;
}

EnsembleConfig make_config(const Dataset& data, const FitSpec& spec) {
  spec.validate();
  if (data.p_cont + data.p_cat == 0) throw std::invalid_argument("fit: zero predictors");
  EnsembleConfig cfg;
  cfg.num_trees = spec.num_trees;
  cfg.p_cont = data.p_cont;
  cfg.p_cat = data.p_cat;
  cfg.mode = spec.mode;
  if (spec.alpha > 0.0) cfg.alpha = spec.alpha;
  if (spec.beta >= 0.0) cfg.beta = spec.beta;
  if (spec.nu > 0.0) cfg.nu = spec.nu;
  cfg.prob_categorical = spec.prob_categorical;

  if (spec.task == Task::kRegression) {
    const auto [mn, mx] = std::minmax_element(data.y.begin(), data.y.end());
    cfg.tau = calibrate_tau(*mn, *mx);
    double mean = 0.0;
    for (double v : data.y) mean += v;
    mean /= static_cast<double>(data.y.size());
    double s2 = 0.0;
    for (double v : data.y) s2 += (v - mean) * (v - mean);
    s2 /= static_cast<double>(data.y.size() - 1);
    cfg.lambda = calibrate_lambda(s2, cfg.nu);
  } else {
    // Probit convention: the latent f(x) prior spans (-3, 3).
    cfg.tau = calibrate_tau(-3.0, 3.0);
    cfg.lambda = 1.0;  // unused; sigma^2 is fixed at 1
  }

  cfg.a_theta = (spec.a_theta > 0.0) ? spec.a_theta : static_cast<double>(cfg.num_trees);
  if (spec.b_theta > 0.0) {
    cfg.b_theta = spec.b_theta;
  } else {
    // Prior mean 1/p_cont => b = a (p_cont - 1), kept proper when p_cont <= 1.
    cfg.b_theta = std::max(cfg.a_theta * (cfg.p_cont - 1.0), 1.0);
  }
  cfg.validate();
  return cfg;
}

namespace {

struct ChainResult {
  std::vector<FrozenEnsemble> draws;
  std::vector<DiagnosticsRecord> diagnostics;
};

ChainResult run_chain(const Dataset& data, const EnsembleConfig& cfg, Task task,
                      int burn, int kept, std::uint64_t seed) {
  FitState state = make_fit_state(cfg, task, data.xcont,
                                  data.xcat, data.cat_level_counts, data.y, seed);
  ChainResult out;
  out.draws.reserve(static_cast<std::size_t>(kept));
  out.diagnostics.reserve(static_cast<std::size_t>(kept));
  for (int it = 0; it < burn; ++it) gibbs_iteration(state);
  for (int it = 0; it < kept; ++it) {
    const DiagnosticsRecord rec = gibbs_iteration(state);
    out.draws.push_back(freeze(state.ensemble));
    out.diagnostics.push_back(rec);
  }
  return out;
}

}  // namespace

PosteriorSamples fit(const Dataset& data, const FitSpec& spec) {
  if (data.n < 1) throw std::invalid_argument("fit: empty dataset");
  const EnsembleConfig cfg = make_config(data, spec);

  std::vector<ChainResult> results(static_cast<std::size_t>(spec.chains));
  if (spec.chains == 1) {
    results[0] = run_chain(data, cfg, spec.task, spec.burn, spec.kept,
                           chain_seed(spec.seed, 0));
  } else {
    std::vector<std::thread> workers;
    for (int k = 0; k < spec.chains; ++k) {
      workers.emplace_back([&, k] {
        results[static_cast<std::size_t>(k)] =
            run_chain(data, cfg, spec.task, spec.burn, spec.kept,
                      chain_seed(spec.seed, static_cast<std::uint64_t>(k)));
      });
    }
    for (auto& w : workers) w.join();
  }

  PosteriorSamples samples;
  samples.task = spec.task;
  samples.schema = data.schema;
  samples.scaling = data.scaling;
  samples.config = cfg;
  for (auto& r : results) {
    std::move(r.draws.begin(), r.draws.end(), std::back_inserter(samples.draws));
    samples.diagnostics.insert(samples.diagnostics.end(), r.diagnostics.begin(),
                               r.diagnostics.end());
  }
  return samples;
}

std::vector<double> predict_draws(const PosteriorSamples& samples, const Dataset& x) {
  const std::size_t k = samples.draws.size();
  std::vector<double> out(static_cast<std::size_t>(x.n) * k);
  const int p_cont = x.p_cont;
  const int p_cat = x.p_cat;
  for (long i = 0; i < x.n; ++i) {
    const std::span<const double> xc{
        x.xcont.data() + static_cast<std::size_t>(i) * p_cont,
        static_cast<std::size_t>(p_cont)};
    const std::span<const int> xk{x.xcat.data() + static_cast<std::size_t>(i) * p_cat,
                                  static_cast<std::size_t>(p_cat)};
    for (std::size_t d = 0; d < k; ++d)
      out[static_cast<std::size_t>(i) * k + d] = samples.draws[d].predict(xc, xk);
  }
  return out;
}

namespace {

// Type-7 empirical quantile on an already-sorted vector.
double quantile_sorted(const std::vector<double>& v, double q) {
  const double h = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= v.size()) return v.back();
  const double w = h - static_cast<double>(lo);
  return v[lo] + w * (v[lo + 1] - v[lo]);
}

}  // namespace

Prediction predict(const PosteriorSamples& samples, const RawTable& x) {
  const Dataset d = apply_scaling(x, samples.schema, samples.scaling,
                                  /*center_outcome=*/false, /*require_outcome=*/false);
  const std::size_t k = samples.draws.size();
  if (k == 0) throw std::logic_error("predict: no posterior draws");
  const std::vector<double> draws = predict_draws(samples, d);

  Prediction out;
  out.mean.resize(static_cast<std::size_t>(d.n));
  out.lo.resize(static_cast<std::size_t>(d.n));
  out.hi.resize(static_cast<std::size_t>(d.n));
  const bool classify = samples.task == Task::kClassification;
  if (classify) {
    out.prob.resize(static_cast<std::size_t>(d.n));
    out.label.resize(static_cast<std::size_t>(d.n));
  }
  std::vector<double> row(k);
  for (long i = 0; i < d.n; ++i) {
    double prob_sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      double v = draws[static_cast<std::size_t>(i) * k + j];
      if (classify) {
        prob_sum += norm_cdf(v);
      } else {
        v = destandardize_outcome(v, samples.scaling);
      }
      row[j] = v;
    }
    double mean = 0.0;
    for (double v : row) mean += v;
    out.mean[i] = mean / static_cast<double>(k);
    std::sort(row.begin(), row.end());
    out.lo[i] = quantile_sorted(row, 0.025);
    out.hi[i] = quantile_sorted(row, 0.975);
    if (classify) {
      const double p = prob_sum / static_cast<double>(k);
      out.prob[i] = p;
      out.label[i] = p > 0.5 ? 1 : 0;  // exact ties go to 0
    }
  }
  return out;
}

void save_model(std::ostream& os, const PosteriorSamples& samples) {
  os << "obliquebart-model v1\n";
  os << "task " << (samples.task == Task::kRegression ? "regression" : "classification")
     << '\n';
  os << "outcome " << escape_token(samples.schema.outcome_name) << ' '
     << fmt_double(samples.scaling.y_center) << ' '
     << fmt_double(samples.scaling.y_half_range) << '\n';
  os << "p_cont " << samples.schema.cont_names.size() << '\n';
  for (std::size_t j = 0; j < samples.schema.cont_names.size(); ++j) {
    os << "cont " << escape_token(samples.schema.cont_names[j]) << ' '
       << fmt_double(samples.scaling.cont_min_max[j].first) << ' '
       << fmt_double(samples.scaling.cont_min_max[j].second) << '\n';
  }
  os << "p_cat " << samples.schema.cat_names.size() << '\n';
  for (std::size_t j = 0; j < samples.schema.cat_names.size(); ++j) {
    os << "cat " << escape_token(samples.schema.cat_names[j]) << ' '
       << samples.schema.cat_levels[j].size();
    for (const auto& label : samples.schema.cat_levels[j])
      os << ' ' << escape_token(label);
    os << '\n';
  }
  os << "draws " << samples.draws.size() << '\n';
  for (const auto& e : samples.draws) write_ensemble(os, e);
}

void save_model(const std::string& path, const PosteriorSamples& samples) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  save_model(f, samples);
}

namespace {

std::vector<std::string> header_tokens(std::istream& is, const char* what) {
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error(std::string("model file truncated, expected ") + what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::istringstream ss(line);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

const std::string& expect(const std::vector<std::string>& toks, std::size_t i,
                          const char* what) {
  if (i >= toks.size())
    throw std::runtime_error(std::string("model file: missing field: ") + what);
  return toks[i];
}

}  // namespace

PosteriorSamples load_model(std::istream& is) {
  {
    auto toks = header_tokens(is, "header");
    if (toks.size() != 2 || toks[0] != "obliquebart-model" || toks[1] != "v1")
      throw std::runtime_error("bad model header; expected 'obliquebart-model v1'");
  }
  PosteriorSamples s;
  {
    auto toks = header_tokens(is, "task");
    const std::string& t = expect(toks, 1, "task");
    if (t == "regression") {
      s.task = Task::kRegression;
    } else if (t == "classification") {
      s.task = Task::kClassification;
    } else {
      throw std::runtime_error("unknown task '" + t + "'");
    }
  }
  {
    auto toks = header_tokens(is, "outcome");
    s.schema.outcome_name = unescape_token(expect(toks, 1, "outcome name"));
    s.scaling.y_center = parse_double(expect(toks, 2, "outcome center"));
    s.scaling.y_half_range = parse_double(expect(toks, 3, "outcome half range"));
  }
  {
    auto toks = header_tokens(is, "p_cont");
    const long p = std::stol(expect(toks, 1, "p_cont"));
    for (long j = 0; j < p; ++j) {
      auto c = header_tokens(is, "cont column");
      s.schema.cont_names.push_back(unescape_token(expect(c, 1, "column name")));
      s.scaling.cont_min_max.emplace_back(parse_double(expect(c, 2, "min")),
                                          parse_double(expect(c, 3, "max")));
    }
  }
  {
    auto toks = header_tokens(is, "p_cat");
    const long p = std::stol(expect(toks, 1, "p_cat"));
    for (long j = 0; j < p; ++j) {
      auto c = header_tokens(is, "cat column");
      s.schema.cat_names.push_back(unescape_token(expect(c, 1, "column name")));
      const long m = std::stol(expect(c, 2, "level count"));
      std::vector<std::string> levels;
      for (long t = 0; t < m; ++t)
        levels.push_back(unescape_token(expect(c, 3 + static_cast<std::size_t>(t),
                                               "level label")));
      s.schema.cat_levels.push_back(std::move(levels));
    }
  }
  long ndraws = 0;
  {
    auto toks = header_tokens(is, "draws");
    ndraws = std::stol(expect(toks, 1, "draw count"));
  }
  s.draws.reserve(static_cast<std::size_t>(ndraws));
  for (long d = 0; d < ndraws; ++d) s.draws.push_back(read_ensemble(is));
  if (ndraws > 0) s.config = s.draws.front().config;
  return s;
}

PosteriorSamples load_model(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  return load_model(f);
}

void write_diagnostics(std::ostream& os, const std::vector<DiagnosticsRecord>& recs) {
  os << "iter,sigma2,theta,mean_depth,total_leaves,grow_accept_rate,"
        "prune_accept_rate,axis_aligned_rule_fraction\n";
  for (const auto& r : recs) {
    os << r.iter << ',' << fmt_double(r.sigma2) << ',' << fmt_double(r.theta) << ','
       << fmt_double(r.mean_depth) << ',' << r.total_leaves << ','
       << fmt_double(r.grow_accept_rate) << ',' << fmt_double(r.prune_accept_rate)
       << ',' << fmt_double(r.axis_aligned_rule_fraction) << '\n';
  }
}

}  // namespace obart
