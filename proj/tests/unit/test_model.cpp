#include <doctest.h>

#include <cmath>
#include <sstream>

#include "obart/mathutil.hpp"
#include "obart/model.hpp"
#include "obart/synthetic.hpp"

using namespace obart;

namespace {

RawTable synthetic_raw(long n, std::uint64_t seed, bool classify = false) {
  SyntheticSpec spec;
  spec.fn = SyntheticFn::kRotatedAxes;
  spec.theta = 0.4;
  spec.delta = 2.0;
  spec.n = n;
  spec.seed = seed;
  const SyntheticData d = generate(spec);
  RawTable t;
  t.n = n;
  t.cont_names = {"x1", "x2"};
  t.cont.resize(2);
  for (long i = 0; i < n; ++i) {
    t.cont[0].push_back(d.x[static_cast<std::size_t>(i) * 2]);
    t.cont[1].push_back(d.x[static_cast<std::size_t>(i) * 2 + 1]);
  }
  t.outcome_name = "y";
  for (long i = 0; i < n; ++i) {
    const double y = d.y[static_cast<std::size_t>(i)];
    t.outcome.push_back(classify ? (y > 0.0 ? 1.0 : 0.0) : y);
  }
  return t;
}

FitSpec tiny_spec(std::uint64_t seed) {
  FitSpec s;
  s.num_trees = 10;
  s.burn = 30;
  s.kept = 20;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("calibrate_tau: worked examples") {
  CHECK(calibrate_tau(0.0, 4.0, 2.0) == doctest::Approx(1.0));
  CHECK(calibrate_tau(-1.0, 1.0, 2.0) == doctest::Approx(0.5));
  CHECK(calibrate_tau(-3.0, 3.0, 2.0) == doctest::Approx(1.5));  // probit span
  CHECK_THROWS(calibrate_tau(2.0, 2.0, 2.0));  // constant outcome
}

TEST_CASE("calibrate_lambda: chi-square quantile oracle and scaling") {
  // chi2_3 0.1-quantile / 3 (scipy oracle, 1e-8)
  CHECK(calibrate_lambda(1.0, 3.0, 0.9) == doctest::Approx(0.19479145805172782).epsilon(1e-8));
  CHECK(calibrate_lambda(2.0, 3.0, 0.9) ==
        doctest::Approx(2.0 * 0.19479145805172782).epsilon(1e-8));
  // q = 0.5 gives the median
  CHECK(calibrate_lambda(1.0, 3.0, 0.5) == doctest::Approx(2.3659738843753377 / 3.0).epsilon(1e-8));
}

TEST_CASE("make_config applies defaults and overrides") {
  const RawTable raw = synthetic_raw(40, 1);
  const Dataset d = standardize(raw, true);
  FitSpec spec = tiny_spec(0);
  EnsembleConfig cfg = make_config(d, spec);
  CHECK(cfg.num_trees == 10);
  CHECK(cfg.a_theta == 10.0);          // a_theta defaults to M
  CHECK(cfg.b_theta == 10.0);          // prior mean 1/p_cont with p_cont = 2
  CHECK(cfg.alpha == 0.95);
  CHECK(cfg.beta == 2.0);
  CHECK(cfg.nu == 3.0);

  spec.a_theta = 7.0;
  spec.b_theta = 3.0;
  spec.alpha = 0.9;
  cfg = make_config(d, spec);
  CHECK(cfg.a_theta == 7.0);
  CHECK(cfg.b_theta == 3.0);
  CHECK(cfg.alpha == 0.9);

  // classification: fixed latent span
  spec = tiny_spec(0);
  spec.task = Task::kClassification;
  const RawTable craw = synthetic_raw(40, 2, true);
  const Dataset cd = standardize(craw, false);
  cfg = make_config(cd, spec);
  CHECK(cfg.tau == doctest::Approx(1.5));
}

TEST_CASE("fit returns kept x chains draws and diagnostics") {
  const RawTable raw = synthetic_raw(60, 3);
  const Dataset d = standardize(raw, true);
  FitSpec spec = tiny_spec(4);
  spec.kept = 7;
  spec.chains = 2;
  const PosteriorSamples s = fit(d, spec);
  CHECK(s.draws.size() == 14);
  CHECK(s.diagnostics.size() == 14);

  FitSpec one = tiny_spec(5);
  one.kept = 1;
  one.burn = 2;
  const PosteriorSamples s1 = fit(d, one);
  CHECK(s1.draws.size() == 1);
}

TEST_CASE("same seed, same data: identical model text and diagnostics") {
  const RawTable raw = synthetic_raw(50, 6);
  const Dataset d = standardize(raw, true);
  const PosteriorSamples a = fit(d, tiny_spec(7));
  const PosteriorSamples b = fit(d, tiny_spec(7));
  std::ostringstream ma, mb, da, db;
  save_model(ma, a);
  save_model(mb, b);
  write_diagnostics(da, a.diagnostics);
  write_diagnostics(db, b.diagnostics);
  CHECK(ma.str() == mb.str());
  CHECK(da.str() == db.str());

  const PosteriorSamples c = fit(d, tiny_spec(8));
  std::ostringstream mc;
  save_model(mc, c);
  CHECK(ma.str() != mc.str());
}

TEST_CASE("predict: posterior mean equals a direct recomputation over draws") {
  const RawTable raw = synthetic_raw(50, 9);
  const Dataset d = standardize(raw, true);
  const PosteriorSamples s = fit(d, tiny_spec(10));
  const RawTable xnew = synthetic_raw(10, 11);
  const Prediction pred = predict(s, xnew);
  const Dataset dx = apply_scaling(xnew, s.schema, s.scaling, false, false);
  for (long i = 0; i < 10; ++i) {
    double mean = 0.0;
    for (const auto& draw : s.draws) {
      const std::span<const double> xc{dx.xcont.data() + static_cast<std::size_t>(i) * 2,
                                       2};
      mean += destandardize_outcome(draw.predict(xc, {}), s.scaling);
    }
    mean /= static_cast<double>(s.draws.size());
    CHECK(pred.mean[static_cast<std::size_t>(i)] == doctest::Approx(mean).epsilon(1e-12));
    CHECK(pred.lo[static_cast<std::size_t>(i)] <= pred.hi[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("predict is invariant to row order") {
  const RawTable raw = synthetic_raw(50, 12);
  const Dataset d = standardize(raw, true);
  const PosteriorSamples s = fit(d, tiny_spec(13));
  RawTable x = synthetic_raw(6, 14);
  const Prediction p1 = predict(s, x);
  // reverse the rows
  RawTable rev = x;
  for (int c = 0; c < 2; ++c)
    std::reverse(rev.cont[c].begin(), rev.cont[c].end());
  std::reverse(rev.outcome.begin(), rev.outcome.end());
  const Prediction p2 = predict(s, rev);
  for (int i = 0; i < 6; ++i) {
    CHECK(p1.mean[static_cast<std::size_t>(i)] ==
          p2.mean[static_cast<std::size_t>(5 - i)]);
  }
}

TEST_CASE("classification predictions expose probabilities and labels") {
  const RawTable raw = synthetic_raw(80, 15, true);
  const Dataset d = standardize(raw, false);
  FitSpec spec = tiny_spec(16);
  spec.task = Task::kClassification;
  const PosteriorSamples s = fit(d, spec);
  const Prediction pred = predict(s, synthetic_raw(12, 17, true));
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(pred.prob[i] >= 0.0);
    CHECK(pred.prob[i] <= 1.0);
    CHECK(pred.label[i] == (pred.prob[i] > 0.5 ? 1 : 0));
  }
}

TEST_CASE("model save/load round-trips and predicts identically") {
  const RawTable raw = synthetic_raw(40, 18);
  const Dataset d = standardize(raw, true);
  const PosteriorSamples s = fit(d, tiny_spec(19));
  std::ostringstream os;
  save_model(os, s);
  std::istringstream is(os.str());
  const PosteriorSamples back = load_model(is);
  CHECK(back.draws.size() == s.draws.size());
  CHECK(back.schema.cont_names == s.schema.cont_names);

  const RawTable x = synthetic_raw(8, 20);
  const Prediction pa = predict(s, x);
  const Prediction pb = predict(back, x);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(pa.mean[i] == pb.mean[i]);
    CHECK(pa.lo[i] == pb.lo[i]);
    CHECK(pa.hi[i] == pb.hi[i]);
  }
  std::ostringstream os2;
  save_model(os2, back);
  CHECK(os.str() == os2.str());
}

TEST_CASE("a constant outcome is a configuration error") {
  RawTable raw = synthetic_raw(30, 21);
  for (auto& v : raw.outcome) v = 3.0;
  const Dataset d = standardize(raw, true);
  CHECK_THROWS(make_config(d, tiny_spec(22)));
}
