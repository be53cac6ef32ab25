#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "obart/mathutil.hpp"

using namespace obart;

// Reference values computed with scipy / mpmath at 30 digits.

TEST_CASE("normal cdf matches reference values") {
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(norm_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-13));
  CHECK(norm_cdf(-1.96) == doctest::Approx(0.024997895148220435).epsilon(1e-12));
  CHECK(norm_upper_tail(8.0) == doctest::Approx(6.22096057427174e-16).epsilon(1e-10));
  CHECK(norm_cdf(-3.0) + norm_upper_tail(-3.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("normal quantile matches reference values and inverts the cdf") {
  CHECK(norm_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(norm_quantile(0.025) == doctest::Approx(-1.9599639845400545).epsilon(1e-12));
  CHECK(norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(norm_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-12));
  CHECK(norm_quantile(1e-300) == doctest::Approx(-37.0470962993612).epsilon(1e-10));
  CHECK(norm_quantile(0.3) == doctest::Approx(-0.5244005127080409).epsilon(1e-12));
  for (double p : {1e-12, 1e-6, 0.01, 0.2, 0.5, 0.77, 0.999, 1.0 - 1e-9})
    CHECK(norm_cdf(norm_quantile(p)) == doctest::Approx(p).epsilon(1e-11));
  CHECK_THROWS(norm_quantile(0.0));
  CHECK_THROWS(norm_quantile(1.0));
}

TEST_CASE("regularized incomplete gamma") {
  CHECK(gamma_p(0.5, 0.25) == doctest::Approx(0.5204998778130466).epsilon(1e-12));
  CHECK(gamma_p(1.5, 2.0) == doctest::Approx(0.7385358700508888).epsilon(1e-12));
  CHECK(gamma_p(5.0, 4.0) == doctest::Approx(0.3711630648201266).epsilon(1e-12));
  CHECK(gamma_p(2.0, 0.0) == 0.0);
  CHECK(gamma_q(2.0, 3.0) + gamma_p(2.0, 3.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("regularized incomplete beta") {
  CHECK(beta_inc(0.5, 0.5, 0.3) == doctest::Approx(0.36901011956554536).epsilon(1e-12));
  CHECK(beta_inc(2.0, 3.0, 0.5) == doctest::Approx(0.6875).epsilon(1e-13));
  CHECK(beta_inc(1.5, 0.5, 0.9) == doctest::Approx(0.6041813035905921).epsilon(1e-12));
  CHECK(beta_inc(1.0, 1.0, 0.42) == doctest::Approx(0.42).epsilon(1e-14));
}

TEST_CASE("chi-square quantile by bisection") {
  CHECK(chi2_quantile(3.0, 0.1) == doctest::Approx(0.5843743741551835).epsilon(1e-9));
  CHECK(chi2_quantile(3.0, 0.5) == doctest::Approx(2.3659738843753377).epsilon(1e-9));
  CHECK(chi2_quantile(5.0, 0.05) == doctest::Approx(1.1454762260617692).epsilon(1e-9));
  CHECK(gamma_p(1.5, chi2_quantile(3.0, 0.73) / 2.0) == doctest::Approx(0.73).epsilon(1e-10));
}

TEST_CASE("student t cdf via incomplete beta") {
  CHECK(student_t_cdf(0.0, 5.0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(student_t_cdf(-2.5, 3.0) == doctest::Approx(0.04385332350403277).epsilon(1e-11));
  CHECK(student_t_cdf(1.7, 19.0) == doctest::Approx(0.9472783667059866).epsilon(1e-11));
  CHECK(student_t_cdf(-6.0, 9.0) == doctest::Approx(0.0001012496610338204).epsilon(1e-10));
  CHECK(student_t_cdf(2.2, 7.0) + student_t_cdf(-2.2, 7.0) ==
        doctest::Approx(1.0).epsilon(1e-13));
}
