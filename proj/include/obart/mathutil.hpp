#pragma once

// Scalar special functions used by the sampler, the hyperparameter
// calibration, and the test statistics. All take and return doubles;
// domain violations throw std::domain_error.

namespace obart {

// Standard normal CDF and upper tail, accurate in both tails.
double norm_cdf(double x);
double norm_upper_tail(double x);

// Inverse standard normal CDF (Wichura's PPND16 rational approximation),
// valid for p in (0, 1) down to the underflow limit.
double norm_quantile(double p);

// Regularized incomplete gamma P(a, x) and Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

// Quantile of the chi-square distribution, by bisection on gamma_p.
double chi2_quantile(double df, double p);

// CDF of Student's t with df degrees of freedom, via beta_inc.
double student_t_cdf(double t, double df);

}  // namespace obart
