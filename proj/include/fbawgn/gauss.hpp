#pragma once

#include <cstdint>

#include "fbawgn/types.hpp"

namespace fbawgn::gauss {

// Gaussian CDF Phi and density phi. Phi accepts the extended reals.
double std_normal_cdf(double a);
double std_normal_pdf(double a);

// Extended inverse: -inf for eps <= 0, +inf for eps >= 1, and the usual
// inverse on (0,1), accurate to better than 1e-12 in round trip.
double std_normal_cdf_inv(double eps);

// log Gamma(x) for x > 0 (Lanczos below 15, Stirling with Bernoulli
// corrections above). Thread-safe, unlike std::lgamma with its signgam.
double log_gamma(double x);
double log_beta(double a, double b);

// Regularized incomplete beta I_x(a,b) by continued fraction with the
// symmetry switch at x = (a+1)/(a+b+2). Relative accuracy ~1e-13 away from
// the endpoints. The _log variant returns ln I_x(a,b) without underflow for
// extreme tails.
double reg_inc_beta(double x, double a, double b);
double reg_inc_beta_log(double x, double a, double b);

// Channel quantities, all in natural-log units.
double capacity(SnrPoint snr);         // nats per use
double dispersion(SnrPoint snr);       // nats^2 per use
double third_abs_moment(SnrPoint snr); // nats^3 per use, adaptive quadrature

struct NormalApproxTerms {
  std::int64_t n = 0;
  double eps = 0.0;
  double capacity_term = 0.0;
  double dispersion_term = 0.0;
  double third_order_term = 0.0;
  double total = 0.0;  // always the exact sum of the three terms
};

NormalApproxTerms normal_approximation(std::int64_t n, double eps,
                                       SnrPoint snr,
                                       bool include_third_order);

}  // namespace fbawgn::gauss
