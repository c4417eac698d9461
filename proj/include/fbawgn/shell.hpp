#pragma once

#include <map>
#include <memory>
#include <mutex>

namespace fbawgn::shell {

// ln of the surface area of a radius-r sphere in R^n, 2 pi^{n/2} r^{n-1} /
// Gamma(n/2). Stays in the log domain so it is finite up to n = 10^6.
double sphere_surface_area_log(int n, double r);

// Maximizer of alpha(u) = (1/2) ln(1-u^2) + sqrt(ps) u on [-1,1]; the
// continuous extension returns 0 at ps = 0.
double shell_mode(double ps);

// Maximizer of the finite-n exponent beta_n(u) = (1/2 - 3/(2n)) ln(1-u^2) +
// sqrt(ps) u. Converges to shell_mode(ps) as n grows; for n = 3 the exponent
// is linear and the supremum sits at the boundary u = 1.
double shell_mode_finite(double ps, int n);

// ln of the normalizer F_n = int_{-1}^{1} (1-u^2)^{(n-3)/2} e^{n sqrt(ps) u} du,
// by adaptive quadrature in the log domain with panels split at the mode and
// just inside the endpoints.
double shell_normalizer_log(int n, double p, double s);

// The conditional law of the normalized inner-product coordinate given that
// the noise lands on the shell of squared radius n*s around -x0.
class ShellDensitySpec {
 public:
  ShellDensitySpec(int n, double p, double s);

  int n() const { return n_; }
  double p() const { return p_; }
  double s() const { return s_; }
  double ps() const { return p_ * s_; }

  // ln F_n, computed once on first use; safe under concurrent callers.
  double log_normalizer() const;

 private:
  int n_;
  double p_, s_;
  struct Cache {
    std::once_flag flag;
    double value = 0.0;
  };
  std::shared_ptr<Cache> cache_;
};

double shell_log_density(double u, const ShellDensitySpec& spec);
double shell_density(double u, const ShellDensitySpec& spec);

// Laplace-method analysis of the density supremum.
class LaplaceReport {
 public:
  LaplaceReport(double p, double s);

  double p() const { return p_; }
  double s() const { return s_; }
  double u_star() const { return u_star_; }
  double alpha_at_mode() const { return alpha_at_mode_; }
  double alpha_second_deriv() const { return alpha_second_deriv_; }

  // The sup bound L(P,s), evaluated two algebraically equivalent ways: the
  // explicit (P,s) form and the mode form sqrt((1+u*^2)/(2 pi (1-u*^2)^5)).
  double l_bound() const { return l_bound_; }
  double l_bound_from_mode() const { return l_bound_from_mode_; }

  double u_star_n(int n) const;

  // sup_u f_{U|E}(u) / sqrt(n); computed once per n and cached.
  double sup_ratio(int n) const;

 private:
  double p_, s_;
  double u_star_, alpha_at_mode_, alpha_second_deriv_;
  double l_bound_, l_bound_from_mode_;
  struct SupCache {
    std::mutex mu;
    std::map<int, double> by_n;
  };
  std::shared_ptr<SupCache> sup_cache_;
};

LaplaceReport laplace_sup_bound(double p, double s);

// Probability that the inner-product statistic falls in a window of metric
// width mu: 2 L(P,s) mu / sqrt(n P s), clamped to [0,1].
double slice_prob_bound(int n, double p, double s, double mu);

// Constants of the geometric tail bound: K(P) = 3 L(P,P+1)/sqrt(P(P+1)) and
// G(P) = (2 ln 2) K(P).
double metric_tail_k(double p);
double metric_tail_g(double p);

// Tail bound G(P) e^{-t} / sqrt(n), clamped to [0,1].
double metric_tail_bound(int n, double p, double t);

}  // namespace fbawgn::shell
