#include "fbawgn/shell.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fbawgn/gauss.hpp"
#include "fbawgn/quadrature.hpp"

namespace fbawgn::shell {
namespace {

constexpr double kTwoPi = 6.2831853071795864769252867665590;

void check_shell_args(int n, double p, double s) {
  if (n < 3) throw std::invalid_argument("shell: n must be >= 3");
  if (!(p >= 0.0) || !std::isfinite(p))
    throw std::invalid_argument("shell: p must be finite and >= 0");
  if (!(s > 0.0) || !std::isfinite(s))
    throw std::invalid_argument("shell: s must be finite and > 0");
}

// Exponent of the unnormalized density: (n-3)/2 ln(1-u^2) + n sqrt(ps) u,
// with the (n-3)/2 = 0 case kept free of 0 * (-inf).
double log_unnormalized(double u, int n, double ps) {
  if (u < -1.0 || u > 1.0) return -std::numeric_limits<double>::infinity();
  const double lin = static_cast<double>(n) * std::sqrt(ps) * u;
  if (n == 3) return lin;
  return 0.5 * (n - 3) * std::log1p(-u * u) + lin;
}

}  // namespace

double sphere_surface_area_log(int n, double r) {
  if (n < 1) throw std::invalid_argument("sphere_surface_area_log: n >= 1");
  if (!(r > 0.0))
    throw std::domain_error("sphere_surface_area_log: radius must be > 0");
  return std::log(2.0) + 0.5 * n * std::log(M_PI) + (n - 1) * std::log(r) -
         gauss::log_gamma(0.5 * n);
}

double shell_mode(double ps) {
  if (!(ps >= 0.0)) throw std::invalid_argument("shell_mode: ps must be >= 0");
  if (ps == 0.0) return 0.0;
  return (std::sqrt(1.0 + 4.0 * ps) - 1.0) / (2.0 * std::sqrt(ps));
}

double shell_mode_finite(double ps, int n) {
  if (n < 3) throw std::invalid_argument("shell_mode_finite: n >= 3");
  if (!(ps > 0.0))
    throw std::invalid_argument("shell_mode_finite: ps must be > 0");
  const double a = 1.0 - 3.0 / static_cast<double>(n);
  // Positive root of sqrt(ps) u^2 + a u - sqrt(ps) = 0; for n = 3 the
  // exponent is purely linear and this collapses to the boundary point 1.
  return (std::sqrt(a * a + 4.0 * ps) - a) / (2.0 * std::sqrt(ps));
}

double shell_normalizer_log(int n, double p, double s) {
  check_shell_args(n, p, s);
  const double ps = p * s;

  const double mode = ps > 0.0 ? shell_mode_finite(ps, n) : 0.0;
  const double peak = log_unnormalized(std::min(mode, 1.0 - 1e-12), n, ps);

  auto integrand = [=](double u) {
    return std::exp(log_unnormalized(u, n, ps) - peak);
  };

  // Curvature scale of the exponent at the mode. Panels far wider than this
  // would place every Kronrod node in dead territory and report a spuriously
  // converged zero, so seed breakpoints on a geometric ladder around the
  // peak.
  double curvature;
  if (n > 3 && mode < 1.0) {
    const double om = 1.0 - mode * mode;
    curvature = static_cast<double>(n - 3) * (1.0 + mode * mode) / (om * om);
  } else {
    curvature = 0.0;
  }
  const double width = curvature > 0.0
                           ? 1.0 / std::sqrt(curvature)
                           : 1.0 / (static_cast<double>(n) *
                                        std::max(std::sqrt(ps), 1.0));

  std::vector<double> breaks{-1.0 + 1e-8, mode, 1.0 - 1e-8};
  for (double step = width; step < 2.0; step *= 4.0) {
    breaks.push_back(mode - step);
    breaks.push_back(mode + step);
  }

  QuadratureOptions opt;
  opt.rel_tol = 1e-11;
  opt.max_panels = 20000;
  const double integral =
      gk_integrate_or_throw(integrand, -1.0, 1.0, opt, breaks);
  return peak + std::log(integral);
}

ShellDensitySpec::ShellDensitySpec(int n, double p, double s)
    : n_(n), p_(p), s_(s), cache_(std::make_shared<Cache>()) {
  check_shell_args(n, p, s);
}

double ShellDensitySpec::log_normalizer() const {
  std::call_once(cache_->flag, [this] {
    cache_->value = shell_normalizer_log(n_, p_, s_);
  });
  return cache_->value;
}

double shell_log_density(double u, const ShellDensitySpec& spec) {
  return log_unnormalized(u, spec.n(), spec.ps()) - spec.log_normalizer();
}

double shell_density(double u, const ShellDensitySpec& spec) {
  if (u < -1.0 || u > 1.0) return 0.0;
  return std::exp(shell_log_density(u, spec));
}

LaplaceReport::LaplaceReport(double p, double s)
    : p_(p), s_(s), sup_cache_(std::make_shared<SupCache>()) {
  if (!(p > 0.0) || !(s > 0.0))
    throw std::invalid_argument("LaplaceReport: requires P > 0 and s > 0");
  const double ps = p * s;
  u_star_ = shell_mode(ps);
  alpha_at_mode_ = 0.5 * std::log1p(-u_star_ * u_star_) + std::sqrt(ps) * u_star_;
  const double om = 1.0 - u_star_ * u_star_;
  alpha_second_deriv_ = -(1.0 + u_star_ * u_star_) / (om * om);

  // Explicit (P,s) form of L.
  const double w = std::sqrt(1.0 + 4.0 * ps);
  const double wm1 = w - 1.0;
  l_bound_ = (2.0 * ps) * (2.0 * ps) / std::sqrt(kTwoPi) *
             std::sqrt((1.0 + 4.0 * ps - w) / std::pow(wm1, 5));

  // Mode form of the same constant.
  l_bound_from_mode_ =
      std::sqrt((1.0 + u_star_ * u_star_) / (kTwoPi * std::pow(om, 5)));
}

double LaplaceReport::u_star_n(int n) const {
  return shell_mode_finite(p_ * s_, n);
}

double LaplaceReport::sup_ratio(int n) const {
  {
    std::lock_guard<std::mutex> lock(sup_cache_->mu);
    auto it = sup_cache_->by_n.find(n);
    if (it != sup_cache_->by_n.end()) return it->second;
  }

  // The density is unimodal with its peak at the finite-n mode; a short
  // golden-section pass around it guards the analytic stationary point.
  ShellDensitySpec spec(n, p_, s_);
  const double mode = std::min(u_star_n(n), 1.0);
  double lo = std::max(-1.0, mode - 0.5);
  double hi = std::min(1.0, mode + 0.5);
  constexpr double kGolden = 0.61803398874989484820;
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = shell_log_density(x1, spec);
  double f2 = shell_log_density(x2, spec);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = shell_log_density(x2, spec);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = shell_log_density(x1, spec);
    }
  }
  const double log_sup =
      std::max({f1, f2, shell_log_density(mode, spec)});
  const double ratio = std::exp(log_sup - 0.5 * std::log(double(n)));

  std::lock_guard<std::mutex> lock(sup_cache_->mu);
  return sup_cache_->by_n.emplace(n, ratio).first->second;
}

LaplaceReport laplace_sup_bound(double p, double s) {
  return LaplaceReport(p, s);
}

double slice_prob_bound(int n, double p, double s, double mu) {
  if (n < 3) throw std::invalid_argument("slice_prob_bound: n >= 3");
  if (!(mu > 0.0)) throw std::invalid_argument("slice_prob_bound: mu > 0");
  const double l = laplace_sup_bound(p, s).l_bound();
  const double bound = 2.0 * l * mu / std::sqrt(static_cast<double>(n) * p * s);
  return std::clamp(bound, 0.0, 1.0);
}

double metric_tail_k(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("metric_tail_k: p > 0");
  return 3.0 * laplace_sup_bound(p, p + 1.0).l_bound() /
         std::sqrt(p * (p + 1.0));
}

double metric_tail_g(double p) {
  return 2.0 * std::log(2.0) * metric_tail_k(p);
}

double metric_tail_bound(int n, double p, double t) {
  if (n < 3) throw std::invalid_argument("metric_tail_bound: n >= 3");
  const double bound =
      metric_tail_g(p) * std::exp(-t) / std::sqrt(static_cast<double>(n));
  return std::clamp(bound, 0.0, 1.0);
}

}  // namespace fbawgn::shell
