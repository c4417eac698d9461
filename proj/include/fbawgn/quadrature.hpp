#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace fbawgn {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  std::size_t panels = 0;
  bool converged = false;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& msg, double value, double achieved_tol)
      : std::runtime_error(msg), value(value), achieved_tol(achieved_tol) {}
  double value;
  double achieved_tol;  // absolute error actually reached
};

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  std::size_t max_panels = 4096;
};

// Globally adaptive Gauss-Kronrod 7/15 integration on [a, b]. Optional
// breakpoints become initial panel boundaries (peaks, kinks, roots of the
// integrand's argument), which keeps the subdivision from missing narrow
// features.
QuadratureResult gk_integrate(const std::function<double(double)>& f, double a,
                              double b, const QuadratureOptions& opt = {},
                              std::span<const double> breakpoints = {});

// As above but throws QuadratureError (carrying the achieved tolerance) when
// the requested tolerance is not met.
double gk_integrate_or_throw(const std::function<double(double)>& f, double a,
                             double b, const QuadratureOptions& opt = {},
                             std::span<const double> breakpoints = {});

}  // namespace fbawgn
