#include "fbawgn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace fbawgn {
namespace {

// 15-point Kronrod abscissae on [-1,1] (positive half) with the embedded
// 7-point Gauss rule; standard QUADPACK dqk15 constants.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                           0.381830050505119, 0.417959183673469};

struct Panel {
  double a, b;
  double value;
  double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);

  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const double sum = fv1[j] + fv2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }

  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

  resg *= half;
  resk *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);

  double err = std::abs(resk - resg);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / eps50)
    err = std::max(err, eps50 * resabs);

  return Panel{a, b, resk, err};
}

}  // namespace

QuadratureResult gk_integrate(const std::function<double(double)>& f, double a,
                              double b, const QuadratureOptions& opt,
                              std::span<const double> breakpoints) {
  if (!(a < b)) {
    if (a == b) return QuadratureResult{0.0, 0.0, 0, true};
    QuadratureResult r = gk_integrate(f, b, a, opt, breakpoints);
    r.value = -r.value;
    return r;
  }

  std::vector<double> edges;
  edges.push_back(a);
  for (double x : breakpoints)
    if (x > a && x < b) edges.push_back(x);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<Panel> panels;
  panels.reserve(edges.size() - 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    panels.push_back(gk15(f, edges[i], edges[i + 1]));

  auto totals = [&panels] {
    double v = 0.0, e = 0.0;
    for (const Panel& p : panels) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };

  auto [value, error] = totals();
  while (panels.size() < opt.max_panels) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
    if (error <= target) break;

    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].error > panels[worst].error) worst = i;

    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (!(p.a < mid && mid < p.b)) break;  // interval exhausted in double
    panels[worst] = gk15(f, p.a, mid);
    panels.push_back(gk15(f, mid, p.b));
    std::tie(value, error) = totals();
  }

  const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
  return QuadratureResult{value, error, panels.size(), error <= target};
}

double gk_integrate_or_throw(const std::function<double(double)>& f, double a,
                             double b, const QuadratureOptions& opt,
                             std::span<const double> breakpoints) {
  const QuadratureResult r = gk_integrate(f, a, b, opt, breakpoints);
  if (!r.converged)
    throw QuadratureError(
        "quadrature did not converge: achieved absolute error " +
            std::to_string(r.error) + " with " + std::to_string(r.panels) +
            " panels",
        r.value, r.error);
  return r.value;
}

}  // namespace fbawgn
