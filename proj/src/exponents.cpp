#include "fbawgn/exponents.hpp"

#include <cmath>
#include <stdexcept>

namespace fbawgn::exponents {
namespace {

constexpr double kHalfPi = 1.5707963267948966192313216916398;
constexpr double kLn2Pi = 1.8378770664093454835606594728112;

}  // namespace

double rate_from_angle(double phi) {
  if (!(phi > 0.0 && phi <= M_PI))
    throw std::domain_error("rate_from_angle: phi must be in (0, pi]");
  return -std::log(std::sin(phi));
}

double shannon_g(double phi, SnrPoint snr) {
  if (!(phi > 0.0 && phi <= M_PI))
    throw std::domain_error("shannon_g: phi must be in (0, pi]");
  const double c = std::cos(phi);
  return 0.5 * (std::sqrt(snr.p) * c + std::sqrt(snr.p * c * c + 4.0));
}

double shannon_f(double phi, SnrPoint snr) {
  const double s = std::sin(phi);
  if (!(s > 0.0)) throw std::domain_error("shannon_f: sin(phi) must be > 0");
  const double g = shannon_g(phi, snr);
  return 0.5 * snr.p - 0.5 * std::sqrt(snr.p) * g * std::cos(phi) -
         std::log(g * s);
}

double sp_exponent(double rate, SnrPoint snr) {
  if (!(rate > 0.0))
    throw std::domain_error("sp_exponent: rate must be > 0 (beta = 1 is singular)");
  const double p = snr.p;
  const double beta = std::exp(2.0 * rate);
  const double bm1 = beta - 1.0;
  if (!(bm1 > 0.0))
    throw std::domain_error("sp_exponent: rate too small, beta - 1 underflows");
  const double root = std::sqrt(1.0 + 4.0 * beta / (p * bm1));
  const double first = p / (4.0 * beta) * ((beta + 1.0) - bm1 * root);
  const double inside = beta - 0.5 * p * bm1 * (root - 1.0);
  if (!(inside > 0.0))
    throw std::domain_error("sp_exponent: log argument nonpositive");
  return first + 0.5 * std::log(inside);
}

double cone_angle(double rate, int n) {
  if (!(rate > 0.0)) throw std::domain_error("cone_angle: rate must be > 0");
  if (n < 2) throw std::invalid_argument("cone_angle: n >= 2");

  // Log form of the defining relation: residual(phi) =
  //   (n-1) ln sin(phi) - ln cos(phi) - (1/2) ln(2 pi n) + n R.
  // Solved in extended precision: at large nR the residual is a difference
  // of terms of size nR, and double rounding alone would exceed the 1e-12
  // residual contract.
  const long double nd = static_cast<long double>(n);
  const long double nr = nd * static_cast<long double>(rate);
  const long double half_log_2pin =
      0.5L * (1.83787706640934548356065947281123L + std::log(nd));
  auto res = [&](long double phi) {
    return (nd - 1.0L) * std::log(std::sin(phi)) - std::log(std::cos(phi)) -
           half_log_2pin + nr;
  };

  long double lo = 1e-14L;
  long double hi = 1.57079632679489661923L - 1e-14L;
  if (!(res(lo) < 0.0L) || !(res(hi) > 0.0L))
    throw std::domain_error("cone_angle: no root for this (rate, n)");
  // The residual is strictly increasing ((n-1) cot + tan > 0), so bisection
  // converges to the unique root; Newton polishing tightens it further.
  for (int it = 0; it < 80 && hi - lo > 1e-9L; ++it) {
    const long double mid = 0.5L * (lo + hi);
    (res(mid) < 0.0L ? lo : hi) = mid;
  }
  long double phi = 0.5L * (lo + hi);
  for (int it = 0; it < 20; ++it) {
    const long double r = res(phi);
    if (std::abs(static_cast<double>(r)) <= 1e-15) break;
    const long double slope = (nd - 1.0L) / std::tan(phi) + std::tan(phi);
    const long double next = phi - r / slope;
    if (!(next > 0.0L && next < 1.57079632679489661923L)) break;
    phi = next;
  }
  if (std::abs(static_cast<double>(res(phi))) > 1e-12)
    throw std::domain_error("cone_angle: root refinement failed");
  return static_cast<double>(phi);
}

double prefactor_exponent(double rate, SnrPoint snr, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("prefactor_exponent: h > 0");
  const double deriv =
      (sp_exponent(rate + h, snr) - sp_exponent(rate - h, snr)) / (2.0 * h);
  return 0.5 * (1.0 + std::abs(deriv));
}

ExponentPoint exponent_point(double rate, SnrPoint snr) {
  ExponentPoint pt;
  pt.rate = rate;
  pt.beta = std::exp(2.0 * rate);
  pt.phi = std::asin(std::exp(-rate));
  pt.e_of_r = sp_exponent(rate, snr);
  pt.f_of_phi = shannon_f(pt.phi, snr);
  return pt;
}

}  // namespace fbawgn::exponents
