#pragma once

#include "fbawgn/types.hpp"

namespace fbawgn::exponents {

// Rate tied to a cone half-angle: -ln sin(phi).
double rate_from_angle(double phi);

// G(phi) = (sqrt(P) cos phi + sqrt(P cos^2 phi + 4)) / 2.
double shannon_g(double phi, SnrPoint snr);

// F(phi) = P/2 - sqrt(P) G cos(phi)/2 - ln(G sin phi), for phi in (0, pi/2].
double shannon_f(double phi, SnrPoint snr);

// Sphere-packing exponent E(R) at beta = e^{2R}; singular at rate 0 and
// zero at rate = capacity.
double sp_exponent(double rate, SnrPoint snr);

// Solves exp(-nR) = sin^n(phi) / (sqrt(2 pi n) sin phi cos phi) for the cone
// half-angle; the log-domain residual of the returned root is <= 1e-12.
double cone_angle(double rate, int n);

// (1 + |E'(R)|)/2 with E' by central finite difference at step h.
double prefactor_exponent(double rate, SnrPoint snr, double h = 1e-4);

struct ExponentPoint {
  double rate = 0.0;    // nats per use
  double phi = 0.0;     // cone half-angle
  double e_of_r = 0.0;  // sphere-packing exponent at rate
  double f_of_phi = 0.0;
  double beta = 0.0;    // exp(2 rate)
};

// Convenience bundle evaluated from a rate (phi = arcsin e^{-R}).
ExponentPoint exponent_point(double rate, SnrPoint snr);

}  // namespace fbawgn::exponents
