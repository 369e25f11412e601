//==============================================================================
// specfun.hpp
// Real-order special functions used by the propagator formulas: Gamma(x) for
// x > 0 and the modified Bessel function of the second kind K_nu(x).
//==============================================================================
#pragma once

namespace genads::specfun {

// Gamma(x) for x > 0 via a fixed-coefficient Lanczos rational approximation.
// Relative error below 1e-13 on (0, 50]. Throws std::domain_error for
// non-finite or non-positive input.
double gamma(double x);

struct BesselResult {
  double value = 0.0;  // K_nu(x), or exp(x)*K_nu(x) when scaled
  bool scaled = false; // true when exp(-x) would underflow the plain value
};

// K_nu(x) for nu >= 0, x > 0. Temme series for x <= 2, Thompson-Barnett
// continued fraction above, upward recurrence in the order. Relative error
// below 1e-10 for nu in [0, 5], x in [1e-6, 50].
BesselResult bessel_k(double nu, double x);

// exp(x) * K_nu(x); finite for arbitrarily large x.
double bessel_k_scaled(double nu, double x);

// C_Delta = Gamma(Delta) / (pi^(d/2) Gamma(Delta - d/2)); requires
// delta > d/2 (standard quantization).
double c_delta(double delta, int d);

}  // namespace genads::specfun
