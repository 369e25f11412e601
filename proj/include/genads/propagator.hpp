//==============================================================================
// propagator.hpp
// Closed-form mode coefficients of the bulk-to-boundary propagator and their
// radial derivatives. Planar AdS uses the stabilized coefficient
//   kappa~(r) = (2/Gamma(nu)) (x/2)^nu K_nu(x),   x = |k| e^{-r},
//   d kappa~/dr = (4/Gamma(nu)) (x/2)^{nu+1} K_{nu-1}(x),
// with nu = Delta - d/2 > 0. The massless HSV coefficient is
//   kappa(r) = (z|k|)^beta K_beta(z|k|) / (2^{beta-1} Gamma(beta)),
//   z = (p r)^{1/p},  beta = (1 + (d-1)(1-p)) / 2,
// with d kappa/dr = -(z|k|)^{beta+1} K_{beta-1}(z|k|) / (2^{beta-1} Gamma(beta) p r).
// Both normalize to 1 as the boundary is approached and at k = 0.
//==============================================================================
#pragma once

#include <span>
#include <vector>

#include "genads/geometry.hpp"
#include "genads/spectral.hpp"

namespace genads {

struct PropagatorEval {
  double kappa = 1.0;
  double dkappa_dr = 0.0;
};

PropagatorEval kappa_ads(const Background& bg, double knorm, double r);
PropagatorEval kappa_hsv(const Background& bg, double knorm, double r);

// Dispatch on the background kind.
PropagatorEval kappa_mode(const Background& bg, double knorm, double r);

// Per-mode evaluations at a fixed radius, cached for reuse across samples.
std::vector<PropagatorEval> propagator_table(const Background& bg,
                                             const ModeGrid& grid, double r);

// Endpoint training data: phi_k = j_k kappa(r_uv), pi_k = j_k dkappa/dr(r_uv).
FieldState boundary_data(const Background& bg, const ModeGrid& grid,
                         const BoundarySource& src);
FieldState boundary_data(std::span<const PropagatorEval> table,
                         const BoundarySource& src);

// Plugs the closed forms into the first-order mode system and returns the
// maximum residual of both equations over r_samples, using O(h^4) central
// differences and normalizing by the largest |kappa|, |dkappa/dr| seen.
double verify_mode_ode(const Background& bg, double knorm,
                       std::span<const double> r_samples);

}  // namespace genads
