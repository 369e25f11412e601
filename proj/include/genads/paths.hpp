//==============================================================================
// paths.hpp
// Training paths in phase space and their target velocities. All velocities
// are d/dt quantities for the compact time t in [0, 1], r(t) affine.
//
// Linear path: S_t = (1-t) S0 + t S1 with target U = S1 - S0 (the exact
// t-derivative of the path; the delta_r prefactor some conventions attach to
// the linear targets is a units choice, and the sampler composes velocities
// with the same convention used here, so generation is invariant to it).
//
// Hermite path: the field component is the cubic Hermite interpolant in the
// volume-affine parameter u(r), with endpoint slopes matched to the momenta;
// the momentum component is its exact r-derivative, so the first Klein-Gordon
// equation holds along the path by construction.
//==============================================================================
#pragma once

#include <span>
#include <vector>

#include "genads/geometry.hpp"
#include "genads/spectral.hpp"

namespace genads {

struct VelocityPair {
  std::vector<cdouble> phi;
  std::vector<cdouble> pi;

  VelocityPair() = default;
  explicit VelocityPair(int n) : phi(n), pi(n) {}
  int size() const { return static_cast<int>(phi.size()); }
};

struct PathTarget {
  double t = 0.0;
  FieldState state;      // S_t
  VelocityPair target;   // U_t
  VelocityPair backbone; // delta_r * V_KG(S_t, r(t)); empty until attached
  bool on_shell = false; // true for Hermite paths (phi-residual vanishes)
};

// First-order Klein-Gordon velocity V_KG(S, r), per mode and linear in S.
// Planar (stabilized): (pi, |k|^2 e^{-2r} phi - (2 Delta - d) pi).
// HSV (massless):      (pi, (p r)^{2 gamma} |k|^2 phi + (d gamma / r) pi).
VelocityPair kg_velocity(const Background& bg, const ModeGrid& grid,
                         const FieldState& state, double r);

PathTarget linear_path(const ModeGrid& grid, const FieldState& s0,
                       const FieldState& s1, double t);

PathTarget hermite_path(const Background& bg, const ModeGrid& grid,
                        const FieldState& s0, const FieldState& s1, double t);

// Populates path.backbone = delta_r * V_KG(S_t, r(t)).
void attach_backbone(const Background& bg, const ModeGrid& grid,
                     PathTarget& path);

// U_t - delta_r * V_KG. Requires an attached backbone. For on-shell (Hermite)
// paths the phi component is asserted to vanish and returned as exact zero.
VelocityPair residual_target(const PathTarget& path);

// Cubic Hermite basis and derivatives; exposed for tests.
struct HermiteBasis {
  double h00, h01, h10, h11;
  double d00, d01, d10, d11;     // d/du
  double dd00, dd01, dd10, dd11; // d^2/du^2
};
HermiteBasis hermite_basis(double u);

}  // namespace genads
