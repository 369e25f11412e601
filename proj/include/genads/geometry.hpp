//==============================================================================
// geometry.hpp
// Bulk backgrounds and radial parameterizations. Planar AdS has warp
// f(r) = e^r with cutoffs r_ir < r_uv; the hyperscaling-violating (HSV)
// family has f(r) = (p r)^(-gamma), gamma = 1/p - 1, boundary at r = 0 and
// cutoffs 0 < r_uv < r_ir (stored after conversion from z-coordinates via
// r = z^p / p). The flow time t in [0, 1] maps affinely onto [r_ir, r_uv],
// and u(r) is the volume-weighted affine parameter used by the Hermite path.
//==============================================================================
#pragma once

namespace genads {

enum class GeometryKind { PlanarAdS, Hsv };

struct Background {
  GeometryKind kind = GeometryKind::PlanarAdS;
  int d = 2;           // boundary dimension
  double delta = 1.5;  // scaling dimension (planar only)
  double p = 1.0;      // interpolation parameter (HSV only)
  double r_ir = 0.0;
  double r_uv = 1.0;

  // delta > d/2, r_uv > r_ir.
  static Background planar_ads(int d, double delta, double r_ir, double r_uv);
  // 0 < p <= 1; cutoffs given in the z coordinate with z_uv < z_ir.
  static Background hsv(int d, double p, double z_ir, double z_uv);

  double nu() const { return delta - 0.5 * d; }            // planar order
  double hsv_gamma() const { return 1.0 / p - 1.0; }
  double delta_r() const { return r_uv - r_ir; }           // signed for HSV
  double r_min() const { return r_ir < r_uv ? r_ir : r_uv; }
  double r_max() const { return r_ir < r_uv ? r_uv : r_ir; }
  double mass_squared() const { return delta * (delta - d); }
};

// Warp factor f(r) > 0. HSV with r <= 0 is a coordinate singularity.
double warp(const Background& bg, double r);

// r(t) = (r_uv - r_ir) t + r_ir for t in [0, 1].
double r_of_t(const Background& bg, double t);

// Volume-affine parameter: u(r_ir) = 0, u(r_uv) = 1, strictly monotone in r.
double u_of_r(const Background& bg, double r);

struct UDerivs {
  double du_dr = 0.0;
  double d2u_dr2 = 0.0;
};
UDerivs u_derivs(const Background& bg, double r);

}  // namespace genads
