#include "genads/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace genads {

namespace {

// Interval checks tolerate O(eps)-scale excursions from FD probes and
// round-tripped endpoints.
constexpr double kEdgeTol = 1e-9;

void check_r_in_cutoffs(const Background& bg, double r, const char* who) {
  const double lo = bg.r_min(), hi = bg.r_max();
  const double tol = kEdgeTol * (1.0 + std::abs(lo) + std::abs(hi));
  if (!(r >= lo - tol && r <= hi + tol))
    throw std::domain_error(std::string(who) + ": r=" + std::to_string(r) +
                            " outside cutoff interval [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "]");
}

}  // namespace

Background Background::planar_ads(int d, double delta, double r_ir,
                                  double r_uv) {
  if (d < 1) throw std::invalid_argument("Background: d must be >= 1");
  if (!(delta > 0.5 * d))
    throw std::invalid_argument(
        "Background: planar AdS requires delta > d/2 (standard quantization), "
        "got delta=" + std::to_string(delta) + ", d=" + std::to_string(d));
  if (!(r_uv > r_ir))
    throw std::invalid_argument("Background: planar AdS requires r_uv > r_ir");
  Background bg;
  bg.kind = GeometryKind::PlanarAdS;
  bg.d = d;
  bg.delta = delta;
  bg.r_ir = r_ir;
  bg.r_uv = r_uv;
  return bg;
}

Background Background::hsv(int d, double p, double z_ir, double z_uv) {
  if (d < 1) throw std::invalid_argument("Background: d must be >= 1");
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument("Background: HSV requires p in (0, 1], got " +
                                std::to_string(p));
  if (!(z_uv > 0.0 && z_ir > z_uv))
    throw std::invalid_argument(
        "Background: HSV requires z_ir > z_uv > 0 (boundary at z = 0)");
  Background bg;
  bg.kind = GeometryKind::Hsv;
  bg.d = d;
  bg.p = p;
  bg.r_ir = std::pow(z_ir, p) / p;
  bg.r_uv = std::pow(z_uv, p) / p;  // r_uv < r_ir follows from z_uv < z_ir
  return bg;
}

double warp(const Background& bg, double r) {
  if (bg.kind == GeometryKind::PlanarAdS) return std::exp(r);
  if (!(r > 0.0))
    throw std::domain_error("warp: HSV coordinate singularity at r <= 0");
  return std::pow(bg.p * r, -bg.hsv_gamma());
}

double r_of_t(const Background& bg, double t) {
  if (!(t >= -kEdgeTol && t <= 1.0 + kEdgeTol))
    throw std::domain_error("r_of_t: t=" + std::to_string(t) +
                            " outside [0, 1]");
  return bg.delta_r() * t + bg.r_ir;
}

double u_of_r(const Background& bg, double r) {
  check_r_in_cutoffs(bg, r, "u_of_r");
  if (bg.kind == GeometryKind::PlanarAdS) {
    // (1 - e^{-d(r - r_ir)}) / (1 - e^{-d(r_uv - r_ir)})
    return std::expm1(-bg.d * (r - bg.r_ir)) /
           std::expm1(-bg.d * bg.delta_r());
  }
  const double a = bg.d * bg.hsv_gamma() + 1.0;
  const double den = std::pow(bg.r_ir, a) - std::pow(bg.r_uv, a);
  return (std::pow(bg.r_ir, a) - std::pow(r, a)) / den;
}

UDerivs u_derivs(const Background& bg, double r) {
  check_r_in_cutoffs(bg, r, "u_derivs");
  UDerivs out;
  if (bg.kind == GeometryKind::PlanarAdS) {
    const double den = -std::expm1(-bg.d * bg.delta_r());
    out.du_dr = bg.d * std::exp(-bg.d * (r - bg.r_ir)) / den;
    out.d2u_dr2 = -bg.d * out.du_dr;
    return out;
  }
  const double a = bg.d * bg.hsv_gamma() + 1.0;
  const double den = std::pow(bg.r_ir, a) - std::pow(bg.r_uv, a);
  out.du_dr = -a * std::pow(r, a - 1.0) / den;
  out.d2u_dr2 = -a * (a - 1.0) * std::pow(r, a - 2.0) / den;
  return out;
}

}  // namespace genads
