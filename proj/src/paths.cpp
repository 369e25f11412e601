#include "genads/paths.hpp"

#include <cmath>
#include <stdexcept>

namespace genads {

namespace {

void check_pair(const ModeGrid& grid, const FieldState& s, const char* who) {
  if (s.size() != grid.size() ||
      s.phi.size() != s.pi.size())
    throw std::invalid_argument(std::string(who) + ": state size mismatch");
}

}  // namespace

VelocityPair kg_velocity(const Background& bg, const ModeGrid& grid,
                         const FieldState& state, double r) {
  check_pair(grid, state, "kg_velocity");
  VelocityPair v(grid.size());
  if (bg.kind == GeometryKind::PlanarAdS) {
    const double damp = std::exp(-2.0 * r);
    const double friction = 2.0 * bg.delta - bg.d;
    for (int i = 0; i < grid.size(); ++i) {
      v.phi[i] = state.pi[i];
      v.pi[i] = grid.knorm_sq(i) * damp * state.phi[i] - friction * state.pi[i];
    }
    return v;
  }
  if (!(r > 0.0))
    throw std::domain_error("kg_velocity: HSV coordinate singularity at r <= 0");
  const double g = bg.hsv_gamma();
  const double pw = std::pow(bg.p * r, 2.0 * g);
  const double friction = bg.d * g / r;
  for (int i = 0; i < grid.size(); ++i) {
    v.phi[i] = state.pi[i];
    v.pi[i] = pw * grid.knorm_sq(i) * state.phi[i] + friction * state.pi[i];
  }
  return v;
}

HermiteBasis hermite_basis(double u) {
  const double u2 = u * u, u3 = u2 * u;
  HermiteBasis b;
  b.h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  b.h01 = -2.0 * u3 + 3.0 * u2;
  b.h10 = u3 - 2.0 * u2 + u;
  b.h11 = u3 - u2;
  b.d00 = 6.0 * u2 - 6.0 * u;
  b.d01 = -6.0 * u2 + 6.0 * u;
  b.d10 = 3.0 * u2 - 4.0 * u + 1.0;
  b.d11 = 3.0 * u2 - 2.0 * u;
  b.dd00 = 12.0 * u - 6.0;
  b.dd01 = -12.0 * u + 6.0;
  b.dd10 = 6.0 * u - 4.0;
  b.dd11 = 6.0 * u - 2.0;
  return b;
}

PathTarget linear_path(const ModeGrid& grid, const FieldState& s0,
                       const FieldState& s1, double t) {
  check_pair(grid, s0, "linear_path");
  check_pair(grid, s1, "linear_path");
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("linear_path: t outside [0, 1]");
  PathTarget path;
  path.t = t;
  path.state = FieldState(grid.size());
  path.target = VelocityPair(grid.size());
  const double a = 1.0 - t;
  for (int i = 0; i < grid.size(); ++i) {
    path.state.phi[i] = a * s0.phi[i] + t * s1.phi[i];
    path.state.pi[i] = a * s0.pi[i] + t * s1.pi[i];
    path.target.phi[i] = s1.phi[i] - s0.phi[i];
    path.target.pi[i] = s1.pi[i] - s0.pi[i];
  }
  return path;
}

PathTarget hermite_path(const Background& bg, const ModeGrid& grid,
                        const FieldState& s0, const FieldState& s1, double t) {
  check_pair(grid, s0, "hermite_path");
  check_pair(grid, s1, "hermite_path");
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("hermite_path: t outside [0, 1]");
  const double delta_r = bg.delta_r();
  const double r = r_of_t(bg, t);
  const double u = u_of_r(bg, r);
  const auto du = u_derivs(bg, r);
  const double dr_du_ir = 1.0 / u_derivs(bg, bg.r_ir).du_dr;
  const double dr_du_uv = 1.0 / u_derivs(bg, bg.r_uv).du_dr;
  const auto b = hermite_basis(u);

  PathTarget path;
  path.t = t;
  path.on_shell = true;
  path.state = FieldState(grid.size());
  path.target = VelocityPair(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const cdouble m0 = dr_du_ir * s0.pi[i];
    const cdouble m1 = dr_du_uv * s1.pi[i];
    const cdouble phi_u = b.h00 * s0.phi[i] + b.h01 * s1.phi[i] +
                          b.h10 * m0 + b.h11 * m1;
    const cdouble dphi_du = b.d00 * s0.phi[i] + b.d01 * s1.phi[i] +
                            b.d10 * m0 + b.d11 * m1;
    const cdouble d2phi_du2 = b.dd00 * s0.phi[i] + b.dd01 * s1.phi[i] +
                              b.dd10 * m0 + b.dd11 * m1;
    path.state.phi[i] = phi_u;
    path.state.pi[i] = du.du_dr * dphi_du;  // Pi_t = d Phi_t / dr
    path.target.phi[i] = delta_r * path.state.pi[i];
    path.target.pi[i] =
        delta_r * (du.du_dr * du.du_dr * d2phi_du2 + du.d2u_dr2 * dphi_du);
  }
  return path;
}

void attach_backbone(const Background& bg, const ModeGrid& grid,
                     PathTarget& path) {
  const double r = r_of_t(bg, path.t);
  auto v = kg_velocity(bg, grid, path.state, r);
  const double delta_r = bg.delta_r();
  for (int i = 0; i < grid.size(); ++i) {
    v.phi[i] *= delta_r;
    v.pi[i] *= delta_r;
  }
  path.backbone = std::move(v);
}

VelocityPair residual_target(const PathTarget& path) {
  if (path.backbone.size() != path.target.size())
    throw std::invalid_argument(
        "residual_target: backbone not attached or size mismatch");
  VelocityPair res(path.target.size());
  double max_phi = 0.0;
  double scale = 1.0;
  for (int i = 0; i < path.target.size(); ++i) {
    res.phi[i] = path.target.phi[i] - path.backbone.phi[i];
    res.pi[i] = path.target.pi[i] - path.backbone.pi[i];
    max_phi = std::max(max_phi, std::abs(res.phi[i]));
    scale = std::max(scale, std::abs(path.target.phi[i]));
  }
  if (path.on_shell) {
    if (max_phi > 1e-10 * scale)
      throw std::logic_error(
          "residual_target: on-shell path produced a nonzero phi residual (" +
          std::to_string(max_phi) + ")");
    for (auto& z : res.phi) z = cdouble(0.0, 0.0);
  }
  return res;
}

}  // namespace genads
