#include "genads/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "genads/specfun.hpp"

namespace genads {

namespace {

// Below this the small-argument limit kappa = 1, dkappa/dr = 0 is exact to
// double precision for the orders used here.
constexpr double kTinyArg = 1e-12;

}  // namespace

PropagatorEval kappa_ads(const Background& bg, double knorm, double r) {
  const double nu = bg.nu();
  if (!(nu > 0.0))
    throw std::domain_error("kappa_ads: requires nu = delta - d/2 > 0");
  const double x = knorm * std::exp(-r);
  if (x < kTinyArg) return {1.0, 0.0};
  const double gnu = specfun::gamma(nu);
  const double pw = std::pow(0.5 * x, nu);
  PropagatorEval out;
  out.kappa = 2.0 / gnu * pw * specfun::bessel_k(nu, x).value;
  out.dkappa_dr =
      4.0 / gnu * pw * (0.5 * x) * specfun::bessel_k(std::abs(nu - 1.0), x).value;
  return out;
}

PropagatorEval kappa_hsv(const Background& bg, double knorm, double r) {
  if (!(r > 0.0))
    throw std::domain_error("kappa_hsv: HSV coordinate singularity at r <= 0");
  const double beta = 0.5 * (1.0 + (bg.d - 1) * (1.0 - bg.p));
  const double z = std::pow(bg.p * r, 1.0 / bg.p);
  const double w = z * knorm;
  if (w < kTinyArg) return {1.0, 0.0};
  const double norm = std::pow(2.0, beta - 1.0) * specfun::gamma(beta);
  PropagatorEval out;
  out.kappa = std::pow(w, beta) * specfun::bessel_k(beta, w).value / norm;
  out.dkappa_dr = -std::pow(w, beta + 1.0) *
                  specfun::bessel_k(std::abs(beta - 1.0), w).value /
                  (norm * bg.p * r);
  return out;
}

PropagatorEval kappa_mode(const Background& bg, double knorm, double r) {
  return bg.kind == GeometryKind::PlanarAdS ? kappa_ads(bg, knorm, r)
                                            : kappa_hsv(bg, knorm, r);
}

std::vector<PropagatorEval> propagator_table(const Background& bg,
                                             const ModeGrid& grid, double r) {
  std::vector<PropagatorEval> table(grid.size());
  for (int idx = 0; idx < grid.size(); ++idx)
    table[idx] = kappa_mode(bg, grid.knorm(idx), r);
  return table;
}

FieldState boundary_data(std::span<const PropagatorEval> table,
                         const BoundarySource& src) {
  if (table.size() != src.j.size())
    throw std::invalid_argument("boundary_data: table/source size mismatch");
  FieldState state(static_cast<int>(src.j.size()));
  for (size_t i = 0; i < src.j.size(); ++i) {
    state.phi[i] = src.j[i] * table[i].kappa;
    state.pi[i] = src.j[i] * table[i].dkappa_dr;
  }
  return state;
}

FieldState boundary_data(const Background& bg, const ModeGrid& grid,
                         const BoundarySource& src) {
  if (static_cast<int>(src.j.size()) != grid.size())
    throw std::invalid_argument("boundary_data: grid/source size mismatch");
  const auto table = propagator_table(bg, grid, bg.r_uv);
  return boundary_data(table, src);
}

double verify_mode_ode(const Background& bg, double knorm,
                       std::span<const double> r_samples) {
  if (knorm == 0.0) return 0.0;  // constant solution, residual identically 0

  const auto rhs_pi = [&](double kap, double dkap, double r) {
    if (bg.kind == GeometryKind::PlanarAdS)
      return knorm * knorm * std::exp(-2.0 * r) * kap -
             (2.0 * bg.delta - bg.d) * dkap;
    const double g = bg.hsv_gamma();
    return std::pow(bg.p * r, 2.0 * g) * knorm * knorm * kap +
           bg.d * g / r * dkap;
  };

  const double h = 1e-3;
  double max_resid = 0.0;
  double scale = 0.0;
  for (double r : r_samples) {
    double kap[5], dkap[5];
    for (int i = -2; i <= 2; ++i) {
      const auto eval = kappa_mode(bg, knorm, r + i * h);
      kap[i + 2] = eval.kappa;
      dkap[i + 2] = eval.dkappa_dr;
    }
    // Five-point first derivative: (-f2 + 8 f1 - 8 f-1 + f-2) / (12 h).
    const double fd_kappa =
        (-kap[4] + 8.0 * kap[3] - 8.0 * kap[1] + kap[0]) / (12.0 * h);
    const double fd_dkappa =
        (-dkap[4] + 8.0 * dkap[3] - 8.0 * dkap[1] + dkap[0]) / (12.0 * h);
    const double r1 = std::abs(fd_kappa - dkap[2]);
    const double r2 = std::abs(fd_dkappa - rhs_pi(kap[2], dkap[2], r));
    max_resid = std::max(max_resid, std::max(r1, r2));
    scale = std::max({scale, std::abs(kap[2]), std::abs(dkap[2])});
  }
  return max_resid / std::max(scale, 1e-300);
}

}  // namespace genads
