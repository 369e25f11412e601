//==============================================================================
// spectral.hpp
// Discretized momentum lattice and the transforms between position-space
// sources and mode coefficients. Modes are indexed row-major over the integer
// vectors m in {-K/2, ..., K/2-1}^d (last axis fastest), with momenta
// k_i = 2 pi m_i / L. The position lattice is cell-centered:
// x_i(n) = -L/2 + (n + 1/2) L/K. Conventions:
//   encode:  j_k = (dx)^d (2 pi)^(-d/2) sum_n exp(+i k.x_n) J(x_n)
//   inverse: J(x_n) = (2 pi)^(d/2) L^(-d) Re sum_k exp(-i k.x_n) j_k
// which round-trip exactly on the lattice.
//==============================================================================
#pragma once

#include <complex>
#include <span>
#include <vector>

#include "genads/geometry.hpp"
#include "genads/rng.hpp"

namespace genads {

using cdouble = std::complex<double>;

class ModeGrid {
 public:
  // K must be even and positive; L > 0; d >= 1.
  ModeGrid(int d, int K, double L);

  int dim() const { return d_; }
  int modes_per_axis() const { return K_; }
  double box_length() const { return L_; }
  int size() const { return size_; }          // K^d
  double dx() const { return L_ / K_; }

  // Integer mode component m_i of the flat index, in [-K/2, K/2-1].
  int mode_component(int idx, int axis) const;
  // Momentum component 2 pi m_i / L.
  double k_component(int idx, int axis) const {
    return two_pi_over_l_ * mode_component(idx, axis);
  }
  double knorm(int idx) const { return knorm_[idx]; }
  double knorm_sq(int idx) const { return knorm_[idx] * knorm_[idx]; }
  int zero_mode_index() const { return zero_index_; }

  // Flat index of -m, or -1 when any component sits on the Nyquist row
  // (m_i = -K/2 has no negation on the grid).
  int negated_index(int idx) const;

  // Cell-centered lattice coordinate for node index n in [0, K).
  double lattice_coord(int n) const { return -0.5 * L_ + (n + 0.5) * dx(); }

 private:
  int d_, K_, size_, zero_index_;
  double L_, two_pi_over_l_;
  std::vector<double> knorm_;
  std::vector<int> stride_;
};

struct FieldState {
  std::vector<cdouble> phi;  // mode coefficients of the (stabilized) field
  std::vector<cdouble> pi;   // mode coefficients of the radial momentum

  FieldState() = default;
  explicit FieldState(int n) : phi(n), pi(n) {}
  int size() const { return static_cast<int>(phi.size()); }
};

struct BoundarySource {
  std::vector<cdouble> j;
};

// Gaussian base distribution: per-mode variance c (1 + |k|^2)^(-s).
struct BaseParams {
  double c_phi = 1.0;
  double c_pi = 0.55;
  double s_phi = 1.0;
  double s_pi = 1.0;
};

// Delta source at x_star in [-L/2, L/2)^d: j_k = exp(i k.x_star)/(2 pi)^(d/2).
BoundarySource encode_point(const ModeGrid& grid,
                            std::span<const double> x_star);

// Pixel-intensity source on the lattice; pixels is row-major K x K (d = 2).
BoundarySource encode_image(const ModeGrid& grid,
                            std::span<const double> pixels);

// Real position-space source on the lattice (exact inverse of encode_image).
std::vector<double> inverse_transform(const ModeGrid& grid,
                                      const BoundarySource& src);

// Draw a phase-space point from the base distribution. Complex modes get
// independent N(0, sigma^2/2) real and imaginary parts so E|phi_k|^2 = sigma^2;
// the m = 0 mode is real with full variance. Draw order per mode:
// phi then pi, modes ascending.
FieldState sample_base(const ModeGrid& grid, const BaseParams& params,
                       Rng& rng);

// sum_k f(r)^d (|a_phi_k|^2 + |a_pi_k|^2).
double weighted_norm_sq(const Background& bg, double r,
                        std::span<const cdouble> a_phi,
                        std::span<const cdouble> a_pi);

}  // namespace genads
