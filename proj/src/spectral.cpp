#include "genads/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace genads {

namespace {
constexpr double kTwoPi = 6.28318530717958647692528676655900577;
}

ModeGrid::ModeGrid(int d, int K, double L) : d_(d), K_(K), L_(L) {
  if (d < 1) throw std::invalid_argument("ModeGrid: d must be >= 1");
  if (K <= 0 || K % 2 != 0)
    throw std::invalid_argument("ModeGrid: K must be a positive even integer, got " +
                                std::to_string(K));
  if (!(L > 0.0)) throw std::invalid_argument("ModeGrid: L must be positive");
  two_pi_over_l_ = kTwoPi / L;
  size_ = 1;
  for (int i = 0; i < d; ++i) size_ *= K;
  stride_.resize(d);
  stride_[d - 1] = 1;
  for (int i = d - 2; i >= 0; --i) stride_[i] = stride_[i + 1] * K;
  knorm_.resize(size_);
  for (int idx = 0; idx < size_; ++idx) {
    double s = 0.0;
    for (int ax = 0; ax < d; ++ax) {
      const double k = k_component(idx, ax);
      s += k * k;
    }
    knorm_[idx] = std::sqrt(s);
  }
  // m = 0 on every axis.
  zero_index_ = 0;
  for (int ax = 0; ax < d; ++ax) zero_index_ += (K / 2) * stride_[ax];
}

int ModeGrid::mode_component(int idx, int axis) const {
  return (idx / stride_[axis]) % K_ - K_ / 2;
}

int ModeGrid::negated_index(int idx) const {
  int out = 0;
  for (int ax = 0; ax < d_; ++ax) {
    const int m = mode_component(idx, ax);
    if (m == -K_ / 2) return -1;  // Nyquist row, -m off grid
    out += (-m + K_ / 2) * stride_[ax];
  }
  return out;
}

BoundarySource encode_point(const ModeGrid& grid,
                            std::span<const double> x_star) {
  if (static_cast<int>(x_star.size()) != grid.dim())
    throw std::invalid_argument("encode_point: x_star dimension mismatch");
  const double half = 0.5 * grid.box_length();
  for (double xi : x_star)
    if (!(xi >= -half && xi < half))
      throw std::domain_error("encode_point: point component " +
                              std::to_string(xi) + " outside [-L/2, L/2)");
  const double norm = std::pow(kTwoPi, -0.5 * grid.dim());
  BoundarySource src;
  src.j.resize(grid.size());
  for (int idx = 0; idx < grid.size(); ++idx) {
    double phase = 0.0;
    for (int ax = 0; ax < grid.dim(); ++ax)
      phase += grid.k_component(idx, ax) * x_star[ax];
    src.j[idx] = norm * cdouble(std::cos(phase), std::sin(phase));
  }
  return src;
}

BoundarySource encode_image(const ModeGrid& grid,
                            std::span<const double> pixels) {
  if (grid.dim() != 2)
    throw std::invalid_argument("encode_image: requires a d = 2 grid");
  const int K = grid.modes_per_axis();
  if (static_cast<int>(pixels.size()) != K * K)
    throw std::invalid_argument(
        "encode_image: expected " + std::to_string(K * K) + " pixels (" +
        std::to_string(K) + "x" + std::to_string(K) + "), got " +
        std::to_string(pixels.size()));
  const double dx = grid.dx();
  const double norm = dx * dx / kTwoPi;  // (dx)^d (2 pi)^{-d/2}, d = 2
  // Separable phase table: E[m][n] = exp(i k_m x_n) per axis.
  std::vector<cdouble> E(K * K);
  for (int mi = 0; mi < K; ++mi) {
    const double k = kTwoPi / grid.box_length() * (mi - K / 2);
    for (int n = 0; n < K; ++n) {
      const double ph = k * grid.lattice_coord(n);
      E[mi * K + n] = cdouble(std::cos(ph), std::sin(ph));
    }
  }
  // Contract rows first: T[m0][n1] = sum_n0 E[m0][n0] J[n0][n1].
  std::vector<cdouble> T(K * K, cdouble(0.0, 0.0));
  for (int m0 = 0; m0 < K; ++m0)
    for (int n0 = 0; n0 < K; ++n0) {
      const cdouble e = E[m0 * K + n0];
      const double* row = pixels.data() + n0 * K;
      cdouble* trow = T.data() + m0 * K;
      for (int n1 = 0; n1 < K; ++n1) trow[n1] += e * row[n1];
    }
  BoundarySource src;
  src.j.assign(grid.size(), cdouble(0.0, 0.0));
  for (int m0 = 0; m0 < K; ++m0)
    for (int m1 = 0; m1 < K; ++m1) {
      cdouble acc(0.0, 0.0);
      const cdouble* trow = T.data() + m0 * K;
      for (int n1 = 0; n1 < K; ++n1) acc += E[m1 * K + n1] * trow[n1];
      src.j[m0 * K + m1] = norm * acc;
    }
  return src;
}

std::vector<double> inverse_transform(const ModeGrid& grid,
                                      const BoundarySource& src) {
  if (static_cast<int>(src.j.size()) != grid.size())
    throw std::invalid_argument("inverse_transform: source size mismatch");
  const int d = grid.dim();
  const double norm =
      std::pow(kTwoPi, 0.5 * d) / std::pow(grid.box_length(), d);
  const int K = grid.modes_per_axis();
  std::vector<double> out;
  if (d == 2) {
    // Separable contraction, conjugate phases.
    std::vector<cdouble> E(K * K);
    for (int mi = 0; mi < K; ++mi) {
      const double k = kTwoPi / grid.box_length() * (mi - K / 2);
      for (int n = 0; n < K; ++n) {
        const double ph = -k * grid.lattice_coord(n);
        E[mi * K + n] = cdouble(std::cos(ph), std::sin(ph));
      }
    }
    std::vector<cdouble> T(K * K, cdouble(0.0, 0.0));  // T[n0][m1]
    for (int n0 = 0; n0 < K; ++n0)
      for (int m0 = 0; m0 < K; ++m0) {
        const cdouble e = E[m0 * K + n0];
        const cdouble* jrow = src.j.data() + m0 * K;
        cdouble* trow = T.data() + n0 * K;
        for (int m1 = 0; m1 < K; ++m1) trow[m1] += e * jrow[m1];
      }
    out.assign(K * K, 0.0);
    for (int n0 = 0; n0 < K; ++n0)
      for (int n1 = 0; n1 < K; ++n1) {
        cdouble acc(0.0, 0.0);
        const cdouble* trow = T.data() + n0 * K;
        for (int m1 = 0; m1 < K; ++m1) acc += E[m1 * K + n1] * trow[m1];
        out[n0 * K + n1] = norm * acc.real();
      }
    return out;
  }
  // Generic-d direct sum.
  out.assign(grid.size(), 0.0);
  std::vector<int> node(d, 0);
  for (int n = 0; n < grid.size(); ++n) {
    int rem = n;
    for (int ax = d - 1; ax >= 0; --ax) {
      node[ax] = rem % K;
      rem /= K;
    }
    cdouble acc(0.0, 0.0);
    for (int idx = 0; idx < grid.size(); ++idx) {
      double phase = 0.0;
      for (int ax = 0; ax < d; ++ax)
        phase -= grid.k_component(idx, ax) * grid.lattice_coord(node[ax]);
      acc += cdouble(std::cos(phase), std::sin(phase)) * src.j[idx];
    }
    out[n] = norm * acc.real();
  }
  return out;
}

FieldState sample_base(const ModeGrid& grid, const BaseParams& params,
                       Rng& rng) {
  if (!(params.c_phi > 0.0 && params.c_pi > 0.0))
    throw std::invalid_argument("sample_base: c_phi and c_pi must be positive");
  FieldState state(grid.size());
  const double inv_sqrt2 = 0.70710678118654752440084436210484904;
  for (int idx = 0; idx < grid.size(); ++idx) {
    const double k2 = grid.knorm_sq(idx);
    const double sig_phi =
        std::sqrt(params.c_phi * std::pow(1.0 + k2, -params.s_phi));
    const double sig_pi =
        std::sqrt(params.c_pi * std::pow(1.0 + k2, -params.s_pi));
    if (idx == grid.zero_mode_index()) {
      state.phi[idx] = cdouble(sig_phi * rng.normal(), 0.0);
      state.pi[idx] = cdouble(sig_pi * rng.normal(), 0.0);
    } else {
      const double sp = sig_phi * inv_sqrt2;
      state.phi[idx] = cdouble(sp * rng.normal(), sp * rng.normal());
      const double spi = sig_pi * inv_sqrt2;
      state.pi[idx] = cdouble(spi * rng.normal(), spi * rng.normal());
    }
  }
  return state;
}

double weighted_norm_sq(const Background& bg, double r,
                        std::span<const cdouble> a_phi,
                        std::span<const cdouble> a_pi) {
  if (a_phi.size() != a_pi.size())
    throw std::invalid_argument("weighted_norm_sq: component size mismatch");
  const double w = std::pow(warp(bg, r), bg.d);
  double s = 0.0;
  for (size_t i = 0; i < a_phi.size(); ++i)
    s += std::norm(a_phi[i]) + std::norm(a_pi[i]);
  return w * s;
}

}  // namespace genads
