#include "genads/sampler.hpp"

#include <cmath>
#include <complex>

namespace genads {

namespace {

constexpr double kKappaFloor = 1e-12;
constexpr double kTwoPi = 6.28318530717958647692528676655900577;

void axpy(FieldState& y, double a, const VelocityPair& x) {
  for (size_t i = 0; i < y.phi.size(); ++i) {
    y.phi[i] += a * x.phi[i];
    y.pi[i] += a * x.pi[i];
  }
}

void check_finite(const FieldState& s, int step) {
  for (size_t i = 0; i < s.phi.size(); ++i)
    if (!std::isfinite(s.phi[i].real()) || !std::isfinite(s.phi[i].imag()) ||
        !std::isfinite(s.pi[i].real()) || !std::isfinite(s.pi[i].imag()))
      throw NumericError("integrate: non-finite state at step " +
                         std::to_string(step) + ", mode " + std::to_string(i));
}

FieldState shifted(const FieldState& s, double a, const VelocityPair& v) {
  FieldState out = s;
  axpy(out, a, v);
  return out;
}

}  // namespace

FieldState integrate(const FlowContext& ctx, const ParamPack<float>* net,
                     const FieldState& s0, const SamplerOptions& opts) {
  if (s0.size() != ctx.grid.size())
    throw std::invalid_argument("integrate: state size mismatch");
  if (opts.n_steps < 1)
    throw std::invalid_argument("integrate: n_steps must be >= 1");
  FieldState s = s0;
  ModelWorkspace<float> ws;
  const double h = 1.0 / opts.n_steps;
  for (int step = 0; step < opts.n_steps; ++step) {
    const double t = step * h;
    if (opts.integrator == Integrator::Euler) {
      const auto v = flow_velocity(ctx, net, s, t, &ws);
      axpy(s, h, v);
    } else {
      const auto k1 = flow_velocity(ctx, net, s, t, &ws);
      const auto k2 = flow_velocity(ctx, net, shifted(s, 0.5 * h, k1), t + 0.5 * h, &ws);
      const auto k3 = flow_velocity(ctx, net, shifted(s, 0.5 * h, k2), t + 0.5 * h, &ws);
      const auto k4 = flow_velocity(ctx, net, shifted(s, h, k3), t + h, &ws);
      for (size_t i = 0; i < s.phi.size(); ++i) {
        s.phi[i] += h / 6.0 * (k1.phi[i] + 2.0 * k2.phi[i] + 2.0 * k3.phi[i] + k4.phi[i]);
        s.pi[i] += h / 6.0 * (k1.pi[i] + 2.0 * k2.pi[i] + 2.0 * k3.pi[i] + k4.pi[i]);
      }
    }
    check_finite(s, step);
  }
  return s;
}

namespace {

// Divide out the propagator at r_uv; deeply suppressed modes are dropped.
BoundarySource recover_source(const FlowContext& ctx, const FieldState& s,
                              int* dropped) {
  BoundarySource src;
  src.j.assign(ctx.grid.size(), cdouble(0.0, 0.0));
  int n_drop = 0;
  for (int i = 0; i < ctx.grid.size(); ++i) {
    const double kap = ctx.uv_table[i].kappa;
    if (std::abs(kap) < kKappaFloor) {
      ++n_drop;
      continue;
    }
    src.j[i] = s.phi[i] / kap;
  }
  if (dropped) *dropped = n_drop;
  return src;
}

}  // namespace

std::vector<double> decode_point(const FlowContext& ctx,
                                 const FieldState& terminal,
                                 PointEstimator estimator, int* dropped) {
  if (terminal.size() != ctx.grid.size())
    throw std::invalid_argument("decode_point: state size mismatch");
  const auto src = recover_source(ctx, terminal, dropped);
  const auto field = inverse_transform(ctx.grid, src);
  const int d = ctx.grid.dim();
  const int K = ctx.grid.modes_per_axis();
  const double L = ctx.grid.box_length();
  std::vector<double> point(d, 0.0);

  if (estimator == PointEstimator::Centroid) {
    double wsum = 0.0;
    std::vector<double> acc(d, 0.0);
    std::vector<int> node(d, 0);
    for (size_t n = 0; n < field.size(); ++n) {
      size_t rem = n;
      for (int ax = d - 1; ax >= 0; --ax) {
        node[ax] = static_cast<int>(rem % K);
        rem /= K;
      }
      const double w = std::abs(field[n]);
      wsum += w;
      for (int ax = 0; ax < d; ++ax)
        acc[ax] += w * ctx.grid.lattice_coord(node[ax]);
    }
    if (!(wsum > 0.0))
      throw DecodeError("decode_point: reconstructed source has zero weight");
    for (int ax = 0; ax < d; ++ax) point[ax] = acc[ax] / wsum;
    return point;
  }

  // Circular estimator: per-axis first harmonic of the signed source;
  // exact for delta sources and immune to periodic wrap.
  std::vector<cdouble> harm(d, cdouble(0.0, 0.0));
  std::vector<int> node(d, 0);
  for (size_t n = 0; n < field.size(); ++n) {
    size_t rem = n;
    for (int ax = d - 1; ax >= 0; --ax) {
      node[ax] = static_cast<int>(rem % K);
      rem /= K;
    }
    for (int ax = 0; ax < d; ++ax) {
      const double theta =
          kTwoPi * (ctx.grid.lattice_coord(node[ax]) + 0.5 * L) / L;
      harm[ax] += field[n] * cdouble(std::cos(theta), std::sin(theta));
    }
  }
  for (int ax = 0; ax < d; ++ax) {
    if (std::abs(harm[ax]) < 1e-300)
      throw DecodeError("decode_point: vanishing first harmonic on axis " +
                        std::to_string(ax));
    double theta = std::arg(harm[ax]);  // (-pi, pi]
    if (theta < 0.0) theta += kTwoPi;   // [0, 2 pi)
    point[ax] = theta * L / kTwoPi - 0.5 * L;
  }
  return point;
}

std::vector<double> decode_image(const FlowContext& ctx,
                                 const FieldState& terminal, int* dropped) {
  if (terminal.size() != ctx.grid.size())
    throw std::invalid_argument("decode_image: state size mismatch");
  const auto src = recover_source(ctx, terminal, dropped);
  auto field = inverse_transform(ctx.grid, src);
  for (auto& v : field) v = std::min(1.0, std::max(0.0, v));
  return field;
}

}  // namespace genads
