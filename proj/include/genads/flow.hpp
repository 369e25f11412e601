//==============================================================================
// flow.hpp
// Glue between the physics state and the network: training-arm modes, the
// packing of complex mode coefficients into real channel tensors, and the
// composed flow velocity dS/dt used by both training targets and generation.
//==============================================================================
#pragma once

#include <vector>

#include "genads/geometry.hpp"
#include "genads/model.hpp"
#include "genads/paths.hpp"
#include "genads/propagator.hpp"
#include "genads/spectral.hpp"

namespace genads {

// Ablation arms: full learned velocity on a linear path, or learned residual
// on top of the Klein-Gordon backbone with a linear or Hermite path.
enum class TrainMode { FullLinear, ResidualLinear, ResidualHermite };

// The Hermite-residual arm trains only the pi component.
inline int model_out_channels(TrainMode mode) {
  return mode == TrainMode::ResidualHermite ? 2 : 4;
}

struct FlowContext {
  Background bg;
  ModeGrid grid;
  TrainMode mode;
  std::vector<PropagatorEval> uv_table;  // propagator at r_uv, per mode

  FlowContext(const Background& bg_, int grid_k, double grid_l, TrainMode m)
      : bg(bg_),
        grid(bg_.d, grid_k, grid_l),
        mode(m),
        uv_table(propagator_table(bg_, grid, bg_.r_uv)) {}

  int rows() const { return grid.size() / grid.modes_per_axis(); }
  int cols() const { return grid.modes_per_axis(); }
};

// Channel layout [Re phi, Im phi, Re pi, Im pi]; mode index = row * cols + col.
template <typename T>
void state_to_channels(const FieldState& s, int rows, int cols,
                       Tensor3<T>& out) {
  out = Tensor3<T>(4, rows, cols);
  const int n = rows * cols;
  for (int i = 0; i < n; ++i) {
    out.v[i] = static_cast<T>(s.phi[i].real());
    out.v[n + i] = static_cast<T>(s.phi[i].imag());
    out.v[2 * n + i] = static_cast<T>(s.pi[i].real());
    out.v[3 * n + i] = static_cast<T>(s.pi[i].imag());
  }
}

template <typename T>
void pair_to_channels(const VelocityPair& p, int rows, int cols,
                      Tensor3<T>& out) {
  out = Tensor3<T>(4, rows, cols);
  const int n = rows * cols;
  for (int i = 0; i < n; ++i) {
    out.v[i] = static_cast<T>(p.phi[i].real());
    out.v[n + i] = static_cast<T>(p.phi[i].imag());
    out.v[2 * n + i] = static_cast<T>(p.pi[i].real());
    out.v[3 * n + i] = static_cast<T>(p.pi[i].imag());
  }
}

// Inverse packing; a 2-channel tensor carries only the pi component.
template <typename T>
void channels_to_pair(const Tensor3<T>& t, VelocityPair& out) {
  const int n = t.plane();
  out.phi.assign(n, cdouble(0.0, 0.0));
  out.pi.assign(n, cdouble(0.0, 0.0));
  if (t.c == 4) {
    for (int i = 0; i < n; ++i) {
      out.phi[i] = cdouble(t.v[i], t.v[n + i]);
      out.pi[i] = cdouble(t.v[2 * n + i], t.v[3 * n + i]);
    }
  } else if (t.c == 2) {
    for (int i = 0; i < n; ++i) out.pi[i] = cdouble(t.v[i], t.v[n + i]);
  } else {
    throw std::invalid_argument("channels_to_pair: expected 2 or 4 channels");
  }
}

// dS/dt at (state, t): the learned velocity in FullLinear mode, or
// delta_r * V_KG plus the learned residual otherwise. A null net means a
// zero residual (backbone only) or, in FullLinear mode, zero velocity.
template <typename T>
VelocityPair flow_velocity(const FlowContext& ctx, const ParamPack<T>* net,
                           const FieldState& state, double t,
                           ModelWorkspace<T>* ws = nullptr) {
  VelocityPair vel(ctx.grid.size());
  const bool residual_mode = ctx.mode != TrainMode::FullLinear;
  if (residual_mode) {
    const double r = r_of_t(ctx.bg, t);
    vel = kg_velocity(ctx.bg, ctx.grid, state, r);
    const double dr = ctx.bg.delta_r();
    for (int i = 0; i < ctx.grid.size(); ++i) {
      vel.phi[i] *= dr;
      vel.pi[i] *= dr;
    }
  }
  if (!net) return vel;
  Tensor3<T> input;
  state_to_channels(state, ctx.rows(), ctx.cols(), input);
  const Tensor3<T> out = model_forward(*net, input, t, ws);
  VelocityPair learned;
  channels_to_pair(out, learned);
  if (!residual_mode) return learned;
  for (int i = 0; i < ctx.grid.size(); ++i) {
    vel.phi[i] += learned.phi[i];
    vel.pi[i] += learned.pi[i];
  }
  return vel;
}

}  // namespace genads
