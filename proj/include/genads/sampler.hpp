//==============================================================================
// sampler.hpp
// Generation: integrate the composed flow velocity from t = 0 (deep bulk) to
// t = 1 (boundary) with a fixed-step integrator, then decode the terminal
// state into a data-space point or image by dividing out the propagator and
// inverting the spectral transform.
//==============================================================================
#pragma once

#include <vector>

#include "genads/flow.hpp"

namespace genads {

enum class Integrator { RK4, Euler };
enum class PointEstimator { Centroid, Circular };

struct SamplerOptions {
  Integrator integrator = Integrator::RK4;
  int n_steps = 100;
  PointEstimator estimator = PointEstimator::Centroid;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixed-step integration of dS/dt = flow_velocity over t in [0, 1].
// A null net integrates the bare backbone (residual modes) or nothing
// (FullLinear). Non-finite states raise NumericError with the step index.
FieldState integrate(const FlowContext& ctx, const ParamPack<float>* net,
                     const FieldState& s0, const SamplerOptions& opts);

// Recovers j_k = phi_k / kappa_k(r_uv), reconstructs the position-space
// source, and estimates the point. Modes with kappa below 1e-12 are dropped;
// `dropped` (when given) receives their count. All-zero weights raise
// DecodeError.
std::vector<double> decode_point(const FlowContext& ctx,
                                 const FieldState& terminal,
                                 PointEstimator estimator,
                                 int* dropped = nullptr);

// Reconstructed source clipped to [0, 1], row-major K x K.
std::vector<double> decode_image(const FlowContext& ctx,
                                 const FieldState& terminal,
                                 int* dropped = nullptr);

}  // namespace genads
