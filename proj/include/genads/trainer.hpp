//==============================================================================
// trainer.hpp
// Flow-matching training: batch assembly from deterministic streams, the
// warped-norm loss over full or residual targets, AdamW with decoupled weight
// decay, metrics logging and checkpointing.
//
// Reduction contract: per-sample losses and gradients are always combined in
// ascending sample-index order through double-precision accumulators, so the
// result is independent of the number of worker threads.
//==============================================================================
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genads/data.hpp"
#include "genads/flow.hpp"
#include "genads/sampler.hpp"

namespace genads {

enum class TSampling { PerElement, PerBatch };

struct TrainConfig {
  TrainMode mode = TrainMode::FullLinear;
  int epochs = 100;
  int batch_size = 64;
  int samples_per_epoch = 50000;
  double learning_rate = 3e-4;
  double weight_decay = 1e-5;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 1;
  TSampling t_sampling = TSampling::PerElement;
  int eval_every = 10;  // 0 disables point-metric evals (incl. epoch 0)
  int eval_samples = 400;
  int eval_integration_steps = 16;
  int checkpoint_every = 0;  // epochs; 0 = final checkpoint only
  int threads = 1;
  Background background = Background::planar_ads(2, 1.5, 0.0, 1.0);
  int grid_k = 16;
  double grid_l = 8.0;
  BaseParams base;
  DatasetSpec dataset;
  ArchSpec arch;
  SamplerOptions sampler;

  void validate() const;
};

struct BatchItem {
  std::uint64_t index = 0;  // global sample index; fixes the reduction order
  double t = 0.0;
  FieldState s0;
  FieldState s1;
};

struct LossStats {
  double loss = 0.0;
  // Largest |phi residual target| seen; identically zero for Hermite paths.
  double max_phi_residual_target = 0.0;
};

// Mean over the batch of || prediction - target ||^2 under the warped norm at
// r(t), with dL/dparams accumulated into `grads` (sized like params.data).
// Items are processed in ascending `index` order regardless of storage order.
template <typename T>
LossStats loss_and_grad(const FlowContext& ctx, const ParamPack<T>& params,
                        std::span<const BatchItem> batch, std::vector<T>& grads,
                        int threads = 1);

// Loss only (no gradient); used by finite-difference checks.
template <typename T>
double loss_value(const FlowContext& ctx, const ParamPack<T>& params,
                  std::span<const BatchItem> batch);

// One AdamW step with bias-corrected moments and decoupled weight decay;
// `step` is 1-based. Arithmetic in double regardless of storage type.
template <typename T>
void adamw_step(std::span<T> params, std::span<const T> grads, std::span<T> m,
                std::span<T> v, long step, double lr, double wd,
                double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

struct EpochMetrics {
  int epoch = 0;
  double loss = 0.0;
  double wall_ms = 0.0;
  std::optional<double> bv;
  std::optional<double> wed;
  double max_phi_residual_target = 0.0;
};

// Resumable trainer state; see checkpoint.hpp for the container format.
struct TrainerState {
  ParamPack<float> params;
  std::vector<float> adam_m;
  std::vector<float> adam_v;
  long step = 0;                  // optimizer steps taken
  int epoch = 0;                  // completed epochs
  std::uint64_t next_sample = 0;  // global sample counter
  std::uint64_t seed = 0;
  std::string config_echo;
};

struct TrainResult {
  TrainerState state;
  std::vector<EpochMetrics> metrics;
};

// Runs the configured training. When out_dir is non-empty, writes metrics.csv
// incrementally plus periodic and final checkpoints (checkpoint.gads).
// When resume_from is non-empty, continues bit-exactly from that checkpoint.
// config_echo is embedded into checkpoints for self-description.
TrainResult train(const TrainConfig& cfg, const std::string& out_dir = "",
                  const std::string& resume_from = "",
                  const std::string& config_echo = "");

// Deterministic batch assembly for global sample indices [first, first + n).
// Draw order per sample stream: t, base state, then the data sample.
// PerBatch t-sampling evaluates every item at the first item's t.
std::vector<BatchItem> assemble_batch(const FlowContext& ctx,
                                      const BaseParams& base,
                                      const DatasetSpec& dataset,
                                      const ImageSet* images,
                                      std::uint64_t seed, std::uint64_t first,
                                      int n, TSampling t_sampling);

// Per-epoch point-metric evaluation with the current parameters.
struct EvalPointMetrics {
  double bv = 0.0;
  double wed = 0.0;
};
EvalPointMetrics evaluate_points(const FlowContext& ctx,
                                 const ParamPack<float>& params,
                                 const TrainConfig& cfg);

}  // namespace genads
