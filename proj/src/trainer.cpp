#include "genads/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <thread>

#include "genads/checkpoint.hpp"

namespace genads {

void TrainConfig::validate() const {
  if (epochs < 0 || batch_size < 1 || samples_per_epoch < 1)
    throw std::invalid_argument("TrainConfig: bad epochs/batch/samples");
  if (!(learning_rate > 0.0) || weight_decay < 0.0)
    throw std::invalid_argument("TrainConfig: bad optimizer settings");
  if (eval_every < 0 || eval_samples < 1 || eval_integration_steps < 1)
    throw std::invalid_argument("TrainConfig: bad eval settings");
  if (threads < 1) throw std::invalid_argument("TrainConfig: threads must be >= 1");
  arch.validate();
  if (arch.out_channels != model_out_channels(mode))
    throw std::invalid_argument(
        std::string("TrainConfig: mode requires ") +
        std::to_string(model_out_channels(mode)) + " output channels, got " +
        std::to_string(arch.out_channels));
  if (dataset.kind == DatasetKind::Checkerboard) dataset.checkerboard.validate();
}

namespace {

// Pack a complex pair into a real channel tensor, 4 channels or pi-only 2.
template <typename T>
void pair_to_target(const VelocityPair& p, int rows, int cols, int channels,
                    Tensor3<T>& out) {
  const int n = rows * cols;
  out = Tensor3<T>(channels, rows, cols);
  if (channels == 4) {
    for (int i = 0; i < n; ++i) {
      out.v[i] = static_cast<T>(p.phi[i].real());
      out.v[n + i] = static_cast<T>(p.phi[i].imag());
      out.v[2 * n + i] = static_cast<T>(p.pi[i].real());
      out.v[3 * n + i] = static_cast<T>(p.pi[i].imag());
    }
  } else {
    for (int i = 0; i < n; ++i) {
      out.v[i] = static_cast<T>(p.pi[i].real());
      out.v[n + i] = static_cast<T>(p.pi[i].imag());
    }
  }
}

struct ItemInfo {
  double weight = 1.0;      // f(r(t))^d
  double phi_defect = 0.0;  // max |phi residual target| (Hermite arm)
};

// Builds the model input and regression target for one batch item.
template <typename T>
ItemInfo build_item_tensors(const FlowContext& ctx, const BatchItem& item,
                            Tensor3<T>& input, Tensor3<T>& target) {
  const int rows = ctx.rows(), cols = ctx.cols();
  const double r = r_of_t(ctx.bg, item.t);
  ItemInfo info;
  info.weight = std::pow(warp(ctx.bg, r), ctx.bg.d);
  PathTarget path = ctx.mode == TrainMode::ResidualHermite
                        ? hermite_path(ctx.bg, ctx.grid, item.s0, item.s1, item.t)
                        : linear_path(ctx.grid, item.s0, item.s1, item.t);
  state_to_channels(path.state, rows, cols, input);
  if (ctx.mode == TrainMode::FullLinear) {
    pair_to_target(path.target, rows, cols, 4, target);
    return info;
  }
  attach_backbone(ctx.bg, ctx.grid, path);
  if (ctx.mode == TrainMode::ResidualHermite) {
    for (int i = 0; i < ctx.grid.size(); ++i)
      info.phi_defect = std::max(
          info.phi_defect, std::abs(path.target.phi[i] - path.backbone.phi[i]));
  }
  const VelocityPair res = residual_target(path);
  pair_to_target(res, rows, cols, ctx.mode == TrainMode::ResidualHermite ? 2 : 4,
                 target);
  return info;
}

template <typename T>
struct ItemResult {
  double loss = 0.0;
  double phi_defect = 0.0;
  std::vector<T> grads;
};

// Forward + backward for one item; grads are freshly assigned.
template <typename T>
ItemResult<T> item_loss_grad(const FlowContext& ctx, const ParamPack<T>& params,
                             const BatchItem& item, size_t batch_size,
                             ModelWorkspace<T>& ws, bool want_grad) {
  Tensor3<T> input, target;
  const ItemInfo info = build_item_tensors(ctx, item, input, target);
  ItemResult<T> out;
  out.phi_defect = info.phi_defect;
  Tensor3<T> pred = model_forward(params, input, item.t, want_grad ? &ws : nullptr);
  Tensor3<T> diff = pred;
  for (size_t i = 0; i < diff.v.size(); ++i) diff.v[i] -= target.v[i];
  double sq = 0.0;
  for (size_t i = 0; i < diff.v.size(); ++i) {
    const double dv = static_cast<double>(diff.v[i]);
    sq += dv * dv;
  }
  out.loss = info.weight * sq;
  if (!std::isfinite(out.loss)) {
    size_t bad = 0;
    while (bad < diff.v.size() &&
           std::isfinite(static_cast<double>(diff.v[bad])))
      ++bad;
    const int plane = diff.plane();
    throw NumericError("loss: non-finite contribution at sample " +
                       std::to_string(item.index) + ", channel " +
                       std::to_string(bad / plane) + ", mode " +
                       std::to_string(bad % plane));
  }
  if (want_grad) {
    const T scale = static_cast<T>(2.0 * info.weight / static_cast<double>(batch_size));
    for (auto& v : diff.v) v *= scale;
    out.grads.assign(params.data.size(), T(0));
    model_backward(params, ws, diff, std::span<T>(out.grads));
  }
  return out;
}

std::vector<size_t> sorted_order(std::span<const BatchItem> batch) {
  std::vector<size_t> order(batch.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return batch[a].index < batch[b].index;
  });
  return order;
}

}  // namespace

template <typename T>
LossStats loss_and_grad(const FlowContext& ctx, const ParamPack<T>& params,
                        std::span<const BatchItem> batch, std::vector<T>& grads,
                        int threads) {
  if (batch.empty()) throw std::invalid_argument("loss_and_grad: empty batch");
  const auto order = sorted_order(batch);
  std::vector<ItemResult<T>> results(batch.size());
  const int nthreads = std::max(1, std::min<int>(threads, batch.size()));
  if (nthreads == 1) {
    ModelWorkspace<T> ws;
    for (size_t i = 0; i < batch.size(); ++i)
      results[i] = item_loss_grad(ctx, params, batch[i], batch.size(), ws, true);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nthreads);
    for (int w = 0; w < nthreads; ++w)
      pool.emplace_back([&, w] {
        ModelWorkspace<T> ws;
        try {
          for (size_t i = next.fetch_add(1); i < batch.size();
               i = next.fetch_add(1))
            results[i] =
                item_loss_grad(ctx, params, batch[i], batch.size(), ws, true);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  // Reduce in ascending sample-index order through double accumulators so the
  // result does not depend on the thread count or batch storage order.
  std::vector<double> acc(params.data.size(), 0.0);
  double loss_acc = 0.0;
  LossStats stats;
  for (size_t pos : order) {
    const auto& r = results[pos];
    loss_acc += r.loss;
    stats.max_phi_residual_target =
        std::max(stats.max_phi_residual_target, r.phi_defect);
    for (size_t j = 0; j < acc.size(); ++j)
      acc[j] += static_cast<double>(r.grads[j]);
  }
  grads.resize(params.data.size());
  for (size_t j = 0; j < acc.size(); ++j) grads[j] = static_cast<T>(acc[j]);
  stats.loss = loss_acc / static_cast<double>(batch.size());
  return stats;
}

template <typename T>
double loss_value(const FlowContext& ctx, const ParamPack<T>& params,
                  std::span<const BatchItem> batch) {
  if (batch.empty()) throw std::invalid_argument("loss_value: empty batch");
  const auto order = sorted_order(batch);
  ModelWorkspace<T> ws;
  double loss_acc = 0.0;
  for (size_t pos : order)
    loss_acc +=
        item_loss_grad(ctx, params, batch[pos], batch.size(), ws, false).loss;
  return loss_acc / static_cast<double>(batch.size());
}

template <typename T>
void adamw_step(std::span<T> params, std::span<const T> grads, std::span<T> m,
                std::span<T> v, long step, double lr, double wd, double beta1,
                double beta2, double eps) {
  if (params.size() != grads.size() || params.size() != m.size() ||
      params.size() != v.size())
    throw std::invalid_argument("adamw_step: size mismatch");
  if (step < 1) throw std::invalid_argument("adamw_step: step is 1-based");
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
  for (size_t i = 0; i < params.size(); ++i) {
    const double g = static_cast<double>(grads[i]);
    const double mi = beta1 * static_cast<double>(m[i]) + (1.0 - beta1) * g;
    const double vi = beta2 * static_cast<double>(v[i]) + (1.0 - beta2) * g * g;
    m[i] = static_cast<T>(mi);
    v[i] = static_cast<T>(vi);
    const double mhat = mi / bc1;
    const double vhat = vi / bc2;
    double theta = static_cast<double>(params[i]);
    theta -= lr * mhat / (std::sqrt(vhat) + eps);
    theta -= lr * wd * theta;  // decoupled decay
    params[i] = static_cast<T>(theta);
  }
}

template LossStats loss_and_grad<float>(const FlowContext&,
                                        const ParamPack<float>&,
                                        std::span<const BatchItem>,
                                        std::vector<float>&, int);
template LossStats loss_and_grad<double>(const FlowContext&,
                                         const ParamPack<double>&,
                                         std::span<const BatchItem>,
                                         std::vector<double>&, int);
template double loss_value<float>(const FlowContext&, const ParamPack<float>&,
                                  std::span<const BatchItem>);
template double loss_value<double>(const FlowContext&,
                                   const ParamPack<double>&,
                                   std::span<const BatchItem>);
template void adamw_step<float>(std::span<float>, std::span<const float>,
                                std::span<float>, std::span<float>, long,
                                double, double, double, double, double);
template void adamw_step<double>(std::span<double>, std::span<const double>,
                                 std::span<double>, std::span<double>, long,
                                 double, double, double, double, double);

std::vector<BatchItem> assemble_batch(const FlowContext& ctx,
                                      const BaseParams& base,
                                      const DatasetSpec& dataset,
                                      const ImageSet* images,
                                      std::uint64_t seed, std::uint64_t first,
                                      int n, TSampling t_sampling) {
  std::vector<BatchItem> items(n);
  for (int i = 0; i < n; ++i) {
    BatchItem& item = items[i];
    item.index = first + static_cast<std::uint64_t>(i);
    Rng rng = make_stream(seed, RngDomain::TrainSample, item.index);
    item.t = rng.uniform();
    item.s0 = sample_base(ctx.grid, base, rng);
    if (dataset.kind == DatasetKind::Checkerboard) {
      const auto pt = sample_checkerboard(dataset.checkerboard, rng);
      item.s1 = boundary_data(ctx.uv_table,
                              encode_point(ctx.grid, std::span<const double>(
                                                         pt.data(), pt.size())));
    } else {
      if (!images || images->items.empty())
        throw std::invalid_argument("assemble_batch: image dataset not loaded");
      const auto pick = rng.below(images->items.size());
      item.s1 = boundary_data(ctx.uv_table,
                              encode_image(ctx.grid, images->items[pick]));
    }
  }
  if (t_sampling == TSampling::PerBatch)
    for (int i = 1; i < n; ++i) items[i].t = items[0].t;
  return items;
}

EvalPointMetrics evaluate_points(const FlowContext& ctx,
                                 const ParamPack<float>& params,
                                 const TrainConfig& cfg) {
  SamplerOptions opts = cfg.sampler;
  opts.n_steps = cfg.eval_integration_steps;
  std::vector<std::array<double, 2>> generated(cfg.eval_samples);
  for (int i = 0; i < cfg.eval_samples; ++i) {
    Rng rng = make_stream(cfg.seed, RngDomain::EvalBase, i);
    const FieldState s0 = sample_base(ctx.grid, cfg.base, rng);
    const FieldState end = integrate(ctx, &params, s0, opts);
    const auto pt = decode_point(ctx, end, opts.estimator);
    generated[i] = {pt[0], pt[1]};
  }
  std::vector<std::array<double, 2>> reference(cfg.eval_samples);
  for (int i = 0; i < cfg.eval_samples; ++i) {
    Rng rng = make_stream(cfg.seed, RngDomain::EvalReference, i);
    reference[i] = sample_checkerboard(cfg.dataset.checkerboard, rng);
  }
  EvalPointMetrics out;
  out.bv = boundary_violation(generated, cfg.dataset.checkerboard);
  out.wed = wed(generated, reference, cfg.dataset.checkerboard).value;
  return out;
}

namespace {

void write_metrics_row(std::ofstream& csv, const EpochMetrics& em,
                       bool with_eval) {
  csv << em.epoch << ',';
  if (std::isfinite(em.loss)) csv << em.loss;
  csv << ',' << em.wall_ms;
  if (with_eval) {
    csv << ',';
    if (em.bv) csv << *em.bv;
    csv << ',';
    if (em.wed) csv << *em.wed;
  }
  csv << '\n';
  csv.flush();
}

void check_resume_compatible(const TrainConfig& cfg, const ArchSpec& arch,
                             const LoadedCheckpoint& loaded) {
  auto fail = [](const std::string& field) {
    throw LoadError("checkpoint incompatible with config: field '" + field +
                    "' differs");
  };
  if (loaded.state.params.spec != arch) fail("arch");
  if (loaded.meta.mode != cfg.mode) fail("mode");
  if (loaded.meta.grid_k != cfg.grid_k) fail("grid.k");
  if (loaded.meta.grid_l != cfg.grid_l) fail("grid.l");
  const Background& a = loaded.meta.background;
  const Background& b = cfg.background;
  if (a.kind != b.kind) fail("background.kind");
  if (a.d != b.d) fail("background.d");
  if (a.kind == GeometryKind::PlanarAdS && a.delta != b.delta)
    fail("background.delta");
  if (a.kind == GeometryKind::Hsv && a.p != b.p) fail("background.p");
  if (a.r_ir != b.r_ir) fail("background.r_ir");
  if (a.r_uv != b.r_uv) fail("background.r_uv");
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const std::string& out_dir,
                  const std::string& resume_from,
                  const std::string& config_echo) {
  ArchSpec arch = cfg.arch;
  arch.out_channels = model_out_channels(cfg.mode);
  {
    TrainConfig check = cfg;
    check.arch = arch;
    check.validate();
  }
  FlowContext ctx(cfg.background, cfg.grid_k, cfg.grid_l, cfg.mode);

  ImageSet images;
  const ImageSet* images_ptr = nullptr;
  if (cfg.dataset.kind == DatasetKind::IdxImages) {
    if (ctx.bg.d != 2)
      throw std::invalid_argument("train: image datasets require d = 2");
    images = load_idx_images(cfg.dataset.idx_path, cfg.dataset.max_items);
    if (images.side != cfg.grid_k)
      for (auto& img : images.items)
        img = resize_bilinear(img, images.side, cfg.grid_k);
    images.side = cfg.grid_k;
    images_ptr = &images;
  }

  TrainResult result;
  TrainerState& state = result.state;
  if (!resume_from.empty()) {
    LoadedCheckpoint loaded = load_checkpoint(resume_from);
    check_resume_compatible(cfg, arch, loaded);
    state = std::move(loaded.state);
  } else {
    state.params = build_params<float>(arch);
    Rng init_rng = make_stream(cfg.seed, RngDomain::ModelInit, 0);
    init_params(state.params, init_rng);
    state.adam_m.assign(state.params.data.size(), 0.0f);
    state.adam_v.assign(state.params.data.size(), 0.0f);
    state.seed = cfg.seed;
  }
  if (!config_echo.empty()) state.config_echo = config_echo;

  const CheckpointMeta meta{cfg.mode, cfg.grid_k, cfg.grid_l, cfg.background};
  const bool eval_enabled =
      cfg.eval_every > 0 && cfg.dataset.kind == DatasetKind::Checkerboard;

  std::ofstream csv;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const auto csv_path = std::filesystem::path(out_dir) / "metrics.csv";
    const bool append = !resume_from.empty() && std::filesystem::exists(csv_path);
    csv.open(csv_path, append ? std::ios::app : std::ios::trunc);
    if (!csv) throw std::runtime_error("train: cannot open " + csv_path.string());
    if (!append)
      csv << (eval_enabled ? "epoch,loss,wall_ms,bv,wed" : "epoch,loss,wall_ms")
          << '\n';
  }

  auto run_eval = [&](EpochMetrics& em) {
    const auto pm = evaluate_points(ctx, state.params, cfg);
    em.bv = pm.bv;
    em.wed = pm.wed;
  };

  if (eval_enabled && state.epoch == 0) {
    const auto t0 = std::chrono::steady_clock::now();
    EpochMetrics em;
    em.epoch = 0;
    em.loss = std::numeric_limits<double>::quiet_NaN();
    run_eval(em);
    em.wall_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
    result.metrics.push_back(em);
    if (csv.is_open()) write_metrics_row(csv, em, eval_enabled);
  }

  std::vector<float> grads;
  for (int epoch = state.epoch + 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    double loss_sum = 0.0;
    long seen = 0;
    double max_phi = 0.0;
    long remaining = cfg.samples_per_epoch;
    try {
      while (remaining > 0) {
        const int bsz = static_cast<int>(
            std::min<long>(cfg.batch_size, remaining));
        const auto batch =
            assemble_batch(ctx, cfg.base, cfg.dataset, images_ptr, state.seed,
                           state.next_sample, bsz, cfg.t_sampling);
        const LossStats stats =
            loss_and_grad(ctx, state.params, batch, grads, cfg.threads);
        ++state.step;
        adamw_step<float>(state.params.data, grads, state.adam_m, state.adam_v,
                          state.step, cfg.learning_rate, cfg.weight_decay,
                          cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
        state.next_sample += static_cast<std::uint64_t>(bsz);
        remaining -= bsz;
        loss_sum += stats.loss * bsz;
        seen += bsz;
        max_phi = std::max(max_phi, stats.max_phi_residual_target);
      }
    } catch (const NumericError& e) {
      throw NumericError("epoch " + std::to_string(epoch) + ", optimizer step " +
                         std::to_string(state.step + 1) + ": " + e.what());
    }
    state.epoch = epoch;
    EpochMetrics em;
    em.epoch = epoch;
    em.loss = loss_sum / static_cast<double>(seen);
    em.max_phi_residual_target = max_phi;
    if (eval_enabled && epoch % cfg.eval_every == 0) run_eval(em);
    em.wall_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
    result.metrics.push_back(em);
    if (csv.is_open()) write_metrics_row(csv, em, eval_enabled);
    if (!out_dir.empty() && cfg.checkpoint_every > 0 &&
        epoch % cfg.checkpoint_every == 0 && epoch != cfg.epochs) {
      const auto path = std::filesystem::path(out_dir) /
                        ("checkpoint_epoch" + std::to_string(epoch) + ".gads");
      save_checkpoint(path.string(), state, meta);
    }
  }

  if (!out_dir.empty()) {
    const auto path = std::filesystem::path(out_dir) / "checkpoint.gads";
    save_checkpoint(path.string(), state, meta);
  }
  return result;
}

}  // namespace genads
