//==============================================================================
// model.hpp
// The trainable velocity field: a periodic convolutional stack over the mode
// grid with built-in reverse-mode gradients. Layout:
//   stem conv -> N x [h -> h + conv2(silu(conv1(h)))] -> head conv
// (blocks = 0 degenerates to a single conv with no activation). Time enters
// as extra input channels: one constant channel of value t plus sin/cos pairs
// at frequencies 2^j pi, j < time_fourier. State channels are
// [Re phi, Im phi, Re pi, Im pi] over the mode grid. Padding is periodic, so
// circular shifts of the input commute with the network exactly.
//
// Scalar type is a template parameter: float for training, double for
// finite-difference gradient verification.
//==============================================================================
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "genads/rng.hpp"
#include "genads/tensor.hpp"

namespace genads {

namespace detail {
// Row-major C (m x n) = alpha * op(A) op(B) + beta * C. Implemented in
// gemm.cpp on top of Eigen; single-threaded and reduction-order stable.
template <typename T>
void gemm(bool trans_a, bool trans_b, int m, int n, int k, T alpha, const T* a,
          int lda, const T* b, int ldb, T beta, T* c, int ldc);
}  // namespace detail

struct ArchSpec {
  int width = 72;
  int blocks = 2;
  int kernel = 3;
  int out_channels = 4;   // 4 = full state velocity, 2 = pi-residual only
  int time_fourier = 4;   // F sin/cos pairs; time channels = 1 + 2F

  static constexpr int state_channels = 4;

  int in_channels() const { return state_channels + 1 + 2 * time_fourier; }

  void validate() const {
    if (width < 1 || blocks < 0) throw std::invalid_argument("ArchSpec: bad width/blocks");
    if (kernel < 1 || kernel % 2 == 0)
      throw std::invalid_argument("ArchSpec: kernel must be odd and positive");
    if (out_channels != 2 && out_channels != 4)
      throw std::invalid_argument("ArchSpec: out_channels must be 2 or 4");
    if (time_fourier < 0) throw std::invalid_argument("ArchSpec: bad time_fourier");
  }

  long param_count() const {
    const long kk = static_cast<long>(kernel) * kernel;
    if (blocks == 0) return kk * in_channels() * out_channels + out_channels;
    long n = kk * in_channels() * width + width;              // stem
    n += 2L * blocks * (kk * width * width + width);          // residual blocks
    n += kk * width * out_channels + out_channels;            // head
    return n;
  }

  bool operator==(const ArchSpec&) const = default;
};

struct TensorDesc {
  std::string name;
  std::vector<int> shape;
  size_t offset = 0;
  size_t count = 0;
};

// All parameters live in one flat array; descs name the segments in order
// (conv weights [C_out, C_in, k, k] then the matching bias).
template <typename T>
struct ParamPack {
  ArchSpec spec;
  std::vector<TensorDesc> descs;
  std::vector<T> data;

  std::span<T> segment(size_t i) {
    return {data.data() + descs[i].offset, descs[i].count};
  }
  std::span<const T> segment(size_t i) const {
    return {data.data() + descs[i].offset, descs[i].count};
  }
};

template <typename T>
ParamPack<T> build_params(const ArchSpec& spec) {
  spec.validate();
  ParamPack<T> pack;
  pack.spec = spec;
  size_t offset = 0;
  auto add = [&](const std::string& name, std::vector<int> shape) {
    size_t count = 1;
    for (int s : shape) count *= static_cast<size_t>(s);
    pack.descs.push_back({name, std::move(shape), offset, count});
    offset += count;
  };
  const int k = spec.kernel;
  if (spec.blocks == 0) {
    add("conv0.weight", {spec.out_channels, spec.in_channels(), k, k});
    add("conv0.bias", {spec.out_channels});
  } else {
    add("stem.weight", {spec.width, spec.in_channels(), k, k});
    add("stem.bias", {spec.width});
    for (int b = 0; b < spec.blocks; ++b) {
      const std::string base = "block" + std::to_string(b);
      add(base + ".conv1.weight", {spec.width, spec.width, k, k});
      add(base + ".conv1.bias", {spec.width});
      add(base + ".conv2.weight", {spec.width, spec.width, k, k});
      add(base + ".conv2.bias", {spec.width});
    }
    add("head.weight", {spec.out_channels, spec.width, k, k});
    add("head.bias", {spec.out_channels});
  }
  pack.data.assign(offset, T(0));
  return pack;
}

// Kernels ~ N(0, 2 / fan_in), biases zero.
template <typename T>
void init_params(ParamPack<T>& pack, Rng& rng) {
  for (size_t i = 0; i < pack.descs.size(); ++i) {
    const auto& d = pack.descs[i];
    auto seg = pack.segment(i);
    if (d.shape.size() == 1) {
      for (auto& x : seg) x = T(0);
      continue;
    }
    size_t fan_in = 1;
    for (size_t s = 1; s < d.shape.size(); ++s)
      fan_in *= static_cast<size_t>(d.shape[s]);
    const double sigma = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (auto& x : seg) x = static_cast<T>(sigma * rng.normal());
  }
}

// Scratch and tape for one forward/backward pass; reuse across calls to avoid
// reallocation. Not shared between threads.
template <typename T>
struct ModelWorkspace {
  std::vector<Tensor3<T>> acts;
  std::vector<T> col;   // im2col buffer
  std::vector<T> dcol;
  Tensor3<T> input;
  std::vector<int> wrap;  // periodic index table
  int wrap_k = -1, wrap_h = -1, wrap_w = -1;
};

namespace detail {

// col[(ci*k+ky)*k+kx][y*w+x] = in[ci][wrap(y+ky-k/2)][wrap(x+kx-k/2)]
template <typename T>
void im2col_periodic(const Tensor3<T>& in, int k, std::vector<T>& col) {
  const int h = in.h, w = in.w, plane = h * w, half = k / 2;
  col.resize(static_cast<size_t>(in.c) * k * k * plane);
  size_t row = 0;
  for (int ci = 0; ci < in.c; ++ci) {
    const T* src = in.channel(ci);
    for (int ky = 0; ky < k; ++ky)
      for (int kx = 0; kx < k; ++kx, ++row) {
        T* dst = col.data() + row * plane;
        for (int y = 0; y < h; ++y) {
          const int yy = (y + ky - half + h) % h;
          const T* srow = src + yy * w;
          T* drow = dst + y * w;
          for (int x = 0; x < w; ++x) {
            const int xx = (x + kx - half + w) % w;
            drow[x] = srow[xx];
          }
        }
      }
  }
}

// Scatter-add transpose of im2col_periodic.
template <typename T>
void col2im_periodic_add(const std::vector<T>& col, int k, Tensor3<T>& out) {
  const int h = out.h, w = out.w, plane = h * w, half = k / 2;
  size_t row = 0;
  for (int ci = 0; ci < out.c; ++ci) {
    T* dst = out.channel(ci);
    for (int ky = 0; ky < k; ++ky)
      for (int kx = 0; kx < k; ++kx, ++row) {
        const T* src = col.data() + row * plane;
        for (int y = 0; y < h; ++y) {
          const int yy = (y + ky - half + h) % h;
          T* drow = dst + yy * w;
          const T* srow = src + y * w;
          for (int x = 0; x < w; ++x) {
            const int xx = (x + kx - half + w) % w;
            drow[xx] += srow[x];
          }
        }
      }
  }
}

template <typename T>
void conv_forward(const Tensor3<T>& in, std::span<const T> weight,
                  std::span<const T> bias, int k, Tensor3<T>& out,
                  std::vector<T>& col) {
  const int plane = in.plane();
  const int cin_kk = in.c * k * k;
  const int cout = static_cast<int>(bias.size());
  im2col_periodic(in, k, col);
  out = Tensor3<T>(cout, in.h, in.w);
  gemm<T>(false, false, cout, plane, cin_kk, T(1), weight.data(), cin_kk,
          col.data(), plane, T(0), out.v.data(), plane);
  for (int c = 0; c < cout; ++c) {
    T* o = out.channel(c);
    for (int i = 0; i < plane; ++i) o[i] += bias[c];
  }
}

// Accumulates dweight/dbias; writes d_in (overwrites). `col` must still hold
// the forward im2col of this layer's input.
template <typename T>
void conv_backward(const Tensor3<T>& upstream, const std::vector<T>& col,
                   std::span<const T> weight, int k, int cin,
                   std::span<T> dweight, std::span<T> dbias, Tensor3<T>& d_in,
                   std::vector<T>& dcol, bool want_dinput) {
  const int plane = upstream.plane();
  const int cin_kk = cin * k * k;
  const int cout = upstream.c;
  for (int c = 0; c < cout; ++c) {
    const T* u = upstream.channel(c);
    T acc(0);
    for (int i = 0; i < plane; ++i) acc += u[i];
    dbias[c] += acc;
  }
  // dW += up (cout x plane) * col^T (plane x cin_kk)
  gemm<T>(false, true, cout, cin_kk, plane, T(1), upstream.v.data(), plane,
          col.data(), plane, T(1), dweight.data(), cin_kk);
  if (!want_dinput) return;
  // dcol = W^T (cin_kk x cout) * up (cout x plane)
  dcol.resize(static_cast<size_t>(cin_kk) * plane);
  gemm<T>(true, false, cin_kk, plane, cout, T(1), weight.data(), cin_kk,
          upstream.v.data(), plane, T(0), dcol.data(), plane);
  d_in = Tensor3<T>(cin, upstream.h, upstream.w);
  col2im_periodic_add(dcol, k, d_in);
}

template <typename T>
inline T silu(T x) {
  const T s = T(1) / (T(1) + std::exp(-x));
  return x * s;
}

template <typename T>
inline T silu_grad(T x) {
  const T s = T(1) / (T(1) + std::exp(-x));
  return s * (T(1) + x * (T(1) - s));
}

}  // namespace detail

// Builds the network input: 4 state channels followed by the time embedding.
template <typename T>
void assemble_input(const ArchSpec& spec, const Tensor3<T>& state, double t,
                    Tensor3<T>& input) {
  if (state.c != ArchSpec::state_channels)
    throw std::invalid_argument("assemble_input: expected 4 state channels");
  input = Tensor3<T>(spec.in_channels(), state.h, state.w);
  std::copy(state.v.begin(), state.v.end(), input.v.begin());
  const int plane = state.plane();
  auto fill = [&](int ch, double value) {
    T* p = input.channel(ch);
    for (int i = 0; i < plane; ++i) p[i] = static_cast<T>(value);
  };
  int ch = ArchSpec::state_channels;
  fill(ch++, t);
  constexpr double pi = 3.14159265358979323846264338327950288;
  double freq = pi;
  for (int j = 0; j < spec.time_fourier; ++j, freq *= 2.0) {
    fill(ch++, std::sin(freq * t));
    fill(ch++, std::cos(freq * t));
  }
}

// Forward pass. When `ws` is given the tape needed by model_backward is kept.
template <typename T>
Tensor3<T> model_forward(const ParamPack<T>& pack, const Tensor3<T>& state,
                         double t, ModelWorkspace<T>* ws = nullptr) {
  const ArchSpec& spec = pack.spec;
  ModelWorkspace<T> local;
  ModelWorkspace<T>& w = ws ? *ws : local;
  w.acts.clear();
  assemble_input(spec, state, t, w.input);
  for (const T x : w.input.v)
    if (!std::isfinite(static_cast<double>(x)))
      throw std::runtime_error("model_forward: non-finite input");
  const int k = spec.kernel;
  Tensor3<T> out;
  if (spec.blocks == 0) {
    detail::conv_forward(w.input, pack.segment(0), pack.segment(1), k, out,
                         w.col);
    return out;
  }
  Tensor3<T> h;
  detail::conv_forward(w.input, pack.segment(0), pack.segment(1), k, h, w.col);
  for (int b = 0; b < spec.blocks; ++b) {
    const size_t base = 2 + 4 * static_cast<size_t>(b);
    w.acts.push_back(h);  // block input
    Tensor3<T> c1;
    detail::conv_forward(h, pack.segment(base), pack.segment(base + 1), k, c1,
                         w.col);
    w.acts.push_back(c1);  // pre-activation
    Tensor3<T> a1 = c1;
    for (auto& x : a1.v) x = detail::silu(x);
    w.acts.push_back(a1);  // activated
    Tensor3<T> c2;
    detail::conv_forward(a1, pack.segment(base + 2), pack.segment(base + 3), k,
                         c2, w.col);
    for (size_t i = 0; i < h.v.size(); ++i) h.v[i] += c2.v[i];
  }
  w.acts.push_back(h);  // head input
  detail::conv_forward(h, pack.segment(pack.descs.size() - 2),
                       pack.segment(pack.descs.size() - 1), k, out, w.col);
  return out;
}

// Reverse pass; accumulates dL/dparams into `grads` (same layout as
// pack.data). `ws` must hold the tape from the matching model_forward call.
template <typename T>
void model_backward(const ParamPack<T>& pack, ModelWorkspace<T>& ws,
                    const Tensor3<T>& upstream, std::span<T> grads) {
  const ArchSpec& spec = pack.spec;
  if (grads.size() != pack.data.size())
    throw std::invalid_argument("model_backward: gradient size mismatch");
  const int k = spec.kernel;
  auto gseg = [&](size_t i) {
    return std::span<T>(grads.data() + pack.descs[i].offset,
                        pack.descs[i].count);
  };
  Tensor3<T> d_in, d_tmp;
  if (spec.blocks == 0) {
    detail::im2col_periodic(ws.input, k, ws.col);
    detail::conv_backward(upstream, ws.col, pack.segment(0), k, ws.input.c,
                          gseg(0), gseg(1), d_in, ws.dcol, false);
    return;
  }
  // Head.
  const size_t nd = pack.descs.size();
  const Tensor3<T>& head_in = ws.acts.back();
  detail::im2col_periodic(head_in, k, ws.col);
  Tensor3<T> dh;
  detail::conv_backward(upstream, ws.col, pack.segment(nd - 2), k, spec.width,
                        gseg(nd - 2), gseg(nd - 1), dh, ws.dcol, true);
  // Blocks in reverse. acts: [in_0, c1_0, a1_0, in_1, c1_1, a1_1, ..., head_in]
  for (int b = spec.blocks - 1; b >= 0; --b) {
    const size_t base = 2 + 4 * static_cast<size_t>(b);
    const Tensor3<T>& block_in = ws.acts[3 * b];
    const Tensor3<T>& c1 = ws.acts[3 * b + 1];
    const Tensor3<T>& a1 = ws.acts[3 * b + 2];
    // dh flows through both the skip and conv2(silu(conv1(.))).
    detail::im2col_periodic(a1, k, ws.col);
    Tensor3<T> da1;
    detail::conv_backward(dh, ws.col, pack.segment(base + 2), k, spec.width,
                          gseg(base + 2), gseg(base + 3), da1, ws.dcol, true);
    for (size_t i = 0; i < da1.v.size(); ++i)
      da1.v[i] *= detail::silu_grad(c1.v[i]);
    detail::im2col_periodic(block_in, k, ws.col);
    Tensor3<T> dblock_in;
    detail::conv_backward(da1, ws.col, pack.segment(base), k, spec.width,
                          gseg(base), gseg(base + 1), dblock_in, ws.dcol, true);
    for (size_t i = 0; i < dh.v.size(); ++i) dh.v[i] += dblock_in.v[i];
  }
  // Stem.
  detail::im2col_periodic(ws.input, k, ws.col);
  detail::conv_backward(dh, ws.col, pack.segment(0), k, ws.input.c, gseg(0),
                        gseg(1), d_in, ws.dcol, false);
}

// Convenience wrapper: returns the output and fills `grads` with
// d(sum upstream . output)/dparams.
template <typename T>
Tensor3<T> model_forward_backward(const ParamPack<T>& pack,
                                  const Tensor3<T>& state, double t,
                                  const Tensor3<T>& upstream,
                                  std::vector<T>& grads) {
  ModelWorkspace<T> ws;
  Tensor3<T> out = model_forward(pack, state, t, &ws);
  grads.assign(pack.data.size(), T(0));
  model_backward(pack, ws, upstream, std::span<T>(grads));
  return out;
}

}  // namespace genads
