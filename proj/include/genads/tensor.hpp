#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace genads {

// Dense [C, H, W] tensor, row-major with channel outermost.
template <typename T>
struct Tensor3 {
  int c = 0, h = 0, w = 0;
  std::vector<T> v;

  Tensor3() = default;
  Tensor3(int c_, int h_, int w_)
      : c(c_), h(h_), w(w_), v(static_cast<size_t>(c_) * h_ * w_, T(0)) {}

  T* channel(int ci) { return v.data() + static_cast<size_t>(ci) * h * w; }
  const T* channel(int ci) const {
    return v.data() + static_cast<size_t>(ci) * h * w;
  }
  T& at(int ci, int y, int x) {
    return v[(static_cast<size_t>(ci) * h + y) * w + x];
  }
  T at(int ci, int y, int x) const {
    return v[(static_cast<size_t>(ci) * h + y) * w + x];
  }
  size_t size() const { return v.size(); }
  int plane() const { return h * w; }
  void zero() { std::fill(v.begin(), v.end(), T(0)); }
};

}  // namespace genads
