#include "genads/data.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace genads {

std::array<double, 2> sample_checkerboard(const CheckerboardSpec& spec,
                                          Rng& rng) {
  spec.validate();
  const int n = spec.cells_per_side();
  // Filled cells in row-major order; exactly half of n*n since n is even.
  const int n_filled = n * n / 2;
  const int pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_filled)));
  // The c-th filled cell: two filled cells per row pair pattern; recover (i, j).
  const int i = pick / (n / 2);
  const int slot = pick % (n / 2);
  const int j = 2 * slot + (i % 2 == 0 ? 0 : 1);  // (i + j) even
  const double x0 = -spec.half_width + i * spec.cell;
  const double y0 = -spec.half_width + j * spec.cell;
  return {x0 + spec.cell * rng.uniform(), y0 + spec.cell * rng.uniform()};
}

std::vector<std::array<double, 2>> sample_checkerboard(
    const CheckerboardSpec& spec, int n, Rng& rng) {
  std::vector<std::array<double, 2>> pts(n);
  for (auto& p : pts) p = sample_checkerboard(spec, rng);
  return pts;
}

namespace {

std::uint32_t read_be32(std::ifstream& in, const std::string& path,
                        std::size_t offset) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw FormatError(path + ": truncated header at byte offset " +
                      std::to_string(offset));
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace

ImageSet load_idx_images(const std::string& path, int max_items) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path + ": cannot open");
  const std::uint32_t magic = read_be32(in, path, 0);
  if (magic != 0x00000803u) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "0x%08x", magic);
    throw FormatError(path + ": bad IDX magic " + buf +
                      " at byte offset 0, expected 0x00000803");
  }
  const std::uint32_t count = read_be32(in, path, 4);
  const std::uint32_t rows = read_be32(in, path, 8);
  const std::uint32_t cols = read_be32(in, path, 12);
  if (rows == 0 || cols == 0 || rows != cols)
    throw FormatError(path + ": expected square images, got " +
                      std::to_string(rows) + "x" + std::to_string(cols));
  ImageSet set;
  set.side = static_cast<int>(rows);
  const std::size_t pix = static_cast<std::size_t>(rows) * cols;
  const std::uint32_t want =
      max_items > 0 ? std::min<std::uint32_t>(count, max_items) : count;
  std::vector<unsigned char> raw(pix);
  for (std::uint32_t i = 0; i < want; ++i) {
    if (!in.read(reinterpret_cast<char*>(raw.data()), pix)) {
      const std::size_t got = static_cast<std::size_t>(in.gcount());
      throw FormatError(path + ": truncated payload in image " +
                        std::to_string(i) + ", missing " +
                        std::to_string(pix - got) + " bytes at byte offset " +
                        std::to_string(16 + i * pix + got));
    }
    std::vector<double> img(pix);
    for (std::size_t p = 0; p < pix; ++p) img[p] = raw[p] / 255.0;
    set.items.push_back(std::move(img));
  }
  return set;
}

std::vector<double> resize_bilinear(const std::vector<double>& src, int from,
                                    int to) {
  if (static_cast<int>(src.size()) != from * from)
    throw std::invalid_argument("resize_bilinear: source size mismatch");
  if (from == to) return src;
  std::vector<double> dst(static_cast<std::size_t>(to) * to);
  const double scale = static_cast<double>(from) / to;
  for (int y = 0; y < to; ++y) {
    const double sy = (y + 0.5) * scale - 0.5;
    const int y0 = std::max(0, std::min(from - 1, static_cast<int>(std::floor(sy))));
    const int y1 = std::min(from - 1, y0 + 1);
    const double fy = std::min(1.0, std::max(0.0, sy - y0));
    for (int x = 0; x < to; ++x) {
      const double sx = (x + 0.5) * scale - 0.5;
      const int x0 = std::max(0, std::min(from - 1, static_cast<int>(std::floor(sx))));
      const int x1 = std::min(from - 1, x0 + 1);
      const double fx = std::min(1.0, std::max(0.0, sx - x0));
      const double a = src[y0 * from + x0] * (1 - fx) + src[y0 * from + x1] * fx;
      const double b = src[y1 * from + x0] * (1 - fx) + src[y1 * from + x1] * fx;
      dst[y * static_cast<std::size_t>(to) + x] = a * (1 - fy) + b * fy;
    }
  }
  return dst;
}

}  // namespace genads
