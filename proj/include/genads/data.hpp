//==============================================================================
// data.hpp
// Dataset providers: the checkerboard point sampler and IDX-format image
// ingestion (big-endian, magic 0x00000803) with bilinear rescale to the mode
// grid resolution.
//==============================================================================
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "genads/metrics.hpp"
#include "genads/rng.hpp"

namespace genads {

enum class DatasetKind { Checkerboard, IdxImages };

struct DatasetSpec {
  DatasetKind kind = DatasetKind::Checkerboard;
  CheckerboardSpec checkerboard;
  std::string idx_path;
  int max_items = 10000;
};

// Uniform over filled cells: a filled cell uniformly, then a uniform point
// inside it. Deterministic for a given stream.
std::array<double, 2> sample_checkerboard(const CheckerboardSpec& spec,
                                          Rng& rng);
std::vector<std::array<double, 2>> sample_checkerboard(
    const CheckerboardSpec& spec, int n, Rng& rng);

struct ImageSet {
  int side = 0;                            // K', images are side x side
  std::vector<std::vector<double>> items;  // row-major pixels in [0, 1]
};

// Reads at most max_items images. Malformed input throws FormatError with the
// offending byte offset.
ImageSet load_idx_images(const std::string& path, int max_items);

// Bilinear rescale between square resolutions (identity when sizes match).
std::vector<double> resize_bilinear(const std::vector<double>& src, int from,
                                    int to);

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace genads
