//==============================================================================
// metrics.hpp
// Evaluation metrics: boundary violation against the checkerboard geometry,
// the two-sample energy distance (V-statistic), the within-cell energy
// distance, the closed-form Gaussian Frechet distance on feature vectors,
// and threshold-time estimation from a BV trace.
//==============================================================================
#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace genads {

// Board [-half_width, half_width]^2 tiled by cells of side `cell`;
// cell (i, j) is filled iff i + j is even. The number of cells per side must
// be even so filled cells tile exactly half the board.
struct CheckerboardSpec {
  double half_width = 4.0;
  double cell = 2.0;

  int cells_per_side() const;
  void validate() const;
  // Cell indices for a point inside the board.
  bool filled(int i, int j) const { return (i + j) % 2 == 0; }
  bool contains_filled(double x, double y) const;
};

// Fraction of points not inside a filled cell (outside the board counts as a
// violation). Throws on an empty list.
double boundary_violation(std::span<const std::array<double, 2>> points,
                          const CheckerboardSpec& spec);

// Flat sample sets with a common dimension.
struct SampleSet {
  int dim = 0;
  std::vector<double> flat;  // size = n * dim

  int count() const { return dim ? static_cast<int>(flat.size()) / dim : 0; }
};

// ED = 2 <|x-y|> - <|x-x'|> - <|y-y'|>, V-statistic (diagonals included),
// so identical sample sets give exactly zero.
double energy_distance(const SampleSet& xs, const SampleSet& ys);

struct WedResult {
  double value = 0.0;
  int skipped_cells = 0;  // filled cells with true points but no model points
};

// Per-filled-cell energy distance weighted by the true-point count of the
// cell; cells without model points are skipped and the weights renormalized.
WedResult wed(std::span<const std::array<double, 2>> model_points,
              std::span<const std::array<double, 2>> true_points,
              const CheckerboardSpec& spec);

// ||mu_a - mu_b||^2 + Tr[Sig_a + Sig_b - 2 (Sig_a Sig_b)^(1/2)], with the
// matrix square root taken through the eigendecomposition of the symmetrized
// product and eigenvalues clipped at zero. Needs >= 2 vectors per side.
double frechet_gaussian(std::span<const std::vector<double>> feats_a,
                        std::span<const std::vector<double>> feats_b);

struct BvRow {
  double epoch = 0.0;
  double bv = 0.0;
};

// Wall-clock seconds at which BV first crosses below `threshold`, assuming
// linearity of BV between measurements; nullopt when never reached.
// epoch_seconds[i] is the duration of epoch i+1, so the wall time of epoch e
// is the sum of the first e entries (fractional epochs interpolate).
std::optional<double> threshold_time(std::span<const BvRow> rows,
                                     std::span<const double> epoch_seconds,
                                     double threshold = 0.1);

}  // namespace genads
