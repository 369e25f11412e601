#include "genads/metrics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace genads {

int CheckerboardSpec::cells_per_side() const {
  const double n = 2.0 * half_width / cell;
  const int ni = static_cast<int>(std::lround(n));
  if (std::abs(n - ni) > 1e-9 || ni < 1)
    throw std::invalid_argument(
        "CheckerboardSpec: board width must be an integer number of cells");
  return ni;
}

void CheckerboardSpec::validate() const {
  if (!(half_width > 0.0 && cell > 0.0))
    throw std::invalid_argument("CheckerboardSpec: sizes must be positive");
  if (cells_per_side() % 2 != 0)
    throw std::invalid_argument(
        "CheckerboardSpec: cells per side must be even so filled cells tile "
        "half the board");
}

bool CheckerboardSpec::contains_filled(double x, double y) const {
  if (x < -half_width || x >= half_width || y < -half_width || y >= half_width)
    return false;
  const int i = static_cast<int>(std::floor((x + half_width) / cell));
  const int j = static_cast<int>(std::floor((y + half_width) / cell));
  return filled(i, j);
}

double boundary_violation(std::span<const std::array<double, 2>> points,
                          const CheckerboardSpec& spec) {
  if (points.empty())
    throw std::invalid_argument("boundary_violation: empty point list");
  spec.validate();
  long violations = 0;
  for (const auto& p : points)
    if (!spec.contains_filled(p[0], p[1])) ++violations;
  return static_cast<double>(violations) / static_cast<double>(points.size());
}

namespace {

double mean_pairwise(const SampleSet& a, const SampleSet& b) {
  const int na = a.count(), nb = b.count(), d = a.dim;
  double s = 0.0;
  for (int i = 0; i < na; ++i) {
    const double* x = a.flat.data() + static_cast<size_t>(i) * d;
    for (int j = 0; j < nb; ++j) {
      const double* y = b.flat.data() + static_cast<size_t>(j) * d;
      double q = 0.0;
      for (int k = 0; k < d; ++k) {
        const double diff = x[k] - y[k];
        q += diff * diff;
      }
      s += std::sqrt(q);
    }
  }
  return s / (static_cast<double>(na) * nb);
}

}  // namespace

double energy_distance(const SampleSet& xs, const SampleSet& ys) {
  if (xs.count() == 0 || ys.count() == 0)
    throw std::invalid_argument("energy_distance: empty sample set");
  if (xs.dim != ys.dim)
    throw std::invalid_argument("energy_distance: dimension mismatch");
  return 2.0 * mean_pairwise(xs, ys) - mean_pairwise(xs, xs) -
         mean_pairwise(ys, ys);
}

WedResult wed(std::span<const std::array<double, 2>> model_points,
              std::span<const std::array<double, 2>> true_points,
              const CheckerboardSpec& spec) {
  if (true_points.empty())
    throw std::invalid_argument("wed: empty true sample set");
  spec.validate();
  const int n = spec.cells_per_side();
  auto cell_of = [&](const std::array<double, 2>& p) -> int {
    if (p[0] < -spec.half_width || p[0] >= spec.half_width ||
        p[1] < -spec.half_width || p[1] >= spec.half_width)
      return -1;
    const int i = static_cast<int>(std::floor((p[0] + spec.half_width) / spec.cell));
    const int j = static_cast<int>(std::floor((p[1] + spec.half_width) / spec.cell));
    return spec.filled(i, j) ? i * n + j : -1;
  };
  std::vector<SampleSet> model_cells(n * n), true_cells(n * n);
  for (auto& s : model_cells) s.dim = 2;
  for (auto& s : true_cells) s.dim = 2;
  for (const auto& p : model_points) {
    const int c = cell_of(p);
    if (c >= 0) {
      model_cells[c].flat.push_back(p[0]);
      model_cells[c].flat.push_back(p[1]);
    }
  }
  for (const auto& p : true_points) {
    const int c = cell_of(p);
    if (c >= 0) {
      true_cells[c].flat.push_back(p[0]);
      true_cells[c].flat.push_back(p[1]);
    }
  }
  WedResult out;
  double weight_sum = 0.0, acc = 0.0;
  for (int c = 0; c < n * n; ++c) {
    const int nt = true_cells[c].count();
    if (nt == 0) continue;
    if (model_cells[c].count() == 0) {
      ++out.skipped_cells;  // weight reallocated to the remaining cells
      continue;
    }
    acc += nt * energy_distance(model_cells[c], true_cells[c]);
    weight_sum += nt;
  }
  if (weight_sum == 0.0)
    throw std::runtime_error("wed: no filled cell holds both model and true points");
  out.value = acc / weight_sum;
  return out;
}

double frechet_gaussian(std::span<const std::vector<double>> feats_a,
                        std::span<const std::vector<double>> feats_b) {
  const int na = static_cast<int>(feats_a.size());
  const int nb = static_cast<int>(feats_b.size());
  if (na < 2 || nb < 2)
    throw std::invalid_argument("frechet_gaussian: need >= 2 vectors per side");
  const int d = static_cast<int>(feats_a[0].size());
  for (const auto& v : feats_a)
    if (static_cast<int>(v.size()) != d)
      throw std::invalid_argument("frechet_gaussian: ragged feature vectors");
  for (const auto& v : feats_b)
    if (static_cast<int>(v.size()) != d)
      throw std::invalid_argument("frechet_gaussian: dimension mismatch");

  auto stats = [d](std::span<const std::vector<double>> feats,
                   Eigen::VectorXd& mu, Eigen::MatrixXd& sigma) {
    const int n = static_cast<int>(feats.size());
    mu = Eigen::VectorXd::Zero(d);
    for (const auto& v : feats)
      mu += Eigen::Map<const Eigen::VectorXd>(v.data(), d);
    mu /= n;
    sigma = Eigen::MatrixXd::Zero(d, d);
    for (const auto& v : feats) {
      const Eigen::VectorXd c =
          Eigen::Map<const Eigen::VectorXd>(v.data(), d) - mu;
      sigma.noalias() += c * c.transpose();
    }
    sigma /= (n - 1);
  };
  Eigen::VectorXd mu_a, mu_b;
  Eigen::MatrixXd sig_a, sig_b;
  stats(feats_a, mu_a, sig_a);
  stats(feats_b, mu_b, sig_b);

  // sqrt(Sig_a) via eigendecomposition, eigenvalues clipped at zero.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_a(sig_a);
  Eigen::VectorXd ev = es_a.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd root_a =
      es_a.eigenvectors() * ev.asDiagonal() * es_a.eigenvectors().transpose();
  // Tr[(Sig_a Sig_b)^(1/2)] = Tr[(sqrt(Sig_a) Sig_b sqrt(Sig_a))^(1/2)].
  Eigen::MatrixXd mid = root_a * sig_b * root_a;
  mid = 0.5 * (mid + mid.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_m(mid);
  const double tr_root = es_m.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

  return (mu_a - mu_b).squaredNorm() + sig_a.trace() + sig_b.trace() -
         2.0 * tr_root;
}

std::optional<double> threshold_time(std::span<const BvRow> rows,
                                     std::span<const double> epoch_seconds,
                                     double threshold) {
  if (rows.empty()) return std::nullopt;
  for (size_t i = 1; i < rows.size(); ++i)
    if (rows[i].epoch <= rows[i - 1].epoch)
      throw std::invalid_argument("threshold_time: rows must be sorted by epoch");

  // Cumulative wall time of a (fractional) epoch count.
  auto wall_at = [&](double epoch) {
    double t = 0.0;
    const int whole = static_cast<int>(std::floor(epoch));
    for (int i = 0; i < whole && i < static_cast<int>(epoch_seconds.size()); ++i)
      t += epoch_seconds[i];
    const double frac = epoch - whole;
    if (frac > 0.0 && whole < static_cast<int>(epoch_seconds.size()))
      t += frac * epoch_seconds[whole];
    return t;
  };

  if (rows[0].bv <= threshold) return wall_at(rows[0].epoch);
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].bv <= threshold) {
      const double de = rows[i].epoch - rows[i - 1].epoch;
      const double db = rows[i].bv - rows[i - 1].bv;
      const double frac = (threshold - rows[i - 1].bv) / db;
      return wall_at(rows[i - 1].epoch + frac * de);
    }
  }
  return std::nullopt;
}

}  // namespace genads
