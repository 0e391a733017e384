// SPDX-License-Identifier: Apache-2.0
#include "simisac/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace simisac {

void TransmitConfig::validate() const {
  if (total_power_mw <= 0.0)
    throw std::invalid_argument("TransmitConfig: total_power_mw must be positive");
  if (num_users < 1 || num_targets < 0)
    throw std::invalid_argument("TransmitConfig: need >= 1 user and >= 0 targets");
}

AngleGrid AngleGrid::uniform(int n, bool centered) {
  if (n < 1) throw std::invalid_argument("AngleGrid: n must be >= 1");
  AngleGrid grid;
  grid.bin_width_deg = 180.0 / n;
  grid.samples_deg.resize(n);
  const double offset = centered ? 0.5 * grid.bin_width_deg : 0.0;
  for (int i = 0; i < n; ++i)
    grid.samples_deg[i] = -90.0 + grid.bin_width_deg * (i + 1) + offset;
  return grid;
}

CMat steering_matrix(const SimGeometry& g, const AngleGrid& grid) {
  const int n = grid.size();
  CMat a(g.atoms_per_layer(), n * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      a.col(j * n + k) =
          steering_vector(g, grid.samples_deg[j], grid.samples_deg[k]);
  return a;
}

BeamPattern beam_pattern(const CMat& f, const CMat& steering, int grid_n) {
  if (f.rows() != steering.rows())
    throw std::invalid_argument("beam_pattern: dimension mismatch");
  if (steering.cols() != static_cast<Eigen::Index>(grid_n) * grid_n)
    throw std::invalid_argument("beam_pattern: steering/grid size mismatch");
  const CMat proj = f.adjoint() * steering;  // N_BS x n^2
  BeamPattern p;
  p.raw.resize(grid_n, grid_n);
  for (int j = 0; j < grid_n; ++j)
    for (int k = 0; k < grid_n; ++k)
      p.raw(j, k) = proj.col(j * grid_n + k).squaredNorm();
  const double mass = p.raw.sum();
  if (mass <= 0.0)
    throw std::domain_error("beam_pattern: all-zero pattern cannot be normalized");
  p.normalized = p.raw / mass;
  return p;
}

BeamPattern beam_pattern(const CMat& f, const AngleGrid& grid,
                         const SimGeometry& g) {
  return beam_pattern(f, steering_matrix(g, grid), grid.size());
}

DesiredPattern desired_pattern(const AngleGrid& grid,
                               const std::vector<std::pair<int, int>>& bins,
                               bool unit_mass) {
  const int n = grid.size();
  DesiredPattern d;
  d.target_bins = bins;
  d.matrix = RMat::Zero(n, n);
  const double value = unit_mass && !bins.empty()
                           ? 1.0 / static_cast<double>(bins.size())
                           : 1.0;
  for (const auto& [j, k] : bins) {
    if (j < 0 || j >= n || k < 0 || k >= n)
      throw std::out_of_range("desired_pattern: target bin out of range");
    d.matrix(j, k) = value;
  }
  return d;
}

double beam_matching_error(const BeamPattern& pattern,
                           const DesiredPattern& desired) {
  if (pattern.normalized.rows() != desired.matrix.rows() ||
      pattern.normalized.cols() != desired.matrix.cols())
    throw std::invalid_argument("beam_matching_error: grid mismatch");
  const double n2 = static_cast<double>(desired.matrix.size());
  return (pattern.normalized - desired.matrix).squaredNorm() / n2;
}

CMat effective_gain_matrix(const CMat& h, const CMat& f,
                           const TransmitConfig& cfg) {
  cfg.validate();
  if (h.cols() != f.rows() || f.cols() != cfg.num_streams())
    throw std::invalid_argument("effective_gain_matrix: dimension mismatch");
  return std::sqrt(cfg.total_power_mw / cfg.num_streams()) * (h * f);
}

double sinr(const CMat& gain, int user, double noise_mw) {
  if (user < 0 || user >= gain.rows())
    throw std::out_of_range("sinr: user index out of range");
  const double signal = std::norm(gain(user, user));
  const double total = gain.row(user).squaredNorm();
  return signal / (total - signal + noise_mw);
}

double sum_rate(const CMat& gain, double noise_mw) {
  double rate = 0.0;
  for (int n = 0; n < gain.rows(); ++n)
    rate += std::log2(1.0 + sinr(gain, n, noise_mw));
  return rate;
}

}  // namespace simisac
