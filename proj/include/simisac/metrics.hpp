// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "simisac/channel.hpp"
#include "simisac/geometry.hpp"

namespace simisac {

struct TransmitConfig {
  double total_power_mw = 100.0;  // 20 dBm
  int num_users = 4;              // N_C
  int num_targets = 2;            // N_S

  int num_streams() const { return num_users + num_targets; }  // N_BS
  void validate() const;
};

// Evenly spaced angle samples used for both the elevation and azimuth axes.
// Bin i (0-based) is evaluated at -90 + bin_width * (i + 1) degrees, so the
// 1-based indices 9 and 27 land on -45 and +45 degrees at n = 36.
// With centered the sample moves to the middle of the bin (+bin_width/2).
struct AngleGrid {
  std::vector<double> samples_deg;
  double bin_width_deg = 0.0;

  int size() const { return static_cast<int>(samples_deg.size()); }
  static AngleGrid uniform(int n, bool centered = false);
};

// Steering vectors for every (elevation, azimuth) grid pair, as columns of an
// M x n^2 matrix; column g = j * n + k for elevation bin j, azimuth bin k.
CMat steering_matrix(const SimGeometry& g, const AngleGrid& grid);

struct BeamPattern {
  RMat raw;         // P_S, n x n, nonnegative
  RMat normalized;  // P_S / ||P_S||_1
};

// raw(j, k) = || F^H a(psi_j, phi_k) ||^2. Throws std::domain_error when the
// raw pattern is identically zero (nothing to normalize).
BeamPattern beam_pattern(const CMat& f, const CMat& steering, int grid_n);
BeamPattern beam_pattern(const CMat& f, const AngleGrid& grid,
                         const SimGeometry& g);

struct DesiredPattern {
  std::vector<std::pair<int, int>> target_bins;  // 0-based (elevation, azimuth)
  RMat matrix;                                   // n x n indicator
};

// Indicator pattern: 1 at each target bin. With unit_mass the entries are
// 1/|bins| instead, so the desired pattern has the same l1 mass as the
// normalized beam pattern it is compared against.
DesiredPattern desired_pattern(const AngleGrid& grid,
                               const std::vector<std::pair<int, int>>& bins,
                               bool unit_mass = false);

// J_MSE = (1/n^2) * sum_jk (normalized - desired)^2.
double beam_matching_error(const BeamPattern& pattern,
                           const DesiredPattern& desired);

// sqrt(P / N_BS) * H * F: per-stream amplitude under uniform power allocation.
CMat effective_gain_matrix(const CMat& h, const CMat& f,
                           const TransmitConfig& cfg);

// SINR of user n (0-based); interference includes the sensing streams.
double sinr(const CMat& gain, int user, double noise_mw);

// sum_n log2(1 + gamma_n), bits/s/Hz.
double sum_rate(const CMat& gain, double noise_mw);

}  // namespace simisac
