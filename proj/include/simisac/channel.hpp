// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "simisac/geometry.hpp"
#include "simisac/rng.hpp"

namespace simisac {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
// dBm -> milliwatts; all powers are carried internally in linear mW.
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }

struct UserSpec {
  double los_elevation_deg = 0.0;  // theta_1
  double los_azimuth_deg = 0.0;    // phi_1
  int num_paths = 3;               // Q_n, LoS + NLoS
  double plane_x = 10.0;           // users live on the plane x = plane_x

  void validate() const;
};

// Free-space path loss at the 1 m reference distance, -20 log10(4 pi / lambda).
inline double free_space_ref_loss_db(double freq_hz) {
  constexpr double c = 299792458.0;
  return -20.0 * std::log10(4.0 * std::numbers::pi * freq_hz / c);
}

struct LinkBudget {
  // C_0, the 1 m reference loss. NaN means "derive from the scenario carrier
  // via free_space_ref_loss_db"; the harness resolves it before sampling.
  double pathloss_const_db = std::numeric_limits<double>::quiet_NaN();
  double pathloss_exponent = 3.5;    // alpha
  double bs_gain_dbi = 5.0;
  double user_gain_dbi = 0.0;
  double noise_power_dbm = -104.0;   // sigma^2

  double noise_mw() const { return dbm_to_mw(noise_power_dbm); }
  void validate() const;
};

// Array response of the outermost layer toward (elevation, azimuth):
// Kronecker product of the row (y-axis, d_y) and column (z-axis, d_z)
// linear-phase ramps. Every entry has unit modulus.
CVec steering_vector(const SimGeometry& g, double elevation_deg,
                     double azimuth_deg);

// Distance from the SIM (outermost-layer center, the origin) to a user on the
// plane x = plane_x along its LoS direction. Throws std::domain_error when
// the direction has no positive x-component.
double user_distance(const UserSpec& user);

// Linear LoS gain variance zeta = C_0 * d^-alpha folded with antenna gains.
double path_gain_variance(const UserSpec& user, const LinkBudget& budget);

struct ChannelRealization {
  CMat h;  // N_C x M, row n is user n's channel
  std::vector<std::vector<cxd>> path_gains;                    // per user
  std::vector<std::vector<std::pair<double, double>>> path_angles;  // (el, az) deg
  std::uint64_t seed = 0;
};

// Saleh-Valenzuela draw: LoS gain ~ CN(0, zeta), NLoS gains ~ CN(0, 0.01 zeta),
// NLoS angles uniform within +-5 degrees of the LoS AoD. Pure in (inputs, seed).
ChannelRealization sample_channel(const SimGeometry& g,
                                  const std::vector<UserSpec>& users,
                                  const LinkBudget& budget, std::uint64_t seed);

// Rebuild row n of h from recorded gains/angles (replay path).
CVec channel_row(const SimGeometry& g, const std::vector<cxd>& gains,
                 const std::vector<std::pair<double, double>>& angles);

nlohmann::json realization_to_json(const ChannelRealization& r);

}  // namespace simisac
