// SPDX-License-Identifier: Apache-2.0
#include "simisac/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace simisac {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

void UserSpec::validate() const {
  if (num_paths < 1)
    throw std::invalid_argument("UserSpec: num_paths must be >= 1");
  if (std::abs(los_elevation_deg) >= 90.0 || std::abs(los_azimuth_deg) >= 90.0)
    throw std::invalid_argument("UserSpec: LoS angles must lie in (-90, 90) degrees");
  if (plane_x <= 0.0)
    throw std::invalid_argument("UserSpec: plane_x must be positive");
}

void LinkBudget::validate() const {
  if (!std::isfinite(pathloss_const_db))
    throw std::invalid_argument(
        "LinkBudget: pathloss_const_db is unresolved (NaN); set it or derive "
        "it from the carrier with free_space_ref_loss_db");
  if (pathloss_exponent <= 0.0)
    throw std::invalid_argument("LinkBudget: pathloss_exponent must be positive");
}

CVec steering_vector(const SimGeometry& g, double elevation_deg,
                     double azimuth_deg) {
  const double st = std::sin(elevation_deg * kDegToRad);
  const double ramp_y = st * std::cos(azimuth_deg * kDegToRad) *
                        g.atom_spacing_y / g.wavelength;
  const double ramp_z = st * std::sin(azimuth_deg * kDegToRad) *
                        g.atom_spacing_z / g.wavelength;
  const double two_pi = 2.0 * std::numbers::pi;
  CVec a(g.atoms_per_layer());
  for (int r = 0; r < g.rows; ++r) {
    const cxd fy = std::polar(1.0, -two_pi * r * ramp_y);
    for (int c = 0; c < g.cols; ++c)
      a(r * g.cols + c) = fy * std::polar(1.0, -two_pi * c * ramp_z);
  }
  return a;
}

double user_distance(const UserSpec& user) {
  const double st = std::sin(user.los_elevation_deg * kDegToRad);
  const double uy = st * std::cos(user.los_azimuth_deg * kDegToRad);
  const double uz = st * std::sin(user.los_azimuth_deg * kDegToRad);
  const double ux2 = 1.0 - uy * uy - uz * uz;
  if (ux2 <= 0.0)
    throw std::domain_error("user_distance: LoS direction parallel to the user plane");
  return user.plane_x / std::sqrt(ux2);
}

double path_gain_variance(const UserSpec& user, const LinkBudget& budget) {
  const double d = user_distance(user);
  const double zeta_db = budget.pathloss_const_db + budget.bs_gain_dbi +
                         budget.user_gain_dbi -
                         10.0 * budget.pathloss_exponent * std::log10(d);
  return db_to_linear(zeta_db);
}

CVec channel_row(const SimGeometry& g, const std::vector<cxd>& gains,
                 const std::vector<std::pair<double, double>>& angles) {
  if (gains.size() != angles.size() || gains.empty())
    throw std::invalid_argument("channel_row: gains/angles size mismatch");
  // The sqrt(M/Q) prefactor pairs with unit-norm array responses, so the
  // steering vectors enter divided by sqrt(M); this keeps E||h||^2 linear in M
  // (one aperture gain, not two).
  const double m = static_cast<double>(g.atoms_per_layer());
  const double scale = std::sqrt(m / gains.size()) / std::sqrt(m);
  CVec row = CVec::Zero(g.atoms_per_layer());
  for (std::size_t q = 0; q < gains.size(); ++q)
    row += gains[q] *
           steering_vector(g, angles[q].first, angles[q].second).conjugate();
  return scale * row;
}

ChannelRealization sample_channel(const SimGeometry& g,
                                  const std::vector<UserSpec>& users,
                                  const LinkBudget& budget, std::uint64_t seed) {
  if (users.empty())
    throw std::invalid_argument("sample_channel: empty user list");
  budget.validate();

  ChannelRealization r;
  r.seed = seed;
  r.h.resize(static_cast<int>(users.size()), g.atoms_per_layer());
  Rng rng(seed);

  for (std::size_t n = 0; n < users.size(); ++n) {
    const UserSpec& u = users[n];
    u.validate();
    const double zeta = path_gain_variance(u, budget);

    std::vector<cxd> gains;
    std::vector<std::pair<double, double>> angles;
    gains.push_back(rng.cnormal(zeta));
    angles.emplace_back(u.los_elevation_deg, u.los_azimuth_deg);
    for (int q = 1; q < u.num_paths; ++q) {
      const double el = rng.uniform(u.los_elevation_deg - 5.0,
                                    u.los_elevation_deg + 5.0);
      const double az = rng.uniform(u.los_azimuth_deg - 5.0,
                                    u.los_azimuth_deg + 5.0);
      gains.push_back(rng.cnormal(0.01 * zeta));
      angles.emplace_back(el, az);
    }

    r.h.row(n) = channel_row(g, gains, angles).transpose();
    r.path_gains.push_back(std::move(gains));
    r.path_angles.push_back(std::move(angles));
  }
  return r;
}

nlohmann::json realization_to_json(const ChannelRealization& r) {
  nlohmann::json users = nlohmann::json::array();
  for (std::size_t n = 0; n < r.path_gains.size(); ++n) {
    nlohmann::json paths = nlohmann::json::array();
    for (std::size_t q = 0; q < r.path_gains[n].size(); ++q) {
      paths.push_back({{"gain_re", r.path_gains[n][q].real()},
                       {"gain_im", r.path_gains[n][q].imag()},
                       {"elevation_deg", r.path_angles[n][q].first},
                       {"azimuth_deg", r.path_angles[n][q].second}});
    }
    users.push_back(std::move(paths));
  }
  return {{"seed", r.seed}, {"users", std::move(users)}};
}

}  // namespace simisac
