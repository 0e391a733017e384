// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "simisac/channel.hpp"

using namespace simisac;

namespace {
const SimGeometry kGeom = SimGeometry::standard(28e9, 2, 4, 4, 3);

LinkBudget test_budget() {
  LinkBudget b;
  b.pathloss_const_db = -61.39;
  return b;
}
}  // namespace

TEST_CASE("steering vector closed forms") {
  CHECK(steering_vector(kGeom, 0.0, 37.0).isApprox(CVec::Ones(16)));

  const SimGeometry lone = SimGeometry::standard(28e9, 1, 1, 1, 1);
  CHECK(steering_vector(lone, 42.0, -13.0)(0) == cxd(1.0, 0.0));

  // 2x2 grid, entries recomputed from the two linear-phase ramps
  const SimGeometry g4 = SimGeometry::standard(28e9, 1, 2, 2, 1);
  const double deg = std::numbers::pi / 180.0;
  const double st = std::sin(30.0 * deg);
  const double fy = st * std::cos(60.0 * deg) * g4.atom_spacing_y / g4.wavelength;
  const double fz = st * std::sin(60.0 * deg) * g4.atom_spacing_z / g4.wavelength;
  const CVec a = steering_vector(g4, 30.0, 60.0);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const cxd want =
          std::polar(1.0, -2.0 * std::numbers::pi * (r * fy + c * fz));
      CHECK(std::abs(a(r * 2 + c) - want) <= 1e-14);
    }

  Rng rng(4);
  const CVec b = steering_vector(kGeom, 71.3, -22.8);
  for (int m = 0; m < b.size(); ++m)
    CHECK(std::abs(std::abs(b(m)) - 1.0) <= 1e-14);
}

TEST_CASE("user distance from the LoS direction") {
  CHECK(user_distance({0.0, 25.0, 3, 10.0}) == doctest::Approx(10.0));
  CHECK(user_distance({60.0, 0.0, 3, 10.0}) == doctest::Approx(20.0));

  // (60, 45): normalize the explicit direction vector by hand
  const double deg = std::numbers::pi / 180.0;
  const double uy = std::sin(60 * deg) * std::cos(45 * deg);
  const double uz = std::sin(60 * deg) * std::sin(45 * deg);
  const double ux = std::sqrt(1.0 - uy * uy - uz * uz);
  CHECK(user_distance({60.0, 45.0, 3, 10.0}) == doctest::Approx(10.0 / ux));

  CHECK_THROWS_AS(user_distance({90.0, 0.0, 3, 10.0}), std::domain_error);
}

TEST_CASE("link budget dB arithmetic") {
  const UserSpec user{60.0, 45.0, 3, 10.0};
  const LinkBudget budget = test_budget();
  const double d = user_distance(user);
  const double zeta_db = -61.39 + 5.0 + 0.0 - 35.0 * std::log10(d);
  CHECK(linear_to_db(path_gain_variance(user, budget)) ==
        doctest::Approx(zeta_db).epsilon(1e-12));

  LinkBudget bad = budget;
  bad.pathloss_exponent = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  LinkBudget unresolved;  // default C_0 is the NaN sentinel
  CHECK_THROWS_AS(unresolved.validate(), std::invalid_argument);
}

TEST_CASE("single-path channel is a deterministic rank-1 row") {
  const UserSpec user{30.0, -20.0, 1, 10.0};
  const ChannelRealization r =
      sample_channel(kGeom, {user}, test_budget(), 77);
  REQUIRE(r.path_gains[0].size() == 1);
  const CVec want =
      r.path_gains[0][0] *
      steering_vector(kGeom, 30.0, -20.0).conjugate();
  CHECK((r.h.row(0).transpose() - want).norm() <= 1e-14 * want.norm());
}

TEST_CASE("replay reconstructs the sampled rows") {
  const std::vector<UserSpec> users = {{60.0, 45.0, 3, 10.0},
                                       {-60.0, -30.0, 3, 10.0}};
  const ChannelRealization r = sample_channel(kGeom, users, test_budget(), 5);
  for (int n = 0; n < 2; ++n) {
    const CVec row = channel_row(kGeom, r.path_gains[n], r.path_angles[n]);
    CHECK((r.h.row(n).transpose() - row).norm() <= 1e-14 * row.norm());
  }
}

TEST_CASE("sampling is pure in the seed") {
  const std::vector<UserSpec> users = {{60.0, 45.0, 3, 10.0}};
  const ChannelRealization a = sample_channel(kGeom, users, test_budget(), 123);
  const ChannelRealization b = sample_channel(kGeom, users, test_budget(), 123);
  CHECK(a.h == b.h);
  const ChannelRealization c = sample_channel(kGeom, users, test_budget(), 124);
  CHECK(a.h != c.h);
}

TEST_CASE("NLoS angles stay within the 10 degree spread") {
  const UserSpec user{10.0, 40.0, 6, 10.0};
  const ChannelRealization r = sample_channel(kGeom, {user}, test_budget(), 9);
  for (std::size_t q = 1; q < r.path_angles[0].size(); ++q) {
    CHECK(std::abs(r.path_angles[0][q].first - 10.0) <= 5.0);
    CHECK(std::abs(r.path_angles[0][q].second - 40.0) <= 5.0);
  }
  CHECK(r.path_angles[0][0].first == 10.0);  // LoS path keeps the AoD
}

TEST_CASE("LoS gain variance matches the budget") {
  const UserSpec user{60.0, 45.0, 2, 10.0};
  const LinkBudget budget = test_budget();
  const double zeta = path_gain_variance(user, budget);
  double acc_los = 0.0, acc_nlos = 0.0;
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    const ChannelRealization r = sample_channel(kGeom, {user}, budget, 1000 + s);
    acc_los += std::norm(r.path_gains[0][0]);
    acc_nlos += std::norm(r.path_gains[0][1]);
  }
  CHECK(acc_los / n == doctest::Approx(zeta).epsilon(0.05));
  CHECK(acc_nlos / n == doctest::Approx(0.01 * zeta).epsilon(0.05));
}

TEST_CASE("channel energy grows linearly in M") {
  const UserSpec user{60.0, 45.0, 3, 10.0};
  const LinkBudget budget = test_budget();
  const SimGeometry g1 = SimGeometry::standard(28e9, 1, 4, 4, 1);
  const SimGeometry g2 = SimGeometry::standard(28e9, 1, 8, 8, 1);
  double e1 = 0.0, e2 = 0.0;
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    e1 += sample_channel(g1, {user}, budget, 2000 + s).h.squaredNorm();
    e2 += sample_channel(g2, {user}, budget, 2000 + s).h.squaredNorm();
  }
  CHECK(e2 / e1 == doctest::Approx(4.0).epsilon(0.10));
}

TEST_CASE("realization JSON carries gains and angles") {
  const std::vector<UserSpec> users = {{60.0, 45.0, 2, 10.0}};
  const ChannelRealization r = sample_channel(kGeom, users, test_budget(), 31);
  const nlohmann::json j = realization_to_json(r);
  CHECK(j.at("seed").get<std::uint64_t>() == 31);
  CHECK(j.at("users").size() == 1);
  CHECK(j.at("users")[0].size() == 2);
  CHECK(j.at("users")[0][0].at("gain_re").get<double>() ==
        r.path_gains[0][0].real());
}

TEST_CASE("derived reference loss matches the carrier") {
  // 28 GHz: -20 log10(4 pi / lambda) = -61.3855 dB
  CHECK(free_space_ref_loss_db(28e9) == doctest::Approx(-61.3855).epsilon(1e-4));
}
