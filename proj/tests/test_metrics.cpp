// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "simisac/metrics.hpp"

using namespace simisac;

TEST_CASE("angle grid hits the pinned bins") {
  const AngleGrid g = AngleGrid::uniform(36);
  CHECK(g.bin_width_deg == doctest::Approx(5.0));
  CHECK(g.samples_deg[8] == doctest::Approx(-45.0));   // 1-based index 9
  CHECK(g.samples_deg[26] == doctest::Approx(45.0));   // 1-based index 27
  const AngleGrid c = AngleGrid::uniform(36, true);
  CHECK(c.samples_deg[8] == doctest::Approx(-42.5));
  CHECK_THROWS_AS(AngleGrid::uniform(0), std::invalid_argument);
}

TEST_CASE("desired pattern indicator and unit-mass variant") {
  const AngleGrid g = AngleGrid::uniform(36);
  const DesiredPattern d = desired_pattern(g, {{8, 26}, {26, 8}});
  CHECK(d.matrix.sum() == doctest::Approx(2.0));
  CHECK(d.matrix(8, 26) == 1.0);
  CHECK(d.matrix(26, 8) == 1.0);

  const DesiredPattern u = desired_pattern(g, {{8, 26}, {26, 8}}, true);
  CHECK(u.matrix.sum() == doctest::Approx(1.0));
  CHECK(u.matrix(8, 26) == 0.5);

  CHECK(desired_pattern(g, {}).matrix.sum() == 0.0);
  CHECK(desired_pattern(g, {{0, 0}}).matrix(0, 0) == 1.0);
  CHECK_THROWS_AS(desired_pattern(g, {{36, 0}}), std::out_of_range);
}

TEST_CASE("beam pattern against a brute-force quadratic form") {
  const SimGeometry geom = SimGeometry::standard(28e9, 1, 2, 2, 2);
  const AngleGrid grid = AngleGrid::uniform(4);
  const CMat steering = steering_matrix(geom, grid);
  REQUIRE(steering.cols() == 16);

  CMat f(4, 2);
  f << cxd(0.3, -0.1), cxd(0.0, 0.7), cxd(-0.2, 0.2), cxd(0.5, 0.0),
      cxd(0.1, 0.1), cxd(-0.4, 0.3), cxd(0.0, -0.6), cxd(0.2, 0.2);
  const BeamPattern p = beam_pattern(f, steering, 4);

  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      const CVec a = steering.col(j * 4 + k);
      double want = 0.0;
      for (int s = 0; s < 2; ++s) {
        cxd acc(0, 0);
        for (int m = 0; m < 4; ++m) acc += std::conj(f(m, s)) * a(m);
        want += std::norm(acc);
      }
      CHECK(p.raw(j, k) == doctest::Approx(want).epsilon(1e-12));
      CHECK(p.raw(j, k) >= 0.0);
    }
  CHECK(p.normalized.sum() == doctest::Approx(1.0).epsilon(1e-13));

  // scaling F leaves the normalized pattern unchanged
  const BeamPattern ps = beam_pattern(CMat(3.0 * f), steering, 4);
  CHECK(ps.normalized.isApprox(p.normalized, 1e-12));

  CHECK_THROWS_AS(beam_pattern(CMat(CMat::Zero(4, 2)), steering, 4),
                  std::domain_error);
}

TEST_CASE("single-column pattern is the rank-1 case") {
  const SimGeometry geom = SimGeometry::standard(28e9, 1, 2, 2, 2);
  const AngleGrid grid = AngleGrid::uniform(3);
  const CMat steering = steering_matrix(geom, grid);
  CMat f = CMat::Zero(4, 2);
  f.col(1) = steering.col(4);
  const BeamPattern p = beam_pattern(f, steering, 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      const double want =
          std::norm(cxd(steering.col(j * 3 + k).dot(steering.col(4))));
      CHECK(p.raw(j, k) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("beam matching error hand sums") {
  const AngleGrid g = AngleGrid::uniform(2);
  DesiredPattern d = desired_pattern(g, {{0, 1}});
  BeamPattern p;
  p.normalized.resize(2, 2);
  p.normalized << 0.1, 0.4, 0.3, 0.2;
  p.raw = p.normalized;
  // ((0.1)^2 + (0.4-1)^2 + (0.3)^2 + (0.2)^2) / 4
  CHECK(beam_matching_error(p, d) ==
        doctest::Approx((0.01 + 0.36 + 0.09 + 0.04) / 4).epsilon(1e-13));

  d.matrix = p.normalized;
  CHECK(beam_matching_error(p, d) == 0.0);

  d.matrix.setZero();
  CHECK(beam_matching_error(p, d) ==
        doctest::Approx(p.normalized.squaredNorm() / 4));
}

TEST_CASE("effective gain matrix scaling") {
  CMat h(2, 3), f(3, 3);
  h << cxd(1, 0), cxd(0, 1), cxd(0.5, 0.5), cxd(-1, 0), cxd(0.2, 0), cxd(0, -0.3);
  f.setIdentity();
  TransmitConfig cfg{100.0, 2, 1};
  REQUIRE(cfg.num_streams() == 3);

  const CMat g = effective_gain_matrix(h, f, cfg);
  CHECK(g.isApprox(std::sqrt(100.0 / 3.0) * h, 1e-14));

  TransmitConfig big = cfg;
  big.total_power_mw *= 4.0;
  CHECK(effective_gain_matrix(h, f, big).isApprox(2.0 * g, 1e-14));

  CHECK(effective_gain_matrix(h, CMat(CMat::Zero(3, 3)), cfg).norm() == 0.0);
  CHECK_THROWS_AS(effective_gain_matrix(h, CMat(CMat::Zero(2, 3)), cfg),
                  std::invalid_argument);
}

TEST_CASE("sinr hand evaluation") {
  const double noise = 4.0;
  CMat g(2, 3);
  g << cxd(2, 0), cxd(0, 0), cxd(0, 0),
      cxd(1, 1), cxd(0, 3), cxd(1, 0);
  // user 0: diagonal power 4 equals the noise, zero interference
  CHECK(sinr(g, 0, noise) == doctest::Approx(1.0));
  // user 1: |j3|^2 / (|1+j|^2 + |1|^2 + 4) = 9 / 7
  CHECK(sinr(g, 1, noise) == doctest::Approx(9.0 / 7.0));

  g.row(0).setZero();
  CHECK(sinr(g, 0, noise) == 0.0);
  CHECK_THROWS_AS(sinr(g, 2, noise), std::out_of_range);
}

TEST_CASE("sum rate closed forms") {
  const double noise = 1.0;
  CMat g = CMat::Zero(3, 3);
  g(0, 0) = g(1, 1) = g(2, 2) = cxd(1, 0);  // every SINR is 1
  CHECK(sum_rate(g, noise) == doctest::Approx(3.0));

  for (double gamma : {3.0, 15.0}) {
    CMat eq = CMat::Zero(2, 2);
    eq(0, 0) = eq(1, 1) = std::sqrt(gamma);
    CHECK(sum_rate(eq, noise) ==
          doctest::Approx(2.0 * std::log2(1.0 + gamma)));
  }
  CHECK(sum_rate(CMat(CMat::Zero(2, 2)), noise) == 0.0);
}
