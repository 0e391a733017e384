// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numbers>

#include "oracle.hpp"
#include "simisac/wavedomain.hpp"

using namespace simisac;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("wrap_phase lands in [0, 2pi)") {
  CHECK(wrap_phase(0.0) == 0.0);
  CHECK(wrap_phase(-0.2) == doctest::Approx(kTwoPi - 0.2));
  CHECK(wrap_phase(kTwoPi) == 0.0);
  CHECK(wrap_phase(7 * kTwoPi + 1.5) == doctest::Approx(1.5));
  CHECK(wrap_phase(-kTwoPi) == 0.0);
}

TEST_CASE("phase matrix special cases") {
  const PhaseState zero = PhaseState::zeros(3, 2);
  CHECK(phase_matrix(zero, 1).isApprox(CMat::Identity(3, 3)));

  const PhaseState pi = PhaseState::constant(3, 2, std::numbers::pi);
  CHECK(phase_matrix(pi, 2).isApprox(-CMat::Identity(3, 3)));

  Rng rng(11);
  const PhaseState rnd = PhaseState::random(5, 3, rng);
  for (int l = 1; l <= 3; ++l) {
    const CVec f = phase_factors(rnd, l);
    for (int m = 0; m < 5; ++m)
      CHECK(std::abs(std::abs(f(m)) - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(phase_factors(rnd, 0), std::out_of_range);
  CHECK_THROWS_AS(phase_factors(rnd, 4), std::out_of_range);
}

TEST_CASE("random phases are uniform in [0, 2pi)") {
  Rng rng(3);
  const PhaseState s = PhaseState::random(50, 4, rng);
  CHECK(s.theta.minCoeff() >= 0.0);
  CHECK(s.theta.maxCoeff() < kTwoPi);
}

TEST_CASE("beamforming matrix composes the layer chain") {
  const SimGeometry g = SimGeometry::standard(28e9, 3, 2, 2, 2);
  const DiffractionStack stack = build_diffraction_stack(g);

  PhaseState zero = PhaseState::zeros(4, 3);
  SUBCASE("zero phases reduce to the diffraction product") {
    CHECK(beamforming_matrix(zero, stack)
              .isApprox(stack.wl[1] * stack.wl[0] * stack.w1, 1e-14));
  }

  SUBCASE("matches the naive full-diagonal oracle") {
    Rng rng(5);
    const PhaseState s = PhaseState::random(4, 3, rng);
    const CMat f = beamforming_matrix(s, stack);
    const oracle::Mat ref = oracle::beamform(s, stack);
    for (int r = 0; r < f.rows(); ++r)
      for (int c = 0; c < f.cols(); ++c)
        CHECK(std::abs(f(r, c) - cxd((double)ref[r][c].real(),
                                     (double)ref[r][c].imag())) <= 1e-14);
  }

  SUBCASE("2pi shifts leave the matrix unchanged") {
    Rng rng(6);
    PhaseState s = PhaseState::random(4, 3, rng);
    const CMat f0 = beamforming_matrix(s, stack);
    s.theta(2, 1) += kTwoPi;
    CHECK(beamforming_matrix(s, stack).isApprox(f0, 1e-12));
  }

  SUBCASE("dimension mismatch throws") {
    const PhaseState bad = PhaseState::zeros(4, 2);
    CHECK_THROWS_AS(beamforming_matrix(bad, stack), std::invalid_argument);
  }
}

TEST_CASE("single-layer beamforming is a diagonal scale of w1") {
  const SimGeometry g = SimGeometry::standard(28e9, 1, 2, 2, 2);
  const DiffractionStack stack = build_diffraction_stack(g);
  const PhaseState zero = PhaseState::zeros(4, 1);
  CHECK(beamforming_matrix(zero, stack).isApprox(stack.w1, 1e-15));
}

TEST_CASE("phase state JSON round trip") {
  Rng rng(9);
  const PhaseState s = PhaseState::random(6, 3, rng);
  const PhaseState back = phase_from_json(phase_to_json(s), 6, 3);
  CHECK(back.theta.isApprox(s.theta, 1e-15));
  CHECK_THROWS_AS(phase_from_json(phase_to_json(s), 6, 2),
                  std::invalid_argument);
}
