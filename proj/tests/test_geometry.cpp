// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "simisac/geometry.hpp"

using namespace simisac;

namespace {
constexpr double kPi = std::numbers::pi;

SimGeometry small_geometry(int layers, int rows, int cols, int feeds) {
  return SimGeometry::standard(28e9, layers, rows, cols, feeds);
}
}  // namespace

TEST_CASE("standard geometry fields") {
  const SimGeometry g = small_geometry(7, 10, 10, 6);
  CHECK(g.wavelength == doctest::Approx(kSpeedOfLight / 28e9));
  CHECK(g.atom_spacing_y == doctest::Approx(g.wavelength / 2));
  CHECK(g.atom_spacing_z == doctest::Approx(g.wavelength / 2));
  CHECK(g.atom_area == doctest::Approx(g.wavelength * g.wavelength / 4));
  CHECK(g.atoms_per_layer() == 100);
  CHECK(g.layer_spacing() * g.num_layers == doctest::Approx(g.sim_thickness));
  CHECK(g.feed_offset == doctest::Approx(g.layer_spacing()));
}

TEST_CASE("geometry validation names the offending field") {
  SimGeometry g = small_geometry(2, 2, 2, 2);
  g.wavelength = -1.0;
  CHECK_THROWS_WITH_AS(g.validate(), "SimGeometry: wavelength must be positive",
                       std::invalid_argument);
  g = small_geometry(2, 2, 2, 2);
  g.num_feeds = 0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("layer planes end at the origin") {
  const SimGeometry g = small_geometry(5, 2, 2, 2);
  CHECK(layer_plane_x(g, g.num_layers) == doctest::Approx(0.0));
  CHECK(layer_plane_x(g, 1) ==
        doctest::Approx(-g.sim_thickness + g.layer_spacing()));
  CHECK_THROWS_AS(layer_plane_x(g, 0), std::out_of_range);
  CHECK_THROWS_AS(layer_plane_x(g, 6), std::out_of_range);
}

TEST_CASE("atom positions form a centered grid") {
  SimGeometry g = small_geometry(1, 1, 1, 1);
  const Vec3 lone = atom_position(g, 1, 0);
  CHECK(lone.x() == doctest::Approx(0.0));
  CHECK(lone.y() == doctest::Approx(0.0));
  CHECK(lone.z() == doctest::Approx(0.0));

  g = small_geometry(1, 2, 2, 1);
  const double q = g.wavelength / 4;
  // row-major: atom = row * cols + col; rows move along y, cols along z
  CHECK(atom_position(g, 1, 0).y() == doctest::Approx(-q));
  CHECK(atom_position(g, 1, 0).z() == doctest::Approx(-q));
  CHECK(atom_position(g, 1, 1).y() == doctest::Approx(-q));
  CHECK(atom_position(g, 1, 1).z() == doctest::Approx(+q));
  CHECK(atom_position(g, 1, 2).y() == doctest::Approx(+q));
  CHECK(atom_position(g, 1, 2).z() == doctest::Approx(-q));
  CHECK(atom_position(g, 1, 3).y() == doctest::Approx(+q));
  CHECK(atom_position(g, 1, 3).z() == doctest::Approx(+q));
  CHECK_THROWS_AS(atom_position(g, 1, 4), std::out_of_range);
}

TEST_CASE("feed ULA is centered and parallel to y") {
  const SimGeometry g = small_geometry(2, 2, 2, 3);
  CHECK(feed_position(g, 1).y() == doctest::Approx(0.0));
  CHECK(feed_position(g, 0).y() == doctest::Approx(-g.feed_spacing));
  CHECK(feed_position(g, 2).y() == doctest::Approx(+g.feed_spacing));
  for (int f = 0; f < 3; ++f) {
    CHECK(feed_position(g, f).z() == doctest::Approx(0.0));
    CHECK(feed_position(g, f).x() ==
          doctest::Approx(layer_plane_x(g, 1) - g.feed_offset));
  }
}

TEST_CASE("interlayer coefficient closed forms") {
  const double lam = 0.0107;
  // r = lambda, full phase turn: (lam/4) * (1/(2 pi lam) - j/lam), the
  // wavelength cancels and the value is 1/(8 pi) - j/4
  const cxd c = interlayer_coefficient(lam * lam / 4, lam, 1.0, lam);
  CHECK(c.real() == doctest::Approx(1.0 / (8 * kPi)).epsilon(1e-12));
  CHECK(c.imag() == doctest::Approx(-0.25).epsilon(1e-12));

  CHECK(std::abs(interlayer_coefficient(lam * lam / 4, lam, 0.0, lam)) ==
        doctest::Approx(0.0));

  // r = lambda/2: direct long double evaluation of the same formula
  const long double r = lam / 2.0L, a = (long double)lam * lam / 4;
  const std::complex<long double> radial(1.0L / (2 * kPi * r), -1.0L / lam);
  const std::complex<long double> phase = std::polar(1.0L, 2 * kPi * r / lam);
  const std::complex<long double> want = (a / r) * radial * phase;
  const cxd got = interlayer_coefficient(lam * lam / 4, lam / 2, 1.0, lam);
  CHECK(got.real() == doctest::Approx((double)want.real()).epsilon(1e-12));
  CHECK(got.imag() == doctest::Approx((double)want.imag()).epsilon(1e-12));

  CHECK_THROWS_AS(interlayer_coefficient(1.0, 0.0, 1.0, lam),
                  std::invalid_argument);
}

TEST_CASE("coefficient magnitude decreases with distance") {
  const double lam = 0.0107;
  double prev = 1e300;
  for (double r = lam / 4; r <= 100 * lam; r *= 1.17) {
    const double mag = std::abs(interlayer_coefficient(1.0, r, 1.0, lam));
    CHECK(mag < prev);
    prev = mag;
  }
}

TEST_CASE("diffraction stack matches a brute-force oracle") {
  const SimGeometry g = small_geometry(2, 2, 2, 2);
  const DiffractionStack stack = build_diffraction_stack(g);
  REQUIRE(stack.w1.rows() == 4);
  REQUIRE(stack.w1.cols() == 2);
  REQUIRE(stack.wl.size() == 1);
  REQUIRE(stack.wl[0].rows() == 4);

  // independent recomputation from raw positions
  for (int dst = 0; dst < 4; ++dst) {
    for (int src = 0; src < 2; ++src) {
      const Vec3 d = atom_position(g, 1, dst) - feed_position(g, src);
      const double r = d.norm();
      const cxd want =
          interlayer_coefficient(g.atom_area, r, d.x() / r, g.wavelength);
      CHECK(std::abs(stack.w1(dst, src) - want) <= 1e-15);
    }
    for (int src = 0; src < 4; ++src) {
      const Vec3 d = atom_position(g, 2, dst) - atom_position(g, 1, src);
      const double r = d.norm();
      const cxd want =
          interlayer_coefficient(g.atom_area, r, d.x() / r, g.wavelength);
      CHECK(std::abs(stack.wl[0](dst, src) - want) <= 1e-15);
    }
  }
}

TEST_CASE("single on-axis pair") {
  SimGeometry g = small_geometry(1, 1, 1, 1);
  const DiffractionStack stack = build_diffraction_stack(g);
  const cxd want = interlayer_coefficient(g.atom_area, g.feed_offset, 1.0,
                                          g.wavelength);
  CHECK(std::abs(stack.w1(0, 0) - want) <= 1e-18);
}

TEST_CASE("mirror-symmetric atoms see an on-axis source equally") {
  const SimGeometry g = small_geometry(1, 3, 1, 1);
  const DiffractionStack stack = build_diffraction_stack(g);
  // atoms 0 and 2 are mirror images about the x-axis; the feed is on-axis
  CHECK(std::abs(stack.w1(0, 0) - stack.w1(2, 0)) <= 1e-18);
}

TEST_CASE("stack construction is deterministic") {
  const SimGeometry g = small_geometry(3, 3, 2, 2);
  const DiffractionStack a = build_diffraction_stack(g);
  const DiffractionStack b = build_diffraction_stack(g);
  CHECK(a.w1 == b.w1);
  for (std::size_t l = 0; l < a.wl.size(); ++l) CHECK(a.wl[l] == b.wl[l]);
}
