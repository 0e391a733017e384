// SPDX-License-Identifier: Apache-2.0
#include "simisac/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace simisac {

namespace {
void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("SimGeometry: " + what);
}
}  // namespace

void SimGeometry::validate() const {
  require(wavelength > 0.0, "wavelength must be positive");
  require(num_layers >= 1, "num_layers must be >= 1");
  require(rows >= 1 && cols >= 1, "rows and cols must be >= 1");
  require(atom_spacing_y > 0.0, "atom_spacing_y must be positive");
  require(atom_spacing_z > 0.0, "atom_spacing_z must be positive");
  require(atom_area > 0.0, "atom_area must be positive");
  require(sim_thickness > 0.0, "sim_thickness must be positive");
  require(num_feeds >= 1, "num_feeds must be >= 1");
  require(feed_spacing > 0.0, "feed_spacing must be positive");
  require(feed_offset > 0.0, "feed_offset must be positive");
}

SimGeometry SimGeometry::standard(double carrier_hz, int layers, int rows,
                                  int cols, int feeds, double thickness) {
  SimGeometry g;
  g.wavelength = kSpeedOfLight / carrier_hz;
  g.num_layers = layers;
  g.rows = rows;
  g.cols = cols;
  g.atom_spacing_y = g.wavelength / 2.0;
  g.atom_spacing_z = g.wavelength / 2.0;
  g.atom_area = g.wavelength * g.wavelength / 4.0;
  g.sim_thickness = thickness;
  g.num_feeds = feeds;
  g.feed_spacing = g.wavelength / 2.0;
  g.feed_offset = g.layer_spacing();
  g.validate();
  return g;
}

double layer_plane_x(const SimGeometry& g, int layer) {
  if (layer < 1 || layer > g.num_layers)
    throw std::out_of_range("layer index out of range");
  return -g.sim_thickness + layer * g.layer_spacing();
}

Vec3 atom_position(const SimGeometry& g, int layer, int atom) {
  const int m = g.atoms_per_layer();
  if (atom < 0 || atom >= m) throw std::out_of_range("atom index out of range");
  const double x = layer_plane_x(g, layer);
  const int row = atom / g.cols;
  const int col = atom % g.cols;
  const double y = (row - 0.5 * (g.rows - 1)) * g.atom_spacing_y;
  const double z = (col - 0.5 * (g.cols - 1)) * g.atom_spacing_z;
  return {x, y, z};
}

Vec3 feed_position(const SimGeometry& g, int feed) {
  if (feed < 0 || feed >= g.num_feeds)
    throw std::out_of_range("feed index out of range");
  const double x = layer_plane_x(g, 1) - g.feed_offset;
  const double y = (feed - 0.5 * (g.num_feeds - 1)) * g.feed_spacing;
  return {x, y, 0.0};
}

cxd interlayer_coefficient(double area, double distance,
                           double obliquity_cosine, double wavelength) {
  if (distance <= 0.0)
    throw std::invalid_argument("interlayer_coefficient: distance must be positive");
  if (wavelength <= 0.0)
    throw std::invalid_argument("interlayer_coefficient: wavelength must be positive");
  const double two_pi = 2.0 * std::numbers::pi;
  const cxd radial(1.0 / (two_pi * distance), -1.0 / wavelength);
  const cxd phase = std::polar(1.0, two_pi * distance / wavelength);
  return (area * obliquity_cosine / distance) * radial * phase;
}

DiffractionStack build_diffraction_stack(const SimGeometry& g) {
  g.validate();
  const int m = g.atoms_per_layer();
  DiffractionStack stack;

  stack.w1.resize(m, g.num_feeds);
  for (int dst = 0; dst < m; ++dst) {
    const Vec3 p = atom_position(g, 1, dst);
    for (int src = 0; src < g.num_feeds; ++src) {
      const Vec3 q = feed_position(g, src);
      const Vec3 d = p - q;
      const double r = d.norm();
      stack.w1(dst, src) =
          interlayer_coefficient(g.atom_area, r, d.x() / r, g.wavelength);
    }
  }

  stack.wl.reserve(g.num_layers - 1);
  for (int layer = 2; layer <= g.num_layers; ++layer) {
    CMat w(m, m);
    for (int dst = 0; dst < m; ++dst) {
      const Vec3 p = atom_position(g, layer, dst);
      for (int src = 0; src < m; ++src) {
        const Vec3 q = atom_position(g, layer - 1, src);
        const Vec3 d = p - q;
        const double r = d.norm();
        w(dst, src) =
            interlayer_coefficient(g.atom_area, r, d.x() / r, g.wavelength);
      }
    }
    stack.wl.push_back(std::move(w));
  }
  return stack;
}

}  // namespace simisac
