// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace simisac {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kSpeedOfLight = 299792458.0;

// Physical layout of the feed ULA and the stacked metasurface layers.
// All lengths in meters. Layers are parallel to the y-z plane; the outermost
// layer (index L) sits at x = 0, the stack extends toward negative x, and the
// feed ULA sits feed_offset behind layer 1.
struct SimGeometry {
  double wavelength = 0.0;
  int num_layers = 0;     // L
  int rows = 0;           // M_r, along y
  int cols = 0;           // M_c, along z
  double atom_spacing_y = 0.0;
  double atom_spacing_z = 0.0;
  double atom_area = 0.0;
  double sim_thickness = 0.0;
  int num_feeds = 0;      // N_BS
  double feed_spacing = 0.0;
  double feed_offset = 0.0;  // feed plane to layer 1 along the stack axis

  int atoms_per_layer() const { return rows * cols; }
  double layer_spacing() const { return sim_thickness / num_layers; }

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  // Half-wavelength spacings, (lambda/2)^2 atom area, feed_offset = layer spacing.
  static SimGeometry standard(double carrier_hz, int layers, int rows,
                              int cols, int feeds, double thickness = 0.05);
};

// Plane of layer l (1-based): x = -thickness + l * layer_spacing.
double layer_plane_x(const SimGeometry& g, int layer);

// Position of atom m (0-based, row-major over rows x cols) on layer (1-based).
// The grid is centered on the x-axis.
Vec3 atom_position(const SimGeometry& g, int layer, int atom);

// Position of feed antenna (0-based); the ULA is centered on the stack axis
// and parallel to the y-axis.
Vec3 feed_position(const SimGeometry& g, int feed);

// Rayleigh-Sommerfeld inter-element coefficient:
//   (A_t cos(chi) / r) * (1/(2 pi r) - j/lambda) * exp(j 2 pi r / lambda)
cxd interlayer_coefficient(double area, double distance,
                           double obliquity_cosine, double wavelength);

// Precomputed diffraction matrices. w1 maps the feed array to layer 1
// (M x N_BS); wl[l-2] maps layer l-1 to layer l (M x M) for l = 2..L.
struct DiffractionStack {
  CMat w1;
  std::vector<CMat> wl;
};

DiffractionStack build_diffraction_stack(const SimGeometry& g);

}  // namespace simisac
