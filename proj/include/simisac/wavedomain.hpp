// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "simisac/geometry.hpp"
#include "simisac/rng.hpp"

namespace simisac {

// Wraps into [0, 2*pi).
double wrap_phase(double radians);

// The optimization variable: one phase shift per meta-atom per layer.
// theta(m, l) is the shift of atom m on layer l+1; entries live in [0, 2*pi).
struct PhaseState {
  RMat theta;  // M x L

  int atoms() const { return static_cast<int>(theta.rows()); }
  int layers() const { return static_cast<int>(theta.cols()); }

  void wrap();

  static PhaseState zeros(int atoms, int layers);
  static PhaseState constant(int atoms, int layers, double value);
  // Uniform in [0, 2*pi).
  static PhaseState random(int atoms, int layers, Rng& rng);
};

// Diagonal entries exp(j * theta(:, layer)) for layer in 1..L.
CVec phase_factors(const PhaseState& state, int layer);

// Full diagonal matrix of phase_factors; handy for tests and small cases.
CMat phase_matrix(const PhaseState& state, int layer);

// F_SIM = Phi^L W^L ... Phi^1 W^1, composed right-to-left without
// materializing the diagonal matrices. Result is M x N_BS.
CMat beamforming_matrix(const PhaseState& state, const DiffractionStack& stack);

// Flat row-major, layer-major array: element i = theta(i % M, i / M).
nlohmann::json phase_to_json(const PhaseState& state);
PhaseState phase_from_json(const nlohmann::json& j, int atoms, int layers);

}  // namespace simisac
