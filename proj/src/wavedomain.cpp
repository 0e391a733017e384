// SPDX-License-Identifier: Apache-2.0
#include "simisac/wavedomain.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace simisac {

double wrap_phase(double radians) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(radians, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w = 0.0;  // fmod can land exactly on 2*pi after rounding
  return w;
}

void PhaseState::wrap() {
  theta = theta.unaryExpr([](double v) { return wrap_phase(v); });
}

PhaseState PhaseState::zeros(int atoms, int layers) {
  return {RMat::Zero(atoms, layers)};
}

PhaseState PhaseState::constant(int atoms, int layers, double value) {
  PhaseState s{RMat::Constant(atoms, layers, value)};
  s.wrap();
  return s;
}

PhaseState PhaseState::random(int atoms, int layers, Rng& rng) {
  PhaseState s{RMat(atoms, layers)};
  const double two_pi = 2.0 * std::numbers::pi;
  for (int l = 0; l < layers; ++l)
    for (int m = 0; m < atoms; ++m) s.theta(m, l) = two_pi * rng.uniform();
  return s;
}

CVec phase_factors(const PhaseState& state, int layer) {
  if (layer < 1 || layer > state.layers())
    throw std::out_of_range("phase_factors: layer index out of range");
  CVec f(state.atoms());
  for (int m = 0; m < state.atoms(); ++m)
    f(m) = std::polar(1.0, state.theta(m, layer - 1));
  return f;
}

CMat phase_matrix(const PhaseState& state, int layer) {
  return CMat(phase_factors(state, layer).asDiagonal());
}

CMat beamforming_matrix(const PhaseState& state, const DiffractionStack& stack) {
  const int m = static_cast<int>(stack.w1.rows());
  const int layers = static_cast<int>(stack.wl.size()) + 1;
  if (state.atoms() != m || state.layers() != layers)
    throw std::invalid_argument("beamforming_matrix: dimension mismatch");
  CMat f = phase_factors(state, 1).asDiagonal() * stack.w1;
  for (int l = 2; l <= layers; ++l)
    f = phase_factors(state, l).asDiagonal() * (stack.wl[l - 2] * f);
  return f;
}

nlohmann::json phase_to_json(const PhaseState& state) {
  nlohmann::json arr = nlohmann::json::array();
  for (int l = 0; l < state.layers(); ++l)
    for (int m = 0; m < state.atoms(); ++m) arr.push_back(state.theta(m, l));
  return arr;
}

PhaseState phase_from_json(const nlohmann::json& j, int atoms, int layers) {
  if (!j.is_array() || static_cast<int>(j.size()) != atoms * layers)
    throw std::invalid_argument("phase_from_json: wrong element count");
  PhaseState s{RMat(atoms, layers)};
  int i = 0;
  for (int l = 0; l < layers; ++l)
    for (int m = 0; m < atoms; ++m) s.theta(m, l) = j[i++].get<double>();
  s.wrap();
  return s;
}

}  // namespace simisac
