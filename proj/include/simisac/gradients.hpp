// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "simisac/metrics.hpp"
#include "simisac/wavedomain.hpp"

namespace simisac {

// Per-layer factorizations of F_SIM: for every l (1-based),
//   V^l Phi^l U^l = F_SIM,
// with U^1 = W^1 and V^L = I. u[l-1] is M x N_BS, v[l-1] is M x M.
struct LayerFactors {
  std::vector<CMat> u;
  std::vector<CMat> v;
};

LayerFactors layer_factors(const PhaseState& state,
                           const DiffractionStack& stack);

// d J_MSE / d theta(m, l) for the mean-square beam-matching error against
// `desired`, using the cached steering matrix (see steering_matrix()).
RMat grad_sensing(const PhaseState& state, const DiffractionStack& stack,
                  const CMat& steering, const RMat& desired);
RMat grad_sensing(const PhaseState& state, const DiffractionStack& stack,
                  const AngleGrid& grid, const DesiredPattern& desired,
                  const SimGeometry& g);

// d R_sum / d theta(m, l) for the multi-stream sum rate with the same
// sqrt(P / N_BS) stream scaling as the objective.
RMat grad_comm(const PhaseState& state, const DiffractionStack& stack,
               const CMat& h, const TransmitConfig& cfg, double noise_mw);

// Central finite difference of an arbitrary scalar objective, one coordinate
// at a time. Verification oracle; not used on the optimization path.
RMat fd_gradient(const std::function<double(const PhaseState&)>& objective,
                 const PhaseState& state, double step);

}  // namespace simisac
