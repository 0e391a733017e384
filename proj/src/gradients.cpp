// SPDX-License-Identifier: Apache-2.0
#include "simisac/gradients.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace simisac {

LayerFactors layer_factors(const PhaseState& state,
                           const DiffractionStack& stack) {
  const int layers = static_cast<int>(stack.wl.size()) + 1;
  const int m = static_cast<int>(stack.w1.rows());
  if (state.atoms() != m || state.layers() != layers)
    throw std::invalid_argument("layer_factors: dimension mismatch");

  LayerFactors lf;
  lf.u.resize(layers);
  lf.v.resize(layers);

  lf.u[0] = stack.w1;
  for (int l = 2; l <= layers; ++l)
    lf.u[l - 1] =
        stack.wl[l - 2] * (phase_factors(state, l - 1).asDiagonal() * lf.u[l - 2]);

  lf.v[layers - 1] = CMat::Identity(m, m);
  for (int l = layers - 1; l >= 1; --l)
    lf.v[l - 1] =
        lf.v[l] * (phase_factors(state, l + 1).asDiagonal() * stack.wl[l - 1]);
  return lf;
}

RMat grad_sensing(const PhaseState& state, const DiffractionStack& stack,
                  const CMat& steering, const RMat& desired) {
  const int grid_n = static_cast<int>(desired.rows());
  if (desired.cols() != grid_n)
    throw std::invalid_argument("grad_sensing: desired pattern must be square");
  const LayerFactors lf = layer_factors(state, stack);
  const int layers = state.layers();
  const int m = state.atoms();

  const CMat f = phase_factors(state, layers).asDiagonal() * lf.u[layers - 1];
  const CMat proj = f.adjoint() * steering;  // N_BS x n^2

  const Eigen::Index ng = steering.cols();
  RVec raw(ng);
  for (Eigen::Index g = 0; g < ng; ++g) raw(g) = proj.col(g).squaredNorm();
  const double mass = raw.sum();
  if (mass <= 0.0)
    throw std::domain_error("grad_sensing: all-zero pattern, normalization derivative undefined");

  // Fold the chain rule through the l1 normalization into one real weight
  // per grid point: dJ = sum_g weight_g * dP_S[g], with the d||P_S||_1 term
  // taken as the plain entry sum of the raw-pattern derivative.
  const double n2 = static_cast<double>(grid_n) * grid_n;
  RVec coeff(ng);
  for (int j = 0; j < grid_n; ++j)
    for (int k = 0; k < grid_n; ++k)
      coeff(j * grid_n + k) =
          (2.0 / n2) * (raw(j * grid_n + k) / mass - desired(j, k));
  const double kappa = coeff.dot(raw) / (mass * mass);
  const RVec weight = coeff / mass - RVec::Constant(ng, kappa);

  RMat grad(m, layers);
  for (int l = 1; l <= layers; ++l) {
    // b_m(g) = (a_g^H V^l)_m = conj(V^lH a_g)_m ; t_m(g) = (U^l F^H a_g)_m
    const CMat va = lf.v[l - 1].adjoint() * steering;  // M x n^2
    const CMat uc = lf.u[l - 1] * proj;                // M x n^2
    const CVec acc = (va.conjugate().cwiseProduct(uc)) * weight;
    const CVec phases = phase_factors(state, l);
    // dP_S/dtheta = 2 Re{ j e^{j theta} a^H V_{:,m} U_{m,:} F^H a }
    //             = -2 Im{ ... }; the sign is fixed by the FD oracle.
    for (int i = 0; i < m; ++i)
      grad(i, l - 1) = -2.0 * (phases(i) * acc(i)).imag();
  }
  return grad;
}

RMat grad_sensing(const PhaseState& state, const DiffractionStack& stack,
                  const AngleGrid& grid, const DesiredPattern& desired,
                  const SimGeometry& g) {
  return grad_sensing(state, stack, steering_matrix(g, grid), desired.matrix);
}

RMat grad_comm(const PhaseState& state, const DiffractionStack& stack,
               const CMat& h, const TransmitConfig& cfg, double noise_mw) {
  const LayerFactors lf = layer_factors(state, stack);
  const int layers = state.layers();
  const int m = state.atoms();
  const int nc = static_cast<int>(h.rows());
  const int nbs = cfg.num_streams();

  const CMat f = phase_factors(state, layers).asDiagonal() * lf.u[layers - 1];
  const CMat gain = effective_gain_matrix(h, f, cfg);
  const double amp = std::sqrt(cfg.total_power_mw / nbs);

  // Per-user SINR pieces. The delta_p denominator runs over all N_BS streams
  // plus the noise so the gradient matches the sum-rate objective exactly.
  RVec delta(nc), gamma(nc);
  for (int p = 0; p < nc; ++p) {
    const double signal = std::norm(gain(p, p));
    const double total = gain.row(p).squaredNorm() + noise_mw;
    delta(p) = 1.0 / total;
    gamma(p) = signal / (total - signal);
  }

  // d_p[q] = c_pq * conj(G_pq) with c_pp = 1, c_pq = -gamma_p otherwise;
  // then dR/dtheta(m,l) = -(2/ln2) sum_p delta_p Im{ e^{j theta} B_pm (U^l d_p)_m }.
  CMat d(nbs, nc);
  for (int p = 0; p < nc; ++p) {
    for (int q = 0; q < nbs; ++q)
      d(q, p) = (q == p ? 1.0 : -gamma(p)) * std::conj(gain(p, q));
  }

  const double scale = -2.0 / std::numbers::ln2;
  RMat grad(m, layers);
  for (int l = 1; l <= layers; ++l) {
    const CMat b = amp * (h * lf.v[l - 1]);  // N_C x M
    const CMat t = lf.u[l - 1] * d;          // M x N_C, column p = U^l d_p
    const CVec phases = phase_factors(state, l);
    for (int i = 0; i < m; ++i) {
      cxd acc(0.0, 0.0);
      for (int p = 0; p < nc; ++p) acc += delta(p) * b(p, i) * t(i, p);
      grad(i, l - 1) = scale * (phases(i) * acc).imag();
    }
  }
  return grad;
}

RMat fd_gradient(const std::function<double(const PhaseState&)>& objective,
                 const PhaseState& state, double step) {
  if (step <= 0.0) throw std::invalid_argument("fd_gradient: step must be positive");
  RMat grad(state.atoms(), state.layers());
  PhaseState probe = state;
  for (int l = 0; l < state.layers(); ++l) {
    for (int m = 0; m < state.atoms(); ++m) {
      const double base = state.theta(m, l);
      probe.theta(m, l) = base + step;
      const double hi = objective(probe);
      probe.theta(m, l) = base - step;
      const double lo = objective(probe);
      probe.theta(m, l) = base;
      grad(m, l) = (hi - lo) / (2.0 * step);
    }
  }
  return grad;
}

}  // namespace simisac
