// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simisac/gradients.hpp"

namespace simisac {

struct D3Config {
  double w_sens = 1.0;        // w1
  double w_comm = 1.0;        // w2
  double epsilon = 1e-8;
  double initial_step = 1.0;  // mu0
  double decay = 0.5;         // beta
  int max_iters = 60;
  double rel_tol = 1e-6;
  int num_restarts = 5;

  void validate() const;
};

// Everything a run needs besides the phase state: one channel realization in
// one scenario. The steering matrix is cached because it dominates the
// per-iteration sensing-gradient cost.
struct Problem {
  const SimGeometry* geometry = nullptr;
  const DiffractionStack* stack = nullptr;
  CMat steering;  // M x n^2
  int grid_n = 0;
  RMat desired;   // n x n
  CMat h;         // N_C x M
  TransmitConfig tx;
  double noise_mw = 0.0;

  struct Objectives {
    double sum_rate = 0.0;
    double mse = 0.0;
  };
  Objectives evaluate(const PhaseState& state) const;
};

Problem make_problem(const SimGeometry& g, const DiffractionStack& stack,
                     const AngleGrid& grid, const DesiredPattern& desired,
                     const CMat& h, const TransmitConfig& tx, double noise_mw);

struct IterRecord {
  int iter = 0;
  double sum_rate = 0.0;
  double mse = 0.0;
  double step = 0.0;           // mu used at this iteration
  double grad_max_abs = 0.0;   // max |G| before global normalization
  double grad_max_abs_normalized = 0.0;  // max |G-bar|, pi by construction
};

enum class StopReason { tolerance, max_iters, stationary };
std::string to_string(StopReason reason);

struct RunTrace {
  std::vector<IterRecord> iters;
  PhaseState final_state;
  StopReason reason = StopReason::max_iters;
  int restart_index = 0;
  std::uint64_t seed = 0;
  double final_sum_rate = 0.0;
  double final_mse = 0.0;
};

// g / sqrt(g^2 + eps), entry-wise; output lies in (-1, 1).
RMat elementwise_normalize(const RMat& g, double epsilon);

// w1 * g_sens - w2 * g_comm (descend the error, ascend the rate).
RMat differential_gradient(const RMat& sens_norm, const RMat& comm_norm,
                           double w_sens, double w_comm);

// Rescale so max |entry| = pi. nullopt for an all-zero input, which
// the loop treats as a stationary point rather than an error.
std::optional<RMat> global_normalize(const RMat& g);

// theta <- wrap(theta - mu * g_norm). The caller decays mu afterward.
PhaseState step(const PhaseState& state, const RMat& g_norm, double mu);

RunTrace run(const PhaseState& initial, const Problem& problem,
             const D3Config& cfg, std::uint64_t seed);

struct RestartResult {
  PhaseState best;
  int best_index = 0;
  std::vector<RunTrace> traces;
};

// Selection rule over the final iterates: lowest J_MSE when w1 > w2,
// highest R_sum otherwise.
int select_best(const std::vector<RunTrace>& traces, double w_sens,
                double w_comm);

RestartResult multi_restart(const Problem& problem, const D3Config& cfg,
                            std::uint64_t master_seed);

}  // namespace simisac
