// SPDX-License-Identifier: Apache-2.0
#include "simisac/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace simisac {

void D3Config::validate() const {
  if (w_sens < 0.0 || w_sens > 1.0 || w_comm < 0.0 || w_comm > 1.0)
    throw std::invalid_argument("D3Config: weights must lie in [0, 1]");
  if (epsilon <= 0.0) throw std::invalid_argument("D3Config: epsilon must be positive");
  if (initial_step <= 0.0)
    throw std::invalid_argument("D3Config: initial_step must be positive");
  if (decay <= 0.0 || decay >= 1.0)
    throw std::invalid_argument("D3Config: decay must lie in (0, 1)");
  if (max_iters < 1) throw std::invalid_argument("D3Config: max_iters must be >= 1");
  if (rel_tol <= 0.0) throw std::invalid_argument("D3Config: rel_tol must be positive");
  if (num_restarts < 1)
    throw std::invalid_argument("D3Config: num_restarts must be >= 1");
}

Problem make_problem(const SimGeometry& g, const DiffractionStack& stack,
                     const AngleGrid& grid, const DesiredPattern& desired,
                     const CMat& h, const TransmitConfig& tx, double noise_mw) {
  Problem p;
  p.geometry = &g;
  p.stack = &stack;
  p.steering = steering_matrix(g, grid);
  p.grid_n = grid.size();
  p.desired = desired.matrix;
  p.h = h;
  p.tx = tx;
  p.noise_mw = noise_mw;
  return p;
}

Problem::Objectives Problem::evaluate(const PhaseState& state) const {
  const CMat f = beamforming_matrix(state, *stack);
  Objectives obj;
  obj.mse = (beam_pattern(f, steering, grid_n).normalized - desired)
                .squaredNorm() /
            (static_cast<double>(grid_n) * grid_n);
  obj.sum_rate = sum_rate(effective_gain_matrix(h, f, tx), noise_mw);
  return obj;
}

RMat elementwise_normalize(const RMat& g, double epsilon) {
  if (epsilon <= 0.0)
    throw std::invalid_argument("elementwise_normalize: epsilon must be positive");
  return g.unaryExpr(
      [epsilon](double v) { return v / std::sqrt(v * v + epsilon); });
}

RMat differential_gradient(const RMat& sens_norm, const RMat& comm_norm,
                           double w_sens, double w_comm) {
  if (sens_norm.rows() != comm_norm.rows() || sens_norm.cols() != comm_norm.cols())
    throw std::invalid_argument("differential_gradient: shape mismatch");
  return w_sens * sens_norm - w_comm * comm_norm;
}

std::optional<RMat> global_normalize(const RMat& g) {
  const double max_abs = g.cwiseAbs().maxCoeff();
  if (max_abs == 0.0) return std::nullopt;
  return (std::numbers::pi / max_abs) * g;
}

PhaseState step(const PhaseState& state, const RMat& g_norm, double mu) {
  if (mu <= 0.0) throw std::invalid_argument("step: mu must be positive");
  PhaseState next{state.theta - mu * g_norm};
  next.wrap();
  return next;
}

RunTrace run(const PhaseState& initial, const Problem& problem,
             const D3Config& cfg, std::uint64_t seed) {
  cfg.validate();
  RunTrace trace;
  trace.seed = seed;

  PhaseState state = initial;
  state.wrap();
  const RMat zero = RMat::Zero(state.atoms(), state.layers());

  double mu = cfg.initial_step;
  double prev_obj = 0.0;
  bool have_prev = false;
  trace.reason = StopReason::max_iters;

  for (int k = 0; k < cfg.max_iters; ++k) {
    const auto obj = problem.evaluate(state);
    const double tracked = cfg.w_sens * obj.mse - cfg.w_comm * obj.sum_rate;
    if (have_prev) {
      const double denom = std::max(std::abs(prev_obj), 1e-300);
      if (std::abs(tracked - prev_obj) / denom < cfg.rel_tol) {
        trace.reason = StopReason::tolerance;
        break;
      }
    }
    prev_obj = tracked;
    have_prev = true;

    // The element-wise normalization is scale-sensitive through epsilon, so
    // the sensing gradient enters in the unnormalized sum form (N_D^2 times
    // the mean-form metric gradient); otherwise epsilon = 1e-8 suppresses it
    // relative to the rate gradient and the beam pattern never forms.
    const double sens_scale =
        static_cast<double>(problem.grid_n) * problem.grid_n;
    const RMat gs = cfg.w_sens != 0.0
                        ? RMat(sens_scale *
                               grad_sensing(state, *problem.stack,
                                            problem.steering, problem.desired))
                        : zero;
    const RMat gc = cfg.w_comm != 0.0
                        ? grad_comm(state, *problem.stack, problem.h,
                                    problem.tx, problem.noise_mw)
                        : zero;
    const RMat diff = differential_gradient(
        elementwise_normalize(gs, cfg.epsilon),
        elementwise_normalize(gc, cfg.epsilon), cfg.w_sens, cfg.w_comm);

    IterRecord rec;
    rec.iter = k;
    rec.sum_rate = obj.sum_rate;
    rec.mse = obj.mse;
    rec.step = mu;
    rec.grad_max_abs = diff.cwiseAbs().maxCoeff();

    const auto normalized = global_normalize(diff);
    if (!normalized) {
      rec.grad_max_abs_normalized = 0.0;
      trace.iters.push_back(rec);
      trace.reason = StopReason::stationary;
      break;
    }
    rec.grad_max_abs_normalized = normalized->cwiseAbs().maxCoeff();
    trace.iters.push_back(rec);

    state = step(state, *normalized, mu);
    mu *= cfg.decay;
  }

  trace.final_state = state;
  const auto final_obj = problem.evaluate(state);
  trace.final_sum_rate = final_obj.sum_rate;
  trace.final_mse = final_obj.mse;
  return trace;
}

int select_best(const std::vector<RunTrace>& traces, double w_sens,
                double w_comm) {
  if (traces.empty())
    throw std::invalid_argument("select_best: no traces");
  int best = 0;
  for (int i = 1; i < static_cast<int>(traces.size()); ++i) {
    if (w_sens > w_comm) {
      if (traces[i].final_mse < traces[best].final_mse) best = i;
    } else {
      if (traces[i].final_sum_rate > traces[best].final_sum_rate) best = i;
    }
  }
  return best;
}

RestartResult multi_restart(const Problem& problem, const D3Config& cfg,
                            std::uint64_t master_seed) {
  cfg.validate();
  const int m = static_cast<int>(problem.stack->w1.rows());
  const int layers = static_cast<int>(problem.stack->wl.size()) + 1;

  RestartResult result;
  result.traces.reserve(cfg.num_restarts);
  for (int r = 0; r < cfg.num_restarts; ++r) {
    const std::uint64_t seed = subseed(master_seed, r);
    Rng rng(seed);
    RunTrace trace = run(PhaseState::random(m, layers, rng), problem, cfg, seed);
    trace.restart_index = r;
    result.traces.push_back(std::move(trace));
  }
  result.best_index = select_best(result.traces, cfg.w_sens, cfg.w_comm);
  result.best = result.traces[result.best_index].final_state;
  return result;
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::tolerance: return "tolerance";
    case StopReason::max_iters: return "max_iters";
    case StopReason::stationary: return "stationary";
  }
  return "unknown";
}

}  // namespace simisac
