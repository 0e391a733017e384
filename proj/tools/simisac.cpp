// SPDX-License-Identifier: Apache-2.0
//
// CLI front end: seeded Monte-Carlo campaigns, figure data export, gradient
// verification, and the complexity probe.

#include <CLI11.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "simisac/harness.hpp"

namespace {

using namespace simisac;

int cmd_run(const std::string& config_path, const std::string& preset_name,
            std::uint64_t seed, bool seed_set, int realizations,
            const std::string& out_dir, int threads) {
  ExperimentSpec spec;
  if (!preset_name.empty())
    spec = preset(preset_name);
  else if (!config_path.empty())
    spec = load_spec(config_path);
  // else: standard-scenario defaults

  if (seed_set) spec.master_seed = seed;
  if (realizations > 0) spec.num_realizations = realizations;
  if (!out_dir.empty()) spec.out_dir = out_dir;
  spec.validate();

  std::cerr << "running " << spec.sweep.atoms.size() * spec.sweep.layers.size() *
                                 spec.sweep.weights.size()
            << " cell(s) x " << spec.num_realizations << " realization(s), seed "
            << spec.master_seed << "\n";
  const MonteCarloReport report = run_experiment(spec, threads);

  std::filesystem::create_directories(spec.out_dir);
  const std::string path =
      (std::filesystem::path(spec.out_dir) / "report.json").string();
  std::ofstream out(path);
  out << report_to_json(report).dump(2) << "\n";
  std::cerr << "wrote " << path << "\n";

  for (const auto& cell : report.cells) {
    std::cout << "M=" << cell.atoms << " L=" << cell.layers
              << " w1=" << cell.w_sens << " w2=" << cell.w_comm;
    if (cell.ok)
      std::cout << "  mean R_sum=" << cell.stats.mean_rate
                << " bit/s/Hz  mean J_MSE=" << cell.stats.mean_mse_db
                << " dB  mean iters=" << cell.stats.mean_iterations << "\n";
    else
      std::cout << "  FAILED: " << cell.error << "\n";
  }
  return 0;
}

int cmd_figure(const std::string& report_path, const std::string& figure_id,
               const std::string& out_dir) {
  std::ifstream in(report_path);
  if (!in) {
    std::cerr << "cannot read " << report_path << "\n";
    return 1;
  }
  nlohmann::json j;
  in >> j;
  const MonteCarloReport report = report_from_json(j);
  for (const auto& path : emit_figure_data(report, figure_id, out_dir))
    std::cout << path << "\n";
  return 0;
}

int cmd_gradcheck(int atoms, int layers, int grid_n, std::uint64_t seed,
                  double fd_step) {
  ScenarioSpec scenario;
  scenario.num_users = 2;
  scenario.num_targets = 1;
  scenario.user_aod_deg = {{60.0, 45.0}, {-60.0, -30.0}};
  scenario.grid_samples = grid_n;
  scenario.target_bins = {{std::max(1, grid_n / 4), std::max(1, 3 * grid_n / 4)}};

  const SimGeometry g = make_geometry(scenario, atoms, layers);
  const DiffractionStack stack = build_diffraction_stack(g);
  const AngleGrid grid = make_grid(scenario);
  const DesiredPattern desired = make_desired(scenario, grid);
  const TransmitConfig tx = make_transmit(scenario);
  const LinkBudget budget = make_budget(scenario);
  const double noise_mw = budget.noise_mw();
  const ChannelRealization chan =
      sample_channel(g, make_users(scenario), budget, seed);
  const Problem problem =
      make_problem(g, stack, grid, desired, chan.h, tx, noise_mw);

  Rng rng(subseed(seed, 1));
  const PhaseState state = PhaseState::random(atoms, layers, rng);

  const RMat gs = grad_sensing(state, stack, problem.steering, problem.desired);
  const RMat gc = grad_comm(state, stack, chan.h, tx, noise_mw);
  const RMat fs = fd_gradient(
      [&](const PhaseState& s) { return problem.evaluate(s).mse; }, state, fd_step);
  const RMat fc = fd_gradient(
      [&](const PhaseState& s) { return problem.evaluate(s).sum_rate; }, state,
      fd_step);

  auto report = [](const char* name, const RMat& analytic, const RMat& fd) {
    double worst = 0.0;
    for (int l = 0; l < analytic.cols(); ++l)
      for (int m = 0; m < analytic.rows(); ++m) {
        const double diff = std::abs(analytic(m, l) - fd(m, l));
        if (diff >= 1e-9)
          worst = std::max(worst, diff / std::max(std::abs(fd(m, l)), 1e-9));
      }
    std::cout << name << ": max |analytic|=" << analytic.cwiseAbs().maxCoeff()
              << "  max rel err vs FD=" << worst << "\n";
    return worst;
  };
  const double ws = report("d J_MSE / d theta", gs, fs);
  const double wc = report("d R_sum / d theta", gc, fc);
  return (ws < 1e-4 && wc < 1e-4) ? 0 : 1;
}

int cmd_probe(int atoms, int layers, const std::vector<int>& grid_sizes,
              int iters, std::uint64_t seed) {
  ScenarioSpec scenario;
  std::vector<std::array<int, 3>> sizes;
  for (int n : grid_sizes) sizes.push_back({atoms, layers, n});
  const auto rows = scaling_probe(scenario, sizes, iters, seed);
  std::vector<double> logx, logy;
  std::cout << "atoms,layers,grid_n,sec_per_iter\n";
  for (const auto& r : rows) {
    std::cout << r.atoms << "," << r.layers << "," << r.grid_n << ","
              << r.sec_per_iter << "\n";
    logx.push_back(std::log(double(r.grid_n)));
    logy.push_back(std::log(r.sec_per_iter));
  }
  if (rows.size() >= 2)
    std::cout << "log-log slope vs grid_n: " << ls_slope(logx, logy) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SIM-enabled ISAC transmit beamforming simulator"};
  app.require_subcommand(1);

  // run
  std::string config_path, preset_name, out_dir;
  std::uint64_t seed = 1;
  int realizations = 0, threads = 1;
  auto* run_cmd = app.add_subcommand("run", "run a seeded Monte-Carlo campaign");
  run_cmd->add_option("--config", config_path, "experiment spec JSON");
  run_cmd->add_option("--preset", preset_name, "fig2|fig3|fig45|fig67")
      ->check(CLI::IsMember({"fig2", "fig3", "fig45", "fig67"}));
  auto* seed_opt = run_cmd->add_option("--seed", seed, "master seed");
  run_cmd->add_option("--realizations", realizations, "override realization count");
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--threads", threads, "worker threads");

  // figure
  std::string report_path = "out/report.json", figure_id = "fig2",
              figure_out = "out";
  auto* fig_cmd = app.add_subcommand("figure", "emit plot-ready figure data");
  fig_cmd->add_option("--report", report_path, "report.json from `run`");
  fig_cmd->add_option("--id", figure_id, "fig2|fig3|fig45|fig67")->required();
  fig_cmd->add_option("--out", figure_out, "output directory");

  // gradcheck
  int gc_atoms = 16, gc_layers = 3, gc_grid = 8;
  std::uint64_t gc_seed = 1;
  double gc_step = 1e-6;
  auto* gc_cmd = app.add_subcommand("gradcheck",
                                    "compare analytic gradients against finite differences");
  gc_cmd->add_option("--atoms", gc_atoms, "meta-atoms per layer (square)");
  gc_cmd->add_option("--layers", gc_layers, "metasurface layers");
  gc_cmd->add_option("--grid", gc_grid, "angle samples per axis");
  gc_cmd->add_option("--seed", gc_seed, "seed");
  gc_cmd->add_option("--step", gc_step, "FD step in radians");

  // probe
  int pr_atoms = 64, pr_layers = 4, pr_iters = 10;
  std::vector<int> pr_grids = {16, 32, 64};
  std::uint64_t pr_seed = 1;
  auto* pr_cmd = app.add_subcommand("probe", "per-iteration timing vs problem size");
  pr_cmd->add_option("--atoms", pr_atoms, "meta-atoms per layer (square)");
  pr_cmd->add_option("--layers", pr_layers, "metasurface layers");
  pr_cmd->add_option("--grids", pr_grids, "grid sizes to time");
  pr_cmd->add_option("--iters", pr_iters, "iterations per point");
  pr_cmd->add_option("--seed", pr_seed, "seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed())
      return cmd_run(config_path, preset_name, seed, seed_opt->count() > 0,
                     realizations, out_dir, threads);
    if (fig_cmd->parsed()) return cmd_figure(report_path, figure_id, figure_out);
    if (gc_cmd->parsed())
      return cmd_gradcheck(gc_atoms, gc_layers, gc_grid, gc_seed, gc_step);
    if (pr_cmd->parsed())
      return cmd_probe(pr_atoms, pr_layers, pr_grids, pr_iters, pr_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
