// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "simisac/optimizer.hpp"
#include "simisac/stats.hpp"

namespace simisac {

// One physical scenario; the standard setup is the zero-config run.
// Target bins use 1-based grid indexing.
struct ScenarioSpec {
  double carrier_ghz = 28.0;
  int num_layers = 7;
  int rows = 10;
  int cols = 10;
  double sim_thickness_m = 0.05;
  double feed_offset_m = 0.0;  // 0 means one inter-layer spacing
  int num_users = 4;
  int num_targets = 2;
  double tx_power_dbm = 20.0;
  LinkBudget budget;
  int num_paths = 3;      // Q_n
  double plane_x_m = 10.0;
  std::vector<std::pair<double, double>> user_aod_deg = {
      {60.0, 45.0}, {60.0, 35.0}, {-60.0, -45.0}, {-60.0, -30.0}};
  int grid_samples = 36;  // N_D
  std::vector<std::pair<int, int>> target_bins = {{9, 27}, {27, 9}};
  bool unit_mass_target = false;   // scale the desired pattern to l1 mass 1
  bool grid_bin_centers = false;   // evaluate bins at centers, not lower edges

  void validate() const;
};

SimGeometry make_geometry(const ScenarioSpec& s, int atoms, int layers);
// Copy of s.budget with an unset (NaN) C_0 replaced by the 1 m free-space
// loss at the scenario carrier.
LinkBudget make_budget(const ScenarioSpec& s);
std::vector<UserSpec> make_users(const ScenarioSpec& s);
AngleGrid make_grid(const ScenarioSpec& s);
TransmitConfig make_transmit(const ScenarioSpec& s);
DesiredPattern make_desired(const ScenarioSpec& s, const AngleGrid& grid);

struct SweepSpec {
  std::vector<int> atoms = {100};   // perfect squares (rows = cols)
  std::vector<int> layers = {7};
  std::vector<std::pair<double, double>> weights = {{1.0, 1.0}};  // (w1, w2)
};

struct ExperimentSpec {
  ScenarioSpec scenario;
  D3Config optimizer;
  SweepSpec sweep;
  int num_realizations = 100;
  std::uint64_t master_seed = 1;
  std::string out_dir = "out";

  void validate() const;
};

nlohmann::json spec_to_json(const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const nlohmann::json& j);
ExperimentSpec load_spec(const std::string& path);
// fig2 | fig3 | fig45 | fig67
ExperimentSpec preset(const std::string& name);

struct RealizationRecord {
  std::uint64_t channel_seed = 0;
  double final_rate = 0.0;
  double final_mse = 0.0;
  int iterations = 0;  // trace length of the selected restart
  std::string reason;
  int best_restart = 0;
  std::vector<std::pair<int, int>> top_bins;  // two largest bins, 1-based
  std::vector<double> trace_rate;
  std::vector<double> trace_mse;
};

struct CellStats {
  double mean_rate = 0.0;
  double median_rate = 0.0;
  double p10_rate = 0.0;
  double p90_rate = 0.0;
  double mean_mse = 0.0;
  double mean_mse_db = 0.0;
  double median_mse_db = 0.0;
  double mean_iterations = 0.0;
  std::vector<int> iteration_histogram;  // index = iteration count
};

CellStats aggregate(const std::vector<RealizationRecord>& records);

struct CellResult {
  int atoms = 0;
  int layers = 0;
  double w_sens = 0.0;
  double w_comm = 0.0;
  bool ok = true;
  std::string error;
  std::vector<RealizationRecord> records;
  CellStats stats;
  int selected_realization = 0;  // by the restart selection rule
  RMat selected_pattern;         // normalized beam pattern of that realization
};

struct MonteCarloReport {
  ExperimentSpec spec;
  std::vector<CellResult> cells;
};

// Deterministic given spec.master_seed, including under parallel execution:
// realization r of every cell reuses channel seed subseed(master, r), so
// sweep cells at equal M are paired on identical channels.
MonteCarloReport run_experiment(const ExperimentSpec& spec, int threads = 1);

nlohmann::ordered_json report_to_json(const MonteCarloReport& report);
MonteCarloReport report_from_json(const nlohmann::json& j);

// Writes plot-ready CSV/JSON for fig2 | fig3 | fig45 | fig67 into out_dir.
// Returns the paths written.
std::vector<std::string> emit_figure_data(const MonteCarloReport& report,
                                          const std::string& figure_id,
                                          const std::string& out_dir);

struct ProbeRow {
  int atoms = 0;
  int layers = 0;
  int grid_n = 0;
  double sec_per_iter = 0.0;
};

// Times one full gradient step (both analytic gradients plus the D3 update)
// at each (atoms, layers, grid_n) size.
std::vector<ProbeRow> scaling_probe(const ScenarioSpec& scenario,
                                    const std::vector<std::array<int, 3>>& sizes,
                                    int iters_per_point, std::uint64_t seed);

}  // namespace simisac
