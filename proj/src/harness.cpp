// SPDX-License-Identifier: Apache-2.0
#include "simisac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace simisac {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

int square_side(int atoms) {
  const int side = static_cast<int>(std::lround(std::sqrt(double(atoms))));
  require(side * side == atoms,
          "sweep.atoms: " + std::to_string(atoms) + " is not a perfect square");
  return side;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(threads, n);
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

void ScenarioSpec::validate() const {
  require(carrier_ghz > 0.0, "scenario.carrier_ghz must be positive");
  require(num_layers >= 1, "scenario.num_layers must be >= 1");
  require(rows >= 1 && cols >= 1, "scenario.rows/cols must be >= 1");
  require(sim_thickness_m > 0.0, "scenario.sim_thickness_m must be positive");
  require(feed_offset_m >= 0.0, "scenario.feed_offset_m must be >= 0");
  require(num_users >= 1, "scenario.num_users must be >= 1");
  require(num_targets >= 0, "scenario.num_targets must be >= 0");
  require(std::isfinite(tx_power_dbm), "scenario.tx_power_dbm must be finite");
  require(dbm_to_mw(tx_power_dbm) > 0.0, "scenario.tx_power_dbm must map to positive power");
  require(num_paths >= 1, "scenario.num_paths must be >= 1");
  require(plane_x_m > 0.0, "scenario.plane_x_m must be positive");
  require(static_cast<int>(user_aod_deg.size()) == num_users,
          "scenario.user_aod_deg must list one AoD per user");
  require(grid_samples >= 1, "scenario.grid_samples must be >= 1");
  for (const auto& [j, k] : target_bins)
    require(j >= 1 && j <= grid_samples && k >= 1 && k <= grid_samples,
            "scenario.target_bins entries must lie in 1..grid_samples");
  make_budget(*this).validate();
}

LinkBudget make_budget(const ScenarioSpec& s) {
  LinkBudget b = s.budget;
  if (std::isnan(b.pathloss_const_db))
    b.pathloss_const_db = free_space_ref_loss_db(s.carrier_ghz * 1e9);
  return b;
}

SimGeometry make_geometry(const ScenarioSpec& s, int atoms, int layers) {
  const int side = square_side(atoms);
  SimGeometry g = SimGeometry::standard(s.carrier_ghz * 1e9, layers, side,
                                        side, s.num_users + s.num_targets,
                                        s.sim_thickness_m);
  if (s.feed_offset_m > 0.0) g.feed_offset = s.feed_offset_m;
  return g;
}

std::vector<UserSpec> make_users(const ScenarioSpec& s) {
  std::vector<UserSpec> users;
  users.reserve(s.user_aod_deg.size());
  for (const auto& [el, az] : s.user_aod_deg)
    users.push_back({el, az, s.num_paths, s.plane_x_m});
  return users;
}

AngleGrid make_grid(const ScenarioSpec& s) {
  return AngleGrid::uniform(s.grid_samples, s.grid_bin_centers);
}

TransmitConfig make_transmit(const ScenarioSpec& s) {
  return {dbm_to_mw(s.tx_power_dbm), s.num_users, s.num_targets};
}

DesiredPattern make_desired(const ScenarioSpec& s, const AngleGrid& grid) {
  std::vector<std::pair<int, int>> bins;
  bins.reserve(s.target_bins.size());
  for (const auto& [j, k] : s.target_bins) bins.emplace_back(j - 1, k - 1);
  return desired_pattern(grid, bins, s.unit_mass_target);
}

void ExperimentSpec::validate() const {
  scenario.validate();
  optimizer.validate();
  require(!sweep.atoms.empty(), "sweep.atoms must be non-empty");
  require(!sweep.layers.empty(), "sweep.layers must be non-empty");
  require(!sweep.weights.empty(), "sweep.weights must be non-empty");
  for (int a : sweep.atoms) square_side(a);
  for (int l : sweep.layers) require(l >= 1, "sweep.layers entries must be >= 1");
  for (const auto& [w1, w2] : sweep.weights)
    require(w1 >= 0.0 && w1 <= 1.0 && w2 >= 0.0 && w2 <= 1.0,
            "sweep.weights entries must lie in [0, 1]");
  require(num_realizations >= 1, "num_realizations must be >= 1");
}

// ---------------------------------------------------------------------------
// Spec JSON

namespace {

template <typename T>
void maybe(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::vector<std::pair<double, double>> pair_list_d(const nlohmann::json& j) {
  std::vector<std::pair<double, double>> out;
  for (const auto& e : j) out.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return out;
}

std::vector<std::pair<int, int>> pair_list_i(const nlohmann::json& j) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : j) out.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  return out;
}

template <typename P>
nlohmann::json pair_list_json(const std::vector<P>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [a, b] : v) arr.push_back({a, b});
  return arr;
}

}  // namespace

nlohmann::json spec_to_json(const ExperimentSpec& spec) {
  const ScenarioSpec& s = spec.scenario;
  nlohmann::json j;
  j["scenario"] = {
      {"carrier_ghz", s.carrier_ghz},
      {"num_layers", s.num_layers},
      {"rows", s.rows},
      {"cols", s.cols},
      {"sim_thickness_m", s.sim_thickness_m},
      {"feed_offset_m", s.feed_offset_m},
      {"num_users", s.num_users},
      {"num_targets", s.num_targets},
      {"tx_power_dbm", s.tx_power_dbm},
      {"pathloss_exponent", s.budget.pathloss_exponent},
      {"bs_gain_dbi", s.budget.bs_gain_dbi},
      {"user_gain_dbi", s.budget.user_gain_dbi},
      {"noise_power_dbm", s.budget.noise_power_dbm},
      {"num_paths", s.num_paths},
      {"plane_x_m", s.plane_x_m},
      {"user_aod_deg", pair_list_json(s.user_aod_deg)},
      {"grid_samples", s.grid_samples},
      {"target_bins", pair_list_json(s.target_bins)},
      {"unit_mass_target", s.unit_mass_target},
      {"grid_bin_centers", s.grid_bin_centers},
  };
  // An unset C_0 (NaN, meaning "1 m free-space loss at the carrier") is
  // omitted so the JSON round-trips; NaN has no JSON representation.
  if (!std::isnan(s.budget.pathloss_const_db))
    j["scenario"]["pathloss_const_db"] = s.budget.pathloss_const_db;
  j["optimizer"] = {
      {"w_sens", spec.optimizer.w_sens},   {"w_comm", spec.optimizer.w_comm},
      {"epsilon", spec.optimizer.epsilon}, {"initial_step", spec.optimizer.initial_step},
      {"decay", spec.optimizer.decay},     {"max_iters", spec.optimizer.max_iters},
      {"rel_tol", spec.optimizer.rel_tol}, {"num_restarts", spec.optimizer.num_restarts},
  };
  j["sweep"] = {
      {"atoms", spec.sweep.atoms},
      {"layers", spec.sweep.layers},
      {"weights", pair_list_json(spec.sweep.weights)},
  };
  j["num_realizations"] = spec.num_realizations;
  j["master_seed"] = spec.master_seed;
  j["out_dir"] = spec.out_dir;
  return j;
}

ExperimentSpec spec_from_json(const nlohmann::json& j) {
  ExperimentSpec spec;
  if (j.contains("scenario")) {
    const auto& js = j.at("scenario");
    ScenarioSpec& s = spec.scenario;
    maybe(js, "carrier_ghz", s.carrier_ghz);
    maybe(js, "num_layers", s.num_layers);
    maybe(js, "rows", s.rows);
    maybe(js, "cols", s.cols);
    maybe(js, "sim_thickness_m", s.sim_thickness_m);
    maybe(js, "feed_offset_m", s.feed_offset_m);
    maybe(js, "num_users", s.num_users);
    maybe(js, "num_targets", s.num_targets);
    maybe(js, "tx_power_dbm", s.tx_power_dbm);
    maybe(js, "pathloss_const_db", s.budget.pathloss_const_db);
    maybe(js, "pathloss_exponent", s.budget.pathloss_exponent);
    maybe(js, "bs_gain_dbi", s.budget.bs_gain_dbi);
    maybe(js, "user_gain_dbi", s.budget.user_gain_dbi);
    maybe(js, "noise_power_dbm", s.budget.noise_power_dbm);
    maybe(js, "num_paths", s.num_paths);
    maybe(js, "plane_x_m", s.plane_x_m);
    if (js.contains("user_aod_deg")) s.user_aod_deg = pair_list_d(js.at("user_aod_deg"));
    maybe(js, "grid_samples", s.grid_samples);
    if (js.contains("target_bins")) s.target_bins = pair_list_i(js.at("target_bins"));
    maybe(js, "unit_mass_target", s.unit_mass_target);
    maybe(js, "grid_bin_centers", s.grid_bin_centers);
  }
  if (j.contains("optimizer")) {
    const auto& jo = j.at("optimizer");
    maybe(jo, "w_sens", spec.optimizer.w_sens);
    maybe(jo, "w_comm", spec.optimizer.w_comm);
    maybe(jo, "epsilon", spec.optimizer.epsilon);
    maybe(jo, "initial_step", spec.optimizer.initial_step);
    maybe(jo, "decay", spec.optimizer.decay);
    maybe(jo, "max_iters", spec.optimizer.max_iters);
    maybe(jo, "rel_tol", spec.optimizer.rel_tol);
    maybe(jo, "num_restarts", spec.optimizer.num_restarts);
  }
  if (j.contains("sweep")) {
    const auto& jw = j.at("sweep");
    if (jw.contains("atoms")) spec.sweep.atoms = jw.at("atoms").get<std::vector<int>>();
    if (jw.contains("layers")) spec.sweep.layers = jw.at("layers").get<std::vector<int>>();
    if (jw.contains("weights")) spec.sweep.weights = pair_list_d(jw.at("weights"));
  }
  maybe(j, "num_realizations", spec.num_realizations);
  maybe(j, "master_seed", spec.master_seed);
  maybe(j, "out_dir", spec.out_dir);
  spec.validate();
  return spec;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_spec: cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("load_spec: malformed JSON in " + path + ": " + e.what());
  }
  return spec_from_json(j);
}

ExperimentSpec preset(const std::string& name) {
  ExperimentSpec spec;  // standard-scenario defaults
  if (name == "fig2") {
    spec.sweep = {{100}, {7}, {{1.0, 1.0}}};
  } else if (name == "fig3") {
    spec.sweep = {{16, 36, 64, 100}, {6}, {{1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
  } else if (name == "fig45") {
    SweepSpec sweep;
    sweep.atoms = {100};
    sweep.layers = {6};
    sweep.weights.clear();
    for (int i = 0; i <= 5; ++i)
      for (int k = 0; k <= 5; ++k)
        sweep.weights.emplace_back(0.2 * i, 0.2 * k);
    spec.sweep = sweep;
  } else if (name == "fig67") {
    spec.sweep = {{100}, {7}, {{1.0, 1.0}}};
  } else {
    throw std::invalid_argument("preset: unknown preset " + name);
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Experiment execution

CellStats aggregate(const std::vector<RealizationRecord>& records) {
  CellStats st;
  std::vector<double> rates, mses, iters;
  int max_iter = 0;
  for (const auto& r : records) {
    rates.push_back(r.final_rate);
    mses.push_back(r.final_mse);
    iters.push_back(r.iterations);
    max_iter = std::max(max_iter, r.iterations);
  }
  st.mean_rate = mean(rates);
  st.median_rate = median(rates);
  st.p10_rate = percentile(rates, 10.0);
  st.p90_rate = percentile(rates, 90.0);
  st.mean_mse = mean(mses);
  st.mean_mse_db = linear_to_db(st.mean_mse);
  std::vector<double> mse_db(mses.size());
  std::transform(mses.begin(), mses.end(), mse_db.begin(), linear_to_db);
  st.median_mse_db = median(mse_db);
  st.mean_iterations = mean(iters);
  st.iteration_histogram.assign(max_iter + 1, 0);
  for (const auto& r : records) st.iteration_histogram[r.iterations] += 1;
  return st;
}

namespace {

std::vector<std::pair<int, int>> top_two_bins(const RMat& pattern) {
  int j1 = 0, k1 = 0, j2 = -1, k2 = -1;
  double v1 = -1.0, v2 = -1.0;
  for (int j = 0; j < pattern.rows(); ++j) {
    for (int k = 0; k < pattern.cols(); ++k) {
      const double v = pattern(j, k);
      if (v > v1) {
        v2 = v1; j2 = j1; k2 = k1;
        v1 = v; j1 = j; k1 = k;
      } else if (v > v2) {
        v2 = v; j2 = j; k2 = k;
      }
    }
  }
  return {{j1 + 1, k1 + 1}, {j2 + 1, k2 + 1}};
}

struct CellContext {
  SimGeometry geometry;
  DiffractionStack stack;
  AngleGrid grid;
  DesiredPattern desired;
  D3Config cfg;
  CMat steering;
};

}  // namespace

MonteCarloReport run_experiment(const ExperimentSpec& spec, int threads) {
  spec.validate();
  MonteCarloReport report;
  report.spec = spec;

  const std::vector<UserSpec> users = make_users(spec.scenario);
  const TransmitConfig tx = make_transmit(spec.scenario);
  const LinkBudget budget = make_budget(spec.scenario);
  const double noise_mw = budget.noise_mw();

  // Cell grid: atoms x layers x weights, in declaration order.
  struct CellKey { int atoms, layers; double w1, w2; };
  std::vector<CellKey> keys;
  for (int a : spec.sweep.atoms)
    for (int l : spec.sweep.layers)
      for (const auto& [w1, w2] : spec.sweep.weights)
        keys.push_back({a, l, w1, w2});

  std::vector<CellContext> contexts(keys.size());
  report.cells.resize(keys.size());
  for (std::size_t c = 0; c < keys.size(); ++c) {
    CellContext& ctx = contexts[c];
    ctx.geometry = make_geometry(spec.scenario, keys[c].atoms, keys[c].layers);
    ctx.stack = build_diffraction_stack(ctx.geometry);
    ctx.grid = make_grid(spec.scenario);
    ctx.desired = make_desired(spec.scenario, ctx.grid);
    ctx.steering = steering_matrix(ctx.geometry, ctx.grid);
    ctx.cfg = spec.optimizer;
    ctx.cfg.w_sens = keys[c].w1;
    ctx.cfg.w_comm = keys[c].w2;

    CellResult& cell = report.cells[c];
    cell.atoms = keys[c].atoms;
    cell.layers = keys[c].layers;
    cell.w_sens = keys[c].w1;
    cell.w_comm = keys[c].w2;
    cell.records.resize(spec.num_realizations);
  }

  const int n_real = spec.num_realizations;
  const int n_tasks = static_cast<int>(keys.size()) * n_real;
  std::vector<RMat> patterns(n_tasks);          // per (cell, realization)
  std::vector<std::string> errors(n_tasks);

  parallel_for(n_tasks, threads, [&](int task) {
    const int c = task / n_real;
    const int r = task % n_real;
    const CellContext& ctx = contexts[c];
    try {
      const std::uint64_t channel_seed = subseed(spec.master_seed, r);
      const ChannelRealization chan =
          sample_channel(ctx.geometry, users, budget, channel_seed);
      Problem problem = make_problem(ctx.geometry, ctx.stack, ctx.grid,
                                     ctx.desired, chan.h, tx, noise_mw);
      const RestartResult res =
          multi_restart(problem, ctx.cfg, subseed(channel_seed, 1));
      const RunTrace& best = res.traces[res.best_index];

      RealizationRecord rec;
      rec.channel_seed = channel_seed;
      rec.final_rate = best.final_sum_rate;
      rec.final_mse = best.final_mse;
      rec.iterations = static_cast<int>(best.iters.size());
      rec.reason = to_string(best.reason);
      rec.best_restart = res.best_index;
      const BeamPattern pat = beam_pattern(
          beamforming_matrix(best.final_state, ctx.stack), ctx.steering,
          ctx.grid.size());
      rec.top_bins = top_two_bins(pat.normalized);
      for (const auto& it : best.iters) {
        rec.trace_rate.push_back(it.sum_rate);
        rec.trace_mse.push_back(it.mse);
      }
      patterns[task] = pat.normalized;
      report.cells[c].records[r] = std::move(rec);
    } catch (const std::exception& e) {
      errors[task] = e.what();
    }
  });

  for (std::size_t c = 0; c < keys.size(); ++c) {
    CellResult& cell = report.cells[c];
    for (int r = 0; r < n_real; ++r) {
      const std::string& err = errors[c * n_real + r];
      if (!err.empty()) {
        cell.ok = false;
        if (cell.error.empty()) cell.error = err;
      }
    }
    if (!cell.ok) {
      cell.records.clear();
      continue;
    }
    cell.stats = aggregate(cell.records);
    // Selection-rule-best realization carries the cell's exported pattern.
    int best = 0;
    for (int r = 1; r < n_real; ++r) {
      if (cell.w_sens > cell.w_comm
              ? cell.records[r].final_mse < cell.records[best].final_mse
              : cell.records[r].final_rate > cell.records[best].final_rate)
        best = r;
    }
    cell.selected_realization = best;
    cell.selected_pattern = patterns[c * n_real + best];
  }
  return report;
}

// ---------------------------------------------------------------------------
// Report JSON

namespace {

nlohmann::ordered_json matrix_to_json(const RMat& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int j = 0; j < m.rows(); ++j) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(m(j, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

RMat matrix_from_json(const nlohmann::json& j) {
  const int rows = static_cast<int>(j.size());
  if (rows == 0) return RMat();
  const int cols = static_cast<int>(j.at(0).size());
  RMat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  return m;
}

}  // namespace

nlohmann::ordered_json report_to_json(const MonteCarloReport& report) {
  nlohmann::ordered_json j;
  j["spec"] = spec_to_json(report.spec);
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& cell : report.cells) {
    nlohmann::ordered_json jc;
    jc["atoms"] = cell.atoms;
    jc["layers"] = cell.layers;
    jc["w_sens"] = cell.w_sens;
    jc["w_comm"] = cell.w_comm;
    jc["ok"] = cell.ok;
    jc["error"] = cell.error;
    if (cell.ok) {
      jc["stats"] = {{"mean_rate", cell.stats.mean_rate},
                     {"median_rate", cell.stats.median_rate},
                     {"p10_rate", cell.stats.p10_rate},
                     {"p90_rate", cell.stats.p90_rate},
                     {"mean_mse", cell.stats.mean_mse},
                     {"mean_mse_db", cell.stats.mean_mse_db},
                     {"median_mse_db", cell.stats.median_mse_db},
                     {"mean_iterations", cell.stats.mean_iterations},
                     {"iteration_histogram", cell.stats.iteration_histogram}};
      jc["selected_realization"] = cell.selected_realization;
      jc["selected_pattern"] = matrix_to_json(cell.selected_pattern);
      nlohmann::ordered_json recs = nlohmann::ordered_json::array();
      for (const auto& r : cell.records) {
        recs.push_back({{"channel_seed", r.channel_seed},
                        {"final_rate", r.final_rate},
                        {"final_mse", r.final_mse},
                        {"iterations", r.iterations},
                        {"reason", r.reason},
                        {"best_restart", r.best_restart},
                        {"top_bins", pair_list_json(r.top_bins)},
                        {"trace_rate", r.trace_rate},
                        {"trace_mse", r.trace_mse}});
      }
      jc["records"] = std::move(recs);
    }
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);
  return j;
}

MonteCarloReport report_from_json(const nlohmann::json& j) {
  MonteCarloReport report;
  report.spec = spec_from_json(j.at("spec"));
  for (const auto& jc : j.at("cells")) {
    CellResult cell;
    cell.atoms = jc.at("atoms").get<int>();
    cell.layers = jc.at("layers").get<int>();
    cell.w_sens = jc.at("w_sens").get<double>();
    cell.w_comm = jc.at("w_comm").get<double>();
    cell.ok = jc.at("ok").get<bool>();
    cell.error = jc.at("error").get<std::string>();
    if (cell.ok) {
      const auto& st = jc.at("stats");
      cell.stats.mean_rate = st.at("mean_rate").get<double>();
      cell.stats.median_rate = st.at("median_rate").get<double>();
      cell.stats.p10_rate = st.at("p10_rate").get<double>();
      cell.stats.p90_rate = st.at("p90_rate").get<double>();
      cell.stats.mean_mse = st.at("mean_mse").get<double>();
      cell.stats.mean_mse_db = st.at("mean_mse_db").get<double>();
      cell.stats.median_mse_db = st.at("median_mse_db").get<double>();
      cell.stats.mean_iterations = st.at("mean_iterations").get<double>();
      cell.stats.iteration_histogram =
          st.at("iteration_histogram").get<std::vector<int>>();
      cell.selected_realization = jc.at("selected_realization").get<int>();
      cell.selected_pattern = matrix_from_json(jc.at("selected_pattern"));
      for (const auto& jr : jc.at("records")) {
        RealizationRecord r;
        r.channel_seed = jr.at("channel_seed").get<std::uint64_t>();
        r.final_rate = jr.at("final_rate").get<double>();
        r.final_mse = jr.at("final_mse").get<double>();
        r.iterations = jr.at("iterations").get<int>();
        r.reason = jr.at("reason").get<std::string>();
        r.best_restart = jr.at("best_restart").get<int>();
        r.top_bins = pair_list_i(jr.at("top_bins"));
        r.trace_rate = jr.at("trace_rate").get<std::vector<double>>();
        r.trace_mse = jr.at("trace_mse").get<std::vector<double>>();
        cell.records.push_back(std::move(r));
      }
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Figure data

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_figure_data: cannot write " + path);
  out.precision(12);
  return out;
}

const CellResult& single_ok_cell(const MonteCarloReport& report,
                                 const std::string& fig) {
  for (const auto& cell : report.cells)
    if (cell.ok) return cell;
  throw std::invalid_argument("emit_figure_data: no successful cell for " + fig);
}

// Trace value at iteration i, holding the last value after convergence.
double padded(const std::vector<double>& trace, int i) {
  if (trace.empty()) return 0.0;
  return trace[std::min<std::size_t>(i, trace.size() - 1)];
}

std::string weight_label(double w1, double w2) {
  std::ostringstream os;
  os << "w1=" << w1 << ";w2=" << w2;
  return os.str();
}

}  // namespace

std::vector<std::string> emit_figure_data(const MonteCarloReport& report,
                                          const std::string& figure_id,
                                          const std::string& out_dir) {
  std::vector<std::string> written;

  if (figure_id == "fig2") {
    const CellResult& cell = single_ok_cell(report, figure_id);
    const std::string path = join_path(out_dir, "fig2_pattern.csv");
    auto out = open_out(path);
    // row = elevation bin, col = azimuth bin, values are the normalized pattern
    for (int j = 0; j < cell.selected_pattern.rows(); ++j) {
      for (int k = 0; k < cell.selected_pattern.cols(); ++k)
        out << (k ? "," : "") << cell.selected_pattern(j, k);
      out << "\n";
    }
    written.push_back(path);
    const std::string meta = join_path(out_dir, "fig2_meta.json");
    auto mout = open_out(meta);
    const RealizationRecord& rec = cell.records[cell.selected_realization];
    mout << nlohmann::ordered_json{{"atoms", cell.atoms},
                                   {"layers", cell.layers},
                                   {"sum_rate", rec.final_rate},
                                   {"mse", rec.final_mse},
                                   {"mse_db", linear_to_db(rec.final_mse)}}
                .dump(2)
         << "\n";
    written.push_back(meta);
  } else if (figure_id == "fig3") {
    std::set<int> atoms_set;
    std::vector<std::pair<double, double>> weight_order;
    for (const auto& cell : report.cells) {
      atoms_set.insert(cell.atoms);
      const std::pair<double, double> w{cell.w_sens, cell.w_comm};
      if (std::find(weight_order.begin(), weight_order.end(), w) == weight_order.end())
        weight_order.push_back(w);
    }
    if (atoms_set.size() < 2)
      throw std::invalid_argument("emit_figure_data: fig3 needs a sweep over atoms");
    const std::string path = join_path(out_dir, "fig3_sum_rate.csv");
    auto out = open_out(path);
    out << "atoms";
    for (const auto& [w1, w2] : weight_order) out << "," << weight_label(w1, w2);
    out << "\n";
    for (int a : atoms_set) {
      out << a;
      for (const auto& [w1, w2] : weight_order) {
        double value = std::nan("");
        for (const auto& cell : report.cells)
          if (cell.ok && cell.atoms == a && cell.w_sens == w1 && cell.w_comm == w2)
            value = cell.stats.mean_rate;
        out << "," << value;
      }
      out << "\n";
    }
    written.push_back(path);
  } else if (figure_id == "fig45") {
    std::set<double> w1s, w2s;
    for (const auto& cell : report.cells) {
      w1s.insert(cell.w_sens);
      w2s.insert(cell.w_comm);
    }
    if (w1s.size() < 2 || w2s.size() < 2)
      throw std::invalid_argument("emit_figure_data: fig45 needs a weight grid");
    for (const std::string which : {"fig4_sum_rate", "fig5_mse_db"}) {
      const std::string path = join_path(out_dir, which + ".csv");
      auto out = open_out(path);
      out << "w1\\w2";
      for (double w2 : w2s) out << "," << w2;
      out << "\n";
      for (double w1 : w1s) {
        out << w1;
        for (double w2 : w2s) {
          double value = std::nan("");
          for (const auto& cell : report.cells)
            if (cell.ok && cell.w_sens == w1 && cell.w_comm == w2)
              value = which == "fig4_sum_rate" ? cell.stats.mean_rate
                                               : cell.stats.mean_mse_db;
          out << "," << value;
        }
        out << "\n";
      }
      written.push_back(path);
    }
  } else if (figure_id == "fig67") {
    const CellResult& cell = single_ok_cell(report, figure_id);
    int max_len = 0;
    for (const auto& r : cell.records)
      max_len = std::max(max_len, static_cast<int>(r.trace_rate.size()));
    for (const std::string which : {"fig6_rate_iters", "fig7_mse_db_iters"}) {
      const std::string path = join_path(out_dir, which + ".csv");
      auto out = open_out(path);
      out << "iteration,mean,p10,median,p90\n";
      for (int i = 0; i < max_len; ++i) {
        std::vector<double> vals;
        for (const auto& r : cell.records) {
          const double v = which == "fig6_rate_iters"
                               ? padded(r.trace_rate, i)
                               : linear_to_db(padded(r.trace_mse, i));
          vals.push_back(v);
        }
        out << i << "," << mean(vals) << "," << percentile(vals, 10.0) << ","
            << median(vals) << "," << percentile(vals, 90.0) << "\n";
      }
      written.push_back(path);
    }
  } else {
    throw std::invalid_argument("emit_figure_data: unknown figure id " + figure_id);
  }
  return written;
}

// ---------------------------------------------------------------------------
// Scaling probe

std::vector<ProbeRow> scaling_probe(const ScenarioSpec& scenario,
                                    const std::vector<std::array<int, 3>>& sizes,
                                    int iters_per_point, std::uint64_t seed) {
  if (iters_per_point < 1)
    throw std::invalid_argument("scaling_probe: iters_per_point must be >= 1");
  std::vector<ProbeRow> rows;
  const std::vector<UserSpec> users = make_users(scenario);
  const TransmitConfig tx = make_transmit(scenario);
  const LinkBudget budget = make_budget(scenario);
  const double noise_mw = budget.noise_mw();

  for (const auto& [atoms, layers, grid_n] : sizes) {
    ScenarioSpec sized = scenario;
    sized.grid_samples = grid_n;
    sized.target_bins = {{std::max(1, grid_n / 4), std::max(1, 3 * grid_n / 4)},
                         {std::max(1, 3 * grid_n / 4), std::max(1, grid_n / 4)}};
    const SimGeometry g = make_geometry(sized, atoms, layers);
    const DiffractionStack stack = build_diffraction_stack(g);
    const AngleGrid grid = make_grid(sized);
    const DesiredPattern desired = make_desired(sized, grid);
    const ChannelRealization chan =
        sample_channel(g, users, budget, subseed(seed, atoms + grid_n));
    const Problem problem =
        make_problem(g, stack, grid, desired, chan.h, tx, noise_mw);

    Rng rng(subseed(seed, 7));
    PhaseState state = PhaseState::random(atoms, layers, rng);
    D3Config cfg;  // defaults; only the per-iteration work matters here

    const double sens_scale = static_cast<double>(grid_n) * grid_n;
    auto iterate = [&](PhaseState& s) {
      const RMat gs =
          sens_scale * grad_sensing(s, stack, problem.steering, problem.desired);
      const RMat gc = grad_comm(s, stack, problem.h, tx, noise_mw);
      const RMat diff = differential_gradient(
          elementwise_normalize(gs, cfg.epsilon),
          elementwise_normalize(gc, cfg.epsilon), 1.0, 1.0);
      if (auto n = global_normalize(diff)) s = step(s, *n, 0.01);
    };

    iterate(state);  // warm-up
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < iters_per_point; ++i) iterate(state);
    const auto t1 = std::chrono::steady_clock::now();
    rows.push_back({atoms, layers, grid_n,
                    std::chrono::duration<double>(t1 - t0).count() /
                        iters_per_point});
  }
  return rows;
}

}  // namespace simisac
