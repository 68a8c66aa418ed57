#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fmt/format.h>
#include <iostream>
#include <map>

#include "stca/experiment.hpp"

using namespace stca;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string config;
  std::uint64_t seed = 1;
  int trials = 100;
  std::string out_dir = ".";
  bool traditional = false;
};

ScenarioConfig load(const Globals& g) {
  ScenarioConfig cfg = g.config.empty() ? default_scenario() : load_config(g.config);
  if (g.traditional) cfg.radar = cfg.radar.traditional_mimo();
  cfg.validate();
  return cfg;
}

void warn_all(const std::vector<std::string>& ws) {
  for (const auto& w : ws) fmt::print(stderr, "warning: {}\n", w);
}

void wrote(const fs::path& p) { fmt::print("wrote {}\n", p.string()); }

// outputs are still written from the best iterate; the exit status reports non-convergence
int status = 0;

void flag_nonconvergence(int iterations) {
  fmt::print(stderr, "warning: beampattern control stopped after {} iterations without meeting the requirements\n",
             iterations);
  status = static_cast<int>(ExitCode::non_convergence);
}

std::optional<ControlState<double>> design_if_needed(const ScenarioConfig& cfg, const std::string& method) {
  if (!method_needs_transmit_design(method)) return std::nullopt;
  auto st = design_transmit_weight(cfg);
  if (!st.converged) flag_nonconvergence(st.iteration);
  return st;
}

void simulate(const Globals& g, bool dump_cube) {
  const auto cfg = load(g);
  const DataCube cube = synthesize_cube(cfg.radar, cfg.target, cfg.jammers, cfg.errors, g.seed, {});
  warn_all(cube.warnings);
  const fs::path out(g.out_dir);
  write_profile_csv(out / "profile_raw.csv", raw_profile_db(cube));
  wrote(out / "profile_raw.csv");
  if (dump_cube) {
    write_cube_csv(out / "cube.csv", cube);
    wrote(out / "cube.csv");
  }
}

void detect(const Globals& g) {
  const auto cfg = load(g);
  const auto recs = detection_trials(cfg, g.seed, g.trials);
  std::map<int, int> counts;
  for (const auto& r : recs) ++counts[r.detected_bin];
  const auto mode = std::max_element(counts.begin(), counts.end(), [](auto& a, auto& b) { return a.second < b.second; });
  fmt::print("detected bin {} in {}/{} trials\n", mode->first, mode->second, recs.size());
  const fs::path out = fs::path(g.out_dir) / "detection.csv";
  write_detection_csv(out, recs);
  wrote(out);
}

void suppress(const Globals& g, const std::string& method, double snr_db) {
  const auto cfg = load(g);
  const auto design = design_if_needed(cfg, method);
  std::optional<PipelineRun> run;
  if (method_needs_data(method)) {
    run = run_pipeline(cfg, g.seed, 0);
    warn_all(run->warnings);
    if (run->nhss.target_present)
      fmt::print("target segment at bin {}, q = {}\n", *run->nhss.target_range_bin, *run->nhss.target_segment);
    else
      fmt::print("no target segment found\n");
  }
  const auto w = method_weight(cfg, method, run ? &*run : nullptr, design ? &*design : nullptr);
  fmt::print("{} output SINR {:.4f} dB at input SNR {} dB\n", method,
             sinr_db(w.values, target_steering(cfg), true_incm(cfg).values, snr_db), snr_db);
  const DataCube cube = run ? std::move(run->cube) : synthesize_cube(cfg.radar, cfg.target, cfg.jammers, cfg.errors, g.seed, {});
  const fs::path out = fs::path(g.out_dir) / fmt::format("profile_{}.csv", method);
  write_profile_csv(out, apply_weight(w, cube).mag_db);
  wrote(out);
}

void pattern(const Globals& g, const std::string& method) {
  const auto cfg = load(g);
  const auto axis = uniform_axis(cfg.pattern_step);
  const fs::path out = fs::path(g.out_dir) / fmt::format("pattern_{}.csv", method);
  if (method == "mrbc") {
    const auto st = design_if_needed(cfg, "rjns");
    const auto p = cfg.presumed_target();
    const auto f0 = spatial_frequencies(cfg.radar, deg2rad(p.angle_deg), p.range_m);
    const auto grid = control_grid(cfg.beam.solver.grid_step);
    if (st->converged) fmt::print("converged in {} iterations\n", st->iteration);
    write_transmit_pattern_csv(out, grid, f0.receive, transmit_pattern_db(st->w, f0.transmit, grid));
  } else if (method == "capon") {
    const auto run = run_pipeline(cfg, g.seed, 0);
    warn_all(run.warnings);
    LoadReport load;
    const auto grid = capon_2d(run.full_echo.values, cfg.radar.num_tx, cfg.radar.num_rx, axis, axis, 0.0, &load);
    if (load.loaded) fmt::print(stderr, "warning: covariance diagonally loaded by {:.3g}\n", load.load);
    write_pattern_csv(out, grid);
  } else {
    const auto design = design_if_needed(cfg, method);
    std::optional<PipelineRun> run;
    if (method_needs_data(method)) {
      run = run_pipeline(cfg, g.seed, 0);
      warn_all(run->warnings);
    }
    const auto w = method_weight(cfg, method, run ? &*run : nullptr, design ? &*design : nullptr);
    write_pattern_csv(out, pattern_2d(w.values, cfg.radar.num_tx, cfg.radar.num_rx, axis, axis));
  }
  wrote(out);
}

void sweep(const Globals& g, const std::vector<std::string>& methods) {
  auto cfg = load(g);
  if (!methods.empty()) cfg.sweep.methods = methods;
  const auto res = sinr_sweep(cfg, g.seed, g.trials);
  warn_all(res.warnings);
  if (!res.transmit_converged) status = static_cast<int>(ExitCode::non_convergence);
  const fs::path out = fs::path(g.out_dir) / "sinr_sweep.csv";
  write_sweep_csv(out, res.points);
  wrote(out);
}

void validate_waveform(const Globals& g, const MatchedFilterOptions& opt, double tolerance) {
  const auto cfg = load(g);
  const auto p = cfg.presumed_target();
  const auto rep = validate_matched_filter(cfg.radar, deg2rad(p.angle_deg), p.range_m, opt);
  for (std::size_t m = 0; m < rep.measured_phase.size(); ++m)
    fmt::print("element {}: measured {:+.6f} rad, model {:+.6f} rad\n", m, rep.measured_phase[m], rep.analytic_phase[m]);
  fmt::print("residual {:.3e} rad (tolerance {:.1e})\n", rep.residual, tolerance);
  if (rep.residual >= tolerance) throw NumericError("matched-filter phase does not follow the transmit steering model");
}

void run_all(const Globals& g) {
  const auto cfg = load(g);
  const auto rep = run_experiment(cfg, g.seed, g.trials, g.out_dir);
  warn_all(rep.warnings);
  for (const auto& f : rep.files) wrote(f);
  if (!rep.transmit_converged) status = static_cast<int>(ExitCode::non_convergence);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"space-time coding array radar: mainlobe deceptive jamming suppression"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "scenario file (TOML); built-in defaults when omitted")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "base RNG seed");
  app.add_option("--trials", g.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "directory for CSV output");
  app.add_flag("--traditional-mimo", g.traditional, "set the transmit delay to zero");

  bool dump_cube = false;
  auto* sim = app.add_subcommand("simulate", "synthesize one cube and write the raw range profile");
  sim->add_flag("--dump-cube", dump_cube, "also write pulse 0 of the cube");

  auto* det = app.add_subcommand("detect", "CS-NHSS over --trials cubes");

  std::string method = "nsjm";
  double snr = 20.0;
  auto* sup = app.add_subcommand("suppress", "apply a suppression weight to trial 0");
  sup->add_option("--method", method)->check(CLI::IsMember(known_methods()));
  sup->add_option("--snr", snr, "input SNR for the reported output SINR");

  std::string pmethod = "nsjm";
  auto* pat = app.add_subcommand("pattern", "transmit-receive pattern, Capon spectrum, or transmit design");
  std::vector<std::string> pattern_methods = known_methods();
  pattern_methods.push_back("capon");
  pattern_methods.push_back("mrbc");
  pat->add_option("--method", pmethod)->check(CLI::IsMember(pattern_methods));

  std::vector<std::string> sweep_methods;
  auto* sw = app.add_subcommand("sinr-sweep", "output SINR against input SNR");
  sw->add_option("--methods", sweep_methods)->delimiter(',')->check(CLI::IsMember(known_methods()));

  MatchedFilterOptions mf;
  double mf_tol = 1e-2;
  auto* vw = app.add_subcommand("validate-waveform", "chirp and matched-filter check of the transmit phase ramp");
  vw->add_option("--elements", mf.elements);
  vw->add_option("--oversample", mf.oversample);
  vw->add_flag("!--first-order", mf.exact_delay, "first-order delay model instead of the exact delay");
  vw->add_option("--tolerance", mf_tol);

  auto* all = app.add_subcommand("run", "detection, sweep, profiles and patterns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::config);
  }

  try {
    fs::create_directories(g.out_dir);
    if (*sim) simulate(g, dump_cube);
    if (*det) detect(g);
    if (*sup) suppress(g, method, snr);
    if (*pat) pattern(g, pmethod);
    if (*sw) sweep(g, sweep_methods);
    if (*vw) validate_waveform(g, mf, mf_tol);
    if (*all) run_all(g);
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return static_cast<int>(ExitCode::numeric);
  }
  return status;
}
