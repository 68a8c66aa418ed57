#include "stca/experiment.hpp"

#include <cstdio>
#include <fmt/format.h>
#include <set>

namespace stca {

namespace {

std::optional<TargetSpec> nominal_target(const ScenarioConfig& cfg) { return cfg.target; }

CovarianceMatrix<double> jammer_covariance(const ScenarioConfig& cfg, bool with_errors) {
  std::vector<CVectorXd> steering;
  std::vector<double> powers;
  for (const auto& j : cfg.jammers) {
    const auto t = with_errors ? perturbed(cfg.radar, j, cfg.errors) : j;
    steering.push_back(virtual_steering(cfg.radar, deg2rad(t.angle_deg), t.range_m).values);
    powers.push_back(db_to_power(t.jnr_db));
  }
  return analytic_covariance<double>(steering, powers, cfg.radar.virtual_size());
}

Index jammer_rank(const ScenarioConfig& cfg) {
  return std::min<Index>(static_cast<Index>(cfg.jammers.size()) + 1, cfg.radar.virtual_size());
}

CVectorXd receive_weight(const ScenarioConfig& cfg) {
  return receive_steering(cfg.radar, deg2rad(cfg.presumed_target().angle_deg)).values;
}

void csv_open_error(const std::filesystem::path& path) {
  throw ConfigError(fmt::format("cannot write '{}'", path.string()));
}

std::FILE* open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) csv_open_error(path);
  return f;
}

struct CsvFile {
  explicit CsvFile(const std::filesystem::path& p) : f(open_csv(p)) {}
  ~CsvFile() { std::fclose(f); }
  CsvFile(const CsvFile&) = delete;
  CsvFile& operator=(const CsvFile&) = delete;
  std::FILE* f;
};

}  // namespace

CVectorXd presumed_steering(const ScenarioConfig& cfg) {
  const auto p = cfg.presumed_target();
  return virtual_steering(cfg.radar, deg2rad(p.angle_deg), p.range_m).values;
}

CVectorXd target_steering(const ScenarioConfig& cfg) {
  if (const auto t = nominal_target(cfg)) return virtual_steering(cfg.radar, deg2rad(t->angle_deg), t->range_m).values;
  return presumed_steering(cfg);
}

CovarianceMatrix<double> true_incm(const ScenarioConfig& cfg) { return jammer_covariance(cfg, true); }
CovarianceMatrix<double> nominal_incm(const ScenarioConfig& cfg) { return jammer_covariance(cfg, false); }

std::vector<ControlRegion> control_regions(const ScenarioConfig& cfg) {
  const auto p = cfg.presumed_target();
  const double f0 = spatial_frequencies(cfg.radar, deg2rad(p.angle_deg), p.range_m).transmit;
  std::vector<ControlRegion> regions{ControlRegion::mainlobe(f0, cfg.beam.mainlobe_half_width, cfg.beam.ripple_linear())};
  if (!cfg.beam.null_regions.empty()) {
    for (const auto& n : cfg.beam.null_regions) regions.push_back(ControlRegion::null_region(n.center, n.half_width, n.depth_db));
  } else {
    for (const auto& j : cfg.jammers) {
      const double fq = spatial_frequencies(cfg.radar, deg2rad(j.angle_deg), j.range_m).transmit;
      regions.push_back(ControlRegion::null_region(fq, cfg.beam.null_half_width, cfg.beam.depth_db));
    }
  }
  return regions;
}

ControlState<double> design_transmit_weight(const ScenarioConfig& cfg) {
  const auto regions = control_regions(cfg);
  return mrbc_iterate<double>(cfg.radar.num_tx, regions.front().center, regions, cfg.beam.solver);
}

PipelineRun run_pipeline(const ScenarioConfig& cfg, std::uint64_t seed, std::uint64_t trial) {
  SynthesisOptions opt;
  opt.trial = trial;
  DataCube cube = synthesize_cube(cfg.radar, cfg.target, cfg.jammers, cfg.errors, seed, opt);
  auto full = full_echo_covariance(cube);
  auto eig = eig_descending(full);
  auto nhss = locate_target(cube, eig, presumed_steering(cfg), cfg.thresholds, cfg.radar.pulse_bins());
  std::vector<std::string> warnings = cube.warnings;
  std::optional<EigenSplit<double>> incm;
  const Index mn = cfg.radar.virtual_size();
  if (nhss.training_samples.cols() > 0) {
    incm = split_subspaces(eig_descending(sample_covariance(nhss.training_samples)), std::min(nhss.incm_rank(), mn));
  } else {
    incm = split_subspaces(eig_descending(CovarianceMatrix<double>{CMatrixXd::Identity(mn, mn), 0, CovarianceKind::analytic}), 1);
    warnings.push_back("no training segments found; INCM taken as noise only");
  }
  return {std::move(cube), std::move(full), std::move(eig), std::move(nhss), std::move(incm), std::move(warnings)};
}

const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> m{"matched", "mvdr", "nsjm-ideal", "nsjm-nominal", "nsjm", "nsjm-contaminated",
                                          "rjns", "rjns-ideal", "rjns-nominal"};
  return m;
}

bool method_needs_data(const std::string& method) {
  return method == "nsjm" || method == "nsjm-contaminated" || method == "rjns";
}

bool method_needs_transmit_design(const std::string& method) { return method.rfind("rjns", 0) == 0; }

BeamWeight<double> method_weight(const ScenarioConfig& cfg, const std::string& method, const PipelineRun* run,
                                 const ControlState<double>* transmit) {
  const CVectorXd v0 = presumed_steering(cfg);
  const auto presumed = cfg.presumed_target();
  if (method_needs_data(method) && !run) throw DomainError(fmt::format("method '{}' needs simulated data", method));

  if (method == "matched") return unit_gain_weight(CVectorXd(v0), v0, WeightKind::baseline, presumed);
  if (method == "mvdr") return mvdr_weight(true_incm(cfg).values, v0, presumed);
  if (method == "nsjm-ideal") return nsjm_weight(split_subspaces(eig_descending(true_incm(cfg)), jammer_rank(cfg)), v0, presumed);
  if (method == "nsjm-nominal") return nsjm_weight(split_subspaces(eig_descending(nominal_incm(cfg)), jammer_rank(cfg)), v0, presumed);
  if (method == "nsjm") return nsjm_weight(*run->incm, v0, presumed);
  if (method == "nsjm-contaminated") {
    const Index rho = std::min<Index>(static_cast<Index>(run->nhss.segments.segments.size()) + 1, cfg.radar.virtual_size());
    return nsjm_weight(split_subspaces(run->full_echo_eig, rho), v0, presumed);
  }
  if (method_needs_transmit_design(method)) {
    std::optional<ControlState<double>> own;
    if (!transmit) {
      own = design_transmit_weight(cfg);
      transmit = &*own;
    }
    const CVectorXd wr = receive_weight(cfg);
    if (method == "rjns") return rjns_weight(transmit->w, wr, *run->incm, v0, presumed);
    if (method == "rjns-ideal") return rjns_weight(transmit->w, wr, split_subspaces(eig_descending(true_incm(cfg)), jammer_rank(cfg)), v0, presumed);
    if (method == "rjns-nominal") return rjns_weight(transmit->w, wr, split_subspaces(eig_descending(nominal_incm(cfg)), jammer_rank(cfg)), v0, presumed);
  }
  throw ConfigError(fmt::format("unknown method '{}'", method));
}

std::vector<DetectionRecord> detection_trials(const ScenarioConfig& cfg, std::uint64_t seed, int trials) {
  std::vector<DetectionRecord> out;
  for (int t = 0; t < trials; ++t) {
    SynthesisOptions opt;
    opt.trial = static_cast<std::uint64_t>(t);
    const DataCube cube = synthesize_cube(cfg.radar, cfg.target, cfg.jammers, cfg.errors, seed, opt);
    const auto res = run_cs_nhss(cube, presumed_steering(cfg), cfg.thresholds, cfg.radar.pulse_bins());
    DetectionRecord r;
    r.trial = t;
    r.gamma = res.full_echo.gamma;
    if (res.target_present) {
      r.detected_bin = static_cast<int>(*res.target_range_bin);
      r.q_star = static_cast<int>(*res.target_segment);
    }
    out.push_back(r);
  }
  return out;
}

SweepResult sinr_sweep(const ScenarioConfig& cfg, std::uint64_t seed, int trials) {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  const auto& methods = cfg.sweep.methods;
  bool needs_data = false, needs_design = false;
  for (const auto& m : methods) {
    if (std::find(known_methods().begin(), known_methods().end(), m) == known_methods().end())
      throw ConfigError(fmt::format("unknown sweep method '{}'", m));
    needs_data = needs_data || method_needs_data(m);
    needs_design = needs_design || method_needs_transmit_design(m);
  }

  SweepResult result;
  std::set<std::string> seen;
  auto warn = [&](const std::string& w) {
    if (seen.insert(w).second) result.warnings.push_back(w);
  };

  std::optional<ControlState<double>> design;
  if (needs_design) {
    try {
      design = design_transmit_weight(cfg);
      result.transmit_converged = design->converged;
      if (!design->converged) warn(fmt::format("beampattern control stopped after {} iterations without meeting the requirements", design->iteration));
    } catch (const Error& e) {
      warn(fmt::format("beampattern control unavailable: {}", e.what()));
    }
  }

  const CMatrixXd r_true = true_incm(cfg).values;
  const CVectorXd v_target = target_steering(cfg);
  const auto snrs = cfg.sweep.snr_values();
  for (std::size_t s = 0; s < snrs.size(); ++s) {
    ScenarioConfig trial_cfg = cfg;
    if (trial_cfg.target) trial_cfg.target->snr_db = snrs[s];
    std::vector<std::vector<double>> values(methods.size());
    for (int t = 0; t < trials; ++t) {
      std::optional<PipelineRun> run;
      if (needs_data) {
        run = run_pipeline(trial_cfg, seed, static_cast<std::uint64_t>(s) * 1000003ULL + static_cast<std::uint64_t>(t));
        for (const auto& w : run->warnings) warn(w);
      }
      for (std::size_t m = 0; m < methods.size(); ++m) {
        double value = kSinrFloorDb;
        try {
          if (method_needs_transmit_design(methods[m]) && !design) throw DomainError("no transmit design");
          const auto w = method_weight(trial_cfg, methods[m], run ? &*run : nullptr, design ? &*design : nullptr);
          value = sinr_db(w.values, v_target, r_true, snrs[s]);
        } catch (const Error& e) {
          warn(fmt::format("{}: {} (reported at the {} dB floor)", methods[m], e.what(), kSinrFloorDb));
        }
        values[m].push_back(value);
      }
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const auto& v = values[m];
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
      result.points.push_back({snrs[s], methods[m], mean, sd, trials});
    }
  }
  return result;
}

RVector<double> raw_profile_db(const DataCube& cube) {
  return cube.bin_power().array().max(1e-30).log10() * 10.0;
}

ExperimentReport run_experiment(const ScenarioConfig& cfg, std::uint64_t seed, int trials,
                                const std::filesystem::path& out_dir) {
  cfg.validate();
  if (trials < 1) throw ConfigError("trials must be at least 1");
  ExperimentReport rep;
  auto emit = [&](const std::filesystem::path& p) { rep.files.push_back(p); };
  std::set<std::string> seen;
  auto warn = [&](const std::string& w) {
    if (seen.insert(w).second) rep.warnings.push_back(w);
  };

  write_detection_csv(out_dir / "detection.csv", detection_trials(cfg, seed, trials));
  emit(out_dir / "detection.csv");

  const auto sweep = sinr_sweep(cfg, seed, trials);
  for (const auto& w : sweep.warnings) warn(w);
  write_sweep_csv(out_dir / "sinr_sweep.csv", sweep.points);
  emit(out_dir / "sinr_sweep.csv");

  const auto run = run_pipeline(cfg, seed, 0);
  for (const auto& w : run.warnings) warn(w);
  write_profile_csv(out_dir / "profile_raw.csv", raw_profile_db(run.cube));
  emit(out_dir / "profile_raw.csv");

  std::optional<ControlState<double>> design;
  try {
    design = design_transmit_weight(cfg);
    rep.transmit_converged = design->converged;
    if (!design->converged) warn("beampattern control did not meet the requirements within max_iter");
  } catch (const Error& e) {
    warn(fmt::format("beampattern control unavailable: {}", e.what()));
  }

  const auto axis = uniform_axis(cfg.pattern_step);
  const auto p = cfg.presumed_target();
  const auto f0 = spatial_frequencies(cfg.radar, deg2rad(p.angle_deg), p.range_m);
  for (const std::string m : {"nsjm", "rjns", "mvdr"}) {
    if (method_needs_transmit_design(m) && !design) continue;
    try {
      const auto w = method_weight(cfg, m, &run, design ? &*design : nullptr);
      write_profile_csv(out_dir / fmt::format("profile_{}.csv", m), apply_weight(w, run.cube).mag_db);
      emit(out_dir / fmt::format("profile_{}.csv", m));
      write_pattern_csv(out_dir / fmt::format("pattern_{}.csv", m),
                        pattern_2d(w.values, cfg.radar.num_tx, cfg.radar.num_rx, axis, axis));
      emit(out_dir / fmt::format("pattern_{}.csv", m));
    } catch (const Error& e) {
      warn(fmt::format("{}: {}", m, e.what()));
    }
  }
  LoadReport load;
  write_pattern_csv(out_dir / "pattern_capon.csv",
                    capon_2d(run.full_echo.values, cfg.radar.num_tx, cfg.radar.num_rx, axis, axis, 0.0, &load));
  if (load.loaded) warn(fmt::format("full-echo covariance diagonally loaded by {:.3g} for the Capon spectrum", load.load));
  emit(out_dir / "pattern_capon.csv");
  if (design) {
    const auto grid = control_grid(cfg.beam.solver.grid_step);
    write_transmit_pattern_csv(out_dir / "pattern_mrbc.csv", grid, f0.receive, transmit_pattern_db(design->w, f0.transmit, grid));
    emit(out_dir / "pattern_mrbc.csv");
  }
  return rep;
}

void write_detection_csv(const std::filesystem::path& path, const std::vector<DetectionRecord>& records) {
  CsvFile f(path);
  fmt::print(f.f, "trial,detected_bin,q_star,gamma\n");
  for (const auto& r : records) fmt::print(f.f, "{},{},{},{:.6f}\n", r.trial, r.detected_bin, r.q_star, r.gamma);
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SinrPoint>& points) {
  CsvFile f(path);
  fmt::print(f.f, "snr_db,method,mean_sinr_db,std\n");
  for (const auto& p : points) fmt::print(f.f, "{:.4f},{},{:.4f},{:.4f}\n", p.snr_db, p.method, p.mean_sinr_db, p.std_db);
}

void write_profile_csv(const std::filesystem::path& path, const RVector<double>& mag_db) {
  CsvFile f(path);
  fmt::print(f.f, "bin,mag_db\n");
  for (Index b = 0; b < mag_db.size(); ++b) fmt::print(f.f, "{},{:.4f}\n", b, mag_db(b));
}

void write_pattern_csv(const std::filesystem::path& path, const PatternGrid& grid) {
  CsvFile f(path);
  fmt::print(f.f, "f_T,f_R,db\n");
  for (std::size_t i = 0; i < grid.f_transmit.size(); ++i)
    for (std::size_t j = 0; j < grid.f_receive.size(); ++j)
      fmt::print(f.f, "{:.6f},{:.6f},{:.4f}\n", grid.f_transmit[i], grid.f_receive[j],
                 grid.db(static_cast<Index>(j), static_cast<Index>(i)));
}

void write_transmit_pattern_csv(const std::filesystem::path& path, const std::vector<double>& f_transmit,
                                double f_receive, const std::vector<double>& db) {
  CsvFile f(path);
  fmt::print(f.f, "f_T,f_R,db\n");
  for (std::size_t i = 0; i < f_transmit.size(); ++i) fmt::print(f.f, "{:.6f},{:.6f},{:.4f}\n", f_transmit[i], f_receive, db[i]);
}

void write_cube_csv(const std::filesystem::path& path, const DataCube& cube, Index pulse) {
  if (pulse < 0 || pulse >= cube.pulses()) throw DomainError(fmt::format("pulse {} outside [0, {})", pulse, cube.pulses()));
  CsvFile f(path);
  fmt::print(f.f, "bin,channel,re,im\n");
  for (Index b = 0; b < cube.bins(); ++b) {
    const auto x = cube.snapshot(b, pulse);
    for (Index c = 0; c < x.size(); ++c) fmt::print(f.f, "{},{},{:.9g},{:.9g}\n", b, c, x(c).real(), x(c).imag());
  }
}

}  // namespace stca
