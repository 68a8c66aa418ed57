#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stca/config.hpp"
#include "stca/metrics.hpp"

namespace stca {

CVectorXd presumed_steering(const ScenarioConfig& cfg);
CVectorXd target_steering(const ScenarioConfig& cfg);

/// Noise plus jammers at their simulated (error-injected) positions.
CovarianceMatrix<double> true_incm(const ScenarioConfig& cfg);
/// Noise plus jammers at their nominal, presumed positions.
CovarianceMatrix<double> nominal_incm(const ScenarioConfig& cfg);

/// Mainlobe region around the presumed f_T plus one null region per presumed jammer (or the explicit list).
std::vector<ControlRegion> control_regions(const ScenarioConfig& cfg);
ControlState<double> design_transmit_weight(const ScenarioConfig& cfg);

struct PipelineRun {
  DataCube cube;
  CovarianceMatrix<double> full_echo;
  EigenSplit<double> full_echo_eig;
  NhssResult nhss;
  std::optional<EigenSplit<double>> incm;  // from training samples, split at nhss.incm_rank()
  std::vector<std::string> warnings;
};

/// synthesize, full-echo decomposition, CS-NHSS, training-sample INCM.
PipelineRun run_pipeline(const ScenarioConfig& cfg, std::uint64_t seed, std::uint64_t trial);

/// Weight for a named method: mvdr, nsjm-ideal, nsjm-nominal, nsjm, nsjm-contaminated, rjns, rjns-ideal,
/// rjns-nominal, matched. Methods needing data take `run`; the transmit design is reused when supplied.
BeamWeight<double> method_weight(const ScenarioConfig& cfg, const std::string& method, const PipelineRun* run,
                                 const ControlState<double>* transmit = nullptr);
bool method_needs_data(const std::string& method);
bool method_needs_transmit_design(const std::string& method);
const std::vector<std::string>& known_methods();

struct DetectionRecord {
  int trial = 0;
  int detected_bin = -1;
  int q_star = 0;
  double gamma = 0.0;
};

std::vector<DetectionRecord> detection_trials(const ScenarioConfig& cfg, std::uint64_t seed, int trials);

struct SweepResult {
  std::vector<SinrPoint> points;
  std::vector<std::string> warnings;
  bool transmit_converged = true;
};

SweepResult sinr_sweep(const ScenarioConfig& cfg, std::uint64_t seed, int trials);

struct ExperimentReport {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
  bool transmit_converged = true;
};

/// Full pipeline: detection trials, SINR sweep, trial-0 range profiles and beampatterns, written under out_dir.
ExperimentReport run_experiment(const ScenarioConfig& cfg, std::uint64_t seed, int trials,
                                const std::filesystem::path& out_dir);

/// Per-bin mean channel power in dB, before any weighting.
RVector<double> raw_profile_db(const DataCube& cube);

void write_detection_csv(const std::filesystem::path& path, const std::vector<DetectionRecord>& records);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SinrPoint>& points);
void write_profile_csv(const std::filesystem::path& path, const RVector<double>& mag_db);
void write_pattern_csv(const std::filesystem::path& path, const PatternGrid& grid);
void write_transmit_pattern_csv(const std::filesystem::path& path, const std::vector<double>& f_transmit,
                                double f_receive, const std::vector<double>& db);
void write_cube_csv(const std::filesystem::path& path, const DataCube& cube, Index pulse = 0);

}  // namespace stca
