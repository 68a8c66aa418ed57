#pragma once

#include <optional>
#include <vector>

#include "stca/eigen_core.hpp"
#include "stca/scene.hpp"

namespace stca {

enum class CorrelationMode { normalized, raw };

struct DetectionThresholds {
  double eta_db = 7.0;
  double chi = 0.5;
  double zeta = 0.5;
  CorrelationMode mode = CorrelationMode::normalized;

  /// Raw-mode values used with an unnormalized presumed steering vector.
  static DetectionThresholds raw_defaults() { return {7.0, 150.0, 125.0, CorrelationMode::raw}; }
  void validate() const;
};

struct CorrelationReport {
  double gamma = 0.0;
  Index rho = 1;  // 1-based rank of the best-matching eigenvector
  CVectorXd best_eigenvector;
};

struct Segment {
  Index first_bin = 0;
  Index last_bin = 0;  // inclusive
  Index length() const { return last_bin - first_bin + 1; }
};

struct SampleSegments {
  std::vector<Segment> segments;  // near to far
  double noise_floor = 0.0;
};

struct NhssResult {
  bool target_present = false;
  std::optional<Index> target_segment;  // q*, 1-based
  std::optional<Index> target_range_bin;
  CMatrixXd training_samples;  // MN x K
  std::vector<double> gamma_trace;  // Gamma_1..Gamma_q evaluated
  CorrelationReport full_echo;
  bool rho_reliable = false;
  SampleSegments segments;
  Index jammer_segments = 0;

  /// Split index for the INCM eigen-system built from training_samples.
  Index incm_rank() const { return jammer_segments + 1; }
};

CorrelationReport best_correlation(const EigenSplit<double>& e, const CVectorXd& v_s0,
                                   CorrelationMode mode = CorrelationMode::normalized);

SampleSegments segment_echo(const DataCube& cube, double eta_db, int pulse_bins);

NhssResult locate_target(const DataCube& cube, const EigenSplit<double>& full_echo, const CVectorXd& v_s0,
                         const DetectionThresholds& thresholds, int pulse_bins);

/// Full-echo covariance over every snapshot of the cube, accumulated in single precision.
CovarianceMatrix<double> full_echo_covariance(const DataCube& cube);

/// Full-echo decomposition followed by locate_target.
NhssResult run_cs_nhss(const DataCube& cube, const CVectorXd& v_s0, const DetectionThresholds& thresholds,
                       int pulse_bins);

}  // namespace stca
