#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stca/array_model.hpp"

namespace stca {

struct TargetSpec {
  double angle_deg = 0.0;
  double range_m = 43e3;
  double snr_db = 20.0;
  int range_bin = 1221;
};

struct FalseTargetSpec {
  double angle_deg = 0.0;
  double range_m = 0.0;
  double jnr_db = 30.0;
  int range_bin = 0;
  std::optional<double> forward_delay;

  /// Range of a delay-and-forward copy: c (tau_j + tau_ftg / 2), tau_j = jammer_range / c.
  static FalseTargetSpec from_forward_delay(double angle_deg, double jammer_range, double forward_delay,
                                            double jnr_db, int range_bin);
};

struct ErrorInjection {
  double doa_error_deg = 0.0;
  int range_bin_error = 0;

  bool any() const { return doa_error_deg != 0.0 || range_bin_error != 0; }
};

/// Jammer as actually simulated: angle and range shifted by the injected errors.
FalseTargetSpec perturbed(const RadarParams& params, const FalseTargetSpec& jammer, const ErrorInjection& errors);

enum class ComponentKind { target, false_target };

struct Occupancy {
  ComponentKind kind;
  int first_bin;
  int bin_count;
};

/// Per-range-bin MN-channel snapshots. Column (bin * pulses + pulse) holds one snapshot.
class DataCube {
 public:
  DataCube(Index bins, Index pulses, Index channels, std::uint64_t seed = 0);

  Index bins() const { return bins_; }
  Index pulses() const { return pulses_; }
  Index channels() const { return data_.rows(); }
  std::uint64_t seed() const { return seed_; }

  auto snapshot(Index bin, Index pulse) { return data_.col(bin * pulses_ + pulse); }
  auto snapshot(Index bin, Index pulse) const { return data_.col(bin * pulses_ + pulse); }
  /// All pulses of bins [first, first + count).
  auto bin_block(Index first, Index count = 1) { return data_.middleCols(first * pulses_, count * pulses_); }
  auto bin_block(Index first, Index count = 1) const { return data_.middleCols(first * pulses_, count * pulses_); }
  const CMatrixXd& snapshots() const { return data_; }
  CMatrixXd& snapshots() { return data_; }

  /// Mean |x|^2 over pulses and channels for each bin.
  RVector<double> bin_power() const;

  std::vector<Occupancy> occupancy;
  std::vector<std::string> warnings;

 private:
  Index bins_;
  Index pulses_;
  CMatrixXd data_;
  std::uint64_t seed_;
};

/// Circular complex Gaussian with unit variance, deterministic across platforms.
class ComplexGaussian {
 public:
  ComplexGaussian(std::uint64_t seed, std::uint64_t stream);
  std::complex<double> operator()();
  /// Fill n samples; one 64-bit draw per sample, evaluated in single precision.
  void fill(std::complex<double>* out, Index n);

 private:
  double uniform();
  std::mt19937_64 engine_;
};

struct SynthesisOptions {
  bool noise = true;
  std::uint64_t trial = 0;
};

DataCube synthesize_cube(const RadarParams& params, const std::optional<TargetSpec>& target,
                         const std::vector<FalseTargetSpec>& jammers, const ErrorInjection& errors,
                         std::uint64_t seed, const SynthesisOptions& options = {});

/// Complex echo amplitude sqrt(10^(db/10)) * exp(-j 2 pi f0 2R/c).
std::complex<double> echo_amplitude(const RadarParams& params, double power_db, double range);

struct MatchedFilterOptions {
  int elements = 4;
  int oversample = 64;
  bool exact_delay = true;
};

struct MatchedFilterReport {
  double residual = 0.0;  // radians
  std::vector<double> measured_phase;
  std::vector<double> analytic_phase;
};

/// Time-domain chirp and matched-filter check of the post-filter transmit phase ramp.
MatchedFilterReport validate_matched_filter(const RadarParams& params, double theta, double range,
                                            const MatchedFilterOptions& options = {});

}  // namespace stca
