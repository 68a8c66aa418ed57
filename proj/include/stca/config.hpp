#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stca/array_model.hpp"
#include "stca/beam_control.hpp"
#include "stca/cs_nhss.hpp"
#include "stca/nsjm.hpp"
#include "stca/scene.hpp"

namespace stca {

struct NullRegionSpec {
  double center = 0.0;
  double half_width = 0.02;
  double depth_db = -50.0;
};

struct BeamControlConfig {
  double mainlobe_half_width = 0.02;
  double ripple_db = 0.8279;  // 20 log10(1.1)
  double null_half_width = 0.02;  // for nulls derived from presumed jammers
  double depth_db = -50.0;
  std::vector<NullRegionSpec> null_regions;  // explicit; derived from jammers when empty
  MrbcOptions solver;

  double ripple_linear() const { return db_to_amplitude(ripple_db) - 1.0; }
};

struct SweepConfig {
  double snr_min_db = -10.0;
  double snr_max_db = 30.0;
  double snr_step_db = 2.0;
  std::vector<std::string> methods{"mvdr", "nsjm-ideal", "nsjm", "nsjm-contaminated", "rjns"};

  std::vector<double> snr_values() const;
};

struct ScenarioConfig {
  RadarParams radar;
  std::optional<TargetSpec> target = TargetSpec{};
  std::vector<FalseTargetSpec> jammers;
  std::optional<PresumedTarget> presumed;  // defaults to the target's nominal position
  ErrorInjection errors;
  DetectionThresholds thresholds;
  BeamControlConfig beam;
  SweepConfig sweep;
  double pattern_step = 0.005;

  PresumedTarget presumed_target() const;
  void validate() const;
};

/// Default radar with one true target and three false targets at its angle.
ScenarioConfig default_scenario();

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace stca
