#include "stca/array_model.hpp"

#include <fmt/format.h>

namespace stca {

int RadarParams::pulse_bins() const { return static_cast<int>(std::ceil(pulse_width * sample_rate - 1e-9)); }

void RadarParams::validate() const {
  if (num_tx < 1 || num_rx < 1) throw ConfigError("radar: num_tx and num_rx must be positive");
  if (num_range_bins < 1 || num_pulses < 1) throw ConfigError("radar: num_range_bins and num_pulses must be positive");
  if (!(carrier_freq > 0) || !(bandwidth > 0) || !(pulse_width > 0) || !(sample_rate > 0) || !(prf > 0))
    throw ConfigError("radar: frequencies and pulse width must be positive");
  if (element_spacing && !(*element_spacing > 0)) throw ConfigError("radar: element_spacing must be positive");
  if (transmit_delay < 0) throw ConfigError("radar: transmit_delay must be non-negative");
  if (pulse_width * sample_rate < 1.0 - 1e-9)
    throw ConfigError(fmt::format("radar: pulse spans {:.3g} samples, need at least one", pulse_width * sample_rate));
}

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

namespace detail {
void check_angle(double theta) {
  if (!(std::abs(theta) < std::numbers::pi / 2))
    throw DomainError(fmt::format("angle {} rad outside (-pi/2, pi/2)", theta));
}
void check_range(double range) {
  if (!(range >= 0)) throw DomainError(fmt::format("range {} m is negative", range));
}
}  // namespace detail

SpatialFrequencyPair spatial_frequencies(const RadarParams& params, double theta, double range) {
  detail::check_angle(theta);
  detail::check_range(range);
  const double fr = params.spacing_ratio() * std::sin(theta);
  const double ft = params.chirp_rate() * params.transmit_delay * 2.0 * range / kSpeedOfLight + fr;
  return {wrap_frequency(ft), fr, ft};
}

}  // namespace stca
