#pragma once

#include <optional>

#include "stca/errors.hpp"
#include "stca/types.hpp"

namespace stca {

struct RadarParams {
  int num_tx = 16;
  int num_rx = 16;
  double carrier_freq = 10e9;
  std::optional<double> element_spacing;  // half wavelength when unset
  double bandwidth = 10e6;
  double pulse_width = 1e-6;
  double sample_rate = 10e6;
  double transmit_delay = 0.1022e-6;
  double prf = 5e3;
  int num_range_bins = 2000;
  int num_pulses = 30;

  double wavelength() const { return kSpeedOfLight / carrier_freq; }
  double spacing() const { return element_spacing.value_or(0.5 * wavelength()); }
  double spacing_ratio() const { return spacing() / wavelength(); }
  double chirp_rate() const { return bandwidth / pulse_width; }
  double range_bin_size() const { return kSpeedOfLight / (2.0 * sample_rate); }
  int pulse_bins() const;
  Index virtual_size() const { return Index(num_tx) * num_rx; }

  /// Throws ConfigError on inconsistent constants.
  void validate() const;
  RadarParams traditional_mimo() const {
    RadarParams p = *this;
    p.transmit_delay = 0.0;
    return p;
  }
};

struct SpatialFrequencyPair {
  double transmit = 0.0;  // wrapped to [-0.5, 0.5)
  double receive = 0.0;
  double transmit_unwrapped = 0.0;
};

enum class SteeringKind { transmit, receive, virtual_array };

template <typename T = double>
struct SteeringVector {
  CVector<T> values;
  SteeringKind kind = SteeringKind::virtual_array;

  Index size() const { return values.size(); }
  operator const CVector<T>&() const { return values; }
};

double deg2rad(double deg);

SpatialFrequencyPair spatial_frequencies(const RadarParams& params, double theta, double range);

/// exp(j 2 pi k f), k = 0..n-1.
template <typename T = double>
CVector<T> steering_at(Index n, double f) {
  CVector<T> out(n);
  for (Index k = 0; k < n; ++k) out(k) = phasor<T>(static_cast<double>(k) * f);
  return out;
}

/// Virtual steering from a spatial-frequency pair: b(f_R) kron a(f_T).
template <typename T = double>
CVector<T> virtual_steering_at(Index num_tx, Index num_rx, double f_transmit, double f_receive) {
  return kron(steering_at<T>(num_rx, f_receive), steering_at<T>(num_tx, f_transmit));
}

namespace detail {
void check_angle(double theta);
void check_range(double range);
}  // namespace detail

template <typename T = double>
SteeringVector<T> receive_steering(const RadarParams& params, double theta) {
  detail::check_angle(theta);
  return {steering_at<T>(params.num_rx, params.spacing_ratio() * std::sin(theta)), SteeringKind::receive};
}

template <typename T = double>
SteeringVector<T> transmit_steering(const RadarParams& params, double theta, double range) {
  detail::check_angle(theta);
  detail::check_range(range);
  const auto f = spatial_frequencies(params, theta, range);
  return {steering_at<T>(params.num_tx, f.transmit), SteeringKind::transmit};
}

template <typename T = double>
SteeringVector<T> virtual_steering(const RadarParams& params, double theta, double range) {
  return {kron(receive_steering<T>(params, theta).values, transmit_steering<T>(params, theta, range).values),
          SteeringKind::virtual_array};
}

}  // namespace stca
