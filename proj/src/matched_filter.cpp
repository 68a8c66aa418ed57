#include <fmt/format.h>

#include "stca/scene.hpp"

namespace stca {

MatchedFilterReport validate_matched_filter(const RadarParams& params, double theta, double range,
                                            const MatchedFilterOptions& options) {
  params.validate();
  detail::check_angle(theta);
  detail::check_range(range);
  if (options.elements < 1 || options.elements > 4 || options.elements > params.num_tx)
    throw DomainError(fmt::format("waveform validation runs on 1..min(4, M) elements, got {}", options.elements));
  if (options.oversample < 1) throw DomainError("oversample must be positive");

  const double mu = params.chirp_rate();
  const double tp = params.pulse_width;
  const double ts = 1.0 / (params.sample_rate * options.oversample);
  const double tau = 2.0 * range / kSpeedOfLight;
  const double fr = params.spacing_ratio() * std::sin(theta);
  const double last_delay = (options.elements - 1) * params.transmit_delay;

  const Index taps = static_cast<Index>(std::llround(tp / ts));
  const auto k0 = static_cast<long long>(std::floor((tau - tp) / ts));
  const Index len = static_cast<Index>(std::ceil((2.0 * tp + last_delay) / ts)) + taps + 1;

  auto chirp = [&](double s) { return (s >= 0.0 && s < tp) ? phasor(0.5 * mu * s * s) : std::complex<double>(0.0); };

  CVectorXd h(taps);
  for (Index i = 0; i < taps; ++i) h(i) = std::conj(chirp(static_cast<double>(i) * ts));

  std::vector<CVectorXd> outputs;
  for (int m = 0; m < options.elements; ++m) {
    const double tm = m * params.transmit_delay;
    CVectorXd x(len);
    for (Index i = 0; i < len; ++i) {
      const double t = static_cast<double>(k0 + i) * ts;
      std::complex<double> g;
      if (options.exact_delay) {
        g = chirp(t - tau - tm);
      } else {
        const double s = t - tau;
        g = chirp(s) * phasor(-mu * s * tm);
      }
      x(i) = g * phasor(mu * t * tm) * phasor(fr * m);
    }
    CVectorXd y = CVectorXd::Zero(len);
    for (Index k = 0; k + taps <= len; ++k) y(k) = x.segment(k, taps).cwiseProduct(h).sum();
    outputs.push_back(std::move(y));
  }

  Index peak = 0;
  outputs.front().cwiseAbs().maxCoeff(&peak);

  MatchedFilterReport report;
  const double f_transmit = mu * params.transmit_delay * tau + fr;
  const double ref = std::arg(outputs.front()(peak));
  for (int m = 0; m < options.elements; ++m) {
    double measured = std::arg(outputs[m](peak)) - ref;
    if (options.exact_delay) {
      const double tm = m * params.transmit_delay;
      measured -= std::numbers::pi * mu * tm * tm;
    }
    const double analytic = kTwoPi * f_transmit * m;
    const double err = std::abs(std::arg(std::polar(1.0, measured - analytic)));
    report.measured_phase.push_back(std::arg(std::polar(1.0, measured)));
    report.analytic_phase.push_back(std::arg(std::polar(1.0, analytic)));
    report.residual = std::max(report.residual, err);
  }
  return report;
}

}  // namespace stca
