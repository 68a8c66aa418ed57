#include "stca/scene.hpp"

#include <fmt/format.h>

namespace stca {

FalseTargetSpec FalseTargetSpec::from_forward_delay(double angle_deg, double jammer_range, double forward_delay,
                                                    double jnr_db, int range_bin) {
  FalseTargetSpec j;
  j.angle_deg = angle_deg;
  j.range_m = kSpeedOfLight * (jammer_range / kSpeedOfLight + forward_delay / 2.0);
  j.jnr_db = jnr_db;
  j.range_bin = range_bin;
  j.forward_delay = forward_delay;
  return j;
}

FalseTargetSpec perturbed(const RadarParams& params, const FalseTargetSpec& jammer, const ErrorInjection& errors) {
  FalseTargetSpec out = jammer;
  out.angle_deg += errors.doa_error_deg;
  out.range_m += errors.range_bin_error * params.range_bin_size();
  out.range_bin += errors.range_bin_error;
  return out;
}

void ComplexGaussian::fill(std::complex<double>* out, Index n) {
  constexpr Index chunk = 4096;
  Eigen::ArrayXf u(chunk), v(chunk), r(chunk), ph(chunk);
  for (Index start = 0; start < n; start += chunk) {
    const Index k = std::min(chunk, n - start);
    for (Index i = 0; i < k; ++i) {
      const std::uint64_t x = engine_();
      u(i) = static_cast<float>((x >> 40) + 1) * 0x1.0p-24f;  // (0, 1]
      v(i) = static_cast<float>((x >> 8) & 0xFFFFFF) * 0x1.0p-24f;
    }
    r.head(k) = (-u.head(k).log()).sqrt();
    ph.head(k) = static_cast<float>(kTwoPi) * v.head(k);
    const Eigen::ArrayXf re = r.head(k) * ph.head(k).cos();
    const Eigen::ArrayXf im = r.head(k) * ph.head(k).sin();
    for (Index i = 0; i < k; ++i) out[start + i] = {static_cast<double>(re(i)), static_cast<double>(im(i))};
  }
}

DataCube::DataCube(Index bins, Index pulses, Index channels, std::uint64_t seed)
    : bins_(bins), pulses_(pulses), data_(CMatrixXd::Zero(channels, bins * pulses)), seed_(seed) {
  if (bins < 1 || pulses < 1 || channels < 1) throw DomainError("data cube dimensions must be positive");
}

RVector<double> DataCube::bin_power() const {
  RVector<double> p(bins_);
  const double denom = static_cast<double>(pulses_ * channels());
  for (Index b = 0; b < bins_; ++b) p(b) = bin_block(b).squaredNorm() / denom;
  return p;
}

ComplexGaussian::ComplexGaussian(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double ComplexGaussian::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::complex<double> ComplexGaussian::operator()() {
  const double u = 1.0 - uniform();  // (0, 1]
  const double r = std::sqrt(-std::log(u));
  const double ph = kTwoPi * uniform();
  return {r * std::cos(ph), r * std::sin(ph)};
}

std::complex<double> echo_amplitude(const RadarParams& params, double power_db, double range) {
  return std::sqrt(db_to_power(power_db)) * phasor<double>(-params.carrier_freq * 2.0 * range / kSpeedOfLight);
}

namespace {

void place(DataCube& cube, const RadarParams& params, ComponentKind kind, double angle_deg, double range,
           double power_db, int bin) {
  const int occ = params.pulse_bins();
  if (bin < 0 || bin + occ > params.num_range_bins)
    throw ConfigError(fmt::format("component at bin {} spans [{}, {}) outside [0, {})", bin, bin, bin + occ,
                                  params.num_range_bins));
  const CVectorXd sig = echo_amplitude(params, power_db, range) * virtual_steering(params, deg2rad(angle_deg), range).values;
  auto block = cube.bin_block(bin, occ);
  block.colwise() += sig;
  cube.occupancy.push_back({kind, bin, occ});
}

}  // namespace

DataCube synthesize_cube(const RadarParams& params, const std::optional<TargetSpec>& target,
                         const std::vector<FalseTargetSpec>& jammers, const ErrorInjection& errors,
                         std::uint64_t seed, const SynthesisOptions& options) {
  params.validate();
  DataCube cube(params.num_range_bins, params.num_pulses, params.virtual_size(), seed);
  if (static_cast<int>(jammers.size()) >= params.num_tx)
    cube.warnings.push_back(fmt::format("{} mainlobe jammers exceed the M-1 = {} suppression capacity",
                                        jammers.size(), params.num_tx - 1));
  if (options.noise) {
    ComplexGaussian rng(seed, options.trial);
    rng.fill(cube.snapshots().data(), cube.snapshots().size());
  }
  if (target) place(cube, params, ComponentKind::target, target->angle_deg, target->range_m, target->snr_db, target->range_bin);
  for (const auto& j : jammers) {
    const auto t = perturbed(params, j, errors);
    place(cube, params, ComponentKind::false_target, t.angle_deg, t.range_m, t.jnr_db, t.range_bin);
  }
  return cube;
}

}  // namespace stca
