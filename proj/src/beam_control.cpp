#include "stca/beam_control.hpp"

#include <fmt/format.h>
#include <numeric>

namespace stca {

std::vector<double> control_grid(double step) {
  if (!(step > 0) || step > 0.5) throw DomainError("grid step must lie in (0, 0.5]");
  const auto n = static_cast<std::size_t>(std::llround(1.0 / step));
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::round((-0.5 + static_cast<double>(i) * step) * 1e9) / 1e9;
  return g;
}

void validate_regions(const std::vector<ControlRegion>& regions) {
  if (regions.empty()) throw DomainError("no control regions");
  double mainlobe_mag = std::numeric_limits<double>::infinity();
  for (const auto& r : regions) {
    if (!(r.half_width > 0) || r.half_width >= 0.5) throw DomainError(fmt::format("region half-width {} invalid", r.half_width));
    if (r.center < -0.5 || r.center >= 0.5) throw DomainError(fmt::format("region center {} outside [-0.5, 0.5)", r.center));
    if (!(r.threshold >= 0)) throw DomainError("deviation threshold must be non-negative");
    if (r.kind == RegionKind::mainlobe) mainlobe_mag = std::min(mainlobe_mag, r.target_magnitude);
  }
  for (std::size_t i = 0; i < regions.size(); ++i) {
    if (regions[i].kind == RegionKind::null && !(regions[i].target_magnitude < mainlobe_mag))
      throw DomainError("null magnitude must be below the mainlobe magnitude");
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      const double gap = std::abs(wrap_frequency(regions[i].center - regions[j].center));
      if (gap <= regions[i].half_width + regions[j].half_width)
        throw DomainError(fmt::format("control regions around {} and {} overlap", regions[i].center, regions[j].center));
    }
  }
}

namespace detail {

std::vector<std::size_t> local_maxima(const std::vector<double>& dev, int k) {
  std::vector<std::size_t> idx;
  const std::size_t n = dev.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool left = i == 0 || dev[i] > dev[i - 1];
    const bool right = i + 1 == n || dev[i] >= dev[i + 1];
    if (left && right) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return dev[a] > dev[b]; });
  if (k >= 0 && idx.size() > static_cast<std::size_t>(k)) idx.resize(static_cast<std::size_t>(k));
  return idx;
}

}  // namespace detail

}  // namespace stca
