#include "stca/cs_nhss.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace stca {

void DetectionThresholds::validate() const {
  if (!(eta_db > 0) || !(chi > 0) || !(zeta > 0))
    throw ConfigError(fmt::format("thresholds must be positive (eta_db={}, chi={}, zeta={})", eta_db, chi, zeta));
}

namespace {

CVectorXd reference_vector(const CVectorXd& v_s0, CorrelationMode mode) {
  const double n = v_s0.norm();
  if (!(n > 0)) throw DomainError("presumed steering vector is zero");
  return mode == CorrelationMode::normalized ? CVectorXd(v_s0 / n) : v_s0;
}

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

std::vector<Segment> runs_above(const RVector<double>& power, double level, Index min_length) {
  std::vector<Segment> out;
  const Index n = power.size();
  Index i = 0;
  while (i < n) {
    if (power(i) > level) {
      Index j = i;
      while (j < n && power(j) > level) ++j;
      if (j - i >= min_length) out.push_back({i, j - 1});
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

double floor_outside(const RVector<double>& power, const std::vector<Segment>& segs) {
  std::vector<double> rest;
  rest.reserve(static_cast<std::size_t>(power.size()));
  std::size_t s = 0;
  for (Index b = 0; b < power.size(); ++b) {
    while (s < segs.size() && segs[s].last_bin < b) ++s;
    if (s < segs.size() && b >= segs[s].first_bin) continue;
    rest.push_back(power(b));
  }
  if (rest.empty()) return median(std::vector<double>(power.data(), power.data() + power.size()));
  return median(std::move(rest));
}

CMatrixXd gather(const DataCube& cube, const std::vector<Segment>& segs) {
  Index cols = 0;
  for (const auto& s : segs) cols += s.length() * cube.pulses();
  CMatrixXd out(cube.channels(), cols);
  Index c = 0;
  for (const auto& s : segs) {
    const Index k = s.length() * cube.pulses();
    out.middleCols(c, k) = cube.bin_block(s.first_bin, s.length());
    c += k;
  }
  return out;
}

}  // namespace

CorrelationReport best_correlation(const EigenSplit<double>& e, const CVectorXd& v_s0, CorrelationMode mode) {
  if (v_s0.size() != e.dim()) throw DomainError("presumed steering dimension mismatch");
  const CVectorXd v = reference_vector(v_s0, mode);
  const RVector<double> corr = (e.eigenvectors.adjoint() * v).cwiseAbs2();
  Index k = 0;
  CorrelationReport r;
  r.gamma = corr.maxCoeff(&k);
  r.rho = k + 1;
  r.best_eigenvector = e.eigenvectors.col(k);
  return r;
}

SampleSegments segment_echo(const DataCube& cube, double eta_db, int pulse_bins) {
  const RVector<double> power = cube.bin_power();
  const Index min_length = static_cast<Index>(std::ceil(0.8 * pulse_bins - 1e-9));
  const double ratio = db_to_power(eta_db);

  SampleSegments out;
  out.noise_floor = median(std::vector<double>(power.data(), power.data() + power.size()));
  out.segments = runs_above(power, out.noise_floor * ratio, min_length);
  for (int pass = 0; pass < 4; ++pass) {
    const double floor = floor_outside(power, out.segments);
    auto segs = runs_above(power, floor * ratio, min_length);
    const bool same = floor == out.noise_floor;
    out.noise_floor = floor;
    out.segments = std::move(segs);
    if (same) break;
  }
  return out;
}

NhssResult locate_target(const DataCube& cube, const EigenSplit<double>& full_echo, const CVectorXd& v_s0,
                         const DetectionThresholds& thresholds, int pulse_bins) {
  thresholds.validate();
  NhssResult res;
  res.full_echo = best_correlation(full_echo, v_s0, thresholds.mode);
  res.rho_reliable = res.full_echo.gamma >= thresholds.chi;
  res.segments = segment_echo(cube, thresholds.eta_db, pulse_bins);
  const auto& segs = res.segments.segments;

  auto no_target = [&] {
    res.target_present = false;
    res.training_samples = gather(cube, segs);
    res.jammer_segments = static_cast<Index>(segs.size());
    return res;
  };
  if (!res.rho_reliable) return no_target();

  const CVectorXd v = reference_vector(v_s0, thresholds.mode);
  const Index rho = res.full_echo.rho;
  CovarianceAccumulator<double> acc(cube.channels());
  double previous = 0.0;
  for (std::size_t q = 0; q < segs.size(); ++q) {
    acc.add(cube.bin_block(segs[q].first_bin, segs[q].length()));
    const auto e = eig_descending(acc.result(CovarianceKind::full_echo));
    const double gamma_q = (e.eigenvectors.leftCols(rho).adjoint() * v).squaredNorm();
    res.gamma_trace.push_back(gamma_q);
    if (std::abs(gamma_q - previous) >= thresholds.zeta) {
      res.target_present = true;
      res.target_segment = static_cast<Index>(q + 1);
      res.target_range_bin = segs[q].first_bin;
      std::vector<Segment> rest = segs;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(q));
      res.training_samples = gather(cube, rest);
      res.jammer_segments = static_cast<Index>(rest.size());
      return res;
    }
    previous = gamma_q;
  }
  return no_target();
}

CovarianceMatrix<double> full_echo_covariance(const DataCube& cube) {
  CovarianceAccumulator<float> acc(cube.channels());
  constexpr Index chunk = 100;
  for (Index b = 0; b < cube.bins(); b += chunk) acc.add(cube.bin_block(b, std::min(chunk, cube.bins() - b)));
  return acc.result<double>(CovarianceKind::full_echo);
}

NhssResult run_cs_nhss(const DataCube& cube, const CVectorXd& v_s0, const DetectionThresholds& thresholds,
                       int pulse_bins) {
  return locate_target(cube, eig_descending(full_echo_covariance(cube)), v_s0, thresholds, pulse_bins);
}

}  // namespace stca
