#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

#include "stca/array_model.hpp"
#include "stca/eigen_core.hpp"
#include "stca/nsjm.hpp"

namespace stca {

enum class RegionKind { mainlobe, null };

struct ControlRegion {
  RegionKind kind = RegionKind::null;
  double center = 0.0;
  double half_width = 0.02;
  double target_magnitude = 0.0;  // rho, linear
  double threshold = 0.0;         // allowed deviation, linear

  double lo() const { return wrap_frequency(center - half_width); }
  double hi() const { return wrap_frequency(center + half_width); }
  /// Signed offset of f from the center, taking the short way around the unit circle.
  double offset(double f) const { return wrap_frequency(f - center); }
  bool contains(double f) const { return std::abs(offset(f)) <= half_width + 1e-9; }

  /// Flat-top mainlobe with |L| held inside [1 - ripple, 1 + ripple].
  static ControlRegion mainlobe(double center, double half_width, double ripple = 0.1) {
    return {RegionKind::mainlobe, center, half_width, 1.0, ripple};
  }
  /// Null whose response must stay at or below depth_db. The control target sits at a fraction of that level.
  static ControlRegion null_region(double center, double half_width, double depth_db = -50.0,
                                   double control_fraction = 0.5) {
    const double depth = db_to_amplitude(depth_db);
    return {RegionKind::null, center, half_width, depth * control_fraction, depth * (1.0 - control_fraction)};
  }
};

/// Throws DomainError when regions overlap, are empty, or a null is not below the mainlobe.
void validate_regions(const std::vector<ControlRegion>& regions);

struct MrbcOptions {
  double grid_step = 1e-3;
  int max_iter = 200;
  int null_points = 4;      // controlled local maxima per null region
  int mainlobe_points = 2;  // controlled local maxima in the mainlobe
  bool adaptive_targets = true;
  double mainlobe_margin = 1.0;
  double stop_tolerance = 1e-9;
};

struct ControlPoint {
  std::size_t region = 0;
  double f = 0.0;
  double deviation = 0.0;
  std::complex<double> response;
};

struct Selection {
  std::vector<ControlPoint> points;
  std::vector<double> deviations;  // worst deviation per region
};

template <typename T>
struct ControlState {
  CVector<T> w;
  int iteration = 0;
  std::vector<double> active_points;
  CVector<T> psi;
  CMatrix<T> steering;  // A_k
  CVector<T> xi;
  std::vector<double> deviations;
  bool converged = false;
  bool regularized = false;
  double constraint_residual = 0.0;
};

template <typename T>
std::complex<T> normalized_response(const CVector<T>& w, double f, double f0) {
  const Index m = w.size();
  const std::complex<T> ref = w.dot(steering_at<T>(m, f0));
  if (!(std::abs(ref) > 1e-12 * w.norm() * std::sqrt(static_cast<T>(m))))
    throw DegenerateGeometryError("weight has no mainlobe response");
  return w.dot(steering_at<T>(m, f)) / ref;
}

/// Closed-form single-point correction so that w_prev + xi a(f_q) has normalized response rho e^{j phi} at f_q.
template <typename T>
std::complex<T> single_point_xi(const CVector<T>& w_prev, double f_q, double f0, double rho, double phi) {
  const Index m = w_prev.size();
  const CVector<T> aq = steering_at<T>(m, f_q);
  const CVector<T> a0 = steering_at<T>(m, f0);
  const std::complex<T> psi = std::polar(static_cast<T>(rho), static_cast<T>(-phi));
  const std::complex<T> num = psi * a0.dot(w_prev) - aq.dot(w_prev);
  const std::complex<T> den = aq.squaredNorm() - psi * a0.dot(aq);
  if (!(std::abs(den) > 1e-10 * static_cast<double>(aq.squaredNorm())))
    throw ControlPointError("single-point control denominator vanishes; move the control point");
  return num / den;
}

std::vector<double> control_grid(double step);

namespace detail {

template <typename T>
double region_deviation(const ControlRegion& r, std::complex<T> response) {
  const double mag = static_cast<double>(std::abs(response));
  return r.kind == RegionKind::mainlobe ? std::abs(mag - r.target_magnitude) : mag - r.target_magnitude;
}

/// Indices of local maxima of dev (leftmost on plateaus), largest first, at most k.
std::vector<std::size_t> local_maxima(const std::vector<double>& dev, int k);

}  // namespace detail

/// Worst-deviation grid points per region; up to the given number of local maxima, argmax first.
template <typename T>
Selection select_control_points(const CVector<T>& w_prev, double f0, const std::vector<ControlRegion>& regions,
                                double grid_step, int null_points = 1, int mainlobe_points = 1) {
  if (!(grid_step > 0)) throw DomainError("grid step must be positive");
  const auto grid = control_grid(grid_step);
  const Index m = w_prev.size();
  const std::complex<T> ref = w_prev.dot(steering_at<T>(m, f0));
  if (!(std::abs(ref) > 1e-12 * w_prev.norm() * std::sqrt(static_cast<T>(m))))
    throw DegenerateGeometryError("weight has no mainlobe response");

  Selection sel;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const auto& reg = regions[r];
    std::vector<double> fs;
    for (double f : grid)
      if (reg.contains(f)) fs.push_back(f);
    if (fs.empty()) throw DomainError("control region contains no grid points");
    std::stable_sort(fs.begin(), fs.end(), [&](double a, double b) { return reg.offset(a) < reg.offset(b); });

    std::vector<std::complex<T>> resp(fs.size());
    std::vector<double> dev(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) {
      resp[i] = w_prev.dot(steering_at<T>(m, fs[i])) / ref;
      dev[i] = detail::region_deviation(reg, resp[i]);
    }
    sel.deviations.push_back(*std::max_element(dev.begin(), dev.end()));
    const int k = reg.kind == RegionKind::mainlobe ? mainlobe_points : null_points;
    for (std::size_t i : detail::local_maxima(dev, k))
      sel.points.push_back({r, fs[i], dev[i], std::complex<double>(resp[i])});
  }
  return sel;
}

template <typename T>
bool meets_requirements(const std::vector<ControlRegion>& regions, const std::vector<double>& deviations,
                        double tol = 1e-9) {
  for (std::size_t r = 0; r < regions.size(); ++r)
    if (deviations[r] > regions[r].threshold + tol) return false;
  return true;
}

/// One multipoint correction of w_prev.
template <typename T>
ControlState<T> mrbc_step(const CVector<T>& w_prev, double f0, const std::vector<ControlRegion>& regions,
                          const MrbcOptions& opt) {
  const Index m = w_prev.size();
  const auto sel = select_control_points<T>(w_prev, f0, regions, opt.grid_step, opt.null_points, opt.mainlobe_points);
  const Index n = static_cast<Index>(sel.points.size());
  const CVector<T> a0 = steering_at<T>(m, f0);

  ControlState<T> st;
  st.deviations = sel.deviations;
  if (meets_requirements<T>(regions, sel.deviations, opt.stop_tolerance)) {
    st.w = w_prev;
    st.xi = CVector<T>::Zero(0);
    return st;
  }
  st.steering.resize(m, n);
  st.psi.resize(n);
  std::vector<std::complex<T>> wanted(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto& p = sel.points[static_cast<std::size_t>(i)];
    const auto& reg = regions[p.region];
    const double mag = std::abs(p.response);
    double rho = reg.target_magnitude;
    if (opt.adaptive_targets) {
      if (reg.kind == RegionKind::mainlobe) {
        const double band = opt.mainlobe_margin * reg.threshold;
        rho = std::clamp(mag, reg.target_magnitude - band, reg.target_magnitude + band);
      } else {
        rho = std::min(mag, reg.target_magnitude);
      }
    }
    const double phi = std::arg(p.response);
    st.active_points.push_back(p.f);
    st.steering.col(i) = steering_at<T>(m, p.f);
    st.psi(i) = std::polar(static_cast<T>(rho), static_cast<T>(-phi));
    wanted[static_cast<std::size_t>(i)] = std::polar(static_cast<T>(rho), static_cast<T>(phi));
  }

  const CMatrix<T> lhs = st.steering.adjoint() * st.steering - st.psi * (a0.adjoint() * st.steering);
  const CVector<T> rhs = a0.dot(w_prev) * st.psi - st.steering.adjoint() * w_prev;
  Eigen::CompleteOrthogonalDecomposition<CMatrix<T>> cod(lhs);
  st.regularized = cod.rank() < n;
  st.xi = cod.solve(rhs);
  st.w = w_prev + st.steering * st.xi;

  const std::complex<T> ref = st.w.dot(a0);
  for (Index i = 0; i < n; ++i) {
    const std::complex<T> got = st.w.dot(st.steering.col(i)) / ref;
    st.constraint_residual =
        std::max(st.constraint_residual, static_cast<double>(std::abs(got - wanted[static_cast<std::size_t>(i)])));
  }
  return st;
}

/// Iterative multi-region beampattern control starting from w0 (default a(f0)).
template <typename T = double>
ControlState<T> mrbc_iterate(Index num_tx, double f0, const std::vector<ControlRegion>& regions,
                             const MrbcOptions& opt = {}, std::optional<CVector<T>> w0 = std::nullopt) {
  validate_regions(regions);
  if (opt.max_iter < 1) throw DomainError("max_iter must be at least 1");
  CVector<T> w = w0 ? *w0 : steering_at<T>(num_tx, f0);
  if (w.size() != num_tx) throw DomainError("initial weight length mismatch");

  auto score = [&](const std::vector<double>& dev) {
    double s = 0.0;
    for (std::size_t r = 0; r < regions.size(); ++r) s = std::max(s, dev[r] / std::max(regions[r].threshold, 1e-300));
    return s;
  };

  ControlState<T> best;
  double best_score = std::numeric_limits<double>::infinity();
  bool any_regularized = false;
  for (int k = 1; k <= opt.max_iter + 1; ++k) {
    ControlState<T> st = mrbc_step<T>(w, f0, regions, opt);
    // st.deviations describe w_{k-1}
    const double s = score(st.deviations);
    if (meets_requirements<T>(regions, st.deviations, opt.stop_tolerance)) {
      ControlState<T> done = std::move(st);
      done.w = w;
      done.iteration = k - 1;
      done.converged = true;
      done.regularized = any_regularized;
      return done;
    }
    if (s < best_score) {
      best_score = s;
      best = st;
      best.w = w;
      best.iteration = k - 1;
    }
    if (k == opt.max_iter + 1) break;
    any_regularized = any_regularized || st.regularized;
    w = st.w;
  }
  best.converged = false;
  best.regularized = any_regularized;
  return best;
}

/// W_s = U_n U_n^H (w_R kron w_T), unit gain at the presumed target.
template <typename T>
BeamWeight<T> rjns_weight(const CVector<T>& w_transmit, const CVector<T>& w_receive, const EigenSplit<T>& incm,
                          const CVector<T>& v_s0, PresumedTarget presumed = {}, double degeneracy_tol = 1e-6) {
  const CVector<T> composed = kron(w_receive, w_transmit);
  if (composed.size() != incm.dim()) throw DomainError("composed weight does not match INCM dimension");
  const auto un = incm.noise_subspace();
  CVector<T> w = un * (un.adjoint() * composed);
  if (w.squaredNorm() < static_cast<T>(degeneracy_tol) * composed.squaredNorm())
    throw DegenerateGeometryError("robust weight lies inside the jamming subspace");
  return unit_gain_weight(std::move(w), v_s0, WeightKind::rjns, presumed);
}

/// Transmit-only pattern |w^H a(f)| / |w^H a(f0)| in dB over the grid.
template <typename T>
std::vector<double> transmit_pattern_db(const CVector<T>& w, double f0, const std::vector<double>& grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double f : grid) out.push_back(20.0 * std::log10(std::max(static_cast<double>(std::abs(normalized_response(w, f, f0))), 1e-15)));
  return out;
}

}  // namespace stca
