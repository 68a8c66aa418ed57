#pragma once

#include "stca/eigen_core.hpp"
#include "stca/scene.hpp"

namespace stca {

enum class WeightKind { nsjm, mrbc, rjns, mvdr, baseline };

const char* to_string(WeightKind kind);

struct PresumedTarget {
  double angle_deg = 0.0;
  double range_m = 43e3;
};

template <typename T = double>
struct BeamWeight {
  CVector<T> values;
  WeightKind provenance = WeightKind::baseline;
  PresumedTarget presumed;
};

/// Scale w so that w^H v_s0 = 1.
template <typename T>
BeamWeight<T> unit_gain_weight(CVector<T> w, const CVector<T>& v_s0, WeightKind kind, PresumedTarget presumed = {}) {
  if (w.size() != v_s0.size()) throw DomainError("weight and steering dimension mismatch");
  const std::complex<T> g = w.dot(v_s0);
  const T scale = w.norm() * v_s0.norm();
  if (!(std::abs(g) > std::numeric_limits<T>::epsilon() * scale))
    throw DegenerateGeometryError("weight has no response at the presumed target");
  w /= std::conj(g);
  return {std::move(w), kind, presumed};
}

/// W_n = U_n U_n^H v_s0, unit gain at the presumed target.
template <typename T>
BeamWeight<T> nsjm_weight(const EigenSplit<T>& incm, const CVector<T>& v_s0, PresumedTarget presumed = {},
                          double degeneracy_tol = 1e-6) {
  if (v_s0.size() != incm.dim()) throw DomainError("presumed steering dimension mismatch");
  const auto un = incm.noise_subspace();
  CVector<T> w = un * (un.adjoint() * v_s0);
  if (w.squaredNorm() < static_cast<T>(degeneracy_tol) * v_s0.squaredNorm())
    throw DegenerateGeometryError("presumed target lies inside the jamming subspace");
  return unit_gain_weight(std::move(w), v_s0, WeightKind::nsjm, presumed);
}

struct RangeProfile {
  CMatrixXd output;     // bins x pulses, y = W^H x
  RVector<double> mag_db;  // per-bin mean output power in dB
};

RangeProfile apply_weight(const BeamWeight<double>& w, const DataCube& cube);

}  // namespace stca
