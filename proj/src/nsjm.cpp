#include "stca/nsjm.hpp"

namespace stca {

const char* to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::nsjm: return "nsjm";
    case WeightKind::mrbc: return "mrbc";
    case WeightKind::rjns: return "rjns";
    case WeightKind::mvdr: return "mvdr";
    case WeightKind::baseline: return "baseline";
  }
  return "unknown";
}

RangeProfile apply_weight(const BeamWeight<double>& w, const DataCube& cube) {
  if (w.values.size() != cube.channels()) throw DomainError("weight length does not match cube channels");
  RangeProfile p;
  const CVectorXd y = cube.snapshots().adjoint() * w.values;  // conj(x^H w) = w^H x
  p.output = y.conjugate().reshaped(cube.pulses(), cube.bins()).transpose();
  p.mag_db.resize(cube.bins());
  for (Index b = 0; b < cube.bins(); ++b) {
    const double pw = p.output.row(b).squaredNorm() / static_cast<double>(cube.pulses());
    p.mag_db(b) = 10.0 * std::log10(std::max(pw, 1e-30));
  }
  return p;
}

}  // namespace stca
