#pragma once

#include <string>
#include <vector>

#include "stca/array_model.hpp"
#include "stca/eigen_core.hpp"
#include "stca/nsjm.hpp"

namespace stca {

inline constexpr double kSinrFloorDb = -100.0;

/// 10 log10(sigma_s^2 |w^H v|^2 / (w^H R w)), floored at -100 dB.
template <typename T>
double sinr_db(const CVector<T>& w, const CVector<T>& v_target, const CMatrix<T>& r_incm, double snr_db) {
  if (w.size() != v_target.size() || w.size() != r_incm.rows()) throw DomainError("SINR dimension mismatch");
  const double den = static_cast<double>(std::real(w.dot(r_incm * w)));
  if (!(den > 0)) throw NumericError("interference-plus-noise power of the weight is not positive");
  const double num = db_to_power(snr_db) * static_cast<double>(std::norm(w.dot(v_target)));
  if (!(num > 0)) return kSinrFloorDb;
  return std::max(10.0 * std::log10(num / den), kSinrFloorDb);
}

struct SinrPoint {
  double snr_db = 0.0;
  std::string method;
  double mean_sinr_db = 0.0;
  double std_db = 0.0;
  int trials = 0;
};

struct PatternGrid {
  std::vector<double> f_transmit;
  std::vector<double> f_receive;
  Eigen::MatrixXd db;  // rows f_receive, cols f_transmit; peak 0 dB
  std::string provenance;
};

std::vector<double> uniform_axis(double step);

struct LoadReport {
  bool loaded = false;
  double load = 0.0;
};

/// Inverse of a Hermitian matrix via LDLT, diagonally loaded when not positive definite.
CMatrixXd hermitian_inverse(const CMatrixXd& r, double diagonal_load = 0.0, LoadReport* report = nullptr);

BeamWeight<double> mvdr_weight(const CMatrixXd& r_incm, const CVectorXd& v_target, PresumedTarget presumed = {},
                               double diagonal_load = 0.0, LoadReport* report = nullptr);

PatternGrid pattern_2d(const CVectorXd& w, Index num_tx, Index num_rx, const std::vector<double>& f_transmit,
                       const std::vector<double>& f_receive);

PatternGrid capon_2d(const CMatrixXd& r_x, Index num_tx, Index num_rx, const std::vector<double>& f_transmit,
                     const std::vector<double>& f_receive, double diagonal_load = 0.0, LoadReport* report = nullptr);

}  // namespace stca
