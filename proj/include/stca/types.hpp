#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

namespace stca {

using Index = Eigen::Index;

template <typename T>
using CVector = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1>;
template <typename T>
using CMatrix = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using RVector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using CVectorXd = CVector<double>;
using CMatrixXd = CMatrix<double>;

inline constexpr double kSpeedOfLight = 3e8;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce x modulo 1 into [-0.5, 0.5).
inline double wrap_frequency(double x) {
  double r = x - std::floor(x + 0.5);
  if (r >= 0.5) r -= 1.0;
  if (r < -0.5) r += 1.0;
  return r;
}

inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double power_to_db(double p) { return 10.0 * std::log10(p); }

/// Unit-modulus phasor exp(j 2 pi x), reduced modulo 1 first to keep precision for large x.
template <typename T = double>
std::complex<T> phasor(double cycles) {
  const double r = cycles - std::floor(cycles);
  return std::complex<T>(static_cast<T>(std::cos(kTwoPi * r)), static_cast<T>(std::sin(kTwoPi * r)));
}

/// Kronecker product of two vectors, outer index from `outer`, inner from `inner`.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& outer, const Eigen::MatrixBase<DerivedB>& inner) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(outer.size() * inner.size());
  for (Index n = 0; n < outer.size(); ++n)
    out.segment(n * inner.size(), inner.size()) = outer(n) * inner;
  return out;
}

}  // namespace stca
