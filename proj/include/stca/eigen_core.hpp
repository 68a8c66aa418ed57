#pragma once

#include <optional>
#include <span>
#include <fmt/format.h>

#include "stca/errors.hpp"
#include "stca/types.hpp"

namespace stca {

enum class CovarianceKind { full_echo, interference_plus_noise, analytic };

template <typename T>
struct CovarianceMatrix {
  CMatrix<T> values;
  Index sample_count = 0;
  CovarianceKind kind = CovarianceKind::interference_plus_noise;

  Index dim() const { return values.rows(); }
};

/// Replace R by (R + R^H) / 2.
template <typename Derived>
void symmetrize(Eigen::MatrixBase<Derived>& r) {
  r = (0.5 * (r + r.adjoint())).eval();
}

/// Streams snapshot blocks (columns) into a Gram matrix accumulated in scalar type Acc.
template <typename Acc>
class CovarianceAccumulator {
 public:
  explicit CovarianceAccumulator(Index dim) : gram_(CMatrix<Acc>::Zero(dim, dim)) {}

  template <typename Derived>
  void add(const Eigen::MatrixBase<Derived>& block) {
    if (block.rows() != gram_.rows()) throw DomainError("snapshot dimension mismatch");
    if (block.cols() == 0) return;
    gram_.template selfadjointView<Eigen::Lower>().rankUpdate(block.template cast<std::complex<Acc>>());
    count_ += block.cols();
  }

  Index count() const { return count_; }

  template <typename T = double>
  CovarianceMatrix<T> result(CovarianceKind kind) const {
    if (count_ == 0) throw DomainError("covariance of an empty sample set");
    CMatrix<T> r = gram_.template selfadjointView<Eigen::Lower>().toDenseMatrix().template cast<std::complex<T>>();
    r /= static_cast<T>(count_);
    symmetrize(r);
    return {std::move(r), count_, kind};
  }

 private:
  CMatrix<Acc> gram_;
  Index count_ = 0;
};

/// (1/K) sum x x^H over the columns of `snapshots`, plus optional diagonal loading.
template <typename Derived>
auto sample_covariance(const Eigen::MatrixBase<Derived>& snapshots,
                       CovarianceKind kind = CovarianceKind::interference_plus_noise, double diagonal_load = 0.0) {
  using T = typename Derived::RealScalar;
  if (snapshots.cols() == 0) throw DomainError("covariance of an empty sample set");
  CovarianceAccumulator<T> acc(snapshots.rows());
  acc.add(snapshots);
  auto cov = acc.template result<T>(kind);
  if (diagonal_load > 0) cov.values.diagonal().array() += static_cast<T>(diagonal_load);
  return cov;
}

/// sigma_n^2 I + sum_q p_q v_q v_q^H.
template <typename T>
CovarianceMatrix<T> analytic_covariance(std::span<const CVector<T>> steering, std::span<const double> powers,
                                        Index dim, double noise_power = 1.0) {
  if (steering.size() != powers.size()) throw DomainError("steering/power count mismatch");
  CMatrix<T> r = CMatrix<T>::Identity(dim, dim) * static_cast<T>(noise_power);
  for (std::size_t q = 0; q < steering.size(); ++q) {
    if (steering[q].size() != dim) throw DomainError("steering dimension mismatch");
    r.noalias() += static_cast<T>(powers[q]) * steering[q] * steering[q].adjoint();
  }
  symmetrize(r);
  return {std::move(r), 0, CovarianceKind::analytic};
}

template <typename T>
struct EigenSplit {
  RVector<T> eigenvalues;   // descending
  CMatrix<T> eigenvectors;  // columns match eigenvalues
  std::optional<Index> split;  // rho, 1-based first noise index

  Index dim() const { return eigenvalues.size(); }
  Index rho() const {
    if (!split) throw DomainError("subspace split not set");
    return *split;
  }
  auto jamming_subspace() const { return eigenvectors.leftCols(rho() - 1); }
  auto noise_subspace() const { return eigenvectors.rightCols(dim() - rho() + 1); }
  CMatrix<T> noise_projector() const {
    const auto un = noise_subspace();
    return un * un.adjoint();
  }
};

template <typename T>
EigenSplit<T> eig_descending(const CovarianceMatrix<T>& cov, double hermitian_tol = 1e-10) {
  const auto& r = cov.values;
  if (r.rows() != r.cols() || r.rows() == 0) throw DomainError("covariance must be square and nonempty");
  const T scale = r.norm();
  const T asym = (r - r.adjoint()).norm();
  if (asym > static_cast<T>(hermitian_tol) * std::max(scale, T(1)))
    throw NumericError(fmt::format("covariance is not Hermitian (asymmetry {:.3e})", static_cast<double>(asym)));

  Eigen::SelfAdjointEigenSolver<CMatrix<T>> solver(r);
  if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigensolver failed");
  const Index n = r.rows();
  EigenSplit<T> out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  for (Index k = 0; k < n; ++k) out.eigenvalues(k) = std::max(out.eigenvalues(k), T(0));
  return out;
}

template <typename T>
EigenSplit<T> split_subspaces(EigenSplit<T> e, Index rho) {
  if (rho < 1 || rho > e.dim())
    throw DomainError(fmt::format("split index {} outside [1, {}]", rho, e.dim()));
  e.split = rho;
  return e;
}

}  // namespace stca
