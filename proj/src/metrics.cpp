#include "stca/metrics.hpp"

namespace stca {

std::vector<double> uniform_axis(double step) {
  if (!(step > 0) || step > 0.5) throw DomainError("axis step must lie in (0, 0.5]");
  const auto n = static_cast<std::size_t>(std::llround(1.0 / step));
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::round((-0.5 + static_cast<double>(i) * step) * 1e9) / 1e9;
  return g;
}

CMatrixXd hermitian_inverse(const CMatrixXd& r, double diagonal_load, LoadReport* report) {
  const Index n = r.rows();
  CMatrixXd a = r;
  if (diagonal_load > 0) a.diagonal().array() += diagonal_load;
  Eigen::LLT<CMatrixXd> llt(a);
  double load = diagonal_load;
  if (llt.info() != Eigen::Success) {
    const double base = std::max(std::real(r.trace()) / static_cast<double>(n), 1e-12);
    for (load = 1e-10 * base; load <= base; load *= 10.0) {
      a = r;
      a.diagonal().array() += load;
      llt.compute(a);
      if (llt.info() == Eigen::Success) break;
    }
    if (llt.info() != Eigen::Success) throw NumericError("covariance is not invertible even after diagonal loading");
    if (report) *report = {true, load};
  } else if (report) {
    *report = {diagonal_load > 0, diagonal_load};
  }
  return llt.solve(CMatrixXd::Identity(n, n));
}

BeamWeight<double> mvdr_weight(const CMatrixXd& r_incm, const CVectorXd& v_target, PresumedTarget presumed,
                               double diagonal_load, LoadReport* report) {
  if (r_incm.rows() != v_target.size()) throw DomainError("MVDR dimension mismatch");
  CMatrixXd a = r_incm;
  if (diagonal_load > 0) a.diagonal().array() += diagonal_load;
  Eigen::LLT<CMatrixXd> llt(a);
  CVectorXd w;
  if (llt.info() == Eigen::Success) {
    w = llt.solve(v_target);
    if (report) *report = {diagonal_load > 0, diagonal_load};
  } else {
    w = hermitian_inverse(r_incm, diagonal_load, report) * v_target;
  }
  return unit_gain_weight(std::move(w), v_target, WeightKind::mvdr, presumed);
}

namespace {

PatternGrid normalize(PatternGrid g) {
  const double peak = g.db.maxCoeff();
  g.db.array() -= peak;
  return g;
}

}  // namespace

PatternGrid pattern_2d(const CVectorXd& w, Index num_tx, Index num_rx, const std::vector<double>& f_transmit,
                       const std::vector<double>& f_receive) {
  if (w.size() != num_tx * num_rx) throw DomainError("weight length does not match MN");
  // W^H (b kron a) = sum_n b_n (W_n^H a), W_n the n-th length-M block.
  const auto blocks = w.reshaped(num_tx, num_rx);
  CMatrixXd b(num_rx, static_cast<Index>(f_receive.size()));
  for (std::size_t j = 0; j < f_receive.size(); ++j) b.col(static_cast<Index>(j)) = steering_at(num_rx, f_receive[j]);

  PatternGrid g;
  g.f_transmit = f_transmit;
  g.f_receive = f_receive;
  g.db.resize(static_cast<Index>(f_receive.size()), static_cast<Index>(f_transmit.size()));
  for (std::size_t i = 0; i < f_transmit.size(); ++i) {
    const CVectorXd c = blocks.adjoint() * steering_at(num_tx, f_transmit[i]);
    const CVectorXd resp = b.transpose() * c;
    for (Index j = 0; j < resp.size(); ++j)
      g.db(j, static_cast<Index>(i)) = 10.0 * std::log10(std::max(std::norm(resp(j)), 1e-300));
  }
  return normalize(std::move(g));
}

PatternGrid capon_2d(const CMatrixXd& r_x, Index num_tx, Index num_rx, const std::vector<double>& f_transmit,
                     const std::vector<double>& f_receive, double diagonal_load, LoadReport* report) {
  if (r_x.rows() != num_tx * num_rx) throw DomainError("covariance dimension does not match MN");
  const CMatrixXd q = hermitian_inverse(r_x, diagonal_load, report);
  CMatrixXd b(num_rx, static_cast<Index>(f_receive.size()));
  for (std::size_t j = 0; j < f_receive.size(); ++j) b.col(static_cast<Index>(j)) = steering_at(num_rx, f_receive[j]);

  PatternGrid g;
  g.f_transmit = f_transmit;
  g.f_receive = f_receive;
  g.db.resize(static_cast<Index>(f_receive.size()), static_cast<Index>(f_transmit.size()));
  CMatrixXd y(num_rx, num_rx);
  for (std::size_t i = 0; i < f_transmit.size(); ++i) {
    const CVectorXd a = steering_at(num_tx, f_transmit[i]);
    // Y(n, n') = a^H Q_{n n'} a, so v^H Q v = b^H Y b.
    for (Index n = 0; n < num_rx; ++n)
      for (Index k = 0; k < num_rx; ++k) y(n, k) = a.dot(q.block(n * num_tx, k * num_tx, num_tx, num_tx) * a);
    for (std::size_t j = 0; j < f_receive.size(); ++j) {
      const auto bj = b.col(static_cast<Index>(j));
      const double quad = std::max(std::real(bj.dot(y * bj)), 1e-300);
      g.db(static_cast<Index>(j), static_cast<Index>(i)) = -10.0 * std::log10(quad);
    }
  }
  return normalize(std::move(g));
}

}  // namespace stca
