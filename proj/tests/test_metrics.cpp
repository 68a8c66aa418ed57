#include <doctest.h>

#include "stca/cs_nhss.hpp"
#include "stca/metrics.hpp"

using namespace stca;
using cd = std::complex<double>;

namespace {

const RadarParams kRadar{};

CVectorXd steer(double r) { return virtual_steering(kRadar, 0.0, r).values; }

CMatrixXd default_incm() {
  return analytic_covariance<double>(std::vector<CVectorXd>{steer(64e3), steer(66e3), steer(84e3)},
                                     std::vector<double>{1000.0, 1000.0, 1000.0}, 256)
      .values;
}

}  // namespace

TEST_CASE("SINR") {
  const CVectorXd v = steer(43e3);
  const CMatrixXd id = CMatrixXd::Identity(256, 256);
  CHECK(sinr_db(CVectorXd(v / 256.0), v, id, 20.0) == doctest::Approx(44.0823996531).epsilon(1e-10));
  CHECK(sinr_db(CVectorXd(v * cd(3.0, -7.0)), v, id, 20.0) == doctest::Approx(44.0823996531).epsilon(1e-10));

  const CVectorXd u = steer(64e3);
  const CVectorXd orth = u - (v.dot(u) / v.squaredNorm()) * v;
  CHECK(std::abs(orth.dot(v)) < 1e-12);
  CHECK(sinr_db(orth, v, id, 20.0) == kSinrFloorDb);

  CHECK_THROWS_AS(sinr_db(v, v, CMatrixXd::Zero(256, 256).eval(), 20.0), NumericError);
  CHECK_THROWS_AS(sinr_db(CVectorXd::Ones(4).eval(), v, id, 20.0), DomainError);

  // array-gain bound
  const CMatrixXd r = default_incm();
  const auto w = mvdr_weight(r, v);
  CHECK(sinr_db(w.values, v, r, 20.0) <= 20.0 + 10.0 * std::log10(256.0) + 1e-9);
}

TEST_CASE("MVDR") {
  const CVectorXd v = steer(43e3);
  const auto mf = mvdr_weight(CMatrixXd::Identity(256, 256), v);
  CHECK(mf.provenance == WeightKind::mvdr);
  CHECK((mf.values - v / 256.0).norm() < 1e-12);

  // numpy oracle
  const CMatrixXd r = default_incm();
  const auto w = mvdr_weight(r, v);
  CHECK(sinr_db(w.values, v, r, 20.0) == doctest::Approx(43.8814597640).epsilon(1e-10));
  CHECK(sinr_db(w.values, v, r, 0.0) == doctest::Approx(23.8814597640).epsilon(1e-10));

  // singular covariance gets loaded
  LoadReport rep;
  const CMatrixXd sing = v * v.adjoint();
  const auto ws = mvdr_weight(sing, steer(60e3), {}, 0.0, &rep);
  CHECK(rep.loaded);
  CHECK(rep.load > 0.0);
  CHECK(ws.values.allFinite());
}

TEST_CASE("beampattern") {
  const auto fa = uniform_axis(0.01);
  CHECK(fa.size() == 100);
  CHECK(fa.front() == -0.5);
  const double ft0 = spatial_frequencies(kRadar, 0.0, 43e3).transmit;
  const double fr0 = kRadar.spacing_ratio() * std::sin(deg2rad(6.0));
  std::vector<double> ft = fa, fr = fa;
  ft.push_back(ft0);
  fr.push_back(fr0);
  const CVectorXd w = virtual_steering_at(16, 16, ft0, fr0);
  const auto g = pattern_2d(w, 16, 16, ft, fr);
  Index i, j;
  CHECK(g.db.maxCoeff(&i, &j) == 0.0);
  CHECK(g.f_receive[static_cast<std::size_t>(i)] == fr0);
  CHECK(g.f_transmit[static_cast<std::size_t>(j)] == ft0);
  CHECK(g.db.maxCoeff() <= 0.0);

  // brute force a single cell
  const CVectorXd probe = virtual_steering_at(16, 16, 0.13, -0.21);
  const auto one = pattern_2d(kron(steering_at(16, 0.1), steering_at(16, 0.05)), 16, 16, {0.13, 0.05}, {-0.21, 0.1});
  const double direct = std::norm(kron(steering_at(16, 0.1), steering_at(16, 0.05)).dot(probe)) / (256.0 * 256.0);
  CHECK(one.db(0, 0) == doctest::Approx(10.0 * std::log10(direct)).epsilon(1e-9));
}

TEST_CASE("NSJM pattern nulls the jammers") {
  const CVectorXd v = steer(43e3);
  const auto e = split_subspaces(eig_descending(CovarianceMatrix<double>{default_incm(), 0, CovarianceKind::analytic}), 4);
  const auto w = nsjm_weight(e, v);
  std::vector<double> ft;
  for (double r : {43e3, 64e3, 66e3, 84e3}) ft.push_back(spatial_frequencies(kRadar, 0.0, r).transmit);
  const auto g = pattern_2d(w.values, 16, 16, ft, {0.0});
  CHECK(g.db(0, 0) == doctest::Approx(0.0).epsilon(1e-6));
  for (Index k = 1; k < 4; ++k) CHECK(g.db(0, k) < -150.0);
}

TEST_CASE("Capon spectrum of the default cube") {
  const std::vector<FalseTargetSpec> jam{{0.0, 64e3, 30.0, 321, {}}, {0.0, 66e3, 30.0, 431, {}}, {0.0, 84e3, 30.0, 1601, {}}};
  const DataCube cube = synthesize_cube(kRadar, TargetSpec{}, jam, {}, 2);
  const auto r = full_echo_covariance(cube);
  const auto ft = uniform_axis(1.0 / 300.0);
  const auto g = capon_2d(r.values, 16, 16, ft, {-0.1, 0.0, 0.1});
  // peaks along f_T on the common f_R = 0 row
  const Eigen::RowVectorXd row = g.db.row(1);
  std::vector<double> peaks;
  for (Index k = 0; k < row.size(); ++k) {
    const double l = row((k + row.size() - 1) % row.size()), rr = row((k + 1) % row.size());
    if (row(k) > l && row(k) >= rr && row(k) > -20.0) peaks.push_back(ft[static_cast<std::size_t>(k)]);
  }
  REQUIRE(peaks.size() == 4);
  const std::vector<double> expected{-0.32, -0.0266667, 0.0533333, 0.32};
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(peaks[k] - expected[k]) < 0.004);
  CHECK(g.db.row(1).maxCoeff() > g.db.row(0).maxCoeff() + 10.0);
}
