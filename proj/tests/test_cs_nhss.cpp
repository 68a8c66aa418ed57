#include <doctest.h>

#include "stca/cs_nhss.hpp"

using namespace stca;

namespace {

const RadarParams kRadar{};

std::vector<FalseTargetSpec> default_jammers() {
  return {{0.0, 64e3, 30.0, 321, {}}, {0.0, 66e3, 30.0, 431, {}}, {0.0, 84e3, 30.0, 1601, {}}};
}

CVectorXd v_s0() { return virtual_steering(kRadar, 0.0, 43e3).values; }

CovarianceMatrix<double> analytic(const std::vector<std::pair<double, double>>& range_power) {
  std::vector<CVectorXd> s;
  std::vector<double> pw;
  for (auto [r, p] : range_power) {
    s.push_back(virtual_steering(kRadar, 0.0, r).values);
    pw.push_back(p);
  }
  return analytic_covariance<double>(s, pw, 256);
}

/// Cube whose entries all have modulus sqrt(power) so bin powers are exact.
DataCube flat_cube(Index bins, const std::vector<std::tuple<Index, Index, double>>& runs) {
  DataCube cube(bins, 2, 4);
  cube.snapshots().setConstant({1.0, 0.0});
  for (auto [first, count, db] : runs) cube.bin_block(first, count).setConstant({std::sqrt(db_to_power(db)), 0.0});
  return cube;
}

}  // namespace

TEST_CASE("best correlation") {
  const CVectorXd v = v_s0();
  CovarianceMatrix<double> r{v * v.adjoint() + 1e-3 * CMatrixXd::Identity(256, 256), 0, CovarianceKind::analytic};
  const auto c1 = best_correlation(eig_descending(r), v);
  CHECK(c1.rho == 1);
  CHECK(c1.gamma == doctest::Approx(1.0).epsilon(1e-12));

  const auto e = eig_descending(analytic({{64e3, 1000}, {66e3, 1000}, {84e3, 1000}, {43e3, 100}}));
  const auto c4 = best_correlation(e, v);
  CHECK(c4.rho == 4);
  CHECK(c4.gamma > 0.9);
  const auto raw = best_correlation(e, v, CorrelationMode::raw);
  CHECK(raw.rho == 4);
  CHECK(raw.gamma == doctest::Approx(256.0 * c4.gamma).epsilon(1e-9));

  // brute-force oracle for a presumed target outside the jamming subspace
  const auto ej = eig_descending(analytic({{64e3, 1000}, {66e3, 1000}, {84e3, 1000}}));
  const CVectorXd off = virtual_steering(kRadar, 0.0, 43e3 + 37.0).values;
  const auto co = best_correlation(ej, off);
  double best = -1.0;
  Index arg = 0;
  for (Index k = 0; k < 256; ++k) {
    const double g = std::norm(ej.eigenvectors.col(k).dot(off)) / off.squaredNorm();
    if (g > best) best = g, arg = k;
  }
  CHECK(co.rho == arg + 1);
  CHECK(co.gamma == doctest::Approx(best).epsilon(1e-12));
  CHECK(co.rho > 3);
  for (Index k = 0; k < 3; ++k) CHECK(std::norm(ej.eigenvectors.col(k).dot(off)) / 256.0 < co.gamma);
}

TEST_CASE("segment boundaries") {
  const DataCube below = flat_cube(100, {{20, 10, 7.0 - 0.1}});
  CHECK(segment_echo(below, 7.0, 10).segments.empty());
  const DataCube above = flat_cube(100, {{20, 10, 7.0 + 0.1}});
  const auto s = segment_echo(above, 7.0, 10);
  REQUIRE(s.segments.size() == 1);
  CHECK(s.segments[0].first_bin == 20);
  CHECK(s.segments[0].last_bin == 29);
  CHECK(s.noise_floor == doctest::Approx(1.0));

  const DataCube runs = flat_cube(100, {{10, 7, 20.0}, {40, 8, 20.0}, {70, 12, 20.0}});
  const auto r = segment_echo(runs, 7.0, 10);
  REQUIRE(r.segments.size() == 2);
  CHECK(r.segments[0].first_bin == 40);
  CHECK(r.segments[0].length() == 8);
  CHECK(r.segments[1].first_bin == 70);
  CHECK(r.segments[1].length() == 12);
}

TEST_CASE("segments of pure noise and of the default cube") {
  const DataCube noise = synthesize_cube(kRadar, std::nullopt, {}, {}, 21);
  CHECK(segment_echo(noise, 7.0, 10).segments.empty());

  const DataCube cube = synthesize_cube(kRadar, TargetSpec{}, default_jammers(), {}, 21);
  const auto s = segment_echo(cube, 7.0, 10);
  REQUIRE(s.segments.size() == 4);
  const std::vector<Index> starts{321, 431, 1221, 1601};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(s.segments[i].first_bin == starts[i]);
    CHECK(s.segments[i].length() == 10);
  }
  CHECK(s.noise_floor == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("default target located at q = 3") {
  const DataCube cube = synthesize_cube(kRadar, TargetSpec{}, default_jammers(), {}, 3);
  const auto res = run_cs_nhss(cube, v_s0(), {}, 10);
  CHECK(res.rho_reliable);
  CHECK(res.full_echo.rho == 4);
  CHECK(res.full_echo.gamma > 0.9);
  REQUIRE(res.target_present);
  CHECK(*res.target_segment == 3);
  CHECK(*res.target_range_bin == 1221);
  CHECK(res.jammer_segments == 3);
  CHECK(res.incm_rank() == 4);
  CHECK(res.training_samples.cols() == 3 * 10 * 30);
  REQUIRE(res.gamma_trace.size() == 3);
  CHECK(res.gamma_trace[1] - res.gamma_trace[0] < 0.5);
  CHECK(res.gamma_trace[2] - res.gamma_trace[1] >= 0.5);

  // no target snapshot survives in the training set
  for (Index b = 1221; b < 1231; ++b)
    for (Index t = 0; t < cube.pulses(); ++t) {
      const CVectorXd x = cube.snapshot(b, t);
      CHECK(((res.training_samples.colwise() - x).colwise().squaredNorm().minCoeff()) > 0.0);
    }

  const auto raw = run_cs_nhss(cube, v_s0(), DetectionThresholds::raw_defaults(), 10);
  REQUIRE(raw.target_present);
  CHECK(*raw.target_range_bin == 1221);
}

TEST_CASE("two-jammer scenario located at q = 2") {
  const std::vector<FalseTargetSpec> jam{{0.0, 64e3, 30.0, 501, {}}, {0.0, 84e3, 30.0, 1201, {}}};
  const DataCube cube = synthesize_cube(kRadar, TargetSpec{0.0, 43e3, 20.0, 651}, jam, {}, 8);
  const auto res = run_cs_nhss(cube, v_s0(), {}, 10);
  REQUIRE(res.target_present);
  CHECK(*res.target_segment == 2);
  CHECK(*res.target_range_bin == 651);
}

TEST_CASE("no-target cube") {
  const DataCube cube = synthesize_cube(kRadar, std::nullopt, default_jammers(), {}, 4);
  const auto res = run_cs_nhss(cube, v_s0(), {}, 10);
  CHECK_FALSE(res.target_present);
  CHECK_FALSE(res.rho_reliable);
  CHECK(res.training_samples.cols() == 900);
  CHECK(res.incm_rank() == 4);
}

TEST_CASE("rerun without the target bins finds no target") {
  for (std::uint64_t seed : {31u, 32u, 33u}) {
    DataCube cube = synthesize_cube(kRadar, TargetSpec{}, default_jammers(), {}, seed);
    const auto first = run_cs_nhss(cube, v_s0(), {}, 10);
    REQUIRE(first.target_present);
    const Index b = *first.target_range_bin;
    cube.bin_block(b, 10) = CMatrixXd(cube.bin_block(0, 10));
    const auto second = run_cs_nhss(cube, v_s0(), {}, 10);
    CHECK_FALSE(second.target_present);
  }
}

TEST_CASE("threshold validation") {
  const DataCube cube = flat_cube(50, {});
  const auto e = eig_descending(sample_covariance(cube.snapshots()));
  DetectionThresholds t;
  t.chi = 0.0;
  CHECK_THROWS_AS(locate_target(cube, e, CVectorXd::Ones(4), t, 10), ConfigError);
  t = {};
  t.eta_db = -1.0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
}
