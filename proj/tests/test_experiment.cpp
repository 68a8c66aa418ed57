#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "stca/experiment.hpp"

using namespace stca;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("analytic methods on the default scene") {
  const auto cfg = default_scenario();
  const CVectorXd v = target_steering(cfg);
  const CMatrixXd r = true_incm(cfg).values;
  CHECK(sinr_db(method_weight(cfg, "mvdr", nullptr).values, v, r, 20.0) == doctest::Approx(43.8814597640).epsilon(1e-10));
  CHECK(sinr_db(method_weight(cfg, "nsjm-ideal", nullptr).values, v, r, 20.0) == doctest::Approx(43.8814589821).epsilon(1e-9));
  CHECK(sinr_db(method_weight(cfg, "matched", nullptr).values, v, CMatrixXd(CMatrixXd::Identity(256, 256)), 20.0) ==
        doctest::Approx(44.0823996531).epsilon(1e-10));
  CHECK_THROWS_AS(method_weight(cfg, "nsjm", nullptr), DomainError);
  CHECK_THROWS_AS(method_weight(cfg, "bogus", nullptr), ConfigError);

  auto trad = cfg;
  trad.radar = cfg.radar.traditional_mimo();
  const CVectorXd vt = target_steering(trad);
  CHECK(sinr_db(method_weight(trad, "mvdr", nullptr).values, vt, true_incm(trad).values, 20.0) ==
        doctest::Approx(-14.7712182021).epsilon(1e-8));
  CHECK_THROWS_AS(method_weight(trad, "nsjm-ideal", nullptr), DegenerateGeometryError);
}

TEST_CASE("control regions follow the presumed jammers") {
  const auto cfg = default_scenario();
  const auto regions = control_regions(cfg);
  REQUIRE(regions.size() == 4);
  CHECK(regions[0].kind == RegionKind::mainlobe);
  CHECK(regions[0].center == doctest::Approx(-0.0266666666666424).epsilon(1e-9));
  CHECK(regions[1].center == doctest::Approx(0.0533333333333417).epsilon(1e-9));
  CHECK(regions[1].kind == RegionKind::null);
}

TEST_CASE("pipeline run and detection records") {
  const auto cfg = default_scenario();
  const auto run = run_pipeline(cfg, 7, 0);
  REQUIRE(run.nhss.target_present);
  CHECK(*run.nhss.target_range_bin == 1221);
  REQUIRE(run.incm.has_value());
  CHECK(run.incm->rho() == 4);
  const CVectorXd v = target_steering(cfg);
  const CMatrixXd r = true_incm(cfg).values;
  const double est = sinr_db(method_weight(cfg, "nsjm", &run).values, v, r, 20.0);
  CHECK(est > 43.0);
  CHECK(est <= 43.8814597640 + 1e-9);
  CHECK(sinr_db(method_weight(cfg, "nsjm-contaminated", &run).values, v, r, 20.0) < est - 10.0);

  const auto recs = detection_trials(cfg, 7, 2);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].detected_bin == 1221);
  CHECK(recs[0].q_star == 3);
}

TEST_CASE("sweep CSVs are deterministic") {
  auto cfg = default_scenario();
  cfg.sweep.snr_min_db = 10.0;
  cfg.sweep.snr_max_db = 20.0;
  cfg.sweep.snr_step_db = 10.0;
  cfg.sweep.methods = {"mvdr", "nsjm-ideal", "nsjm"};
  const auto dir = std::filesystem::temp_directory_path() / "stca_test_sweep";
  std::filesystem::remove_all(dir);
  const auto a = sinr_sweep(cfg, 3, 1);
  write_sweep_csv(dir / "a.csv", a.points);
  const auto b = sinr_sweep(cfg, 3, 1);
  write_sweep_csv(dir / "b.csv", b.points);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  REQUIRE(a.points.size() == 6);
  CHECK(a.points[0].method == "mvdr");
  CHECK(a.points[0].mean_sinr_db == doctest::Approx(33.8814597640).epsilon(1e-10));
  const std::string head = slurp(dir / "a.csv").substr(0, 32);
  CHECK(head.rfind("snr_db,method,mean_sinr_db,std\n", 0) == 0);
  std::filesystem::remove_all(dir);
}
