#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "phasereg/errors.hpp"
#include "phasereg/simulation.hpp"

using namespace phasereg;

namespace {

const std::string kTmp = std::string(TEST_BINARY_DIR) + "/sim_test_tmp";

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t k = 0; k < order.size(); ++k) r[order[k]] = static_cast<double>(k);
  return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n - 1.0) / 2.0;
  double num = 0.0, da = 0.0, db = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (ra[i] - mean) * (rb[i] - mean);
    da += (ra[i] - mean) * (ra[i] - mean);
    db += (rb[i] - mean) * (rb[i] - mean);
  }
  return num / std::sqrt(da * db);
}

}  // namespace

TEST_CASE("latent regressor variances are the closed-form mixture values") {
  CHECK(x_variance(XDist::half_normal) == doctest::Approx(1.0 - 2.0 / M_PI).epsilon(1e-15));
  CHECK(x_variance(XDist::exponential1) == 1.0);
  // 0.5 (1 + 25) + 0.5 (0.36 + 6.25) - 3.75^2 = 2.2425
  CHECK(x_variance(XDist::bimodal) == doctest::Approx(2.2425).epsilon(1e-12));
}

TEST_CASE("distribution names parse and print round trip") {
  for (auto d : {XDist::half_normal, XDist::exponential1, XDist::bimodal}) {
    CHECK(parse_x_dist(x_dist_name(d)) == d);
  }
  for (auto e : {ErrDist::normal, ErrDist::t_2_5, ErrDist::cauchy, ErrDist::laplace}) {
    CHECK(parse_err_dist(err_dist_name(e)) == e);
  }
  CHECK_THROWS_AS(parse_x_dist("uniform"), ConfigError);
  CHECK_THROWS_AS(parse_err_dist("gumbel"), ConfigError);
}

TEST_CASE("error calibration hits the noise-to-signal targets") {
  // half-normal X with (p_W, p_Y) = (0.25, 0.40) and slope 3:
  // sigma2_U = 0.25 (1 - 2/pi), sigma2_eps = 0.40 * 9 * (1 - 2/pi).
  const double s2x = 1.0 - 2.0 / M_PI;
  const ErrorScales normal = calibrate_errors(XDist::half_normal, ErrDist::normal, 3.0, 0.25, 0.40);
  CHECK(normal.scale_U * normal.scale_U == doctest::Approx(0.25 * s2x).epsilon(1e-12));
  CHECK(normal.scale_eps * normal.scale_eps == doctest::Approx(0.40 * 9.0 * s2x).epsilon(1e-12));

  // t(2.5): variance is 5 s^2, so s = sigma / sqrt(5).
  const ErrorScales t = calibrate_errors(XDist::exponential1, ErrDist::t_2_5, 3.0, 0.2, 0.2);
  CHECK(5.0 * t.scale_U * t.scale_U == doctest::Approx(0.2).epsilon(1e-12));

  // cauchy: scale set by matching the interquartile range, gamma = sigma / 2.
  const ErrorScales c = calibrate_errors(XDist::exponential1, ErrDist::cauchy, 3.0, 0.25, 0.25);
  CHECK(c.scale_U == doctest::Approx(0.5 * std::sqrt(0.25)).epsilon(1e-12));

  // laplace: variance 2 b^2.
  const ErrorScales l = calibrate_errors(XDist::bimodal, ErrDist::laplace, 3.0, 0.3, 0.3);
  CHECK(2.0 * l.scale_U * l.scale_U == doctest::Approx(0.3 * 2.2425).epsilon(1e-12));

  // Zero proportions mean exactly zero scales.
  const ErrorScales z = calibrate_errors(XDist::half_normal, ErrDist::normal, 3.0, 0.0, 0.0);
  CHECK(z.scale_U == 0.0);
  CHECK(z.scale_eps == 0.0);
}

TEST_CASE("noiseless scenarios generate exactly linear data") {
  ScenarioConfig cfg;
  cfg.n = 80;
  cfg.p_W = 0.0;
  cfg.p_Y = 0.0;
  cfg.seed = 7;
  const RegressionData d = generate(cfg, 0);
  REQUIRE(d.n() == 80);
  const Eigen::VectorXd resid =
      d.y - Eigen::VectorXd::Constant(80, 1.0) - 3.0 * d.W.col(0);
  CHECK(resid.lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("replicates are deterministic and mutually distinct") {
  ScenarioConfig cfg;
  cfg.n = 50;
  cfg.seed = 11;
  const RegressionData a = generate(cfg, 4);
  const RegressionData b = generate(cfg, 4);
  const RegressionData c = generate(cfg, 5);
  CHECK((a.y - b.y).norm() == 0.0);
  CHECK((a.W - b.W).norm() == 0.0);
  CHECK((a.y - c.y).norm() > 0.0);
}

TEST_CASE("latent marginals have the advertised moments") {
  auto sample_stats = [](XDist dist, double& mean, double& var) {
    ScenarioConfig cfg;
    cfg.x_dist = dist;
    cfg.n = 200000;
    cfg.p_W = 0.0;
    cfg.p_Y = 0.0;
    cfg.seed = 101;
    const RegressionData d = generate(cfg, 0);
    mean = d.W.col(0).mean();
    var = (d.W.col(0).array() - mean).square().sum() / (d.n() - 1.0);
  };
  double mean = 0.0, var = 0.0;
  sample_stats(XDist::half_normal, mean, var);
  CHECK(mean == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 - 2.0 / M_PI).epsilon(0.02));
  sample_stats(XDist::exponential1, mean, var);
  CHECK(mean == doctest::Approx(1.0).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0).epsilon(0.03));
  sample_stats(XDist::bimodal, mean, var);
  CHECK(mean == doctest::Approx(3.75).epsilon(0.01));
  CHECK(var == doctest::Approx(2.2425).epsilon(0.02));
}

TEST_CASE("bivariate mode draws X and Z through the configured copula") {
  ScenarioConfig cfg;
  cfg.x_dist = XDist::half_normal;
  cfg.correlated_z = true;
  cfg.rho = 0.5;
  cfg.n = 20000;
  cfg.p_W = 0.0;
  cfg.p_Y = 0.0;
  cfg.truth.b0 = 0.0;
  cfg.truth.b1 = Eigen::VectorXd::Constant(1, 3.0);
  cfg.truth.b2 = Eigen::VectorXd::Constant(1, 2.0);
  cfg.seed = 13;
  const RegressionData d = generate(cfg, 0);
  REQUIRE(d.p2() == 1);

  // Normal copula: Spearman correlation (6 / pi) asin(rho / 2) = 0.48258.
  std::vector<double> x(d.n()), z(d.n());
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    x[static_cast<std::size_t>(i)] = d.W(i, 0);
    z[static_cast<std::size_t>(i)] = d.Z(i, 0);
  }
  CHECK(spearman(x, z) == doctest::Approx(0.48258).epsilon(0.04));

  // Both marginals are the same distribution.
  const double mx = d.W.col(0).mean(), mz = d.Z.col(0).mean();
  CHECK(mx == doctest::Approx(mz).epsilon(0.03));

  // The response uses both regressors.
  const Eigen::VectorXd resid = d.y - 3.0 * d.W.col(0) - 2.0 * d.Z.col(0);
  CHECK(resid.lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("generate validates its configuration") {
  ScenarioConfig cfg;
  cfg.n = 0;
  CHECK_THROWS_AS(generate(cfg, 0), ConfigError);

  ScenarioConfig biv;
  biv.correlated_z = true;
  biv.truth.b2 = Eigen::VectorXd(0);  // bivariate mode needs one clean slope
  CHECK_THROWS_AS(generate(biv, 0), ConfigError);

  ScenarioConfig bad_rho;
  bad_rho.correlated_z = true;
  bad_rho.truth.b2 = Eigen::VectorXd::Constant(1, 2.0);
  bad_rho.rho = 1.0;
  CHECK_THROWS_AS(generate(bad_rho, 0), ConfigError);

  ScenarioConfig biv_cauchy;
  biv_cauchy.correlated_z = true;
  biv_cauchy.truth.b2 = Eigen::VectorXd::Constant(1, 2.0);
  biv_cauchy.err_dist = ErrDist::cauchy;
  CHECK_THROWS_AS(generate(biv_cauchy, 0), ConfigError);

  CHECK_THROWS_AS(generate(ScenarioConfig{}, -1), ConfigError);
}

TEST_CASE("scenario runs aggregate per-method medians with naive as reference") {
  ScenarioConfig cfg;
  cfg.id = "toy";
  cfg.n = 60;
  cfg.p_W = 0.2;
  cfg.p_Y = 0.2;
  cfg.replicates = 8;
  cfg.seed = 17;
  cfg.fit_options.n_nodes = 48;
  const std::vector<FitMethod> methods{FitMethod::phase, FitMethod::naive};
  const ScenarioReport rep = run_scenario(cfg, methods);
  CHECK(rep.reference == FitMethod::naive);
  REQUIRE(rep.methods.size() == 2);
  for (const auto& [method, mr] : rep.methods) {
    CHECK(mr.successes == 8);
    CHECK(mr.failures == 0);
    REQUIRE(mr.coef.size() == 2);
    for (const auto& col : mr.coef) {
      CHECK(std::isfinite(col.median_scaled_se));
      CHECK(col.median_scaled_se >= 0.0);
      CHECK(col.iqr_scaled_se >= 0.0);
      REQUIRE(col.ratio_vs_reference.has_value());
    }
  }
  // The reference method's ratio against itself is 1.
  for (const auto& [method, mr] : rep.methods) {
    if (method == FitMethod::naive) {
      CHECK(*mr.coef[0].ratio_vs_reference == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(*mr.coef[1].ratio_vs_reference == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  const ScenarioReport again = run_scenario(cfg, methods);
  for (std::size_t m = 0; m < rep.methods.size(); ++m) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(again.methods[m].second.coef[j].median_scaled_se ==
            rep.methods[m].second.coef[j].median_scaled_se);
    }
  }
}

TEST_CASE("noiseless scenario medians vanish for phase and naive") {
  ScenarioConfig cfg;
  cfg.n = 50;
  cfg.p_W = 0.0;
  cfg.p_Y = 0.0;
  cfg.replicates = 5;
  cfg.seed = 19;
  cfg.fit_options.n_nodes = 48;
  const ScenarioReport rep = run_scenario(cfg, {FitMethod::phase, FitMethod::naive});
  for (const auto& [method, mr] : rep.methods) {
    CHECK(mr.coef[0].median_scaled_se < 1e-6);
    CHECK(mr.coef[1].median_scaled_se < 1e-6);
  }
}

TEST_CASE("scenario configuration errors are rejected") {
  ScenarioConfig cfg;
  CHECK_THROWS_AS(run_scenario(cfg, {}), ConfigError);

  ScenarioConfig cauchy;
  cauchy.err_dist = ErrDist::cauchy;
  cauchy.replicates = 2;
  CHECK_THROWS_AS(run_scenario(cauchy, {FitMethod::disattenuated}), ConfigError);

  ScenarioConfig biv;
  biv.correlated_z = true;
  biv.truth.b0 = 0.0;
  biv.truth.b1 = Eigen::VectorXd::Constant(1, 3.0);
  biv.truth.b2 = Eigen::VectorXd::Constant(1, 2.0);
  biv.replicates = 2;
  CHECK_THROWS_AS(run_scenario(biv, {FitMethod::gmm}), ConfigError);
  CHECK_THROWS_AS(run_scenario(biv, {FitMethod::disattenuated}), ConfigError);
}

TEST_CASE("reports round trip through CSV and JSON emitters") {
  ScenarioConfig cfg;
  cfg.id = "emit";
  cfg.n = 40;
  cfg.p_W = 0.1;
  cfg.p_Y = 0.1;
  cfg.replicates = 4;
  cfg.seed = 23;
  cfg.fit_options.n_nodes = 32;
  const ScenarioReport rep = run_scenario(cfg, {FitMethod::naive});

  const std::string csv_path = kTmp + "_report.csv";
  const std::string json_path = kTmp + "_report.json";
  write_report_csv({rep}, csv_path);
  write_report_json({rep}, json_path);

  std::ifstream csv(csv_path);
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "scenario,method,coefficient,n,replicates,successes,failures,"
        "median_scaled_se,iqr_scaled_se,ratio_vs_reference,reference");
  int rows = 0;
  std::string line;
  while (std::getline(csv, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 2);  // one method, two coefficients

  std::ifstream jf(json_path);
  REQUIRE(jf.good());
  nlohmann::json doc;
  jf >> doc;
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 2);
  CHECK(doc[0]["scenario"] == "emit");
  CHECK(doc[0]["method"] == "naive");
  CHECK(doc[0]["n"] == 40);
  CHECK(doc[0]["median_scaled_se"].is_number());
}

TEST_CASE("scenario files parse objects, arrays, and defaults") {
  const std::string path = kTmp + "_scenarios.json";
  {
    std::ofstream out(path);
    out << R"({
      "id": "from-file",
      "x-dist": "exp1",
      "err-dist": "cauchy",
      "n": 250,
      "p-w": 0.3,
      "p-y": 0.1,
      "replicates": 12,
      "seed": 99,
      "kernel": "k2",
      "n-nodes": 96,
      "rule": "uniform",
      "n-starts": 5,
      "methods": ["phase", "gmm"]
    })";
  }
  const auto entries = load_scenario_file(path);
  REQUIRE(entries.size() == 1);
  const ScenarioConfig& c = entries[0].config;
  CHECK(c.id == "from-file");
  CHECK(c.x_dist == XDist::exponential1);
  CHECK(c.err_dist == ErrDist::cauchy);
  CHECK(c.n == 250);
  CHECK(c.p_W == 0.3);
  CHECK(c.p_Y == 0.1);
  CHECK(c.replicates == 12);
  CHECK(c.seed == 99);
  CHECK(c.fit_options.kernel == WeightKernelKind::k2);
  CHECK(c.fit_options.n_nodes == 96);
  CHECK(c.fit_options.rule == QuadratureRule::uniform_midpoint);
  CHECK(c.fit_options.n_starts == 5);
  REQUIRE(entries[0].methods.size() == 2);
  CHECK(entries[0].methods[0] == FitMethod::phase);
  CHECK(entries[0].methods[1] == FitMethod::gmm);
  // Univariate default truth.
  CHECK(c.truth.b0 == 1.0);
  CHECK(c.truth.b1(0) == 3.0);

  {
    std::ofstream out(path);
    out << R"([{"id": "a"}, {"id": "b", "correlated-z": true}])";
  }
  const auto two = load_scenario_file(path);
  REQUIRE(two.size() == 2);
  CHECK(two[0].config.id == "a");
  CHECK(two[0].methods.size() == 2);  // defaults to phase + naive
  CHECK(two[1].config.correlated_z);
  // Bivariate default truth (0, 3, 2).
  CHECK(two[1].config.truth.b0 == 0.0);
  CHECK(two[1].config.truth.b2(0) == 2.0);

  {
    std::ofstream out(path);
    out << R"({"x-dist": "weibull"})";
  }
  CHECK_THROWS(load_scenario_file(path));

  {
    std::ofstream out(path);
    out << "not json";
  }
  CHECK_THROWS_AS(load_scenario_file(path), ParseError);

  CHECK_THROWS_AS(load_scenario_file(kTmp + "_missing.json"), DataError);
}
