#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "kpls/krylov.hpp"
#include "kpls/simulate.hpp"

using namespace kpls;

namespace {

ScenarioSpec small(const std::string& id, int reps) {
  ScenarioSpec s = scenario_preset(id);
  s.reps = reps;
  return s;
}

std::string csv_of(const MseCurve& c) {
  std::ostringstream os;
  write_results_csv(os, c);
  return os.str();
}

}  // namespace

TEST_CASE("grids") {
  const auto g = log_grid(1e-2, 1e2, 25);
  CHECK(g.size() == 25);
  CHECK(g.front() == doctest::Approx(1e-2));
  CHECK(g.back() == doctest::Approx(1e2));
  CHECK(g[12] == doctest::Approx(1.0));
  const auto l = linear_grid(0, 1, 21);
  CHECK(l[10] == doctest::Approx(0.5));
  CHECK(l.back() == 1.0);
}

TEST_CASE("presets") {
  for (const auto& id : scenario_ids()) CHECK_NOTHROW(scenario_preset(id).validate());
  CHECK_THROWS_AS(scenario_preset("s9"), InvalidArgument);
  const auto s1 = scenario_preset("s1a");
  CHECK((*s1.ridge_overrides)(0) == 0.08);
  CHECK((*s1.ridge_overrides)(1) == 0.05);
  CHECK(ridge_preset("s1a", "low")(0) == 0.002);
  CHECK(ridge_preset("s1a", "low-alt")(0) == 0.004);
  CHECK(ridge_preset("s1a", "high")(0) == 0.2);
  CHECK(ridge_preset("s1a", "high-alt")(0) == 0.4);
  CHECK(ridge_preset("s1b", "default")(1) == 0.02);
  CHECK_THROWS_AS(ridge_preset("s1b", "low"), InvalidArgument);
  CHECK(!scenario_preset("s3").ridge_overrides);
}

TEST_CASE("scenario beta rules") {
  const auto s3 = scenario_preset("s3");
  const Vector b0 = scenario_beta(s3, 0.0), b1 = scenario_beta(s3, 1.0);
  CHECK(b0(0) == 0.0);
  CHECK(b0(1) == 1.0);
  CHECK(b0(4) == 1.0);
  CHECK(b1(0) == 1.0);
  CHECK(b1(4) == 0.0);
  const auto s1 = scenario_preset("s1a");
  CHECK(scenario_beta(s1, 3.0)(1) == 3.0);
}

TEST_CASE("curve shape") {
  const auto c = run_scenario(small("s1a", 20), default_estimators());
  CHECK(c.grid.size() == 25);
  CHECK(c.estimators.size() == 3);
  for (const auto& e : c.estimators) {
    CHECK(e.mse.size() == 25);
    CHECK(e.stderr_mc.size() == 25);
  }
  CHECK(c.estimator("oracle").name == "oracle");
  CHECK_THROWS_AS(c.estimator("nope"), InvalidArgument);
  CHECK_THROWS_AS(run_scenario(small("s1a", 2), {"magic"}), InvalidArgument);
}

TEST_CASE("noiseless limit drives every risk to zero") {
  auto s = small("s1a", 5);
  s.tau2 = 1e-30;
  s.grid = {0.01, 1.0, 100.0};
  const auto c = run_scenario(s, {"pls", "ridge", "oracle", "iterative"});
  for (const auto& e : c.estimators)
    for (double v : e.mse) CHECK(v <= 1e-12);
}

TEST_CASE("oracle risk is flat in eta with coupled noise") {
  const auto c = run_scenario(small("s1a", 100), {"oracle"});
  const auto& m = c.estimator("oracle").mse;
  const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
  CHECK(*hi / *lo <= 1.02);
}

TEST_CASE("iterative and Krylov estimators agree in the harness") {
  auto s = small("s2a", 20);
  s.grid = {0.5, 5.0};
  const auto c = run_scenario(s, {"pls", "iterative"});
  for (std::size_t j = 0; j < 2; ++j)
    CHECK(c.estimator("pls").mse[j] == doctest::Approx(c.estimator("iterative").mse[j]).epsilon(1e-6));
}

TEST_CASE("bias and variance decomposition") {
  const auto c = bias_variance_curve(small("s3", 50));
  CHECK(c.bias.front() <= 1e-10);
  CHECK(c.bias.back() <= 1e-10);
  CHECK(c.bias[10] > c.bias.front());
  CHECK(c.bias[10] > c.bias.back());
  const auto v = c.variance("pls");
  const auto& e = c.estimator("pls");
  for (std::size_t j = 0; j < v.size(); ++j) {
    CHECK(v[j] >= -4 * e.stderr_mc[j]);
    CHECK(e.mse[j] == doctest::Approx(c.bias[j] + v[j]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(bias_variance_curve(small("s1a", 2)), InvalidArgument);
}

TEST_CASE("results are independent of the thread count") {
  auto s = small("s1b", 30);
  s.grid = {0.01, 0.3, 10.0};
  const std::string one = csv_of(run_scenario(s, {"pls", "ridge", "oracle", "iterative"}, 1));
  const std::string three = csv_of(run_scenario(s, {"pls", "ridge", "oracle", "iterative"}, 3));
  CHECK(one == three);
  s.seed = 2;
  CHECK(csv_of(run_scenario(s, {"pls"}, 1)) != csv_of(run_scenario(small("s1b", 30), {"pls"}, 1)));
}

TEST_CASE("results csv round trip and re-plot") {
  const auto c = run_scenario(small("s3", 10), {"pls", "oracle"});
  const std::string text = csv_of(c);
  CHECK(text.rfind("scenario,param_name,param_value,estimator,mse,stderr,bias,variance,singular_count,reps\n", 0) == 0);
  std::istringstream in(text);
  const MseCurve back = read_results_csv(in);
  CHECK(csv_of(back) == text);
  CHECK(render_svg(back) == render_svg(c));
  std::istringstream bad("scenario,param_name\n");
  CHECK_THROWS_AS(read_results_csv(bad), InputError);
}

TEST_CASE("svg structure") {
  auto count = [](const std::string& s, const std::string& what) {
    std::size_t n = 0;
    for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
    return n;
  };
  auto s3 = small("s3", 10);
  const std::string nu = render_svg(bias_variance_curve(s3));
  CHECK(count(nu, "<polyline") == 3);
  auto s1 = small("s1a", 5);
  const std::string eta = render_svg(run_scenario(s1, default_estimators()));
  CHECK(count(eta, "<polyline") == 3);
  CHECK(eta.find("<svg") != std::string::npos);
}

TEST_CASE("coverage experiments") {
  auto s = small("s1a", 300);
  s.delta = 0.1;
  const auto ev = coverage_experiment(s, 10.0, CoverageTarget::events);
  CHECK(ev.fraction >= 0.9 - ev.radius);
  CHECK(ev.reps == 300);

  auto s5 = small("s1a", 200);
  CHECK_THROWS_AS(coverage_experiment(s5, 0.01, CoverageTarget::th1), PreconditionError);
  try {
    coverage_experiment(s5, 0.01, CoverageTarget::th1);
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("margins") != std::string::npos);
  }
  const auto th2 = coverage_experiment(s5, 0.01, CoverageTarget::th2);
  CHECK(th2.certified);
  CHECK(th2.fraction >= 0.95 - th2.radius);

  const auto lem = coverage_experiment(s5, 1000.0, CoverageTarget::lemma_rhat);
  CHECK(lem.a2_holds);
  CHECK(lem.fraction >= 0.95 - lem.radius);

  CHECK(parse_coverage_target("th2") == CoverageTarget::th2);
  CHECK(to_string(CoverageTarget::lemma_rhat) == "lemma_rhat");
  CHECK_THROWS_AS(parse_coverage_target("x"), InvalidArgument);
}

TEST_CASE("scenario validation") {
  auto s = scenario_preset("s1a");
  s.k = 9;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = scenario_preset("s1a");
  s.grid.clear();
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = scenario_preset("s1a");
  s.ridge_overrides = Vector::Ones(3);
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
}
