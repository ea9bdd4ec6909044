#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "kpls/bounds.hpp"
#include "kpls/estimators.hpp"
#include "kpls/krylov.hpp"
#include "kpls/pls_iter.hpp"
#include "kpls/simulate.hpp"
#include "support.hpp"

using namespace kpls;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome iterative_vs_krylov() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240101);
  int accepted = 0, skipped = 0;
  double worst = 0.0;
  while (accepted < 500) {
    const int n = test::uniform_int(rng, 50, 200);
    const int p = test::uniform_int(rng, 2, 10);
    const int k = test::uniform_int(rng, 1, std::min(4, p));
    const Dataset d = test::random_dataset(rng, n, p, test::uniform(rng, 0.1, 2.0));
    const GramSummary gs = gram_summary(d);
    PlsFit kr;
    try {
      kr = fit_pls_krylov(gs, k, 1e-8);
    } catch (const SingularKrylov&) {
      ++skipped;
      continue;
    }
    const Vector a = d.x * fit_pls_iterative(d, k).fit.beta_hat;
    const Vector b = d.x * kr.beta_hat;
    worst = std::max(worst, (a - b).norm() / b.norm());
    ++accepted;
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-8 && secs < 30.0,
          "max relative gap " + fmt("%.3g", worst) + " over 500 instances (" + std::to_string(skipped) +
              " ill-conditioned draws skipped), " + fmt("%.2f", secs) + " s"};
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

Outcome oracle_level() {
  const auto t0 = Clock::now();
  ScenarioSpec s = scenario_preset("s2b");
  s.n = 200;
  s.reps = 2000;
  s.tau2 = 1.0;
  s.k = 2;
  const auto c = run_scenario(s, {"oracle"});
  const double m = mean_of(c.estimator("oracle").mse);
  const double secs = seconds_since(t0);
  return {m >= 0.025 && m <= 0.055 && secs < 120.0,
          "mean oracle MSE " + fmt("%.4f", m) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome oracle_flat() {
  ScenarioSpec s = scenario_preset("s1a");
  s.reps = 2000;
  const auto c = run_scenario(s, {"oracle"});
  const auto& m = c.estimator("oracle").mse;
  const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
  const double ratio = *hi / *lo;
  return {m.size() == 25 && ratio <= 1.02, "max/min oracle MSE over 25 grid values " + fmt("%.6f", ratio)};
}

Outcome ridge_rescue() {
  ScenarioSpec s = scenario_preset("s1a");
  s.ridge_overrides = ridge_preset("s1a", "default");
  s.grid = {0.01};
  s.reps = 500;
  const auto c = run_scenario(s, {"pls", "ridge"});
  const double pls = c.estimator("pls").mse[0];
  const double ridge = c.estimator("ridge").mse[0];
  return {ridge < pls && pls / ridge >= 2.0,
          "MSE pls " + fmt("%.4g", pls) + ", ridge " + fmt("%.4g", ridge) + ", ratio " + fmt("%.3f", pls / ridge)};
}

Outcome bias_curve() {
  ScenarioSpec s = scenario_preset("s3");
  s.reps = 500;
  const auto c = bias_variance_curve(s);
  const auto it = std::max_element(c.bias.begin(), c.bias.end());
  const double arg = c.grid[static_cast<std::size_t>(it - c.bias.begin())];
  const bool ends = c.bias.front() <= 1e-10 && c.bias.back() <= 1e-10;
  return {ends && arg >= 0.3 && arg <= 0.7,
          "bias(0)=" + fmt("%.3g", c.bias.front()) + ", bias(1)=" + fmt("%.3g", c.bias.back()) + ", argmax nu=" +
              fmt("%.2f", arg) + " (bias there " + fmt("%.4g", *it) + ", at nu=0.5 " + fmt("%.4g", c.bias[10]) + ")"};
}

std::string coverage_text(const CoverageResult& r) {
  return fmt("%.4f", r.fraction) + " (" + std::to_string(r.hits) + "/" + std::to_string(r.reps) + ", 2se " +
         fmt("%.4f", r.radius) + ")";
}

Outcome deviation_coverage() {
  const auto t0 = Clock::now();
  ScenarioSpec s = scenario_preset("s1a");
  s.k = 2;
  s.n = 200;
  s.delta = 0.1;
  s.reps = 2000;
  const auto r = coverage_experiment(s, 10.0, CoverageTarget::events);
  const double secs = seconds_since(t0);
  return {r.fraction >= 0.90 - r.radius && secs < 60.0,
          "P(events) " + coverage_text(r) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome th1_validity() {
  ScenarioSpec s = scenario_preset("s1a");
  s.delta = 0.05;
  s.reps = 1000;
  CoverageOptions loose;
  loose.enforce_preconditions = false;
  const auto at100 = coverage_experiment(s, 100.0, CoverageTarget::th1, 1, loose);
  const auto at1000 = coverage_experiment(s, 1000.0, CoverageTarget::th1);
  const bool ok100 = at100.fraction >= 0.95 - at100.radius;
  const bool ok1000 = at1000.certified && at1000.fraction >= 0.95 - at1000.radius;
  return {ok100 && ok1000,
          "eta=100 coverage " + coverage_text(at100) + ", A.2 " + (at100.a2_holds ? "holds" : "fails") +
              "; eta=1000 (A.2 " + (at1000.a2_holds ? "holds" : "fails") + ") coverage " + coverage_text(at1000)};
}

Outcome th2_validity() {
  ScenarioSpec s = scenario_preset("s1a");
  s.delta = 0.05;
  s.reps = 1000;
  const auto r = coverage_experiment(s, 0.01, CoverageTarget::th2);
  return {r.certified && !r.a2_holds && r.fraction >= 0.95 - r.radius,
          "coverage " + coverage_text(r) + ", A.2 " + (r.a2_holds ? "holds" : "fails") + ", theoretical schedule " +
              (r.certified ? "certified" : "not certified")};
}

Outcome ridge_spectrum_bounds() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(99);
  double worst_min = 0.0, worst_max = 0.0, worst_refined = 0.0, worst_rho = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int k = test::uniform_int(rng, 2, 6);
    const SymMat theta = test::random_spd(rng, k, test::uniform(rng, 1e-4, 1.0));
    Vector alpha(k);
    for (int i = 0; i < k; ++i) alpha(i) = std::exp(test::uniform(rng, -6.0, 3.0)) * (i == 0 && t % 7 == 0 ? 0.0 : 1.0);
    const auto sr = spectral_summary(correlation_form(theta, theta.matrix().diagonal()));
    const auto sa = spectral_summary(ridge_correlation(theta, alpha));
    worst_min = std::max(worst_min, std::min(1.0, sr.rho_min) - sa.rho_min);
    worst_max = std::max(worst_max, sa.rho_max - sr.rho_max);
    worst_refined = std::max(worst_refined, ridge_rho_min_lower(theta, alpha, sr.rho_min) - sa.rho_min);
    worst_rho = std::max(worst_rho, 1.0 - sr.rho_max);
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_min <= 1e-10 && worst_max <= 1e-10 && worst_refined <= 1e-10 && worst_rho <= 1e-12;
  return {ok && secs < 5.0, "worst violations: min " + fmt("%.2g", worst_min) + ", max " + fmt("%.2g", worst_max) +
                                ", refined " + fmt("%.2g", worst_refined) + ", rho(R)>=1 " + fmt("%.2g", worst_rho) +
                                "; " + fmt("%.3f", secs) + " s"};
}

Outcome ridge_optimality() {
  std::mt19937_64 rng(7);
  double worst_res = 0.0;
  long long beaten = 0, tried = 0;
  for (int t = 0; t < 200; ++t) {
    const int p = test::uniform_int(rng, 2, 8);
    const int k = test::uniform_int(rng, 1, std::min(3, p));
    const int n = test::uniform_int(rng, 30, 120);
    const Dataset d = test::random_dataset(rng, n, p, test::uniform(rng, 0.1, 2.0));
    const GramSummary gs = gram_summary(d);
    const EmpiricalKrylov emp = build_empirical_krylov(gs, k);
    Vector c(k);
    for (int i = 0; i < k; ++i) c(i) = std::exp(test::uniform(rng, -4.0, 2.0));
    const auto sched = ridge_schedule(gs, k, 1.0, 0.05, c);
    const PlsFit fit = fit_pls_ridge(emp, sched);
    worst_res = std::max(worst_res, ridge_stationarity_residual(emp, sched.alpha, fit.coordinates) / emp.rhs().norm());
    const double best = ridge_objective(d.x, d.y, emp.g_hat, sched.alpha, fit.coordinates);
    const double scale = std::max(fit.coordinates.norm(), 1e-12);
    for (int j = 0; j < 10000; ++j) {
      const double step = scale * std::exp(test::uniform(rng, std::log(1e-6), 0.0));
      const Vector u = fit.coordinates + step * test::random_vector(rng, k).normalized();
      ++tried;
      if (ridge_objective(d.x, d.y, emp.g_hat, sched.alpha, u) < best) ++beaten;
    }
  }
  return {worst_res <= 1e-9 && beaten == 0, "max relative stationarity residual " + fmt("%.3g", worst_res) + ", " +
                                                std::to_string(beaten) + " of " + std::to_string(tried) +
                                                " perturbed points below the optimum"};
}

Outcome reproducibility() {
  const std::vector<std::vector<std::string>> invocations = {
      {"simulate", "--scenario", "s1a", "--reps", "100", "--seed", "42"},
      {"simulate", "--scenario", "s3", "--reps", "100", "--seed", "7"},
      {"simulate", "--scenario", "s2b", "--reps", "60", "--seed", "1", "--estimators", "pls,ridge,oracle,iterative"},
  };
  int identical = 0;
  for (const auto& base : invocations) {
    std::string first;
    bool same = true;
    for (const char* threads : {"1", "2", "3", "8"}) {
      auto args = base;
      args.push_back("--threads");
      args.push_back(threads);
      std::ostringstream out, err;
      if (cli::run(args, out, err) != 0) same = false;
      if (first.empty()) first = out.str();
      else if (out.str() != first) same = false;
    }
    identical += same && !first.empty();
  }
  return {identical == static_cast<int>(invocations.size()),
          std::to_string(identical) + "/" + std::to_string(invocations.size()) +
              " invocations byte-identical across 1, 2, 3 and 8 threads"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "iterative and Krylov fits agree", iterative_vs_krylov},
      {2, "oracle risk level in s2b", oracle_level},
      {3, "oracle risk flat in eta", oracle_flat},
      {4, "ridge rescue at low signal", ridge_rescue},
      {5, "bias curve over nu", bias_curve},
      {6, "deviation event coverage", deviation_coverage},
      {7, "plain bound coverage", th1_validity},
      {8, "ridge bound coverage without A.2", th2_validity},
      {9, "ridge correlation spectrum bounds", ridge_spectrum_bounds},
      {10, "ridge objective optimality", ridge_optimality},
      {11, "thread-count reproducibility", reproducibility},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::stoi(argv[++i]);
    } else {
      std::cerr << "usage: kpls_acceptance [--only N]\n";
      return 2;
    }
  }
  int failures = 0, ran = 0;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.name << " - " << o.detail
              << std::endl;
    failures += !o.pass;
  }
  if (ran == 0) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
