#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kpls/bounds.hpp"
#include "kpls/constants.hpp"
#include "kpls/data.hpp"

namespace kpls {

// Coefficient (offset + slope·θ) on the eigenvector v_index (0-based) of the diagonal Gram matrix.
struct BetaTerm {
  int index = 0;
  double offset = 0.0;
  double slope = 0.0;
};

struct ScenarioSpec {
  std::string id = "custom";
  Vector spectrum;
  std::vector<BetaTerm> beta_rule;
  std::string param_name = "eta";
  Eigen::Index n = 200;
  int reps = 2000;
  double tau2 = kDefaultTau2;
  int k = 2;
  std::vector<double> grid;
  std::optional<Vector> ridge_overrides;
  std::uint64_t seed = 1;
  bool exact_design = true;
  double delta = kDefaultDelta;

  Eigen::Index p() const { return spectrum.size(); }
  void validate() const;
};

std::vector<double> log_grid(double lo, double hi, int count);
std::vector<double> linear_grid(double lo, double hi, int count);

// Built-in scenarios: s1a, s1b, s2a, s2b, s3.
ScenarioSpec scenario_preset(const std::string& id);
std::vector<std::string> scenario_ids();

// Ridge constant presets: default, low, low-alt, high, high-alt.
Vector ridge_preset(const std::string& scenario_id, const std::string& name);

Vector scenario_beta(const ScenarioSpec& spec, double param);

inline const std::vector<std::string>& known_estimators() {
  static const std::vector<std::string> names{"pls", "ridge", "oracle", "iterative"};
  return names;
}
inline const std::vector<std::string>& default_estimators() {
  static const std::vector<std::string> names{"pls", "ridge", "oracle"};
  return names;
}

inline constexpr double kHarnessRcondMin = 1e-300;

struct EstimatorCurve {
  std::string name;
  std::vector<double> mse;
  std::vector<double> stderr_mc;
  std::vector<int> singular_count;
  std::vector<int> reps_used;
};

struct MseCurve {
  std::string scenario;
  std::string param_name;
  std::vector<double> grid;
  std::vector<EstimatorCurve> estimators;
  std::vector<double> bias;  // (1/n)‖X(β − β̄)‖², NaN when the population system is degenerate
  std::vector<std::string> warnings;

  const EstimatorCurve& estimator(const std::string& name) const;
  std::vector<double> variance(const std::string& name) const;
};

MseCurve run_scenario(const ScenarioSpec& spec, const std::vector<std::string>& estimators, unsigned threads = 1);

MseCurve bias_variance_curve(const ScenarioSpec& spec, unsigned threads = 1);

enum class CoverageTarget { events, lemma_rhat, th1, th2 };

CoverageTarget parse_coverage_target(const std::string& s);
std::string to_string(CoverageTarget t);

struct CoverageResult {
  CoverageTarget target = CoverageTarget::events;
  double param = 0.0;
  int hits = 0;
  int reps = 0;
  double fraction = 0.0;
  double stderr_mc = 0.0;  // binomial √(f(1−f)/N)
  double radius = 0.0;     // 2·stderr
  bool a2_holds = false;
  bool certified = false;
  NamedValues details;
};

struct CoverageOptions {
  bool enforce_preconditions = true;
  bool precise = false;
};

CoverageResult coverage_experiment(const ScenarioSpec& spec, double param, CoverageTarget target,
                                   unsigned threads = 1, CoverageOptions options = {});

void write_results_csv(std::ostream& out, const MseCurve& curve);
MseCurve read_results_csv(std::istream& in);

// Static line chart: log-x for η, linear-x otherwise; s3-style curves add bias and variance polylines.
std::string render_svg(const MseCurve& curve);

}  // namespace kpls
