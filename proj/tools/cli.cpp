#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "kpls/bounds.hpp"
#include "kpls/data.hpp"
#include "kpls/estimators.hpp"
#include "kpls/krylov.hpp"
#include "kpls/pls_iter.hpp"
#include "kpls/report.hpp"
#include "kpls/simulate.hpp"

namespace kpls::cli {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::uint64_t kBuiltinSeed = 1;

struct Options {
  std::string config;

  // shared
  std::string scenario;
  std::string input;
  std::string output;
  int k = 2;
  double delta = kDefaultDelta;
  double tau2 = kDefaultTau2;
  long long n = 200;
  std::uint64_t seed = kBuiltinSeed;
  bool raw_design = false;
  bool plugin = false;
  std::vector<double> ridge_c;
  std::string ridge_preset;

  // fit
  bool ridge = false;
  bool iterative = false;
  bool plugin_tau2 = false;

  // check / bound
  double eta = 1.0;
  double nu = 0.5;
  std::string theorem = "th1";
  bool precise = false;

  // simulate
  int reps = 2000;
  unsigned threads = 1;
  std::vector<std::string> estimators;
  int grid_points = 0;
  std::vector<double> grid;
  std::string plot;
  std::string coverage;
  double at = 0.0;
  bool no_enforce = false;
};

// Flags override the config file, which overrides presets.
class Resolver {
 public:
  Resolver(const json& cfg) : cfg_(cfg) {}

  template <typename T>
  T get(const CLI::Option* opt, const T& flag_value, const char* key, const T& fallback) const {
    if (opt != nullptr && opt->count() > 0) return flag_value;
    if (cfg_.contains(key)) return cfg_.at(key).get<T>();
    return fallback;
  }

  bool has(const CLI::Option* opt, const char* key) const {
    return (opt != nullptr && opt->count() > 0) || cfg_.contains(key);
  }

  const json& cfg() const { return cfg_; }

 private:
  const json& cfg_;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path);
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw InvalidArgument("config file must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config file is not valid JSON: ") + e.what());
  }
}

std::uint64_t env_seed() {
  const char* s = std::getenv("KRYLOV_PLS_SEED");
  if (s == nullptr || *s == '\0') return kBuiltinSeed;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos, 10);
    if (pos != std::string(s).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("KRYLOV_PLS_SEED must be an unsigned integer");
  }
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Writes to the named file, or to out when the path is empty or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary);
      if (!file_) throw InvalidArgument("cannot open output file " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void check_output_path(const std::string& path) {
  if (path.empty() || path == "-") return;
  std::ofstream probe(path, std::ios::app);
  if (!probe) throw InvalidArgument("cannot write to " + path);
}

struct Subcommands {
  CLI::App* fit;
  CLI::App* check;
  CLI::App* bound;
  CLI::App* simulate;
  CLI::App* plot;
};

std::map<std::string, CLI::Option*> g_opts;

CLI::Option* opt(const std::string& key) {
  const auto it = g_opts.find(key);
  return it == g_opts.end() ? nullptr : it->second;
}

void add_population_options(CLI::App* sub, Options& o, const std::string& prefix) {
  g_opts[prefix + "scenario"] = sub->add_option("--scenario", o.scenario, "Built-in scenario id (s1a, s1b, s2a, s2b, s3)");
  g_opts[prefix + "input"] = sub->add_option("--input", o.input, "Dataset CSV for --plugin mode");
  g_opts[prefix + "plugin"] = sub->add_flag("--plugin", o.plugin, "Population inputs estimated from data (labelled plug-in)");
  g_opts[prefix + "eta"] = sub->add_option("--eta", o.eta, "Signal scale for eta scenarios");
  g_opts[prefix + "nu"] = sub->add_option("--nu", o.nu, "Interpolation weight for the nu scenario");
  g_opts[prefix + "k"] = sub->add_option("--k", o.k, "Number of Krylov components");
  g_opts[prefix + "delta"] = sub->add_option("--delta", o.delta, "Confidence level parameter");
  g_opts[prefix + "tau2"] = sub->add_option("--tau2", o.tau2, "Noise variance");
  g_opts[prefix + "n"] = sub->add_option("--n", o.n, "Sample size");
  g_opts[prefix + "seed"] = sub->add_option("--seed", o.seed, "Seed for sampled designs");
  g_opts[prefix + "raw_design"] = sub->add_flag("--raw-design", o.raw_design, "Skip the exact-spectrum pass");
}

ScenarioSpec custom_spec(const json& cfg) {
  ScenarioSpec s;
  s.id = cfg.value("scenario", std::string("custom"));
  if (!cfg.contains("spectrum") || !cfg.contains("beta_rule"))
    throw InvalidArgument("custom scenarios need 'spectrum' and 'beta_rule'");
  s.spectrum = to_vector(cfg.at("spectrum").get<std::vector<double>>());
  for (const auto& t : cfg.at("beta_rule"))
    s.beta_rule.push_back({t.at("index").get<int>(), t.value("offset", 0.0), t.value("slope", 0.0)});
  s.param_name = cfg.value("param_name", std::string("eta"));
  if (s.param_name != "eta" && s.param_name != "nu") throw InvalidArgument("param_name must be eta or nu");
  s.grid = s.param_name == "eta" ? log_grid(1e-2, 1e2, 25) : linear_grid(0.0, 1.0, 21);
  return s;
}

ScenarioSpec resolve_spec(const Options& o, const Resolver& r, const std::string& prefix) {
  const std::string id = r.get<std::string>(opt(prefix + "scenario"), o.scenario, "scenario", "");
  ScenarioSpec s;
  const auto ids = scenario_ids();
  if (std::find(ids.begin(), ids.end(), id) != ids.end()) {
    s = scenario_preset(id);
  } else if (r.cfg().contains("spectrum")) {
    s = custom_spec(r.cfg());
  } else if (id.empty()) {
    throw InvalidArgument("a scenario id or a custom scenario config is required");
  } else {
    throw InvalidArgument("unknown scenario id '" + id + "'");
  }
  s.n = r.get<long long>(opt(prefix + "n"), o.n, "n", s.n);
  s.tau2 = r.get<double>(opt(prefix + "tau2"), o.tau2, "tau2", s.tau2);
  s.k = r.get<int>(opt(prefix + "k"), o.k, "k", s.k);
  s.delta = r.get<double>(opt(prefix + "delta"), o.delta, "delta", s.delta);
  s.seed = r.get<std::uint64_t>(opt(prefix + "seed"), o.seed, "seed", env_seed());
  s.exact_design = !r.get<bool>(opt(prefix + "raw_design"), o.raw_design, "raw_design", false);
  s.reps = r.get<int>(opt(prefix + "reps"), o.reps, "reps", s.reps);

  const std::string preset = r.get<std::string>(opt(prefix + "ridge_preset"), o.ridge_preset, "ridge_preset", "");
  if (!preset.empty()) s.ridge_overrides = ridge_preset(s.id, preset);
  if (r.has(opt(prefix + "ridge_c"), "ridge_c"))
    s.ridge_overrides = to_vector(r.get<std::vector<double>>(opt(prefix + "ridge_c"), o.ridge_c, "ridge_c", {}));
  if (s.ridge_overrides && s.ridge_overrides->size() != s.k) {
    if (r.has(opt(prefix + "ridge_c"), "ridge_c") || !preset.empty())
      throw InvalidArgument("ridge constants must have length k");
    s.ridge_overrides.reset();
  }

  if (r.has(opt(prefix + "grid"), "grid")) {
    s.grid = r.get<std::vector<double>>(opt(prefix + "grid"), o.grid, "grid", {});
  } else if (r.has(opt(prefix + "grid_points"), "grid_points")) {
    const int g = r.get<int>(opt(prefix + "grid_points"), o.grid_points, "grid_points", 0);
    s.grid = s.param_name == "eta" ? log_grid(1e-2, 1e2, g) : linear_grid(0.0, 1.0, g);
  }
  return s;
}

double resolve_param(const Options& o, const Resolver& r, const ScenarioSpec& s, const std::string& prefix) {
  if (s.param_name == "nu") return r.get<double>(opt(prefix + "nu"), o.nu, "nu", 0.5);
  return r.get<double>(opt(prefix + "eta"), o.eta, "eta", 1.0);
}

struct PopulationInputs {
  SymMat sigma;
  Vector beta;
  double tau2 = 1.0;
  Eigen::Index n = 0;
  int k = 2;
  double delta = kDefaultDelta;
  ordered_json header;
};

PopulationInputs resolve_population(const Options& o, const Resolver& r, const std::string& prefix) {
  PopulationInputs pi;
  const bool plugin = r.get<bool>(opt(prefix + "plugin"), o.plugin, "plugin", false);
  pi.delta = r.get<double>(opt(prefix + "delta"), o.delta, "delta", kDefaultDelta);
  pi.k = r.get<int>(opt(prefix + "k"), o.k, "k", 2);
  if (plugin) {
    const std::string path = r.get<std::string>(opt(prefix + "input"), o.input, "input", "");
    if (path.empty()) throw InvalidArgument("--plugin needs --input");
    const Dataset d = read_csv_file(path);
    const GramSummary gs = gram_summary(d);
    const auto sol = solve_spd(gs.sigma_mat, gs.sigma_hat);
    pi.sigma = gs.sigma_mat;
    pi.beta = sol.x;
    pi.n = d.n();
    pi.tau2 = r.has(opt(prefix + "tau2"), "tau2") ? r.get<double>(opt(prefix + "tau2"), o.tau2, "tau2", 1.0)
                                                   : plugin_tau2(d);
    pi.header["mode"] = "plugin";
    pi.header["note"] = "plug-in: population quantities replaced by sample estimates";
    pi.header["input"] = path;
    pi.header["tau2"] = pi.tau2;
    return pi;
  }
  const ScenarioSpec s = resolve_spec(o, r, prefix);
  const double param = resolve_param(o, r, s, prefix);
  pi.k = s.k;
  pi.delta = s.delta;
  pi.tau2 = s.tau2;
  pi.n = s.n;
  pi.beta = scenario_beta(s, param);
  if (s.exact_design) {
    pi.sigma = SymMat(Matrix(s.spectrum.asDiagonal()));
  } else {
    const auto d = gen_design(s.n, s.spectrum, s.seed, false);
    pi.sigma = SymMat(d.x.transpose() * d.x / static_cast<double>(s.n));
  }
  pi.header["mode"] = "scenario";
  pi.header["scenario"] = s.id;
  pi.header[s.param_name] = param;
  pi.header["n"] = s.n;
  pi.header["tau2"] = s.tau2;
  pi.header["k"] = s.k;
  pi.header["delta"] = s.delta;
  pi.header["exact_design"] = s.exact_design;
  return pi;
}

void emit(std::ostream& out, const ordered_json& j) { out << j.dump(2) << '\n'; }

int cmd_fit(const Options& o, const Resolver& r, std::ostream& out, std::ostream& err) {
  const std::string path = r.get<std::string>(opt("fit.input"), o.input, "input", "");
  if (path.empty()) throw InvalidArgument("fit needs --input");
  const std::string output = r.get<std::string>(opt("fit.output"), o.output, "output", "");
  check_output_path(output);
  const Dataset d = read_csv_file(path);
  const int k = r.get<int>(opt("fit.k"), o.k, "k", 2);
  if (k < 1 || k > d.p()) throw InvalidArgument("k must satisfy 1 <= k <= p");
  const bool ridge = r.get<bool>(opt("fit.ridge"), o.ridge, "ridge", false);
  const bool iterative = r.get<bool>(opt("fit.iterative"), o.iterative, "iterative", false);
  if (ridge && iterative) throw InvalidArgument("--ridge and --iterative are exclusive");

  PlsFit fit;
  ordered_json extra = ordered_json::object();
  try {
    if (iterative) {
      fit = fit_pls_iterative(d, k).fit;
    } else if (ridge) {
      const double delta = r.get<double>(opt("fit.delta"), o.delta, "delta", kDefaultDelta);
      double tau2 = 0.0;
      if (r.has(opt("fit.tau2"), "tau2")) {
        tau2 = r.get<double>(opt("fit.tau2"), o.tau2, "tau2", 1.0);
      } else if (r.get<bool>(opt("fit.plugin_tau2"), o.plugin_tau2, "plugin_tau2", false)) {
        tau2 = plugin_tau2(d);
        extra["tau2_plugin"] = tau2;
        extra["note"] = "plug-in: noise variance estimated from OLS residuals";
      } else {
        throw InvalidArgument("--ridge needs --tau2 (or --plugin-tau2 when n > p)");
      }
      std::optional<Vector> overrides;
      if (r.has(opt("fit.ridge_c"), "ridge_c"))
        overrides = to_vector(r.get<std::vector<double>>(opt("fit.ridge_c"), o.ridge_c, "ridge_c", {}));
      const GramSummary gs = gram_summary(d);
      fit = fit_pls_ridge(gs, k, ridge_schedule(gs, k, tau2, delta, overrides));
    } else {
      fit = fit_pls_krylov(gram_summary(d), k);
    }
  } catch (const SingularKrylov& e) {
    ordered_json diag;
    diag["error"] = "singular_krylov";
    diag["rcond"] = e.rcond();
    diag["rcond_min"] = kRcondMin;
    diag["suggestion"] = "retry with --ridge";
    emit(out, diag);
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
  ordered_json j = to_json(fit);
  j.update(extra);
  Sink sink(output, out);
  emit(sink.get(), j);
  return kOk;
}

int cmd_check(const Options& o, const Resolver& r, std::ostream& out) {
  const std::string output = r.get<std::string>(opt("check.output"), o.output, "output", "");
  check_output_path(output);
  const PopulationInputs pi = resolve_population(o, r, "check.");
  ordered_json j = pi.header;
  try {
    const auto pop = build_population_krylov(pi.sigma, pi.beta, pi.k);
    j.update(to_json(check_assumptions(pop, pi.sigma, pi.tau2, pi.n, pi.delta)));
  } catch (const PopulationDegenerate& e) {
    j["a1_holds"] = false;
    j["a2_holds"] = false;
    j["error"] = "population_degenerate";
    j["rcond"] = e.rcond();
  }
  Sink sink(output, out);
  emit(sink.get(), j);
  return kOk;
}

int cmd_bound(const Options& o, const Resolver& r, std::ostream& out) {
  const std::string output = r.get<std::string>(opt("bound.output"), o.output, "output", "");
  check_output_path(output);
  const std::string theorem = r.get<std::string>(opt("bound.theorem"), o.theorem, "theorem", "th1");
  if (theorem != "th1" && theorem != "th2") throw InvalidArgument("--theorem must be th1 or th2");
  const bool precise = r.get<bool>(opt("bound.precise"), o.precise, "precise", false);
  const PopulationInputs pi = resolve_population(o, r, "bound.");
  std::optional<Vector> overrides;
  if (r.has(opt("bound.ridge_c"), "ridge_c"))
    overrides = to_vector(r.get<std::vector<double>>(opt("bound.ridge_c"), o.ridge_c, "ridge_c", {}));
  ordered_json j = pi.header;
  try {
    const auto pop = build_population_krylov(pi.sigma, pi.beta, pi.k);
    const BoundReport rep = theorem == "th1"
                                ? bound_th1(pop, pi.sigma, pi.beta, pi.tau2, pi.n, pi.delta, precise)
                                : bound_th2(pop, pi.sigma, pi.beta, pi.tau2, pi.n, pi.delta, precise, overrides);
    j.update(to_json(rep));
  } catch (const PopulationDegenerate& e) {
    j["error"] = "population_degenerate";
    j["rcond"] = e.rcond();
  } catch (const AssumptionViolation& e) {
    j["error"] = "assumption_a1_violated";
    j["rho_min_r"] = e.rho_min_r();
  }
  Sink sink(output, out);
  emit(sink.get(), j);
  return kOk;
}

int cmd_simulate(const Options& o, const Resolver& r, std::ostream& out, std::ostream& err) {
  const std::string output = r.get<std::string>(opt("simulate.output"), o.output, "output", "");
  const std::string plot = r.get<std::string>(opt("simulate.plot"), o.plot, "plot", "");
  check_output_path(output);
  check_output_path(plot);
  const ScenarioSpec spec = resolve_spec(o, r, "simulate.");
  spec.validate();
  const unsigned threads = r.get<unsigned>(opt("simulate.threads"), o.threads, "threads", 1u);
  if (threads < 1) throw InvalidArgument("--threads must be at least 1");

  const std::string coverage = r.get<std::string>(opt("simulate.coverage"), o.coverage, "coverage", "");
  if (!coverage.empty()) {
    const CoverageTarget target = parse_coverage_target(coverage);
    const double param = r.get<double>(opt("simulate.at"), o.at, "at", spec.param_name == "nu" ? 0.5 : 1.0);
    CoverageOptions copt;
    copt.precise = r.get<bool>(opt("simulate.precise"), o.precise, "precise", false);
    copt.enforce_preconditions = !r.get<bool>(opt("simulate.no_enforce"), o.no_enforce, "no_enforce", false);
    ordered_json j;
    j["scenario"] = spec.id;
    j["param_name"] = spec.param_name;
    j["delta"] = spec.delta;
    j.update(to_json(coverage_experiment(spec, param, target, threads, copt)));
    Sink sink(output, out);
    emit(sink.get(), j);
    return kOk;
  }

  std::vector<std::string> est = spec.id == "s3" ? std::vector<std::string>{"pls"} : default_estimators();
  if (r.has(opt("simulate.estimators"), "estimators"))
    est = r.get<std::vector<std::string>>(opt("simulate.estimators"), o.estimators, "estimators", {});
  const MseCurve curve = run_scenario(spec, est, threads);
  for (const auto& w : curve.warnings) err << "warning: " << w << '\n';
  {
    Sink sink(output, out);
    write_results_csv(sink.get(), curve);
  }
  if (!plot.empty()) {
    Sink sink(plot, out);
    sink.get() << render_svg(curve);
  }
  return kOk;
}

int cmd_plot(const Options& o, const Resolver& r, std::ostream& out) {
  const std::string path = r.get<std::string>(opt("plot.input"), o.input, "input", "");
  if (path.empty()) throw InvalidArgument("plot needs --input");
  const std::string output = r.get<std::string>(opt("plot.output"), o.output, "output", "");
  check_output_path(output);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  const MseCurve curve = read_results_csv(in);
  Sink sink(output, out);
  sink.get() << render_svg(curve);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  g_opts.clear();
  CLI::App app{"Krylov partial least squares: fits, assumption checks, risk bounds and simulations"};
  app.require_subcommand(1, 1);
  app.add_option("--config", o.config, "JSON config file; flags take precedence");

  Subcommands sc{};
  sc.fit = app.add_subcommand("fit", "Fit an estimator on a CSV dataset");
  g_opts["fit.input"] = sc.fit->add_option("--input", o.input, "Dataset CSV (header x1,...,xp,y)");
  g_opts["fit.output"] = sc.fit->add_option("--output", o.output, "JSON output path (default stdout)");
  g_opts["fit.k"] = sc.fit->add_option("--k", o.k, "Number of components");
  g_opts["fit.ridge"] = sc.fit->add_flag("--ridge", o.ridge, "Ridge-regularized Krylov fit");
  g_opts["fit.iterative"] = sc.fit->add_flag("--iterative", o.iterative, "Classical deflation algorithm");
  g_opts["fit.delta"] = sc.fit->add_option("--delta", o.delta, "Confidence parameter of the ridge schedule");
  g_opts["fit.tau2"] = sc.fit->add_option("--tau2", o.tau2, "Noise variance for the ridge schedule");
  g_opts["fit.plugin_tau2"] = sc.fit->add_flag("--plugin-tau2", o.plugin_tau2, "Estimate tau2 from OLS residuals");
  g_opts["fit.ridge_c"] = sc.fit->add_option("--ridge-c", o.ridge_c, "Per-index ridge constants")->delimiter(',');

  sc.check = app.add_subcommand("check", "Evaluate assumptions A.1 and A.2");
  add_population_options(sc.check, o, "check.");
  g_opts["check.output"] = sc.check->add_option("--output", o.output, "JSON output path (default stdout)");

  sc.bound = app.add_subcommand("bound", "Evaluate a risk bound");
  add_population_options(sc.bound, o, "bound.");
  g_opts["bound.output"] = sc.bound->add_option("--output", o.output, "JSON output path (default stdout)");
  g_opts["bound.theorem"] = sc.bound->add_option("--theorem", o.theorem, "th1 (plain) or th2 (ridge)");
  g_opts["bound.precise"] = sc.bound->add_flag("--precise", o.precise, "Term-by-term form of the bound");
  g_opts["bound.ridge_c"] = sc.bound->add_option("--ridge-c", o.ridge_c, "Per-index ridge constants")->delimiter(',');

  sc.simulate = app.add_subcommand("simulate", "Run a Monte Carlo scenario");
  auto* sim = sc.simulate;
  g_opts["simulate.scenario"] = sim->add_option("--scenario", o.scenario, "Scenario id");
  g_opts["simulate.reps"] = sim->add_option("--reps", o.reps, "Replications per grid value");
  g_opts["simulate.seed"] = sim->add_option("--seed", o.seed, "Master seed (default KRYLOV_PLS_SEED or 1)");
  g_opts["simulate.threads"] = sim->add_option("--threads", o.threads, "Worker threads");
  g_opts["simulate.estimators"] = sim->add_option("--estimators", o.estimators, "pls,ridge,oracle,iterative")->delimiter(',');
  g_opts["simulate.grid_points"] = sim->add_option("--grid-points", o.grid_points, "Grid size");
  g_opts["simulate.grid"] = sim->add_option("--grid", o.grid, "Explicit grid values")->delimiter(',');
  g_opts["simulate.n"] = sim->add_option("--n", o.n, "Sample size");
  g_opts["simulate.tau2"] = sim->add_option("--tau2", o.tau2, "Noise variance");
  g_opts["simulate.k"] = sim->add_option("--k", o.k, "Number of components");
  g_opts["simulate.delta"] = sim->add_option("--delta", o.delta, "Confidence parameter");
  g_opts["simulate.ridge_c"] = sim->add_option("--ridge-c", o.ridge_c, "Per-index ridge constants")->delimiter(',');
  g_opts["simulate.ridge_preset"] = sim->add_option("--ridge-preset", o.ridge_preset, "default, low, low-alt, high, high-alt");
  g_opts["simulate.raw_design"] = sim->add_flag("--raw-design", o.raw_design, "Skip the exact-spectrum pass");
  g_opts["simulate.output"] = sim->add_option("--output", o.output, "Results CSV path (default stdout)");
  g_opts["simulate.plot"] = sim->add_option("--plot", o.plot, "SVG chart path");
  g_opts["simulate.coverage"] = sim->add_option("--coverage", o.coverage, "Coverage target: events, lemma_rhat, th1, th2");
  g_opts["simulate.at"] = sim->add_option("--at", o.at, "Grid value for the coverage experiment");
  g_opts["simulate.precise"] = sim->add_flag("--precise", o.precise, "Use the term-by-term bound in coverage");
  g_opts["simulate.no_enforce"] = sim->add_flag("--no-enforce", o.no_enforce, "Run th1 coverage even when A.2 fails");

  sc.plot = app.add_subcommand("plot", "Render an SVG chart from a results CSV");
  g_opts["plot.input"] = sc.plot->add_option("--input", o.input, "Results CSV");
  g_opts["plot.output"] = sc.plot->add_option("--output", o.output, "SVG path (default stdout)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    const json cfg = load_config(o.config);
    const Resolver r(cfg);
    if (sc.fit->parsed()) return cmd_fit(o, r, out, err);
    if (sc.check->parsed()) return cmd_check(o, r, out);
    if (sc.bound->parsed()) return cmd_bound(o, r, out);
    if (sc.simulate->parsed()) return cmd_simulate(o, r, out, err);
    if (sc.plot->parsed()) return cmd_plot(o, r, out);
    err << "error: no command\n";
    return kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace kpls::cli
