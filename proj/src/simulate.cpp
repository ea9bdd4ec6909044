#include "kpls/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "kpls/estimators.hpp"
#include "kpls/krylov.hpp"
#include "kpls/pls_iter.hpp"

namespace kpls {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            f(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

Vector spectrum_of(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Vector pair(double a, double b) { return spectrum_of({a, b}); }

}  // namespace

void ScenarioSpec::validate() const {
  if (spectrum.size() < 1 || (spectrum.array() <= 0.0).any()) throw InvalidArgument("scenario spectrum must be positive");
  if (n < 1) throw InvalidArgument("scenario n must be positive");
  if (reps < 1) throw InvalidArgument("scenario reps must be positive");
  if (!(tau2 > 0.0)) throw InvalidArgument("scenario tau2 must be positive");
  if (k < 1 || k > p()) throw InvalidArgument("scenario k must satisfy 1 <= k <= p");
  if (grid.empty()) throw InvalidArgument("scenario grid is empty");
  if (beta_rule.empty()) throw InvalidArgument("scenario beta rule is empty");
  for (const auto& t : beta_rule)
    if (t.index < 0 || t.index >= p()) throw InvalidArgument("beta rule index out of range");
  if (ridge_overrides && ridge_overrides->size() != k) throw InvalidArgument("ridge constants must have length k");
  check_delta(delta);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw InvalidArgument("log_grid needs 0 < lo <= hi and count >= 1");
  std::vector<double> g;
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < count; ++i)
    g.push_back(count == 1 ? lo : std::pow(10.0, a + (b - a) * i / (count - 1)));
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
  if (!(hi >= lo) || count < 1) throw InvalidArgument("linear_grid needs lo <= hi and count >= 1");
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return g;
}

std::vector<std::string> scenario_ids() { return {"s1a", "s1b", "s2a", "s2b", "s3"}; }

ScenarioSpec scenario_preset(const std::string& id) {
  ScenarioSpec s;
  s.id = id;
  if (id == "s1a" || id == "s1b" || id == "s2a" || id == "s2b") {
    s.param_name = "eta";
    s.grid = log_grid(1e-2, 1e2, 25);
  }
  if (id == "s1a") {
    s.spectrum = spectrum_of({6.1, 6.0, 0.5, 0.5, 0.5});
    s.beta_rule = {{0, 0.0, 1.0}, {1, 0.0, 1.0}};
  } else if (id == "s1b") {
    s.spectrum = spectrum_of({0.9, 0.3, 0.2, 0.2, 0.2});
    s.beta_rule = {{0, 0.0, 1.0}, {1, 0.0, 1.0}};
  } else if (id == "s2a") {
    s.spectrum = spectrum_of({3.0, 2.0, 2.0, 2.0, 1.0});
    s.beta_rule = {{3, 0.0, 1.0}, {4, 0.0, 1.0}};
  } else if (id == "s2b") {
    s.spectrum = spectrum_of({4.0, 2.0, 2.0, 2.0, 1.0});
    s.beta_rule = {{3, 0.0, 1.0}, {4, 0.0, 1.0}};
  } else if (id == "s3") {
    s.spectrum = spectrum_of({3.0, 2.0, 0.06, 0.05, 0.04});
    s.beta_rule = {{0, 0.0, 1.0}, {1, 1.0, 0.0}, {4, 1.0, -1.0}};
    s.param_name = "nu";
    s.grid = linear_grid(0.0, 1.0, 21);
  } else {
    throw InvalidArgument("unknown scenario id '" + id + "'");
  }
  if (id != "s3") s.ridge_overrides = ridge_preset(id, "default");
  return s;
}

Vector ridge_preset(const std::string& scenario_id, const std::string& name) {
  if (name == "default") {
    if (scenario_id == "s1a") return pair(0.08, 0.05);
    if (scenario_id == "s1b") return pair(0.02, 0.02);
    if (scenario_id == "s2a" || scenario_id == "s2b") return pair(0.002, 0.0005);
    throw InvalidArgument("no default ridge constants for scenario '" + scenario_id + "'");
  }
  if (scenario_id != "s1a") throw InvalidArgument("penalization-level presets exist for s1a only");
  if (name == "low") return pair(0.002, 0.002);
  if (name == "low-alt") return pair(0.004, 0.004);
  if (name == "high") return pair(0.2, 0.2);
  if (name == "high-alt") return pair(0.4, 0.4);
  throw InvalidArgument("unknown ridge preset '" + name + "'");
}

Vector scenario_beta(const ScenarioSpec& spec, double param) {
  Vector beta = Vector::Zero(spec.p());
  for (const auto& t : spec.beta_rule) beta(t.index) += t.offset + t.slope * param;
  return beta;
}

const EstimatorCurve& MseCurve::estimator(const std::string& name) const {
  for (const auto& e : estimators)
    if (e.name == name) return e;
  throw InvalidArgument("curve has no estimator '" + name + "'");
}

std::vector<double> MseCurve::variance(const std::string& name) const {
  const auto& e = estimator(name);
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) v[j] = e.mse[j] - bias[j];
  return v;
}

namespace {

struct SharedDesign {
  Matrix x;
  SymMat sigma;
  std::vector<std::string> warnings;
};

SharedDesign make_design(const ScenarioSpec& spec) {
  auto d = gen_design(spec.n, spec.spectrum, spec.seed, spec.exact_design);
  SharedDesign out;
  out.sigma = SymMat(d.x.transpose() * d.x / static_cast<double>(spec.n));
  out.x = std::move(d.x);
  out.warnings = std::move(d.warnings);
  return out;
}

std::optional<PopulationKrylov> try_population(const SymMat& sigma, const Vector& beta, int k) {
  try {
    return build_population_krylov(sigma, beta, k);
  } catch (const PopulationDegenerate&) {
    return std::nullopt;
  }
}

double finite_or_nan(double v) { return std::isfinite(v) ? v : kNaN; }

}  // namespace

MseCurve run_scenario(const ScenarioSpec& spec, const std::vector<std::string>& estimators, unsigned threads) {
  spec.validate();
  if (estimators.empty()) throw InvalidArgument("no estimators requested");
  for (const auto& e : estimators)
    if (std::find(known_estimators().begin(), known_estimators().end(), e) == known_estimators().end())
      throw InvalidArgument("unknown estimator '" + e + "'");

  const SharedDesign design = make_design(spec);
  const Matrix& x = design.x;
  const double nd = static_cast<double>(spec.n);
  const bool need_ridge = std::find(estimators.begin(), estimators.end(), "ridge") != estimators.end();
  const RidgeSchedule schedule = need_ridge
                                     ? ridge_schedule(design.sigma, spec.n, spec.k, spec.tau2, spec.delta,
                                                      spec.ridge_overrides)
                                     : RidgeSchedule{};

  const std::size_t G = spec.grid.size();
  const std::size_t E = estimators.size();
  const std::size_t N = static_cast<std::size_t>(spec.reps);

  MseCurve curve;
  curve.scenario = spec.id;
  curve.param_name = spec.param_name;
  curve.grid = spec.grid;
  curve.warnings = design.warnings;
  curve.bias.assign(G, kNaN);

  std::vector<Vector> betas(G);
  std::vector<std::optional<PopulationKrylov>> pops(G);
  for (std::size_t j = 0; j < G; ++j) {
    betas[j] = scenario_beta(spec, spec.grid[j]);
    pops[j] = try_population(design.sigma, betas[j], spec.k);
    if (pops[j]) curve.bias[j] = (x * (betas[j] - pops[j]->beta_bar)).squaredNorm() / nd;
  }

  std::vector<double> risk(G * E * N, kNaN);
  parallel_for(G * N, threads, [&](std::size_t idx) {
    const std::size_t j = idx / N;
    const std::size_t r = idx % N;
    const ModelSpec model{betas[j], spec.tau2, spec.seed};
    const Vector y = gen_response(x, model, r);
    const GramSummary gs = gram_summary(x, y, design.sigma);
    const EmpiricalKrylov emp = build_empirical_krylov(gs, spec.k);
    for (std::size_t e = 0; e < E; ++e) {
      const std::string& name = estimators[e];
      double v = kNaN;
      try {
        if (name == "pls") {
          v = prediction_risk(x, betas[j], fit_pls_krylov(emp, kHarnessRcondMin));
        } else if (name == "ridge") {
          v = prediction_risk(x, betas[j], fit_pls_ridge(emp, schedule, kHarnessRcondMin));
        } else if (name == "oracle") {
          if (pops[j]) v = prediction_risk(x, betas[j], fit_oracle(emp, *pops[j]));
        } else if (name == "iterative") {
          v = prediction_risk(x, betas[j], fit_pls_iterative(Dataset(x, y), spec.k).fit);
        }
      } catch (const NumericalError&) {
        v = kNaN;
      }
      risk[(j * E + e) * N + r] = finite_or_nan(v);
    }
  });

  for (std::size_t e = 0; e < E; ++e) {
    EstimatorCurve ec;
    ec.name = estimators[e];
    for (std::size_t j = 0; j < G; ++j) {
      const double* base = &risk[(j * E + e) * N];
      double sum = 0.0;
      int m = 0;
      for (std::size_t r = 0; r < N; ++r)
        if (!std::isnan(base[r])) {
          sum += base[r];
          ++m;
        }
      const double mean = m > 0 ? sum / m : kNaN;
      double ss = 0.0;
      for (std::size_t r = 0; r < N; ++r)
        if (!std::isnan(base[r])) ss += (base[r] - mean) * (base[r] - mean);
      ec.mse.push_back(mean);
      ec.stderr_mc.push_back(m > 1 ? std::sqrt(ss / (m - 1) / m) : (m == 1 ? 0.0 : kNaN));
      ec.singular_count.push_back(static_cast<int>(N) - m);
      ec.reps_used.push_back(m);
    }
    curve.estimators.push_back(std::move(ec));
  }
  return curve;
}

MseCurve bias_variance_curve(const ScenarioSpec& spec, unsigned threads) {
  if (spec.param_name != "nu") throw InvalidArgument("bias_variance_curve expects the nu parameterization");
  return run_scenario(spec, {"pls"}, threads);
}

CoverageTarget parse_coverage_target(const std::string& s) {
  if (s == "events") return CoverageTarget::events;
  if (s == "lemma_rhat") return CoverageTarget::lemma_rhat;
  if (s == "th1") return CoverageTarget::th1;
  if (s == "th2") return CoverageTarget::th2;
  throw InvalidArgument("unknown coverage target '" + s + "'");
}

std::string to_string(CoverageTarget t) {
  switch (t) {
    case CoverageTarget::events: return "events";
    case CoverageTarget::lemma_rhat: return "lemma_rhat";
    case CoverageTarget::th1: return "th1";
    case CoverageTarget::th2: return "th2";
  }
  return "unknown";
}

CoverageResult coverage_experiment(const ScenarioSpec& spec, double param, CoverageTarget target, unsigned threads,
                                   CoverageOptions options) {
  spec.validate();
  const SharedDesign design = make_design(spec);
  const Matrix& x = design.x;
  const Vector beta = scenario_beta(spec, param);
  const PopulationKrylov pop = build_population_krylov(design.sigma, beta, spec.k);
  const AssumptionReport ar = check_assumptions(pop, design.sigma, spec.tau2, spec.n, spec.delta);

  CoverageResult res;
  res.target = target;
  res.param = param;
  res.a2_holds = ar.a2_holds;
  res.details.emplace_back("rho_min_R", ar.rho_min_r);
  for (Eigen::Index i = 0; i < ar.a2_margins.size(); ++i)
    res.details.emplace_back("a2_margin_" + std::to_string(i + 1), ar.a2_margins(i));

  if (target == CoverageTarget::th1 && options.enforce_preconditions && !ar.a2_holds) {
    std::ostringstream msg;
    msg << "assumption A.2 fails at " << spec.param_name << "=" << format_double(param) << ": margins";
    for (Eigen::Index i = 0; i < ar.a2_margins.size(); ++i) msg << ' ' << format_double(ar.a2_margins(i));
    throw PreconditionError(msg.str());
  }

  const auto sigma_eig = eig_sym(design.sigma);
  const auto r_spec = eig_sym(pop.r).spectrum;
  DeviationEnvelope env;
  BoundReport bound;
  RidgeSchedule schedule;
  switch (target) {
    case CoverageTarget::events:
      env = deviation_envelope(design.sigma, pop.sigma, spec.tau2, spec.n, spec.k, spec.delta);
      break;
    case CoverageTarget::lemma_rhat:
      res.certified = ar.a2_holds;
      break;
    case CoverageTarget::th1:
      bound = bound_th1(pop, design.sigma, beta, spec.tau2, spec.n, spec.delta, options.precise);
      break;
    case CoverageTarget::th2:
      bound = bound_th2(pop, design.sigma, beta, spec.tau2, spec.n, spec.delta, options.precise);
      schedule = ridge_schedule(design.sigma, spec.n, spec.k, spec.tau2, spec.delta);
      break;
  }
  if (target == CoverageTarget::events) res.certified = true;
  if (target == CoverageTarget::th1 || target == CoverageTarget::th2) {
    res.certified = bound.certified;
    res.details.emplace_back("bound_total", bound.total);
  }

  const std::size_t N = static_cast<std::size_t>(spec.reps);
  std::vector<char> hit(N, 0);
  parallel_for(N, threads, [&](std::size_t r) {
    const ModelSpec model{beta, spec.tau2, spec.seed};
    const Vector y = gen_response(x, model, r);
    const GramSummary gs = gram_summary(x, y, design.sigma);
    bool ok = false;
    switch (target) {
      case CoverageTarget::events:
        ok = event_holds(sigma_eig, gs.sigma_hat, pop.sigma, env).all;
        break;
      case CoverageTarget::lemma_rhat: {
        const auto diag = rhat_diagnostic(pop, build_empirical_krylov(gs, spec.k));
        ok = diag.rho_min_rhat >= 0.5 * r_spec.rho_min && diag.rho_dev <= r_spec.rho_max;
        break;
      }
      case CoverageTarget::th1:
        try {
          ok = prediction_risk(x, beta, fit_pls_krylov(build_empirical_krylov(gs, spec.k), kHarnessRcondMin)) <=
               bound.total;
        } catch (const NumericalError&) {
          ok = false;
        }
        break;
      case CoverageTarget::th2:
        try {
          ok = prediction_risk(x, beta, fit_pls_ridge(build_empirical_krylov(gs, spec.k), schedule,
                                                      kHarnessRcondMin)) <= bound.total;
        } catch (const NumericalError&) {
          ok = false;
        }
        break;
    }
    hit[r] = ok ? 1 : 0;
  });

  for (char h : hit) res.hits += h;
  res.reps = spec.reps;
  res.fraction = static_cast<double>(res.hits) / res.reps;
  res.stderr_mc = std::sqrt(res.fraction * (1.0 - res.fraction) / res.reps);
  res.radius = 2.0 * res.stderr_mc;
  return res;
}

void write_results_csv(std::ostream& out, const MseCurve& curve) {
  out << "scenario,param_name,param_value,estimator,mse,stderr,bias,variance,singular_count,reps\n";
  for (std::size_t j = 0; j < curve.grid.size(); ++j)
    for (const auto& e : curve.estimators)
      out << curve.scenario << ',' << curve.param_name << ',' << format_double(curve.grid[j]) << ',' << e.name << ','
          << format_double(e.mse[j]) << ',' << format_double(e.stderr_mc[j]) << ','
          << format_double(curve.bias[j]) << ',' << format_double(e.mse[j] - curve.bias[j]) << ','
          << e.singular_count[j] << ',' << e.reps_used[j] << '\n';
}

namespace {

double parse_number(const std::string& f, std::size_t row, std::size_t col) {
  double v = 0.0;
  const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size())
    throw ParseError("malformed number '" + f + "'", row, col);
  return v;
}

int parse_int(const std::string& f, std::size_t row, std::size_t col) {
  int v = 0;
  const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size())
    throw ParseError("malformed integer '" + f + "'", row, col);
  return v;
}

}  // namespace

MseCurve read_results_csv(std::istream& in) {
  static const std::string header = "scenario,param_name,param_value,estimator,mse,stderr,bias,variance,singular_count,reps";
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty results file", 1, 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw ParseError("unexpected results header", 1, 1);

  MseCurve curve;
  std::map<std::string, std::size_t> est_index;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 10) throw ParseError("expected 10 fields", row, f.size());
    if (curve.scenario.empty()) {
      curve.scenario = f[0];
      curve.param_name = f[1];
    }
    const double param = parse_number(f[2], row, 3);
    if (curve.grid.empty() || curve.grid.back() != param) {
      curve.grid.push_back(param);
      curve.bias.push_back(parse_number(f[6], row, 7));
    }
    auto it = est_index.find(f[3]);
    if (it == est_index.end()) {
      it = est_index.emplace(f[3], curve.estimators.size()).first;
      curve.estimators.push_back(EstimatorCurve{f[3], {}, {}, {}, {}});
    }
    auto& e = curve.estimators[it->second];
    e.mse.push_back(parse_number(f[4], row, 5));
    e.stderr_mc.push_back(parse_number(f[5], row, 6));
    e.singular_count.push_back(parse_int(f[8], row, 9));
    e.reps_used.push_back(parse_int(f[9], row, 10));
  }
  for (const auto& e : curve.estimators)
    if (e.mse.size() != curve.grid.size()) throw ParseError("ragged results table", row, 4);
  return curve;
}

namespace {

struct Series {
  std::string label;
  std::vector<double> y;
  bool dashed = false;
};

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  return t;
}

}  // namespace

std::string render_svg(const MseCurve& curve) {
  const bool log_x = curve.param_name == "eta" &&
                     std::all_of(curve.grid.begin(), curve.grid.end(), [](double v) { return v > 0.0; });
  std::vector<Series> series;
  for (const auto& e : curve.estimators) series.push_back({e.name + " risk", e.mse, false});
  if (curve.param_name == "nu") {
    series.push_back({"bias", curve.bias, true});
    for (const auto& e : curve.estimators) series.push_back({e.name + " variance", curve.variance(e.name), true});
  }

  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  for (const auto& s : series)
    for (double v : s.y)
      if (std::isfinite(v)) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
      }
  if (!std::isfinite(ymin)) {
    ymin = 0.0;
    ymax = 1.0;
  }
  const bool log_y = ymin > 0.0 && ymax / ymin > 100.0;
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
  auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
  double y0 = log_y ? std::floor(ty(ymin)) : ymin;
  double y1 = log_y ? std::ceil(ty(ymax)) : ymax;
  if (!log_y) {
    const double pad = 0.05 * (y1 - y0 > 0.0 ? y1 - y0 : std::max(std::abs(y1), 1.0));
    y0 -= pad;
    y1 += pad;
  }
  if (y1 <= y0) y1 = y0 + 1.0;
  double x0 = tx(*std::min_element(curve.grid.begin(), curve.grid.end()));
  double x1 = tx(*std::max_element(curve.grid.begin(), curve.grid.end()));
  if (x1 <= x0) x1 = x0 + 1.0;

  const double W = 760, H = 480, L = 80, R = 190, T = 40, B = 60;
  const double pw = W - L - R, ph = H - T - B;
  auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return T + ph - (ty(v) - y0) / (y1 - y0) * ph; };
  auto pyt = [&](double t) { return T + ph - (t - y0) / (y1 - y0) * ph; };
  auto pxt = [&](double t) { return L + (t - x0) / (x1 - x0) * pw; };

  static const char* palette[] = {"#1b6ca8", "#d1495b", "#2e8b57", "#edae49", "#6a4c93", "#00798c", "#8c564b"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  o << "<text x=\"" << fmt(L + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << curve.scenario
    << "</text>\n";
  o << "<rect x=\"" << fmt(L) << "\" y=\"" << fmt(T) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  std::vector<double> xt;
  if (log_x) {
    for (double t = std::ceil(x0 - 1e-9); t <= x1 + 1e-9; t += 1.0) xt.push_back(t);
  } else {
    xt = linear_ticks(x0, x1);
  }
  for (double t : xt) {
    const double X = pxt(t);
    o << "<line x1=\"" << fmt(X) << "\" y1=\"" << fmt(T + ph) << "\" x2=\"" << fmt(X) << "\" y2=\"" << fmt(T + ph + 5)
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fmt(X) << "\" y=\"" << fmt(T + ph + 20) << "\" text-anchor=\"middle\">"
      << (log_x ? fmt(std::pow(10.0, t), "%g") : fmt(t, "%g")) << "</text>\n";
  }
  std::vector<double> yt;
  if (log_y) {
    for (double t = y0; t <= y1 + 1e-9; t += 1.0) yt.push_back(t);
  } else {
    yt = linear_ticks(y0, y1);
  }
  for (double t : yt) {
    const double Y = pyt(t);
    o << "<line x1=\"" << fmt(L - 5) << "\" y1=\"" << fmt(Y) << "\" x2=\"" << fmt(L) << "\" y2=\"" << fmt(Y)
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fmt(L - 8) << "\" y=\"" << fmt(Y + 4) << "\" text-anchor=\"end\">"
      << (log_y ? fmt(std::pow(10.0, t), "%g") : fmt(t, "%.3g")) << "</text>\n";
  }
  o << "<text x=\"" << fmt(L + pw / 2) << "\" y=\"" << fmt(H - 15) << "\" text-anchor=\"middle\">"
    << curve.param_name << (log_x ? " (log scale)" : "") << "</text>\n";
  o << "<text x=\"18\" y=\"" << fmt(T + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << fmt(T + ph / 2) << ")\">" << (log_y ? "MSE (log scale)" : "MSE") << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = palette[s % (sizeof palette / sizeof *palette)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (series[s].dashed) o << " stroke-dasharray=\"6 4\"";
    o << " points=\"";
    bool first = true;
    for (std::size_t j = 0; j < curve.grid.size(); ++j) {
      const double v = series[s].y[j];
      if (!std::isfinite(v) || (log_y && v <= 0.0)) continue;
      o << (first ? "" : " ") << fmt(px(curve.grid[j])) << ',' << fmt(std::clamp(py(v), T, T + ph));
      first = false;
    }
    o << "\"/>\n";
    const double ly = T + 10 + 20.0 * s;
    o << "<line x1=\"" << fmt(L + pw + 15) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(L + pw + 45) << "\" y2=\""
      << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"" << (series[s].dashed ? " stroke-dasharray=\"6 4\"" : "")
      << "/>\n";
    o << "<text x=\"" << fmt(L + pw + 52) << "\" y=\"" << fmt(ly + 4) << "\">" << series[s].label << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace kpls
