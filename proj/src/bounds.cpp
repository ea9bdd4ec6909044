#include "kpls/bounds.hpp"

#include <limits>

#include "kpls/estimators.hpp"

namespace kpls {

double value_of(const NamedValues& values, const std::string& key) {
  for (const auto& [name, v] : values)
    if (name == key) return v;
  throw InvalidArgument("no value named " + key);
}

BoundConstants bound_constants(int k, double delta, double rho_min_r) {
  check_delta(delta);
  if (k < 1) throw InvalidArgument("k must be at least 1");
  if (!(rho_min_r > 0.0)) throw AssumptionViolation("assumption A.1 fails: rho_min(R) is not positive", rho_min_r);
  BoundConstants c;
  c.delta = delta;
  c.k = k;
  c.x_delta = x_delta(k, delta);
  c.g_x = g_function(c.x_delta);
  c.c_big = std::max(c.g_x, 2.0 * std::sqrt(2.0 * c.x_delta));
  c.t_threshold = 128.0 * c.x_delta / rho_min_r;
  c.c_small = 16.0 * c.c_big;
  return c;
}

namespace {

struct RSpectrum {
  double rho_r;
  double rho_min_r;
  bool a1;
};

RSpectrum r_spectrum(const PopulationKrylov& pop) {
  const auto s = eig_sym(pop.r).spectrum;
  return {s.rho_max, s.rho_min, s.rho_min > kTolEigRel * s.rho_max};
}

void require_a1(const RSpectrum& rs) {
  if (!rs.a1) throw AssumptionViolation("assumption A.1 fails: rho_min(R) is numerically zero", rs.rho_min_r);
}

double bias_term(const PopulationKrylov& pop, const SymMat& sigma_mat, const Vector& beta) {
  if (beta.size() != sigma_mat.dim()) throw InvalidArgument("beta length differs from p");
  const Vector e = beta - pop.beta_bar;
  return std::max(0.0, 2.0 * e.dot(sigma_mat.matrix() * e));
}

BoundReport assemble(Theorem th, double bias, BoundTerms terms) {
  BoundReport rep;
  rep.theorem = th;
  rep.bias = bias;
  rep.variance_bound = 0.0;
  for (const auto& [name, v] : terms.pieces) rep.variance_bound += v;
  rep.total = rep.bias + rep.variance_bound;
  rep.pieces = std::move(terms.pieces);
  rep.constants = std::move(terms.constants);
  return rep;
}

}  // namespace

AssumptionReport check_assumptions(const PopulationKrylov& pop, const SymMat& sigma_mat, double tau2,
                                   Eigen::Index n, double delta) {
  check_delta(delta);
  if (!(tau2 >= 0.0) || n < 1) throw InvalidArgument("check_assumptions needs tau2 >= 0 and n >= 1");
  const int k = pop.k;
  const RSpectrum rs = r_spectrum(pop);
  AssumptionReport rep;
  rep.rho_min_r = rs.rho_min_r;
  rep.a1_holds = rs.a1;
  rep.t_used = rs.a1 ? 128.0 * x_delta(k, delta) / rs.rho_min_r : std::numeric_limits<double>::infinity();

  const auto spec = spectral_summary(sigma_mat, true);
  const double rho = std::max(spec.rho_max, 0.0);
  const double tn = tau2 / static_cast<double>(n);
  rep.a2_signal = pop.theta.matrix().diagonal();
  rep.a2_threshold.resize(k);
  rep.a2_margins.resize(k);
  for (int i = 1; i <= k; ++i) {
    const double base = tn * k * std::pow(rho, i) * trace_power(spec, i);
    rep.a2_threshold(i - 1) = base == 0.0 ? 0.0 : rep.t_used * base;
    rep.a2_margins(i - 1) = rep.a2_signal(i - 1) - rep.a2_threshold(i - 1);
  }
  rep.a2_holds = rep.a1_holds && (rep.a2_margins.array() >= 0.0).all();
  return rep;
}

double power_form(const EigenDecomposition<double>& eig, const Vector& v, int i) {
  const Vector c = eig.vectors.transpose() * v;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    const double lam = std::max(eig.spectrum.eigenvalues(j), 0.0);
    acc += std::pow(lam, i) * c(j) * c(j);
  }
  return acc;
}

DeviationEnvelope deviation_envelope(const SymMat& sigma_mat, const Vector& sigma_pop, double tau2, Eigen::Index n,
                                     int k, double delta) {
  if (sigma_pop.size() != sigma_mat.dim()) throw InvalidArgument("deviation_envelope: dimension mismatch");
  if (!(tau2 >= 0.0) || n < 1) throw InvalidArgument("deviation_envelope needs tau2 >= 0 and n >= 1");
  DeviationEnvelope env;
  env.x = x_delta(k, delta);
  const double gx = g_function(env.x);
  const double tn = tau2 / static_cast<double>(n);
  const auto eig = eig_sym(sigma_mat);
  const auto spec = clamp_psd(eig.spectrum);
  const double rho = std::max(spec.rho_max, 0.0);
  const int m = 2 * k;
  env.t1.resize(m);
  env.t2.resize(m);
  env.xi.resize(m);
  for (int i = 0; i < m; ++i) {
    const double tr = trace_power(spec, i + 1);
    const double q = power_form(eig, sigma_pop, i);
    env.t2(i) = gx * tn * tr;
    env.t1(i) = env.t2(i) + 2.0 * std::sqrt(2.0) * std::sqrt(tn) * std::pow(rho, 0.5 * (i + 1)) *
                                std::sqrt(env.x) * std::sqrt(q);
    env.xi(i) = tn * tn * trace_power(spec, 2 * (i + 1)) + 2.0 * tn * std::pow(rho, i + 1) * q;
  }
  return env;
}

EventReport event_holds(const EigenDecomposition<double>& sigma_eig, const Vector& sigma_hat, const Vector& sigma_pop,
                        const DeviationEnvelope& env) {
  EventReport rep;
  rep.all = true;
  const Vector diff = sigma_hat - sigma_pop;
  for (Eigen::Index i = 0; i < env.t1.size(); ++i) {
    const int ii = static_cast<int>(i);
    const bool a = std::abs(power_form(sigma_eig, sigma_hat, ii) - power_form(sigma_eig, sigma_pop, ii)) <= env.t1(i);
    const bool b = power_form(sigma_eig, diff, ii) <= env.t2(i);
    rep.a.push_back(a);
    rep.b.push_back(b);
    rep.all = rep.all && a && b;
  }
  return rep;
}

EventReport event_holds(const GramSummary& gs, const PopulationKrylov& pop, const DeviationEnvelope& env) {
  return event_holds(eig_sym(gs.sigma_mat), gs.sigma_hat, pop.sigma, env);
}

QuadformTail quadform_tail_bound(const SymMat& a, const Vector& m, double t, int s, double x) {
  if (m.size() != a.dim()) throw InvalidArgument("quadform_tail_bound: dimension mismatch");
  if (!(t >= 0.0) || !(x >= 0.0) || s < 0) throw InvalidArgument("quadform_tail_bound needs t, x, s >= 0");
  const auto eig = eig_sym(a);
  const auto spec = clamp_psd(eig.spectrum);
  if (spec.rho_min < 0.0) throw InvalidArgument("quadform_tail_bound needs a PSD matrix");
  const double rho = std::max(spec.rho_max, 0.0);
  const double ms = power_form(eig, m, s);
  QuadformTail out;
  out.xi = t * t * trace_power(spec, 2 * (s + 1)) + 2.0 * t * std::pow(rho, s + 1) * ms;
  out.mean = ms + t * trace_power(spec, s + 1);
  out.lower_radius = 2.0 * std::sqrt(out.xi * x);
  out.upper_radius = out.lower_radius + 2.0 * t * std::pow(rho, s + 1) * x;
  return out;
}

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::th1: return "th1";
    case Theorem::th1_precise: return "th1_precise";
    case Theorem::th2: return "th2";
    case Theorem::th2_precise: return "th2_precise";
  }
  return "unknown";
}

BoundInputs bound_inputs(const PopulationKrylov& pop, const SymMat& sigma_mat, double tau2, Eigen::Index n) {
  if (!(tau2 >= 0.0) || n < 1) throw InvalidArgument("bounds need tau2 >= 0 and n >= 1");
  BoundInputs in;
  in.k = pop.k;
  in.tau2_over_n = tau2 / static_cast<double>(n);
  const auto spec = spectral_summary(sigma_mat, true);
  in.rho_sigma = std::max(spec.rho_max, 0.0);
  in.traces.resize(2 * pop.k);
  for (int i = 1; i <= 2 * pop.k; ++i) in.traces(i - 1) = trace_power(spec, i);
  in.krylov_norms = pop.theta.matrix().diagonal();
  in.lambda = pop.lambda;
  in.lambda_tilde = pop.lambda_tilde;
  in.lambda_bar = pop.lambda_bar;
  in.cond_d = pop.d.maxCoeff() / pop.d.minCoeff();
  const RSpectrum rs = r_spectrum(pop);
  require_a1(rs);
  in.rho_r = rs.rho_r;
  in.rho_min_r = rs.rho_min_r;
  return in;
}

namespace {

// Σ_i √Tr(Σ^{2i}) |Λ_i|
double weighted_lambda_sum(const BoundInputs& in) {
  double s = 0.0;
  for (int i = 1; i <= in.k; ++i) s += std::sqrt(in.traces(2 * i - 1)) * std::abs(in.lambda(i - 1));
  return s;
}

// Σ_i Tr(Σ^{2i}) and Σ_i Tr(Σ^i)²
double sum_even_traces(const BoundInputs& in) {
  double s = 0.0;
  for (int i = 1; i <= in.k; ++i) s += in.traces(2 * i - 1);
  return s;
}

double sum_squared_traces(const BoundInputs& in) {
  double s = 0.0;
  for (int i = 1; i <= in.k; ++i) s += in.traces(i - 1) * in.traces(i - 1);
  return s;
}

void common_constants(NamedValues& out, const BoundInputs& in, const BoundConstants& c) {
  out.emplace_back("x_delta", c.x_delta);
  out.emplace_back("g_x", c.g_x);
  out.emplace_back("C_delta", c.c_big);
  out.emplace_back("c_delta", c.c_small);
  out.emplace_back("t_delta_R", c.t_threshold);
  out.emplace_back("rho_R", in.rho_r);
  out.emplace_back("rho_min_R", in.rho_min_r);
  out.emplace_back("cond_R", in.rho_r / in.rho_min_r);
  out.emplace_back("cond_D", in.cond_d);
}

}  // namespace

BoundTerms th1_terms(const BoundInputs& in, const BoundConstants& c, bool precise) {
  BoundTerms out;
  common_constants(out.constants, in, c);
  const double C = c.c_big;
  const double rho = in.rho_r;
  const double rmin = in.rho_min_r;
  const double tn = in.tau2_over_n;
  const double lam2 = in.lambda.squaredNorm();

  if (!precise) {
    const double cond_r = rho / rmin;
    const double d1 = C * (21.0 + 72.0 * C) * cond_r * cond_r;
    const double d2 = 78.0 * C * (C + rho / 16.0) * std::pow(cond_r, 4);
    const double d = std::max(d1, d2);
    const double a = in.cond_d * lam2 * sum_even_traces(in);
    const double b = std::sqrt(in.cond_d * lam2 * sum_squared_traces(in));
    out.constants.emplace_back("D1", d1);
    out.constants.emplace_back("D2", d2);
    out.constants.emplace_back("D_delta_R", d);
    out.pieces.emplace_back("variance", d * tn * std::max(a, b));
    return out;
  }

  const double q = 1.0 / (8.0 * rmin) + rho / (rmin * rmin);
  const double cd1 = 32.0 * C + 8.0 * rmin * C * q;
  const double cd2 = 128.0 * C * C * rho * q;
  const double cd3 = 4.0 * C * C / rmin *
                     (2.0 + 32.0 * std::pow(rho / rmin, 3) + (4.0 * rho * rho / (rmin * rmin) + 1.0));
  out.constants.emplace_back("D1_precise", cd1);
  out.constants.emplace_back("D2_precise", cd2);
  out.constants.emplace_back("D3_precise", cd3);

  const double w = weighted_lambda_sum(in);
  double s2 = 0.0;
  for (int j = 1; j <= in.k; ++j) s2 += std::pow(in.rho_sigma, 2 * j) / in.krylov_norms(j - 1);
  double s3a = 0.0;
  double s3b = 0.0;
  for (int i = 1; i <= in.k; ++i) {
    s3a += in.lambda_bar(i - 1) * in.traces(i - 1);
    s3b += in.lambda_bar(i - 1) * std::pow(in.rho_sigma, i);
  }
  out.pieces.emplace_back("term1", cd1 * tn * w * w);
  out.pieces.emplace_back("term2", cd2 * in.lambda_tilde.squaredNorm() * tn * s2);
  out.pieces.emplace_back("term3", cd3 * tn * (s3a / (in.k * c.t_threshold) + s3b));
  return out;
}

BoundTerms th2_terms(const BoundInputs& in, const BoundConstants& c, const Vector& alpha, bool precise) {
  if (alpha.size() != in.k) throw InvalidArgument("ridge penalties must have length k");
  BoundTerms out;
  common_constants(out.constants, in, c);
  const double C = c.c_big;
  const double cs = c.c_small;
  const double cc = C / cs;
  const double rho = in.rho_r;
  const double rmin = in.rho_min_r;
  const double rmin2 = rmin * rmin;
  const double tn = in.tau2_over_n;

  const double c1 = 32.0 * (C + 4.0 * cc * (2.0 * cc + rho) / rmin2) + 128.0 * C * C * rho * (2.0 * cc + rho) / rmin2;
  const double c3_group = 16.0 * cc + 2.0 * rho + 64.0 * cc * rho * rho / rmin2 + 32.0 * rho * rho * rho / rmin2;
  const double c2 = c3_group * (2.0 * C / rmin2) * (1.0 / cs + 1.0);
  const double c3 = 128.0 * (C * C / cs) * (2.0 * cc + rho) * rho / rmin2;
  const double bias_coef = 4.0 * (1.0 / rmin + 1.0 / rmin2);
  out.constants.emplace_back("C1", c1);
  out.constants.emplace_back("C2", c2);
  out.constants.emplace_back("C3", c3);
  out.constants.emplace_back("ridge_bias_coef", c3 + bias_coef);
  out.constants.emplace_back("D_prime_min", std::max({c1, c2, c3 + bias_coef}));

  double alpha_lambda = 0.0;
  for (int j = 0; j < in.k; ++j) alpha_lambda += alpha(j) * in.lambda(j) * in.lambda(j);

  if (!precise) {
    const double lam = in.lambda.norm();
    out.pieces.emplace_back("c1_term", c1 * tn * in.cond_d * lam * lam * sum_even_traces(in));
    out.pieces.emplace_back("c2_term", c2 * tn * std::sqrt(in.cond_d) * lam * std::sqrt(sum_squared_traces(in)));
    out.pieces.emplace_back("ridge_bias", (c3 + bias_coef) * alpha_lambda);
    return out;
  }

  // The variance part of the decomposition carries a factor 4.
  const double p1 = 4.0 * 32.0 * (C + 4.0 * cc * (2.0 * cc + rho) / rmin2);
  const double p2 = 4.0 * 128.0 * C * C * rho * (2.0 * cc + rho) / rmin2;
  const double p3 = 4.0 * c3_group * 2.0 * C / rmin2;
  const double p4 = 4.0 * (32.0 * cc + 64.0 * rho * rho / rmin2 * (2.0 * cc + rho)) / rmin2;
  const double p5 = 4.0 * c3;
  out.constants.emplace_back("Cp1", p1);
  out.constants.emplace_back("Cp2", p2);
  out.constants.emplace_back("Cp3", p3);
  out.constants.emplace_back("Cp4_shift", p4);
  out.constants.emplace_back("Cp4_alpha", p5);

  const double w = weighted_lambda_sum(in);
  double s2 = 0.0;
  double shift = 0.0;
  double s3 = 0.0;
  for (int j = 1; j <= in.k; ++j) {
    const double dj = in.krylov_norms(j - 1);
    const double aj = alpha(j - 1);
    s2 += std::pow(in.rho_sigma, 2 * j) / (dj + aj);
    shift += aj * aj / (dj + aj) * in.lambda(j - 1) * in.lambda(j - 1);
    s3 += in.lambda_bar(j - 1) * (in.traces(j - 1) / (in.k * cs) + std::pow(in.rho_sigma, j));
  }
  out.pieces.emplace_back("c1_term", p1 * tn * w * w);
  out.pieces.emplace_back("c2_term", p2 * in.lambda_tilde.squaredNorm() * tn * s2);
  out.pieces.emplace_back("c3_term", p3 * tn * s3);
  out.pieces.emplace_back("c4_shift_term", p4 * shift);
  out.pieces.emplace_back("c4_alpha_term", p5 * alpha_lambda);
  out.pieces.emplace_back("ridge_bias", bias_coef * shift);
  return out;
}

BoundReport bound_th1(const PopulationKrylov& pop, const SymMat& sigma_mat, const Vector& beta, double tau2,
                      Eigen::Index n, double delta, bool precise) {
  const BoundInputs in = bound_inputs(pop, sigma_mat, tau2, n);
  const BoundConstants c = bound_constants(pop.k, delta, in.rho_min_r);
  const AssumptionReport ar = check_assumptions(pop, sigma_mat, tau2, n, delta);
  BoundReport rep = assemble(precise ? Theorem::th1_precise : Theorem::th1, bias_term(pop, sigma_mat, beta),
                             th1_terms(in, c, precise));
  rep.a2_holds = ar.a2_holds;
  rep.certified = ar.a2_holds;
  return rep;
}

BoundReport bound_th2(const PopulationKrylov& pop, const SymMat& sigma_mat, const Vector& beta, double tau2,
                      Eigen::Index n, double delta, bool precise, const std::optional<Vector>& overrides) {
  const BoundInputs in = bound_inputs(pop, sigma_mat, tau2, n);
  const BoundConstants c = bound_constants(pop.k, delta, in.rho_min_r);
  const auto spec = spectral_summary(sigma_mat, true);
  const Vector theoretical = ridge_alpha(spec, pop.k, tau2, n, Vector::Constant(pop.k, c.c_small));
  const Vector alpha = overrides ? ridge_alpha(spec, pop.k, tau2, n, *overrides) : theoretical;
  const AssumptionReport ar = check_assumptions(pop, sigma_mat, tau2, n, delta);
  BoundReport rep = assemble(precise ? Theorem::th2_precise : Theorem::th2, bias_term(pop, sigma_mat, beta),
                             th2_terms(in, c, alpha, precise));
  rep.alpha = alpha;
  rep.a2_holds = ar.a2_holds;
  rep.certified = (alpha.array() >= theoretical.array()).all();
  return rep;
}

SymMat ridge_correlation(const SymMat& theta, const Vector& alpha) {
  if (alpha.size() != theta.dim()) throw InvalidArgument("ridge_correlation: dimension mismatch");
  Matrix m = theta.matrix();
  m.diagonal() += alpha;
  return correlation_form(SymMat(m), m.diagonal());
}

double ridge_rho_min_lower(const SymMat& theta, const Vector& alpha, double rho_min_r) {
  const Vector d = theta.matrix().diagonal();
  const double m = (alpha.array() / (d.array() + alpha.array())).minCoeff();
  return rho_min_r + (1.0 - rho_min_r) * m;
}

}  // namespace kpls
