#include "kpls/estimators.hpp"

namespace kpls {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::iterative: return "iterative";
    case Variant::krylov: return "krylov";
    case Variant::ridge: return "ridge";
    case Variant::oracle: return "oracle";
  }
  return "unknown";
}

PlsFit fit_pls_krylov(const EmpiricalKrylov& emp, double rcond_min) {
  PlsFit fit;
  fit.k = emp.k;
  fit.k_effective = emp.k;
  fit.variant = Variant::krylov;
  try {
    const auto sol = solve_spd(emp.theta_hat, emp.rhs(), rcond_min);
    fit.coordinates = sol.x;
    fit.rcond_theta = sol.rcond;
  } catch (const SingularSystem& e) {
    throw SingularKrylov("Krylov Gram matrix is numerically singular; consider the ridge variant", e.rcond());
  } catch (const NotPositiveDefinite&) {
    throw SingularKrylov("Krylov Gram matrix is numerically singular; consider the ridge variant", 0.0);
  }
  fit.beta_hat = emp.g_hat * fit.coordinates;
  return fit;
}

PlsFit fit_pls_krylov(const GramSummary& gs, int k, double rcond_min) {
  return fit_pls_krylov(build_empirical_krylov(gs, k), rcond_min);
}

Vector ridge_alpha(const SpectralSummary<double>& sigma_spec, int k, double tau2, Eigen::Index n,
                   const Vector& c_per_index) {
  if (c_per_index.size() != k) throw InvalidArgument("ridge constants must have length k");
  if (!(tau2 >= 0.0)) throw InvalidArgument("tau2 must be non-negative");
  if ((c_per_index.array() < 0.0).any()) throw InvalidArgument("ridge constants must be non-negative");
  const double rho = std::max(sigma_spec.rho_max, 0.0);
  const double scale = k * tau2 / static_cast<double>(n);
  Vector alpha(k);
  for (int i = 1; i <= k; ++i)
    alpha(i - 1) = c_per_index(i - 1) * scale * std::pow(rho, i) * trace_power(sigma_spec, i);
  return alpha;
}

RidgeSchedule ridge_schedule(const SymMat& sigma_mat, Eigen::Index n, int k, double tau2, double delta,
                             const std::optional<Vector>& overrides) {
  RidgeSchedule s;
  s.delta = delta;
  s.c_delta = c_small_delta(k, delta);
  s.overrides = overrides;
  const Vector c = overrides ? *overrides : Vector::Constant(k, s.c_delta);
  s.alpha = ridge_alpha(spectral_summary(sigma_mat, true), k, tau2, n, c);
  return s;
}

RidgeSchedule ridge_schedule(const GramSummary& gs, int k, double tau2, double delta,
                             const std::optional<Vector>& overrides) {
  return ridge_schedule(gs.sigma_mat, gs.n, k, tau2, delta, overrides);
}

PlsFit fit_pls_ridge(const EmpiricalKrylov& emp, const RidgeSchedule& schedule, double rcond_min) {
  if (schedule.alpha.size() != emp.k) throw InvalidArgument("ridge schedule length differs from k");
  if ((schedule.alpha.array() < 0.0).any()) throw InvalidArgument("ridge penalties must be non-negative");
  if ((schedule.alpha.array() == 0.0).all()) {
    PlsFit fit = fit_pls_krylov(emp, rcond_min);
    fit.variant = Variant::ridge;
    fit.alpha = schedule.alpha;
    return fit;
  }
  PlsFit fit;
  fit.k = emp.k;
  fit.k_effective = emp.k;
  fit.variant = Variant::ridge;
  fit.alpha = schedule.alpha;
  Matrix m = emp.theta_hat.matrix();
  m.diagonal() += schedule.alpha;
  const auto sol = solve_spd(SymMat(m), emp.rhs(), rcond_min);
  fit.coordinates = sol.x;
  fit.rcond_theta = sol.rcond;
  fit.beta_hat = emp.g_hat * fit.coordinates;
  return fit;
}

PlsFit fit_pls_ridge(const GramSummary& gs, int k, const RidgeSchedule& schedule, double rcond_min) {
  return fit_pls_ridge(build_empirical_krylov(gs, k), schedule, rcond_min);
}

PlsFit fit_oracle(const EmpiricalKrylov& emp, const PopulationKrylov& pop) {
  if (pop.k != emp.k) throw InvalidArgument("fit_oracle: k mismatch");
  PlsFit fit;
  fit.k = emp.k;
  fit.k_effective = emp.k;
  fit.variant = Variant::oracle;
  fit.coordinates = pop.lambda;
  fit.rcond_theta = pop.rcond;
  fit.beta_hat = emp.g_hat * pop.lambda;
  return fit;
}

PlsFit fit_oracle(const GramSummary& gs, const PopulationKrylov& pop, int k) {
  return fit_oracle(build_empirical_krylov(gs, k), pop);
}

double prediction_risk(const Matrix& x, const Vector& beta_true, const Vector& beta_hat) {
  if (beta_true.size() != x.cols() || beta_hat.size() != x.cols())
    throw InvalidArgument("prediction_risk: dimension mismatch");
  return (x * (beta_hat - beta_true)).squaredNorm() / static_cast<double>(x.rows());
}

double prediction_risk(const Matrix& x, const Vector& beta_true, const PlsFit& fit) {
  return prediction_risk(x, beta_true, fit.beta_hat);
}

double ridge_objective(const Matrix& x, const Vector& y, const Matrix& g_hat, const Vector& alpha, const Vector& u) {
  const Vector r = y - x * (g_hat * u);
  return r.squaredNorm() / static_cast<double>(x.rows()) + u.dot(alpha.cwiseProduct(u));
}

double ridge_stationarity_residual(const EmpiricalKrylov& emp, const Vector& alpha, const Vector& u) {
  return (emp.theta_hat.matrix() * u + alpha.cwiseProduct(u) - emp.rhs()).norm();
}

double plugin_tau2(const Dataset& d) {
  d.validate();
  if (d.n() <= d.p()) throw InvalidArgument("plug-in noise variance needs n > p");
  const Eigen::ColPivHouseholderQR<Matrix> qr(d.x);
  if (qr.rank() < d.p()) throw InvalidArgument("plug-in noise variance needs a full-rank design");
  const Vector resid = d.y - d.x * qr.solve(d.y);
  return resid.squaredNorm() / static_cast<double>(d.n() - d.p());
}

}  // namespace kpls
