#include "kpls/krylov.hpp"

namespace kpls {

namespace {

void check_k(int k, Eigen::Index p) {
  if (k < 1 || k > p) throw InvalidArgument("k must satisfy 1 <= k <= p");
}

}  // namespace

Matrix krylov_basis(const SymMat& sigma_mat, const Vector& s, int k) {
  check_k(k, sigma_mat.dim());
  if (s.size() != sigma_mat.dim()) throw InvalidArgument("krylov_basis: dimension mismatch");
  Matrix g(s.size(), k);
  g.col(0) = s;
  for (int i = 1; i < k; ++i) g.col(i) = sigma_mat.matrix() * g.col(i - 1);
  return g;
}

SymMat krylov_gram(const SymMat& sigma_mat, const Matrix& g) {
  return SymMat(g.transpose() * sigma_mat.matrix() * g);
}

SymMat krylov_gram_moments(const SymMat& sigma_mat, const Vector& s, int k) {
  check_k(k, sigma_mat.dim());
  // v_m = Σ^m s for m = 0..k, moment m = v_⌊m/2⌋ · v_⌈m/2⌉
  std::vector<Vector> v{s};
  for (int m = 1; m <= k; ++m) v.push_back(sigma_mat.matrix() * v.back());
  Matrix theta(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const int m = i + j + 1;
      theta(i, j) = v[m / 2].dot(v[(m + 1) / 2]);
    }
  return SymMat(theta);
}

SymMat correlation_form(const SymMat& theta, const Vector& d) {
  const Vector s = d.array().rsqrt();
  Matrix r = s.asDiagonal() * theta.matrix() * s.asDiagonal();
  r.diagonal().setOnes();
  return SymMat(r);
}

EmpiricalKrylov build_empirical_krylov(const SymMat& sigma_mat, const Vector& sigma_hat, int k) {
  EmpiricalKrylov emp;
  emp.k = k;
  emp.g_hat = krylov_basis(sigma_mat, sigma_hat, k);
  emp.theta_hat = krylov_gram(sigma_mat, emp.g_hat);
  return emp;
}

EmpiricalKrylov build_empirical_krylov(const GramSummary& gs, int k) {
  return build_empirical_krylov(gs.sigma_mat, gs.sigma_hat, k);
}

PopulationKrylov build_population_krylov(const SymMat& sigma_mat, const Vector& beta, int k,
                                         double rcond_min) {
  PopulationKrylov pop;
  pop.k = k;
  pop.sigma = population_sigma(sigma_mat, beta);
  pop.g = krylov_basis(sigma_mat, pop.sigma, k);
  pop.theta = krylov_gram(sigma_mat, pop.g);
  const Vector rhs = pop.g.transpose() * pop.sigma;
  try {
    const auto sol = solve_spd(pop.theta, rhs, rcond_min);
    pop.lambda = sol.x;
    pop.rcond = sol.rcond;
  } catch (const SingularSystem& e) {
    throw PopulationDegenerate("population Krylov Gram matrix is singular", e.rcond());
  } catch (const NotPositiveDefinite&) {
    throw PopulationDegenerate("population Krylov Gram matrix is not positive definite", 0.0);
  }
  pop.d = pop.theta.matrix().diagonal();
  pop.r = correlation_form(pop.theta, pop.d);
  pop.beta_bar = pop.g * pop.lambda;
  pop.lambda_tilde = pop.d.array().sqrt().matrix().cwiseProduct(pop.lambda);
  pop.lambda_bar = rhs.cwiseQuotient(pop.d);
  return pop;
}

RhatDiagnostic rhat_diagnostic(const PopulationKrylov& pop, const EmpiricalKrylov& emp) {
  if (pop.k != emp.k) throw InvalidArgument("rhat_diagnostic: k mismatch");
  RhatDiagnostic out;
  const Vector s = pop.d.array().rsqrt();
  out.r_hat = SymMat(s.asDiagonal() * emp.theta_hat.matrix() * s.asDiagonal());
  out.rho_min_rhat = eig_sym(out.r_hat).spectrum.rho_min;
  out.rho_dev = spectral_radius(SymMat(out.r_hat.matrix() - pop.r.matrix()));
  return out;
}

}  // namespace kpls
