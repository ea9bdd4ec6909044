#pragma once

#include "kpls/data.hpp"
#include "kpls/linalg.hpp"

namespace kpls {

// Columns s, Σs, …, Σ^{k-1}s by repeated products.
Matrix krylov_basis(const SymMat& sigma_mat, const Vector& s, int k);

// GᵀΣG
SymMat krylov_gram(const SymMat& sigma_mat, const Matrix& g);

// Entrywise sᵀΣ^{i+j-1}s from the moment sequence; oracle for krylov_gram.
SymMat krylov_gram_moments(const SymMat& sigma_mat, const Vector& s, int k);

// D^{-1/2} Θ D^{-1/2} with the diagonal set to one.
SymMat correlation_form(const SymMat& theta, const Vector& d);

struct EmpiricalKrylov {
  Matrix g_hat;
  SymMat theta_hat;
  int k = 0;

  Vector sigma_hat() const { return g_hat.col(0); }
  Vector rhs() const { return g_hat.transpose() * g_hat.col(0); }
};

EmpiricalKrylov build_empirical_krylov(const GramSummary& gs, int k);
EmpiricalKrylov build_empirical_krylov(const SymMat& sigma_mat, const Vector& sigma_hat, int k);

struct PopulationKrylov {
  Vector sigma;
  Matrix g;
  SymMat theta;
  Vector d;
  SymMat r;
  Vector lambda;
  Vector beta_bar;
  Vector lambda_tilde;
  Vector lambda_bar;
  double rcond = 0.0;
  int k = 0;
};

PopulationKrylov build_population_krylov(const SymMat& sigma_mat, const Vector& beta, int k,
                                         double rcond_min = kRcondMin);

struct RhatDiagnostic {
  SymMat r_hat;
  double rho_min_rhat = 0.0;
  double rho_dev = 0.0;
};

RhatDiagnostic rhat_diagnostic(const PopulationKrylov& pop, const EmpiricalKrylov& emp);

}  // namespace kpls
