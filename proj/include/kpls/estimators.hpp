#pragma once

#include <optional>
#include <string>

#include "kpls/constants.hpp"
#include "kpls/data.hpp"
#include "kpls/krylov.hpp"

namespace kpls {

enum class Variant { iterative, krylov, ridge, oracle };

std::string to_string(Variant v);

struct PlsFit {
  Vector beta_hat;
  int k = 0;
  Variant variant = Variant::krylov;
  std::optional<Vector> alpha;
  double rcond_theta = 0.0;
  int k_effective = 0;
  Vector coordinates;  // u with beta_hat = Ĝu; empty for the iterative fit
};

PlsFit fit_pls_krylov(const EmpiricalKrylov& emp, double rcond_min = kRcondMin);
PlsFit fit_pls_krylov(const GramSummary& gs, int k, double rcond_min = kRcondMin);

struct RidgeSchedule {
  Vector alpha;
  double c_delta = 0.0;
  double delta = kDefaultDelta;
  std::optional<Vector> overrides;
};

// α_i = c_i K (τ²/n) ρ(Σ)^i Tr(Σ^i), i = 1..K.
Vector ridge_alpha(const SpectralSummary<double>& sigma_spec, int k, double tau2, Eigen::Index n,
                   const Vector& c_per_index);

RidgeSchedule ridge_schedule(const SymMat& sigma_mat, Eigen::Index n, int k, double tau2, double delta,
                             const std::optional<Vector>& overrides = std::nullopt);
RidgeSchedule ridge_schedule(const GramSummary& gs, int k, double tau2, double delta,
                             const std::optional<Vector>& overrides = std::nullopt);

PlsFit fit_pls_ridge(const EmpiricalKrylov& emp, const RidgeSchedule& schedule, double rcond_min = kRcondMin);
PlsFit fit_pls_ridge(const GramSummary& gs, int k, const RidgeSchedule& schedule, double rcond_min = kRcondMin);

PlsFit fit_oracle(const EmpiricalKrylov& emp, const PopulationKrylov& pop);
PlsFit fit_oracle(const GramSummary& gs, const PopulationKrylov& pop, int k);

double prediction_risk(const Matrix& x, const Vector& beta_true, const Vector& beta_hat);
double prediction_risk(const Matrix& x, const Vector& beta_true, const PlsFit& fit);

// (1/n)‖Y − XĜu‖² + uᵀΔ_αu
double ridge_objective(const Matrix& x, const Vector& y, const Matrix& g_hat, const Vector& alpha, const Vector& u);

// ‖Θ̂u + Δ_αu − Ĝᵀσ̂‖
double ridge_stationarity_residual(const EmpiricalKrylov& emp, const Vector& alpha, const Vector& u);

// OLS residual variance; requires n > p. Plug-in helper only.
double plugin_tau2(const Dataset& d);

}  // namespace kpls
