#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kpls/constants.hpp"
#include "kpls/data.hpp"
#include "kpls/krylov.hpp"

namespace kpls {

using NamedValues = std::vector<std::pair<std::string, double>>;

double value_of(const NamedValues& values, const std::string& key);

struct BoundConstants {
  double delta = 0.0;
  int k = 0;
  double x_delta = 0.0;
  double g_x = 0.0;
  double c_big = 0.0;
  double t_threshold = 0.0;
  double c_small = 0.0;
};

BoundConstants bound_constants(int k, double delta, double rho_min_r);

struct AssumptionReport {
  bool a1_holds = false;
  double rho_min_r = 0.0;
  bool a2_holds = false;
  Vector a2_margins;    // σᵀΣ^{2i-1}σ minus threshold
  Vector a2_signal;     // σᵀΣ^{2i-1}σ
  Vector a2_threshold;  // t (τ²/n) K ρ(Σ)^i Tr(Σ^i)
  double t_used = 0.0;
};

AssumptionReport check_assumptions(const PopulationKrylov& pop, const SymMat& sigma_mat, double tau2,
                                   Eigen::Index n, double delta);

struct DeviationEnvelope {
  double x = 0.0;
  Vector t1;  // i = 0..2K-1
  Vector t2;
  Vector xi;  // Ξ_i with A = Σ, m = σ, t = τ²/n
};

DeviationEnvelope deviation_envelope(const SymMat& sigma_mat, const Vector& sigma_pop, double tau2, Eigen::Index n,
                                     int k, double delta);

struct EventReport {
  std::vector<bool> a;
  std::vector<bool> b;
  bool all = false;
};

EventReport event_holds(const GramSummary& gs, const PopulationKrylov& pop, const DeviationEnvelope& env);
EventReport event_holds(const EigenDecomposition<double>& sigma_eig, const Vector& sigma_hat, const Vector& sigma_pop,
                        const DeviationEnvelope& env);

// vᵀΣ^i v through the eigendecomposition of Σ.
double power_form(const EigenDecomposition<double>& eig, const Vector& v, int i);

struct QuadformTail {
  double xi = 0.0;
  double mean = 0.0;
  double upper_radius = 0.0;
  double lower_radius = 0.0;
};

QuadformTail quadform_tail_bound(const SymMat& a, const Vector& m, double t, int s, double x);

enum class Theorem { th1, th1_precise, th2, th2_precise };

std::string to_string(Theorem t);

struct BoundReport {
  Theorem theorem = Theorem::th1;
  double bias = 0.0;
  double variance_bound = 0.0;
  double total = 0.0;
  NamedValues pieces;
  NamedValues constants;
  bool certified = false;
  bool a2_holds = false;
  Vector alpha;  // ridge penalties, th2 only
};

// Spectral and Krylov quantities entering the bound formulas.
struct BoundInputs {
  double tau2_over_n = 0.0;
  int k = 0;
  double rho_sigma = 0.0;
  Vector traces;        // Tr(Σ^i), i = 1..2K
  Vector krylov_norms;  // σᵀΣ^{2j-1}σ, j = 1..K
  Vector lambda;
  Vector lambda_tilde;
  Vector lambda_bar;
  double cond_d = 0.0;
  double rho_r = 0.0;
  double rho_min_r = 0.0;
};

BoundInputs bound_inputs(const PopulationKrylov& pop, const SymMat& sigma_mat, double tau2, Eigen::Index n);

struct BoundTerms {
  NamedValues pieces;
  NamedValues constants;
};

BoundTerms th1_terms(const BoundInputs& in, const BoundConstants& c, bool precise);
BoundTerms th2_terms(const BoundInputs& in, const BoundConstants& c, const Vector& alpha, bool precise);

BoundReport bound_th1(const PopulationKrylov& pop, const SymMat& sigma_mat, const Vector& beta, double tau2,
                      Eigen::Index n, double delta, bool precise);

// Without overrides the theoretical schedule c_δ is used; smaller penalties void the certificate.
BoundReport bound_th2(const PopulationKrylov& pop, const SymMat& sigma_mat, const Vector& beta, double tau2,
                      Eigen::Index n, double delta, bool precise,
                      const std::optional<Vector>& overrides = std::nullopt);

// (D+Δ)^{-1/2}(Θ+Δ)(D+Δ)^{-1/2}
SymMat ridge_correlation(const SymMat& theta, const Vector& alpha);

// ρ_min(R) + (1 − ρ_min(R)) min_i α_i/(Θ_ii + α_i)
double ridge_rho_min_lower(const SymMat& theta, const Vector& alpha, double rho_min_r);

}  // namespace kpls
