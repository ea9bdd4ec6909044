#include <doctest.h>

#include "kpls/estimators.hpp"
#include "kpls/krylov.hpp"
#include "kpls/pls_iter.hpp"
#include "support.hpp"

using namespace kpls;

namespace {

Vector ols_prediction(const Dataset& d) {
  return d.x * d.x.colPivHouseholderQr().solve(d.y);
}

}  // namespace

TEST_CASE("one covariate gives the least squares slope") {
  std::mt19937_64 rng(1);
  const Dataset d = test::random_dataset(rng, 40, 1);
  const auto fit = fit_pls_iterative(d, 1).fit;
  CHECK(fit.beta_hat(0) == doctest::Approx(d.x.col(0).dot(d.y) / d.x.col(0).squaredNorm()).epsilon(1e-13));
  CHECK(fit.variant == Variant::iterative);
}

TEST_CASE("k = p reproduces OLS") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const int p = test::uniform_int(rng, 2, 6);
    const Dataset d = test::random_dataset(rng, 60, p);
    const Vector ref = ols_prediction(d);
    const Vector got = d.x * fit_pls_iterative(d, p).fit.beta_hat;
    REQUIRE((got - ref).norm() <= 1e-8 * ref.norm());
  }
}

TEST_CASE("noiseless response in the Krylov space is recovered exactly") {
  Vector spec(5);
  spec << 6.1, 6, 0.5, 0.5, 0.5;
  const Matrix x = gen_design(200, spec, 3).x;
  Vector beta = Vector::Zero(5);
  beta(0) = 0.7;
  beta(1) = -1.3;
  const Dataset d(x, x * beta);
  const auto fit = fit_pls_iterative(d, 2).fit;
  const double risk = prediction_risk(x, beta, fit);
  CHECK(risk <= 1e-16 * (x * beta).squaredNorm() / 200);
}

TEST_CASE("loadings are orthonormal and components orthogonal") {
  std::mt19937_64 rng(3);
  const Dataset d = test::random_dataset(rng, 80, 6);
  const auto st = fit_pls_iterative(d, 4).state;
  CHECK(st.k_effective == 4);
  CHECK((st.loadings.transpose() * st.loadings - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);
  const Matrix tt = st.components.transpose() * st.components;
  CHECK((tt - Matrix(tt.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <= 1e-10 * tt.diagonal().maxCoeff());
}

TEST_CASE("agreement with the Krylov fit") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const int p = test::uniform_int(rng, 2, 8);
    const int k = test::uniform_int(rng, 1, std::min(p, 4));
    const Dataset d = test::random_dataset(rng, test::uniform_int(rng, 50, 150), p);
    const GramSummary gs = gram_summary(d);
    PlsFit kr;
    try {
      kr = fit_pls_krylov(gs, k, 1e-8);
    } catch (const SingularKrylov&) {
      continue;
    }
    const Vector a = d.x * fit_pls_iterative(d, k).fit.beta_hat;
    const Vector b = d.x * kr.beta_hat;
    REQUIRE((a - b).norm() <= 1e-8 * b.norm());
  }
}

TEST_CASE("early stop when the response is exhausted") {
  std::mt19937_64 rng(5);
  const Matrix x = test::random_matrix(rng, 30, 4);
  const Dataset d(x, x.col(0));
  const auto fit = fit_pls_iterative(d, 4);
  CHECK(fit.state.k_effective >= 1);
  CHECK(fit.state.k_effective <= 4);
  CHECK((d.x * fit.fit.beta_hat - d.y).norm() <= 1e-8 * d.y.norm());
}

TEST_CASE("iterative fit input errors") {
  std::mt19937_64 rng(6);
  const Dataset d = test::random_dataset(rng, 10, 3);
  CHECK_THROWS_AS(fit_pls_iterative(d, 0), InvalidArgument);
  CHECK_THROWS_AS(fit_pls_iterative(d, 4), InvalidArgument);
  CHECK_THROWS_AS(fit_pls_iterative(Dataset(d.x, Vector::Zero(10)), 1), EmptyModel);
}
