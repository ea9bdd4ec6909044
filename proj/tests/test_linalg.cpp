#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "kpls/linalg.hpp"
#include "support.hpp"

using namespace kpls;
using kpls::test::diag;

TEST_CASE("eig_sym small closed forms") {
  const auto s = spectral_summary(SymMat(diag({2, 1})));
  CHECK(s.eigenvalues(0) == doctest::Approx(2.0));
  CHECK(s.eigenvalues(1) == doctest::Approx(1.0));
  CHECK(s.cond == doctest::Approx(2.0));

  Matrix m(2, 2);
  m << 1, 0.5, 0.5, 1;
  const auto r = spectral_summary(SymMat(m));
  CHECK(r.rho_max == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(r.rho_min == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("eig_sym 2x2 against the quadratic formula") {
  // population Θ of the first scenario at unit signal
  Matrix theta(2, 2);
  theta << 442.981, 2680.5841, 2680.5841, 16221.96301;
  const auto s = spectral_summary(SymMat(theta));
  const double tr = theta.trace(), det = theta.determinant();
  const double disc = std::sqrt(tr * tr / 4 - det);
  const double hi = tr / 2 + disc;
  const double lo = det / hi;
  CHECK(std::abs(s.rho_max - hi) <= 1e-9 * hi);
  CHECK(std::abs(s.rho_min - lo) <= 1e-9 * lo);
}

TEST_CASE("eig_sym agrees with Eigen on 1000 random symmetric matrices") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 1000; ++t) {
    const int p = test::uniform_int(rng, 1, 8);
    const Matrix a = test::random_matrix(rng, p, p);
    const SymMat m(a);
    const auto dec = eig_sym(m);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(m.matrix());
    const Vector expect = ref.eigenvalues().reverse();
    const double scale = std::max(1.0, expect.cwiseAbs().maxCoeff());
    REQUIRE((dec.spectrum.eigenvalues - expect).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    const Matrix recon = dec.vectors * dec.spectrum.eigenvalues.asDiagonal() * dec.vectors.transpose();
    REQUIRE((recon - m.matrix()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    REQUIRE((dec.vectors.transpose() * dec.vectors - Matrix::Identity(p, p)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("eig_sym is templated on the scalar") {
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> m(2, 2);
  m << 2, 1, 1, 2;
  const auto s = spectral_summary(SymMatrix<long double>(m));
  CHECK(static_cast<double>(s.rho_max) == doctest::Approx(3.0));
  CHECK(static_cast<double>(s.rho_min) == doctest::Approx(1.0));
}

TEST_CASE("SymMatrix rejects empty and non-square input") {
  CHECK_THROWS_AS(SymMat(Matrix(0, 0)), InvalidArgument);
  CHECK_THROWS_AS(SymMat(Matrix(2, 3)), InvalidArgument);
}

TEST_CASE("trace_power") {
  CHECK(trace_power(SymMat(diag({2, 1})), 3) == doctest::Approx(9.0));
  CHECK(trace_power(SymMat(Matrix(Matrix::Identity(5, 5))), 7) == doctest::Approx(5.0));
  CHECK(trace_power(SymMat(diag({6.1, 6, 0.5, 0.5, 0.5})), 2) == doctest::Approx(73.96).epsilon(1e-13));
  CHECK_THROWS_AS(trace_power(SymMat(diag({1, 1})), 0), InvalidArgument);

  std::mt19937_64 rng(3);
  const SymMat m = test::random_spd(rng, 5);
  const Matrix cube = m.matrix() * m.matrix() * m.matrix();
  CHECK(trace_power(m, 3) == doctest::Approx(cube.trace()).epsilon(1e-12));
}

TEST_CASE("spectral_radius uses absolute values") {
  CHECK(spectral_radius(SymMat(diag({-3, 1}))) == doctest::Approx(3.0));
}

TEST_CASE("solve_spd") {
  Vector b(2);
  b << 3, 4;
  const auto id = solve_spd(SymMat(Matrix(Matrix::Identity(2, 2))), b);
  CHECK(id.x(0) == doctest::Approx(3.0));
  CHECK(id.x(1) == doctest::Approx(4.0));
  CHECK(id.rcond == doctest::Approx(1.0));

  b << 2, 4;
  const auto dg = solve_spd(SymMat(diag({2, 4})), b);
  CHECK(dg.x(0) == doctest::Approx(1.0));
  CHECK(dg.x(1) == doctest::Approx(1.0));
  CHECK(dg.rcond == doctest::Approx(0.5));

  Matrix theta(2, 2);
  theta << 442.981, 2680.5841, 2680.5841, 16221.96301;
  Vector rhs(2);
  rhs << 6.1 * 6.1 + 36.0, 6.1 * 6.1 * 6.1 + 216.0;
  const auto lam = solve_spd(SymMat(theta), rhs);
  CHECK(lam.x(0) == doctest::Approx(0.3306011).epsilon(1e-6));
  CHECK(lam.x(1) == doctest::Approx(-0.0273224).epsilon(1e-6));
}

TEST_CASE("solve_spd failures") {
  Vector b = Vector::Ones(2);
  CHECK_THROWS_AS(solve_spd(SymMat(diag({1, -1})), b), NotPositiveDefinite);
  CHECK_THROWS_AS(solve_spd(SymMat(diag({1, 1e-14})), b), SingularSystem);
  CHECK_NOTHROW(solve_spd(SymMat(diag({1, 1e-14})), b, 1e-300));
  CHECK_THROWS_AS(solve_spd(SymMat(diag({1, 1})), Vector::Ones(3)), InvalidArgument);
  try {
    solve_spd(SymMat(diag({1, 1e-14})), b);
  } catch (const SingularSystem& e) {
    CHECK(e.rcond() == doctest::Approx(1e-14));
  }
}

TEST_CASE("solve_spd matches a dense LU on random systems") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const int p = test::uniform_int(rng, 1, 7);
    const SymMat m = test::random_spd(rng, p);
    const Vector b = test::random_vector(rng, p);
    const Vector ref = m.matrix().partialPivLu().solve(b);
    const auto got = solve_spd(m, b);
    REQUIRE((got.x - ref).norm() <= 1e-10 * std::max(1.0, ref.norm()));
  }
}

TEST_CASE("project_onto_colspace") {
  Matrix e1 = Matrix::Zero(2, 1);
  e1(0, 0) = 1;
  Vector y(2);
  y << 3, 7;
  const Vector p = project_onto_colspace(e1, y);
  CHECK(p(0) == doctest::Approx(3.0));
  CHECK(p(1) == doctest::Approx(0.0));

  std::mt19937_64 rng(5);
  const Matrix full = test::random_matrix(rng, 4, 4);
  const Vector z = test::random_vector(rng, 4);
  CHECK((project_onto_colspace(full, z) - z).norm() <= 1e-10);

  const Matrix basis = test::random_matrix(rng, 10, 2);
  const Vector w = test::random_vector(rng, 10);
  const Vector ref = basis * (basis.transpose() * basis).ldlt().solve(basis.transpose() * w);
  CHECK((project_onto_colspace(basis, w) - ref).norm() <= 1e-9);
}

TEST_CASE("orthonormal_basis drops dependent columns") {
  std::mt19937_64 rng(9);
  Matrix a = test::random_matrix(rng, 6, 3);
  a.col(2) = a.col(0) - 2.0 * a.col(1);
  const Matrix q = orthonormal_basis(a);
  CHECK(q.cols() == 2);
  CHECK((q.transpose() * q - Matrix::Identity(2, 2)).norm() <= 1e-12);
}
