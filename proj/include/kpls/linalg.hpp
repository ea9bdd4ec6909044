#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "kpls/errors.hpp"

namespace kpls {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = Mat<double>;
using Vector = Vec<double>;

inline constexpr double kRcondMin = 1e-12;
inline constexpr double kTolEigRel = 1e-10;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiOffTol = 1e-14;
inline constexpr double kColumnDropRel = 1e-10;

// Square matrix with exactly symmetric storage.
template <typename Scalar>
class SymMatrix {
 public:
  SymMatrix() = default;

  template <typename Derived>
  explicit SymMatrix(const Eigen::MatrixBase<Derived>& m) : m_(m) {
    if (m_.rows() < 1 || m_.rows() != m_.cols())
      throw InvalidArgument("SymMatrix needs a non-empty square matrix");
    m_ = (Scalar(0.5) * (m_ + m_.transpose())).eval();
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Mat<Scalar>& matrix() const { return m_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Mat<Scalar> m_;
};

using SymMat = SymMatrix<double>;

template <typename Scalar>
struct SpectralSummary {
  Vec<Scalar> eigenvalues;  // non-increasing
  Scalar rho_max{};
  Scalar rho_min{};
  Scalar cond{};
};

template <typename Scalar>
struct EigenDecomposition {
  SpectralSummary<Scalar> spectrum;
  Mat<Scalar> vectors;  // column j pairs with spectrum.eigenvalues(j)
  int sweeps = 0;
};

template <typename Scalar>
SpectralSummary<Scalar> summarize(Vec<Scalar> eigenvalues) {
  SpectralSummary<Scalar> s;
  s.eigenvalues = std::move(eigenvalues);
  s.rho_max = s.eigenvalues(0);
  s.rho_min = s.eigenvalues(s.eigenvalues.size() - 1);
  s.cond = s.rho_min > Scalar(0) ? s.rho_max / s.rho_min : std::numeric_limits<Scalar>::infinity();
  return s;
}

// Cyclic Jacobi.
template <typename Scalar>
EigenDecomposition<Scalar> eig_sym(const SymMatrix<Scalar>& m, int max_sweeps = kJacobiMaxSweeps) {
  using std::abs;
  using std::sqrt;
  const Eigen::Index n = m.dim();
  Mat<Scalar> a = m.matrix();
  Mat<Scalar> v = Mat<Scalar>::Identity(n, n);
  const Scalar tol = Scalar(kJacobiOffTol) * a.norm();

  auto off_norm = [&]() {
    Scalar s(0);
    for (Eigen::Index j = 1; j < n; ++j)
      for (Eigen::Index i = 0; i < j; ++i) s += Scalar(2) * a(i, j) * a(i, j);
    return sqrt(s);
  };

  int sweep = 0;
  Scalar off = off_norm();
  while (off > tol) {
    if (sweep == max_sweeps)
      throw NumericalFailure("Jacobi eigensolver did not converge", static_cast<double>(off));
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar app = a(p, p);
        const Scalar aqq = a(q, q);
        const Scalar g = Scalar(100) * abs(apq);
        if (sweep > 3 && abs(app) + g == abs(app) && abs(aqq) + g == abs(aqq)) {
          a(p, q) = a(q, p) = Scalar(0);
          continue;
        }
        const Scalar theta = (aqq - app) / (Scalar(2) * apq);
        Scalar t;
        if (abs(theta) > Scalar(1e150)) {
          t = Scalar(0.5) / theta;
        } else {
          t = Scalar(1) / (abs(theta) + sqrt(theta * theta + Scalar(1)));
          if (theta < Scalar(0)) t = -t;
        }
        const Scalar c = Scalar(1) / sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = Scalar(0);
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    ++sweep;
    off = off_norm();
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  Vec<Scalar> values(n);
  EigenDecomposition<Scalar> out;
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    values(j) = a(order[j], order[j]);
    out.vectors.col(j) = v.col(order[j]);
  }
  out.spectrum = summarize<Scalar>(std::move(values));
  out.sweeps = sweep;
  return out;
}

// Eigenvalues in (-tol_eig, 0) are set to zero.
template <typename Scalar>
SpectralSummary<Scalar> clamp_psd(SpectralSummary<Scalar> s) {
  const Scalar tol = Scalar(kTolEigRel) * std::max(s.rho_max, Scalar(0));
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
    if (s.eigenvalues(i) < Scalar(0) && s.eigenvalues(i) > -tol) s.eigenvalues(i) = Scalar(0);
  return summarize<Scalar>(std::move(s.eigenvalues));
}

template <typename Scalar>
SpectralSummary<Scalar> spectral_summary(const SymMatrix<Scalar>& m, bool psd = false) {
  auto s = eig_sym(m).spectrum;
  return psd ? clamp_psd(std::move(s)) : s;
}

// max |λ|.
template <typename Scalar>
Scalar spectral_radius(const SpectralSummary<Scalar>& s) {
  return std::max(std::abs(s.rho_max), std::abs(s.rho_min));
}

template <typename Scalar>
Scalar spectral_radius(const SymMatrix<Scalar>& m) {
  return spectral_radius(eig_sym(m).spectrum);
}

template <typename Scalar>
Scalar trace_power(const SpectralSummary<Scalar>& s, int i) {
  if (i < 1) throw InvalidArgument("trace_power needs a positive exponent");
  Scalar acc(0);
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) acc += std::pow(s.eigenvalues(k), i);
  return acc;
}

template <typename Scalar>
Scalar trace_power(const SymMatrix<Scalar>& m, int i) {
  return trace_power(eig_sym(m).spectrum, i);
}

template <typename Scalar>
struct SpdSolve {
  Vec<Scalar> x;
  Scalar rcond{};
};

// Reciprocal 2-norm condition number of a symmetric matrix, 0 when not positive definite.
template <typename Scalar>
Scalar reciprocal_condition(const SpectralSummary<Scalar>& s) {
  if (!(s.rho_max > Scalar(0)) || !(s.rho_min > Scalar(0))) return Scalar(0);
  return s.rho_min / s.rho_max;
}

// Cholesky on the diagonally equilibrated system.
template <typename Scalar, typename Derived>
SpdSolve<Scalar> solve_spd(const SymMatrix<Scalar>& m, const Eigen::MatrixBase<Derived>& b,
                           Scalar rcond_min = Scalar(kRcondMin)) {
  if (b.size() != m.dim()) throw InvalidArgument("solve_spd: dimension mismatch");
  const auto spec = eig_sym(m).spectrum;
  const Scalar tol = Scalar(kTolEigRel) * std::abs(spec.rho_max);
  if (!(spec.rho_max > Scalar(0)) || spec.rho_min < -tol)
    throw NotPositiveDefinite("solve_spd: matrix has a negative eigenvalue");
  SpdSolve<Scalar> out;
  out.rcond = reciprocal_condition(spec);
  if (!(out.rcond >= rcond_min))
    throw SingularSystem("solve_spd: reciprocal condition below threshold", static_cast<double>(out.rcond));

  const Vec<Scalar> d = m.matrix().diagonal();
  if ((d.array() <= Scalar(0)).any()) throw NotPositiveDefinite("solve_spd: non-positive diagonal");
  const Vec<Scalar> s = d.array().rsqrt();
  const Mat<Scalar> scaled = s.asDiagonal() * m.matrix() * s.asDiagonal();
  Eigen::LLT<Mat<Scalar>> llt(scaled);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("solve_spd: negative pivot");
  const Vec<Scalar> rhs = s.cwiseProduct(b.derived().template cast<Scalar>());
  out.x = s.cwiseProduct(llt.solve(rhs));
  if (!out.x.allFinite()) throw SingularSystem("solve_spd: non-finite solution", static_cast<double>(out.rcond));
  return out;
}

// Orthonormal basis of the numerically detected column space (two-pass modified Gram-Schmidt).
template <typename Derived>
Mat<typename Derived::Scalar> orthonormal_basis(const Eigen::MatrixBase<Derived>& basis) {
  using Scalar = typename Derived::Scalar;
  if (basis.cols() < 1) throw InvalidArgument("orthonormal_basis: empty basis");
  Mat<Scalar> q(basis.rows(), basis.cols());
  Eigen::Index r = 0;
  Scalar ref(-1);
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    Vec<Scalar> v = basis.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < r; ++i) v -= q.col(i).dot(v) * q.col(i);
    const Scalar norm = v.norm();
    if (ref < Scalar(0)) {
      if (!(norm > Scalar(0))) continue;
      ref = norm;
    } else if (norm <= Scalar(kColumnDropRel) * ref) {
      continue;
    }
    q.col(r++) = v / norm;
  }
  return q.leftCols(r);
}

template <typename DerivedB, typename DerivedY>
Vec<typename DerivedB::Scalar> project_onto_colspace(const Eigen::MatrixBase<DerivedB>& basis,
                                                     const Eigen::MatrixBase<DerivedY>& y) {
  if (basis.rows() != y.size()) throw InvalidArgument("project_onto_colspace: dimension mismatch");
  const auto q = orthonormal_basis(basis);
  return q * (q.transpose() * y);
}

}  // namespace kpls
