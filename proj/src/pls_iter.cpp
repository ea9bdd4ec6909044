#include "kpls/pls_iter.hpp"

#include <limits>

namespace kpls {

IterativeFit fit_pls_iterative(const Dataset& d, int k) {
  d.validate();
  if (k < 1 || k > d.p()) throw InvalidArgument("k must satisfy 1 <= k <= p");
  const Eigen::Index n = d.n();
  const Eigen::Index p = d.p();

  IterativeFit out;
  auto& st = out.state;
  st.loadings.resize(p, k);
  st.components.resize(n, k);
  st.x_loadings.resize(p, k);
  st.deflated = d.x;
  Vector coef(k);

  const double first = (d.x.transpose() * d.y).norm();
  if (first == 0.0) throw EmptyModel("XᵀY is zero: no PLS component can be built");

  int kk = 0;
  for (; kk < k; ++kk) {
    const Vector c = st.deflated.transpose() * d.y;
    const double cn = c.norm();
    if (!(cn > kDeflationDropRel * first)) break;
    const Vector w = c / cn;
    const Vector t = st.deflated * w;
    const double tt = t.squaredNorm();
    if (!(tt > std::numeric_limits<double>::min())) break;
    const Vector pk = st.deflated.transpose() * t / tt;
    st.deflated -= t * pk.transpose();
    st.loadings.col(kk) = w;
    st.components.col(kk) = t;
    st.x_loadings.col(kk) = pk;
    coef(kk) = d.y.dot(t) / tt;
  }
  st.k_effective = kk;
  st.loadings.conservativeResize(p, kk);
  st.components.conservativeResize(n, kk);
  st.x_loadings.conservativeResize(p, kk);

  // T = XW(PᵀW)⁻¹ with PᵀW unit upper triangular
  const Matrix pw = st.x_loadings.transpose() * st.loadings;
  const Vector r = pw.triangularView<Eigen::UnitUpper>().solve(coef.head(kk));

  auto& fit = out.fit;
  fit.variant = Variant::iterative;
  fit.k = k;
  fit.k_effective = kk;
  fit.beta_hat = st.loadings * r;
  // the solved system is diag(t_kᵀt_k)
  const Vector tt = st.components.colwise().squaredNorm().transpose();
  fit.rcond_theta = kk > 0 ? tt.minCoeff() / tt.maxCoeff() : 0.0;
  return out;
}

}  // namespace kpls
