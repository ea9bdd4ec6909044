#pragma once

#include "kpls/data.hpp"
#include "kpls/estimators.hpp"

namespace kpls {

inline constexpr double kDeflationDropRel = 1e-12;

struct IterativePlsState {
  Matrix loadings;    // p × k_effective, unit columns w_k
  Matrix components;  // n × k_effective, t_k = X^{(k)} w_k
  Matrix x_loadings;  // p × k_effective, X^{(k)ᵀ} t_k / t_kᵀt_k
  Matrix deflated;    // X^{(k_effective+1)}
  int k_effective = 0;
};

struct IterativeFit {
  PlsFit fit;
  IterativePlsState state;
};

IterativeFit fit_pls_iterative(const Dataset& d, int k);

}  // namespace kpls
