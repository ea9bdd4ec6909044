#pragma once

#include <cstdint>
#include <random>

#include "kpls/data.hpp"
#include "kpls/linalg.hpp"

namespace kpls::test {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = nd(rng);
  return m;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n) { return random_matrix(rng, n, 1).col(0); }

inline SymMat random_spd(std::mt19937_64& rng, Eigen::Index p, double ridge = 0.1) {
  const Matrix a = random_matrix(rng, p + 2, p);
  return SymMat(Matrix(a.transpose() * a / double(p + 2) + ridge * Matrix::Identity(p, p)));
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Dataset random_dataset(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p, double noise = 0.5) {
  Matrix x = random_matrix(rng, n, p);
  const Vector beta = random_vector(rng, p);
  Vector y = x * beta + noise * random_vector(rng, n);
  return Dataset(std::move(x), std::move(y));
}

inline Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

}  // namespace kpls::test
