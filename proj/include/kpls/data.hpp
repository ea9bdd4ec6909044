#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kpls/linalg.hpp"

namespace kpls {

struct Dataset {
  Matrix x;
  Vector y;

  Dataset() = default;
  Dataset(Matrix x_, Vector y_);

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index p() const { return x.cols(); }
  void validate() const;
};

struct ModelSpec {
  Vector beta;
  double tau2 = 1.0;
  std::uint64_t seed = 0;
};

struct GramSummary {
  SymMat sigma_mat;
  Vector sigma_hat;
  Eigen::Index n = 0;
  Eigen::Index p = 0;
};

GramSummary gram_summary(const Dataset& d);

// Same statistics for a response on a shared design.
GramSummary gram_summary(const Matrix& x, const Vector& y, const SymMat& sigma_mat);

Vector population_sigma(const SymMat& sigma_mat, const Vector& beta);

struct GeneratedDesign {
  Matrix x;
  std::vector<std::string> warnings;
};

// Rows N(0, diag(spectrum)); with exact=true columns are orthogonalized and rescaled so X'X/n = diag(spectrum).
GeneratedDesign gen_design(Eigen::Index n, const Vector& spectrum, std::uint64_t seed, bool exact = true);

Vector gen_response(const Matrix& x, const ModelSpec& spec, std::uint64_t replication_index);

Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const Dataset& d);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace kpls
