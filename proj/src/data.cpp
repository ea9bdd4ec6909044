#include "kpls/data.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kpls/rng.hpp"

namespace kpls {

Dataset::Dataset(Matrix x_, Vector y_) : x(std::move(x_)), y(std::move(y_)) { validate(); }

void Dataset::validate() const {
  if (x.rows() < 1 || x.cols() < 1) throw InvalidArgument("dataset needs n >= 1 and p >= 1");
  if (y.size() != x.rows()) throw InvalidArgument("dataset: y length differs from the number of rows of x");
  if (!x.allFinite()) throw InvalidArgument("dataset: x has non-finite entries");
  if (!y.allFinite()) throw InvalidArgument("dataset: y has non-finite entries");
}

GramSummary gram_summary(const Dataset& d) {
  d.validate();
  const double n = static_cast<double>(d.n());
  return gram_summary(d.x, d.y, SymMat(d.x.transpose() * d.x / n));
}

GramSummary gram_summary(const Matrix& x, const Vector& y, const SymMat& sigma_mat) {
  GramSummary gs;
  gs.sigma_mat = sigma_mat;
  gs.sigma_hat = x.transpose() * y / static_cast<double>(x.rows());
  gs.n = x.rows();
  gs.p = x.cols();
  return gs;
}

Vector population_sigma(const SymMat& sigma_mat, const Vector& beta) {
  if (beta.size() != sigma_mat.dim()) throw InvalidArgument("population_sigma: dimension mismatch");
  return sigma_mat.matrix() * beta;
}

GeneratedDesign gen_design(Eigen::Index n, const Vector& spectrum, std::uint64_t seed, bool exact) {
  const Eigen::Index p = spectrum.size();
  if (n < 1 || p < 1) throw InvalidArgument("gen_design needs n >= 1 and a non-empty spectrum");
  if ((spectrum.array() <= 0.0).any() || !spectrum.allFinite())
    throw InvalidArgument("gen_design: spectrum entries must be positive");

  GeneratedDesign out;
  const CounterRng rng(seed, kDesignStream);
  Matrix z(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      z(i, j) = std::sqrt(spectrum(j)) * rng.normal(static_cast<std::uint64_t>(i * p + j));

  if (!exact) {
    out.x = std::move(z);
    return out;
  }

  const double nd = static_cast<double>(n);
  if (n < p) {
    out.warnings.push_back("n < p: Gram matrix is singular by construction; columns rescaled but not orthogonalized");
    for (Eigen::Index j = 0; j < p; ++j) z.col(j) *= std::sqrt(nd * spectrum(j)) / z.col(j).norm();
    out.x = std::move(z);
    return out;
  }

  Matrix q = orthonormal_basis(z);
  if (q.cols() != p) throw NumericalFailure("gen_design: sampled columns are numerically dependent", 0.0);
  for (Eigen::Index j = 0; j < p; ++j) q.col(j) *= std::sqrt(nd * spectrum(j));
  out.x = std::move(q);
  return out;
}

Vector gen_response(const Matrix& x, const ModelSpec& spec, std::uint64_t replication_index) {
  if (spec.beta.size() != x.cols()) throw InvalidArgument("gen_response: beta length differs from p");
  if (!(spec.tau2 > 0.0)) throw InvalidArgument("gen_response: tau2 must be positive");
  const CounterRng rng(spec.seed, noise_stream(replication_index));
  const double tau = std::sqrt(spec.tau2);
  Vector y = x * spec.beta;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += tau * rng.normal(static_cast<std::uint64_t>(i));
  return y;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV input", 1, 1);
  const auto header = split_fields(line);
  if (header.size() < 2) throw ParseError("header needs at least one covariate and y", 1, 1);
  const std::size_t p = header.size() - 1;
  for (std::size_t j = 0; j < p; ++j)
    if (trim(header[j]) != "x" + std::to_string(j + 1))
      throw ParseError("expected header field x" + std::to_string(j + 1), 1, j + 1);
  if (trim(header[p]) != "y") throw ParseError("expected last header field y", 1, p + 1);

  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line);
    if (fields.size() != p + 1)
      throw ParseError("expected " + std::to_string(p + 1) + " fields, found " + std::to_string(fields.size()),
                       line_no, std::min(fields.size(), p + 1));
    for (std::size_t j = 0; j <= p; ++j) {
      const std::string f = trim(fields[j]);
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size())
        throw ParseError("malformed number '" + f + "'", line_no, j + 1);
      if (!std::isfinite(v)) throw ParseError("non-finite value", line_no, j + 1);
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("no data rows", line_no, 1);

  Matrix x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(p));
  Vector y(static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < p; ++j) x(i, j) = values[i * (p + 1) + j];
    y(i) = values[i * (p + 1) + p];
  }
  return Dataset(std::move(x), std::move(y));
}

Dataset read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return read_csv(in);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const Dataset& d) {
  for (Eigen::Index j = 0; j < d.p(); ++j) out << 'x' << (j + 1) << ',';
  out << "y\n";
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    for (Eigen::Index j = 0; j < d.p(); ++j) out << format_double(d.x(i, j)) << ',';
    out << format_double(d.y(i)) << '\n';
  }
}

}  // namespace kpls
