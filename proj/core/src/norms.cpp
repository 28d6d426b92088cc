#include "mtlrc/norms.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace mtlrc {

double lp_aggregate(const std::vector<double>& a, double p) {
  if (a.empty()) return 0.0;
  if (!(p > 0.0)) throw std::invalid_argument("lp_aggregate: p > 0 required");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : a) m = std::max(m, v);
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (double v : a) s += v;
    return s;
  }
  // scale for overflow safety on extreme exponents
  double m = 0.0;
  for (double v : a) m = std::max(m, v);
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : a) s += std::pow(v / m, p);
  return m * std::pow(s, 1.0 / p);
}

std::vector<double> column_norms(const Matrix& m) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index t = 0; t < m.cols(); ++t) out[static_cast<std::size_t>(t)] = m.col(t).norm();
  return out;
}

std::vector<double> singular_values(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  std::vector<double> out(static_cast<std::size_t>(svd.singularValues().size()));
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    out[static_cast<std::size_t>(i)] = svd.singularValues()(i);
  return out;
}

Matrix inverse_sqrt_spd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("inverse_sqrt_spd: positive definite input required");
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace mtlrc
