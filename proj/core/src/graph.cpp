#include "mtlrc/graph.hpp"

#include <Eigen/Eigenvalues>

namespace mtlrc {

GraphOperator build_graph_operator(const Matrix& edge_weights, double eta) {
  const auto T = edge_weights.rows();
  if (T < 1 || edge_weights.cols() != T)
    throw std::invalid_argument("build_graph_operator: square weight matrix required");
  if (!(eta > 0.0)) throw std::invalid_argument("build_graph_operator: eta > 0 required");
  for (Eigen::Index i = 0; i < T; ++i) {
    if (edge_weights(i, i) != 0.0)
      throw std::invalid_argument("build_graph_operator: zero diagonal required");
    for (Eigen::Index j = 0; j < T; ++j) {
      if (edge_weights(i, j) < 0.0)
        throw std::invalid_argument("build_graph_operator: non-negative weights required");
      if (std::abs(edge_weights(i, j) - edge_weights(j, i)) > 0.0)
        throw std::invalid_argument("build_graph_operator: symmetric weights required");
    }
  }

  GraphOperator op;
  op.edge_weights = edge_weights;
  op.eta = eta;
  Matrix lap = -edge_weights;
  for (Eigen::Index i = 0; i < T; ++i) lap(i, i) = edge_weights.row(i).sum();
  op.d = lap + eta * Matrix::Identity(T, T);
  op.d_inv = op.d.llt().solve(Matrix::Identity(T, T));
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(op.d);
    const Matrix q = es.eigenvectors();
    op.d_sqrt = q * es.eigenvalues().cwiseSqrt().asDiagonal() * q.transpose();
    op.d_inv_sqrt = q * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();
  }
  op.d_inv_diag.resize(static_cast<std::size_t>(T));
  op.d_inv_max = 0.0;
  for (Eigen::Index i = 0; i < T; ++i) {
    op.d_inv_diag[static_cast<std::size_t>(i)] = op.d_inv(i, i);
    op.d_inv_max = std::max(op.d_inv_max, op.d_inv(i, i));
  }
  return op;
}

std::vector<double> laplacian_eigenvalues(const GraphOperator& op) {
  const Matrix lap = op.d - op.eta * Matrix::Identity(op.d.rows(), op.d.cols());
  Eigen::SelfAdjointEigenSolver<Matrix> es(lap);
  std::vector<double> out(static_cast<std::size_t>(lap.rows()));
  for (Eigen::Index i = 0; i < lap.rows(); ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return out;
}

double laplacian_spectral_gap(const GraphOperator& op, double tol) {
  const auto eigs = laplacian_eigenvalues(op);
  const double scale = std::max(1.0, std::abs(eigs.back()));
  for (double v : eigs)
    if (v > tol * scale) return v;
  return 0.0;
}

}  // namespace mtlrc
