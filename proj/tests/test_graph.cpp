#include <doctest.h>

#include "mtlrc/graph.hpp"

#include <Eigen/Eigenvalues>

using namespace mtlrc;

TEST_CASE("two-task graph operator by hand") {
  Matrix w(2, 2);
  w << 0, 1, 1, 0;
  const auto op = build_graph_operator(w, 1.0);
  CHECK(op.d(0, 0) == doctest::Approx(2.0));
  CHECK(op.d(0, 1) == doctest::Approx(-1.0));
  CHECK(op.d(1, 0) == doctest::Approx(-1.0));
  CHECK(op.d(1, 1) == doctest::Approx(2.0));
  CHECK(op.d_inv_diag[0] == doctest::Approx(2.0 / 3.0));
  CHECK(op.d_inv_diag[1] == doctest::Approx(2.0 / 3.0));
  CHECK(op.d_inv_max == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("no edges gives the identity scaled by eta") {
  const auto op = build_graph_operator(Matrix::Zero(3, 3), 1.0);
  CHECK((op.d - Matrix::Identity(3, 3)).norm() == doctest::Approx(0.0));
  for (double v : op.d_inv_diag) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("path graph inverse against a linear-solve identity") {
  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = w(1, 0) = 1.0;
  w(1, 2) = w(2, 1) = 1.0;
  const auto op = build_graph_operator(w, 0.5);
  CHECK((op.d * op.d_inv - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  // Laplacian row sums are zero before adding eta
  const Matrix lap = op.d - 0.5 * Matrix::Identity(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(lap.row(i).sum() == doctest::Approx(0.0));
}

TEST_CASE("smallest eigenvalue of D is at least eta") {
  Matrix w = Matrix::Zero(4, 4);
  w(0, 1) = w(1, 0) = 2.0;
  w(2, 3) = w(3, 2) = 0.5;
  const double eta = 0.25;
  const auto op = build_graph_operator(w, eta);
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.d);
  CHECK(es.eigenvalues().minCoeff() >= eta - 1e-12);
  // sqrt factors reproduce D and its inverse
  CHECK((op.d_sqrt * op.d_sqrt - op.d).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((op.d_inv_sqrt * op.d_inv_sqrt - op.d_inv).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("invalid weights are rejected") {
  Matrix neg(2, 2);
  neg << 0, -1, -1, 0;
  CHECK_THROWS_AS(build_graph_operator(neg, 1.0), std::invalid_argument);
  Matrix asym(2, 2);
  asym << 0, 1, 2, 0;
  CHECK_THROWS_AS(build_graph_operator(asym, 1.0), std::invalid_argument);
  Matrix diag(2, 2);
  diag << 1, 0, 0, 0;
  CHECK_THROWS_AS(build_graph_operator(diag, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_graph_operator(Matrix::Zero(2, 2), 0.0), std::invalid_argument);
}

TEST_CASE("spectral gap of the complete graph is T") {
  const std::size_t T = 4;
  Matrix w = Matrix::Ones(T, T) - Matrix::Identity(T, T);
  const auto op = build_graph_operator(w, 0.5);
  CHECK(laplacian_spectral_gap(op) == doctest::Approx(4.0).epsilon(1e-10));
  const auto eigs = laplacian_eigenvalues(op);
  CHECK(eigs.front() == doctest::Approx(0.0).epsilon(1e-12));
}
