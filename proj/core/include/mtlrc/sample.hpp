#pragma once

#include "mtlrc/types.hpp"

#include <variant>

namespace mtlrc {

// Finite-dimensional multi-task data: per task an n x p matrix of feature
// rows phi(X_t^i) and a length-n label vector.
struct MultiTaskSample {
  std::vector<Matrix> features;  // T blocks, n x p each
  std::vector<Vector> labels;    // T blocks, length n each

  std::size_t tasks() const { return features.size(); }
  std::size_t samples() const { return features.empty() ? 0 : static_cast<std::size_t>(features[0].rows()); }
  std::size_t dim() const { return features.empty() ? 0 : static_cast<std::size_t>(features[0].cols()); }

  void validate() const;
};

// Per-task orthonormal eigenvectors (columns of U_t) and non-increasing
// eigenvalues of the covariance operators J_t.
struct EigenSystem {
  std::vector<Matrix> basis;                  // T blocks, p x p
  std::vector<std::vector<double>> values;    // T blocks, length p

  std::size_t tasks() const { return basis.size(); }
  void validate(double tol = 1e-10) const;

  static EigenSystem random(std::size_t T, std::size_t p, std::uint64_t seed);
  Matrix covariance(std::size_t t) const;  // U diag(lambda) U^T
};

// Model W with columns w_t.
struct WeightMatrix {
  Matrix w;  // p x T

  std::size_t tasks() const { return static_cast<std::size_t>(w.cols()); }
  std::size_t dim() const { return static_cast<std::size_t>(w.rows()); }
};

// Rademacher increment V with columns (1/n) sum_i sigma_t^i phi(X_t^i),
// optionally projected onto the eigendirections beyond h_t.
struct DualIncrement {
  Matrix v;  // p x T
};

struct LinearKernel {};
struct GaussianKernel { double gamma = 1.0; };
struct PolynomialKernel { int degree = 2; double shift = 0.0; };
using Kernel = std::variant<LinearKernel, GaussianKernel, PolynomialKernel>;

double kernel_eval(const Kernel& kernel, const Vector& a, const Vector& b);

// Eigenvalues of the normalized n x n Gram matrices (1/n) k(X_t^i, X_t^j),
// per task, sorted non-increasing, clipped at 0 for round-off.
TaskSpectra gram_spectra(const MultiTaskSample& sample, const Kernel& kernel);

}  // namespace mtlrc
