#include "mtlrc/sample.hpp"

#include "mtlrc/rng.hpp"

#include <Eigen/Eigenvalues>

namespace mtlrc {

void MultiTaskSample::validate() const {
  if (features.empty() || features.size() != labels.size())
    throw std::invalid_argument("MultiTaskSample: features/labels block mismatch");
  const auto n = features[0].rows();
  const auto p = features[0].cols();
  for (std::size_t t = 0; t < features.size(); ++t) {
    if (features[t].rows() != n || features[t].cols() != p || labels[t].size() != n)
      throw std::invalid_argument("MultiTaskSample: all blocks must share n and p");
    if (!features[t].allFinite() || !labels[t].allFinite())
      throw std::invalid_argument("MultiTaskSample: finite entries required");
  }
}

void EigenSystem::validate(double tol) const {
  if (basis.empty() || basis.size() != values.size())
    throw std::invalid_argument("EigenSystem: basis/values mismatch");
  for (std::size_t t = 0; t < basis.size(); ++t) {
    const auto p = basis[t].rows();
    if (basis[t].cols() != p || static_cast<Eigen::Index>(values[t].size()) != p)
      throw std::invalid_argument("EigenSystem: square basis with matching values required");
    const Matrix gram = basis[t].transpose() * basis[t];
    if ((gram - Matrix::Identity(p, p)).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("EigenSystem: basis not orthonormal");
    double prev = std::numeric_limits<double>::infinity();
    for (double v : values[t]) {
      if (!(v >= 0.0) || v > prev + tol)
        throw std::invalid_argument("EigenSystem: eigenvalues must be non-negative, non-increasing");
      prev = v;
    }
  }
}

EigenSystem EigenSystem::random(std::size_t T, std::size_t p, std::uint64_t seed) {
  EigenSystem sys;
  sys.basis.resize(T);
  sys.values.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    DrawRng rng(seed, 7000 + t);
    Matrix g(p, p);
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();
    const Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    sys.basis[t] = q;
    sys.values[t].resize(p);
    double prev = 1.0 + rng.uniform();
    for (std::size_t j = 0; j < p; ++j) {
      prev *= 0.4 + 0.6 * rng.uniform();  // strictly decreasing positive sequence
      sys.values[t][j] = prev;
    }
  }
  return sys;
}

Matrix EigenSystem::covariance(std::size_t t) const {
  const auto p = basis[t].rows();
  Vector lam(p);
  for (Eigen::Index j = 0; j < p; ++j) lam(j) = values[t][static_cast<std::size_t>(j)];
  return basis[t] * lam.asDiagonal() * basis[t].transpose();
}

double kernel_eval(const Kernel& kernel, const Vector& a, const Vector& b) {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LinearKernel>) {
          return a.dot(b);
        } else if constexpr (std::is_same_v<K, GaussianKernel>) {
          return std::exp(-k.gamma * (a - b).squaredNorm());
        } else {
          return std::pow(a.dot(b) + k.shift, k.degree);
        }
      },
      kernel);
}

TaskSpectra gram_spectra(const MultiTaskSample& sample, const Kernel& kernel) {
  sample.validate();
  const auto n = static_cast<Eigen::Index>(sample.samples());
  std::vector<std::vector<double>> per_task(sample.tasks());
  for (std::size_t t = 0; t < sample.tasks(); ++t) {
    std::vector<Vector> rows(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
      rows[static_cast<std::size_t>(i)] = sample.features[t].row(i).transpose();
    Matrix gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) {
        const double v = kernel_eval(kernel, rows[static_cast<std::size_t>(i)],
                                     rows[static_cast<std::size_t>(j)]) /
                         static_cast<double>(n);
        if (!std::isfinite(v)) throw std::invalid_argument("gram_spectra: non-finite kernel value");
        gram(i, j) = v;
        gram(j, i) = v;
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    std::vector<double> lam(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
      lam[static_cast<std::size_t>(i)] = std::max(0.0, es.eigenvalues()(n - 1 - i));
    per_task[t] = std::move(lam);
  }
  return TaskSpectra(std::move(per_task));
}

}  // namespace mtlrc
