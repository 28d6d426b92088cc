#include "mtlrc/train.hpp"

#include "mtlrc/norms.hpp"
#include "mtlrc/rng.hpp"

#include <Eigen/Eigenvalues>

namespace mtlrc {

namespace {

Matrix random_gaussian(std::size_t rows, std::size_t cols, DrawRng& rng) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
  return m;
}

Matrix structured_truth(const SyntheticTaskConfig& config, DrawRng& rng) {
  const auto p = static_cast<Eigen::Index>(config.p);
  const auto T = static_cast<Eigen::Index>(config.T);
  switch (config.structure) {
    case TaskStructure::SharedLowRank: {
      const auto rank = static_cast<Eigen::Index>(std::max<std::size_t>(config.structure_size, 1));
      return random_gaussian(config.p, static_cast<std::size_t>(rank), rng) *
             random_gaussian(static_cast<std::size_t>(rank), config.T, rng);
    }
    case TaskStructure::GroupSparse: {
      Matrix w = Matrix::Zero(p, T);
      const auto support = std::min<std::size_t>(config.structure_size, config.p);
      for (std::size_t s = 0; s < support; ++s)
        for (Eigen::Index t = 0; t < T; ++t)
          w(static_cast<Eigen::Index>(s), t) = rng.normal();
      return w;
    }
    case TaskStructure::GraphSmooth: {
      // one shared direction plus small per-task deviations
      const Matrix shared = random_gaussian(config.p, 1, rng);
      Matrix w(p, T);
      for (Eigen::Index t = 0; t < T; ++t)
        w.col(t) = shared.col(0) + 0.2 * random_gaussian(config.p, 1, rng).col(0);
      return w;
    }
  }
  return Matrix::Zero(p, T);
}

}  // namespace

double DistributionHandle::pf_sq(const Matrix& w) const {
  double acc = 0.0;
  for (std::size_t t = 0; t < covariance.size(); ++t) {
    const Eigen::Index tc = static_cast<Eigen::Index>(t);
    acc += w.col(tc).dot(covariance[t] * w.col(tc));
  }
  return acc / static_cast<double>(covariance.size());
}

double DistributionHandle::squared_risk(const Matrix& w) const {
  double acc = 0.0;
  for (std::size_t t = 0; t < covariance.size(); ++t) {
    const Eigen::Index tc = static_cast<Eigen::Index>(t);
    const Vector diff = w.col(tc) - truth.col(tc);
    acc += diff.dot(covariance[t] * diff);
  }
  return acc / static_cast<double>(covariance.size()) + noise_var;
}

double DistributionHandle::excess_squared_risk(const Matrix& w) const {
  return squared_risk(w) - noise_var;
}

GeneratedTasks generate_tasks(const SyntheticTaskConfig& config, const HypothesisFamily& family,
                              std::uint64_t seed) {
  if (config.T < 1 || config.n < 1 || config.p < 1)
    throw std::invalid_argument("generate_tasks: positive dimensions required");
  DrawRng rng(seed, 0x7EA5);

  Matrix w0 = structured_truth(config, rng);
  const double nrm = family_norm(w0, family);
  if (nrm > 0.0) w0 *= config.target_norm_fraction * family.ball_radius() / nrm;

  GeneratedTasks out;
  out.truth.w = w0;
  out.handle.truth = w0;
  out.handle.noise_var = config.noise_std * config.noise_std;
  out.handle.covariance.resize(config.T);

  const auto p = static_cast<Eigen::Index>(config.p);
  Matrix cov;
  if (config.feature_model == FeatureModel::Sphere) {
    cov = config.kernel_bound / static_cast<double>(config.p) *
          Matrix::Identity(p, p);
  } else {
    Vector diag = Vector::Ones(p);
    if (!config.covariance_diag.empty()) {
      if (config.covariance_diag.size() != config.p)
        throw std::invalid_argument("generate_tasks: covariance_diag must have length p");
      for (Eigen::Index j = 0; j < p; ++j)
        diag(j) = config.covariance_diag[static_cast<std::size_t>(j)];
    }
    cov = diag.asDiagonal();
  }

  out.sample.features.resize(config.T);
  out.sample.labels.resize(config.T);
  for (std::size_t t = 0; t < config.T; ++t) {
    out.handle.covariance[t] = cov;
    Matrix x(static_cast<Eigen::Index>(config.n), p);
    Vector y(static_cast<Eigen::Index>(config.n));
    DrawRng trng(seed, 0x7EA6 + t + (config.resample_salt << 20));
    for (std::size_t i = 0; i < config.n; ++i) {
      Vector row(p);
      for (Eigen::Index j = 0; j < p; ++j) row(j) = trng.normal();
      if (config.feature_model == FeatureModel::Sphere) {
        row *= std::sqrt(config.kernel_bound) / row.norm();
      } else if (!config.covariance_diag.empty()) {
        for (Eigen::Index j = 0; j < p; ++j)
          row(j) *= std::sqrt(cov(j, j));
      }
      x.row(static_cast<Eigen::Index>(i)) = row.transpose();
      const double f0 = w0.col(static_cast<Eigen::Index>(t)).dot(row);
      double noise = config.noise_std > 0.0 ? config.noise_std * trng.normal() : 0.0;
      if (config.clip) noise = std::clamp(noise, -1.0, 1.0);
      y(static_cast<Eigen::Index>(i)) = f0 + noise;
    }
    out.sample.features[t] = std::move(x);
    out.sample.labels[t] = std::move(y);
  }
  out.sample.validate();
  return out;
}

Matrix lmo(const Matrix& gradient, const HypothesisFamily& family) {
  if (gradient.norm() == 0.0) return Matrix::Zero(gradient.rows(), gradient.cols());
  return -dual_maximizer(gradient, family);
}

double empirical_squared_risk(const Matrix& w, const MultiTaskSample& sample) {
  const double nT = static_cast<double>(sample.samples()) * static_cast<double>(sample.tasks());
  double acc = 0.0;
  for (std::size_t t = 0; t < sample.tasks(); ++t) {
    const Eigen::Index tc = static_cast<Eigen::Index>(t);
    acc += (sample.features[t] * w.col(tc) - sample.labels[t]).squaredNorm();
  }
  return acc / nT;
}

TrainedModel train_frank_wolfe(const MultiTaskSample& sample, const HypothesisFamily& family,
                               std::size_t max_iters, double tol) {
  sample.validate();
  const auto T = sample.tasks();
  const double nT = static_cast<double>(sample.samples()) * static_cast<double>(T);

  TrainedModel model;
  model.family = family;
  Matrix w = Matrix::Zero(static_cast<Eigen::Index>(sample.dim()), static_cast<Eigen::Index>(T));
  model.objective_trace.push_back(empirical_squared_risk(w, sample));

  for (std::size_t it = 0; it < max_iters; ++it) {
    Matrix grad(w.rows(), w.cols());
    for (std::size_t t = 0; t < T; ++t) {
      const Eigen::Index tc = static_cast<Eigen::Index>(t);
      grad.col(tc) = 2.0 / nT * sample.features[t].transpose() *
                     (sample.features[t] * w.col(tc) - sample.labels[t]);
    }
    const Matrix s = lmo(grad, family);
    const Matrix dir = s - w;
    const double gap = -grad.cwiseProduct(dir).sum();
    model.duality_gap_trace.push_back(gap);
    model.final_gap = gap;
    model.iterations = it;
    if (gap <= tol) break;

    // exact line search: quadratic objective along dir
    double curve = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const Eigen::Index tc = static_cast<Eigen::Index>(t);
      curve += (sample.features[t] * dir.col(tc)).squaredNorm();
    }
    curve /= nT;
    double gamma = 1.0;
    if (curve > 0.0) gamma = std::clamp(gap / (2.0 * curve), 0.0, 1.0);
    w += gamma * dir;
    model.objective_trace.push_back(empirical_squared_risk(w, sample));
  }
  model.weights.w = w;
  return model;
}

Matrix graph_quadratic_oracle(const MultiTaskSample& sample, const HypothesisFamily& family) {
  if (family.kind != FamilyKind::Graph)
    throw std::invalid_argument("graph_quadratic_oracle: graph family required");
  sample.validate();
  const auto T = static_cast<Eigen::Index>(sample.tasks());
  const auto p = static_cast<Eigen::Index>(sample.dim());
  const double nT = static_cast<double>(sample.samples()) * static_cast<double>(sample.tasks());
  const Matrix m = family.graph_op.d_inv_sqrt;  // W = U M, ||U||_F <= rho

  // normal equations in vec(U): H vec(U) = g
  const auto dim = p * T;
  Matrix h = Matrix::Zero(dim, dim);
  Vector g = Vector::Zero(dim);
  for (Eigen::Index t = 0; t < T; ++t) {
    const Matrix xtx = sample.features[static_cast<std::size_t>(t)].transpose() *
                       sample.features[static_cast<std::size_t>(t)] / nT;
    const Vector xty = sample.features[static_cast<std::size_t>(t)].transpose() *
                       sample.labels[static_cast<std::size_t>(t)] / nT;
    const Vector mt = m.col(t);
    for (Eigen::Index a = 0; a < T; ++a) {
      for (Eigen::Index b = 0; b < T; ++b) {
        h.block(a * p, b * p, p, p) += mt(a) * mt(b) * xtx;
      }
      g.segment(a * p, p) += mt(a) * xty;
    }
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Vector gq = es.eigenvectors().transpose() * g;
  const double rho = family.ball_radius();

  const auto norm_at = [&](double nu) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double denom = es.eigenvalues()(i) + nu;
      if (denom > 0.0) acc += gq(i) * gq(i) / (denom * denom);
    }
    return std::sqrt(acc);
  };

  Vector uq(dim);
  // unconstrained solution when it exists and fits in the ball
  const double lam_min = es.eigenvalues().minCoeff();
  bool need_multiplier = true;
  if (lam_min > 1e-12) {
    if (norm_at(0.0) <= rho) {
      for (Eigen::Index i = 0; i < dim; ++i) uq(i) = gq(i) / es.eigenvalues()(i);
      need_multiplier = false;
    }
  }
  if (need_multiplier) {
    double lo = 0.0, hi = 1.0;
    while (norm_at(hi) > rho) hi *= 4.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (norm_at(mid) > rho)
        lo = mid;
      else
        hi = mid;
      if (hi - lo <= 1e-14 * (1.0 + hi)) break;
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double denom = es.eigenvalues()(i) + hi;
      uq(i) = denom > 1e-300 ? gq(i) / denom : 0.0;
    }
  }
  const Vector uvec = es.eigenvectors() * uq;
  Matrix u(p, T);
  for (Eigen::Index t = 0; t < T; ++t) u.col(t) = uvec.segment(t * p, p);
  return u * m;
}

Matrix least_squares_per_task(const MultiTaskSample& sample) {
  sample.validate();
  const auto T = static_cast<Eigen::Index>(sample.tasks());
  Matrix w(static_cast<Eigen::Index>(sample.dim()), T);
  for (Eigen::Index t = 0; t < T; ++t) {
    const auto& x = sample.features[static_cast<std::size_t>(t)];
    w.col(t) = (x.transpose() * x).ldlt().solve(x.transpose() * sample.labels[static_cast<std::size_t>(t)]);
  }
  return w;
}

Matrix train_f_star_proxy(const SyntheticTaskConfig& config, const HypothesisFamily& family,
                          std::uint64_t seed, std::size_t max_iters, double tol) {
  SyntheticTaskConfig big = config;
  big.n = config.n * 50;
  big.resample_salt = config.resample_salt + 1;  // same truth, fresh sample
  const auto gen = generate_tasks(big, family, seed);
  return train_frank_wolfe(gen.sample, family, max_iters, tol / 10.0).weights.w;
}

RiskReport risk_report(const TrainedModel& model, const DistributionHandle& handle,
                       const std::optional<Matrix>& f_star_proxy) {
  RiskReport rep;
  rep.empirical_loss = model.objective_trace.empty() ? 0.0 : model.objective_trace.back();
  rep.population_loss = handle.squared_risk(model.weights.w);
  const Matrix& ref = f_star_proxy ? *f_star_proxy : handle.truth;
  rep.excess = rep.population_loss - handle.squared_risk(ref);
  if (f_star_proxy) rep.proxy_gap = handle.squared_risk(*f_star_proxy) - handle.noise_var;
  return rep;
}

}  // namespace mtlrc
