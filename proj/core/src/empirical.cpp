#include "mtlrc/empirical.hpp"

#include "mtlrc/fixed_point.hpp"
#include "mtlrc/norms.hpp"
#include "mtlrc/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>

namespace mtlrc {

namespace {

double finite_qstar(const HypothesisFamily& family) {
  return dual_exponent(family.q);
}

// simplex-style projection of a non-negative vector onto the l1 ball of radius z
std::vector<double> l1_ball_project(const std::vector<double>& v, double z) {
  double sum = 0.0;
  for (double x : v) sum += x;
  if (sum <= z) return v;
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double cand = (cum - z) / static_cast<double>(k + 1);
    if (u[k] - cand > 0.0)
      theta = cand;
    else
      break;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

Matrix rebuild_with_column_norms(const Matrix& w, const std::vector<double>& old_norms,
                                 const std::vector<double>& new_norms) {
  Matrix out = w;
  for (Eigen::Index t = 0; t < w.cols(); ++t) {
    const double on = old_norms[static_cast<std::size_t>(t)];
    if (on > 0.0)
      out.col(t) *= new_norms[static_cast<std::size_t>(t)] / on;
    else
      out.col(t).setZero();
  }
  return out;
}

}  // namespace

double family_norm(const Matrix& w, const HypothesisFamily& family) {
  switch (family.kind) {
    case FamilyKind::GroupNorm:
      return lp_aggregate(column_norms(w), family.q);
    case FamilyKind::SchattenNorm:
      return lp_aggregate(singular_values(w), family.q);
    case FamilyKind::Graph:
      return (w * family.graph_op.d_sqrt).norm();
  }
  return 0.0;
}

double dual_norm(const Matrix& v, const HypothesisFamily& family) {
  switch (family.kind) {
    case FamilyKind::GroupNorm:
      return lp_aggregate(column_norms(v), finite_qstar(family));
    case FamilyKind::SchattenNorm:
      return lp_aggregate(singular_values(v), finite_qstar(family));
    case FamilyKind::Graph:
      return (v * family.graph_op.d_inv_sqrt).norm();
  }
  return 0.0;
}

Matrix dual_maximizer(const Matrix& v, const HypothesisFamily& family) {
  const double rho = family.ball_radius();
  Matrix w = Matrix::Zero(v.rows(), v.cols());
  switch (family.kind) {
    case FamilyKind::GroupNorm: {
      const auto norms = column_norms(v);
      const double qstar = finite_qstar(family);
      if (std::isinf(qstar)) {
        std::size_t best = 0;
        for (std::size_t t = 1; t < norms.size(); ++t)
          if (norms[t] > norms[best]) best = t;
        if (norms[best] == 0.0) return w;
        w.col(static_cast<Eigen::Index>(best)) =
            rho / norms[best] * v.col(static_cast<Eigen::Index>(best));
        return w;
      }
      std::vector<double> weights(norms.size(), 0.0);
      double scale = 0.0;
      for (double nv : norms) scale = std::max(scale, nv);
      if (scale == 0.0) return w;
      for (std::size_t t = 0; t < norms.size(); ++t)
        weights[t] = std::pow(norms[t] / scale, qstar - 1.0);
      for (std::size_t t = 0; t < norms.size(); ++t)
        if (norms[t] > 0.0)
          w.col(static_cast<Eigen::Index>(t)) =
              weights[t] / norms[t] * v.col(static_cast<Eigen::Index>(t));
      const double wnorm = lp_aggregate(column_norms(w), family.q);
      if (wnorm > 0.0) w *= rho / wnorm;
      return w;
    }
    case FamilyKind::SchattenNorm: {
      Eigen::JacobiSVD<Matrix> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& sv = svd.singularValues();
      if (sv.size() == 0 || sv(0) == 0.0) return w;
      const double qstar = finite_qstar(family);
      Vector weights = Vector::Zero(sv.size());
      if (std::isinf(qstar)) {
        weights(0) = 1.0;
      } else {
        for (Eigen::Index i = 0; i < sv.size(); ++i)
          weights(i) = std::pow(sv(i) / sv(0), qstar - 1.0);
      }
      w = svd.matrixU() * weights.asDiagonal() * svd.matrixV().transpose();
      const double wnorm = lp_aggregate(singular_values(w), family.q);
      if (wnorm > 0.0) w *= rho / wnorm;
      return w;
    }
    case FamilyKind::Graph: {
      const double dn = (v * family.graph_op.d_inv_sqrt).norm();
      if (dn == 0.0) return w;
      w = rho / dn * v * family.graph_op.d_inv;
      return w;
    }
  }
  return w;
}

DualIncrement rademacher_increment(const MultiTaskSample& sample,
                                   const std::vector<double>& signs) {
  const auto T = sample.tasks();
  const auto n = sample.samples();
  DualIncrement inc;
  inc.v = Matrix::Zero(static_cast<Eigen::Index>(sample.dim()), static_cast<Eigen::Index>(T));
  for (std::size_t t = 0; t < T; ++t) {
    Vector acc = Vector::Zero(static_cast<Eigen::Index>(sample.dim()));
    for (std::size_t i = 0; i < n; ++i)
      acc += signs[t * n + i] * sample.features[t].row(static_cast<Eigen::Index>(i)).transpose();
    inc.v.col(static_cast<Eigen::Index>(t)) = acc / static_cast<double>(n);
  }
  return inc;
}

namespace {

std::vector<double> signs_from_rng(std::uint64_t seed, std::size_t draw, std::size_t count) {
  DrawRng rng(seed, draw);
  std::vector<double> signs(count);
  for (std::size_t k = 0; k < count; ++k) signs[k] = rng.rademacher();
  return signs;
}

std::vector<double> signs_from_pattern(std::size_t pattern, std::size_t count) {
  std::vector<double> signs(count);
  for (std::size_t k = 0; k < count; ++k) signs[k] = (pattern >> k) & 1u ? 1.0 : -1.0;
  return signs;
}

double ball_sup(const MultiTaskSample& sample, const HypothesisFamily& family,
                const std::vector<double>& signs) {
  const DualIncrement inc = rademacher_increment(sample, signs);
  return family.ball_radius() * dual_norm(inc.v, family) / static_cast<double>(sample.tasks());
}

}  // namespace

McEstimate empirical_grc(const MultiTaskSample& sample, const HypothesisFamily& family,
                         std::size_t mc_draws, std::uint64_t seed, bool enumerate) {
  sample.validate();
  const std::size_t count = sample.tasks() * sample.samples();
  std::size_t draws = mc_draws;
  if (enumerate) {
    if (count > 20) throw std::invalid_argument("empirical_grc: enumeration needs nT <= 20");
    draws = std::size_t{1} << count;
  } else if (mc_draws < 1) {
    throw std::invalid_argument("empirical_grc: mc_draws >= 1 required");
  }
  std::vector<double> values(draws);
  parallel_for(draws, [&](std::size_t k) {
    const auto signs =
        enumerate ? signs_from_pattern(k, count) : signs_from_rng(seed, k, count);
    values[k] = ball_sup(sample, family, signs);
  });
  const auto ms = summarize(values);
  return {ms.mean, ms.std_error, draws};
}

double brute_force_rc(const MultiTaskSample& sample, const HypothesisFamily& family) {
  sample.validate();
  const std::size_t count = sample.tasks() * sample.samples();
  if (count > 20) throw std::invalid_argument("brute_force_rc: nT <= 20 required");
  const std::size_t patterns = std::size_t{1} << count;
  double sum = 0.0;
  for (std::size_t pattern = 0; pattern < patterns; ++pattern)
    sum += ball_sup(sample, family, signs_from_pattern(pattern, count));
  return sum / static_cast<double>(patterns);
}

namespace {

// Euclidean projection machinery for the ball/ellipsoid intersection.
struct EllipsoidGeometry {
  std::vector<Matrix> basis;        // eigenvectors of Jhat_t
  std::vector<Vector> eigenvalues;  // eigenvalues of Jhat_t
  Matrix center;                    // p x T
  double r = 0.0;
  double T = 1.0;

  double quad(const Matrix& w) const {
    double acc = 0.0;
    for (std::size_t t = 0; t < basis.size(); ++t) {
      const Eigen::Index tc = static_cast<Eigen::Index>(t);
      const Vector y = basis[t].transpose() * (w.col(tc) - center.col(tc));
      acc += y.cwiseAbs2().dot(eigenvalues[t]);
    }
    return acc / T;
  }

  Matrix project(const Matrix& z) const {
    if (quad(z) <= r) return z;
    // (I + (2 mu / T) J_t)(w_t - c_t) = z_t - c_t in the eigenbasis
    std::vector<Vector> y(basis.size());
    for (std::size_t t = 0; t < basis.size(); ++t) {
      const Eigen::Index tc = static_cast<Eigen::Index>(t);
      y[t] = basis[t].transpose() * (z.col(tc) - center.col(tc));
    }
    const auto value_at = [&](double mu) {
      double acc = 0.0;
      for (std::size_t t = 0; t < basis.size(); ++t)
        for (Eigen::Index j = 0; j < y[t].size(); ++j) {
          const double lam = eigenvalues[t](j);
          const double denom = 1.0 + 2.0 * mu * lam / T;
          acc += lam * y[t](j) * y[t](j) / (denom * denom);
        }
      return acc / T;
    };
    double lo = 0.0, hi = 1.0;
    while (value_at(hi) > r) hi *= 4.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (value_at(mid) > r)
        lo = mid;
      else
        hi = mid;
      if (hi - lo <= 1e-12 * (1.0 + hi)) break;
    }
    const double mu = hi;
    Matrix w = z;
    for (std::size_t t = 0; t < basis.size(); ++t) {
      const Eigen::Index tc = static_cast<Eigen::Index>(t);
      Vector yt = y[t];
      for (Eigen::Index j = 0; j < yt.size(); ++j)
        yt(j) /= 1.0 + 2.0 * mu * eigenvalues[t](j) / T;
      w.col(tc) = center.col(tc) + basis[t] * yt;
    }
    return w;
  }
};

Matrix ball_project(const Matrix& z, const HypothesisFamily& family) {
  const double rho = family.ball_radius();
  switch (family.kind) {
    case FamilyKind::GroupNorm: {
      if (family.q == 2.0) {
        const double nrm = z.norm();
        return nrm <= rho ? z : Matrix(rho / nrm * z);
      }
      // q = 1: project the column-norm vector onto the l1 ball
      const auto norms = column_norms(z);
      if (lp_aggregate(norms, 1.0) <= rho) return z;
      return rebuild_with_column_norms(z, norms, l1_ball_project(norms, rho));
    }
    case FamilyKind::SchattenNorm: {
      if (family.q == 2.0) {
        const double nrm = z.norm();
        return nrm <= rho ? z : Matrix(rho / nrm * z);
      }
      Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
      std::vector<double> sv(static_cast<std::size_t>(svd.singularValues().size()));
      for (std::size_t i = 0; i < sv.size(); ++i)
        sv[i] = svd.singularValues()(static_cast<Eigen::Index>(i));
      if (lp_aggregate(sv, 1.0) <= rho) return z;
      const auto proj = l1_ball_project(sv, rho);
      Vector d(static_cast<Eigen::Index>(proj.size()));
      for (std::size_t i = 0; i < proj.size(); ++i) d(static_cast<Eigen::Index>(i)) = proj[i];
      return svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
    }
    case FamilyKind::Graph: {
      const GraphOperator& op = family.graph_op;
      if ((z * op.d_sqrt).norm() <= rho) return z;
      // minimize ||W - Z||_F s.t. ||W D^{1/2}||_F <= rho: W = Z (I + nu D)^{-1}
      Eigen::SelfAdjointEigenSolver<Matrix> es(op.d);
      const Matrix zq = z * es.eigenvectors();
      const auto value_at = [&](double nu) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < zq.cols(); ++j) {
          const double lam = es.eigenvalues()(j);
          const double denom = 1.0 + nu * lam;
          acc += lam * zq.col(j).squaredNorm() / (denom * denom);
        }
        return acc;
      };
      const double target = rho * rho;
      double lo = 0.0, hi = 1.0;
      while (value_at(hi) > target) hi *= 4.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (value_at(mid) > target)
          lo = mid;
        else
          hi = mid;
        if (hi - lo <= 1e-12 * (1.0 + hi)) break;
      }
      Matrix wq = zq;
      for (Eigen::Index j = 0; j < wq.cols(); ++j) wq.col(j) /= 1.0 + hi * es.eigenvalues()(j);
      return wq * es.eigenvectors().transpose();
    }
  }
  return z;
}

// Dykstra alternating projections onto ball  intersect  ellipsoid
Matrix dykstra_project(const Matrix& z, const HypothesisFamily& family,
                       const EllipsoidGeometry& ell, int max_rounds = 60) {
  Matrix x = z;
  Matrix p = Matrix::Zero(z.rows(), z.cols());
  Matrix q = Matrix::Zero(z.rows(), z.cols());
  const double scale = std::max(1.0, z.norm());
  for (int round = 0; round < max_rounds; ++round) {
    const Matrix y = ball_project(x + p, family);
    p = x + p - y;
    const Matrix xn = ell.project(y + q);
    q = y + q - xn;
    const double shift = (xn - x).norm();
    x = xn;
    if (shift <= 1e-11 * scale && round > 1) break;
  }
  return x;
}

// strictly feasible point: exact ball projection then shrink toward the
// ellipsoid center (both sets are convex and contain the segment)
Matrix enforce_feasible(const Matrix& w, const HypothesisFamily& family,
                        const EllipsoidGeometry& ell) {
  Matrix x = ball_project(w, family);
  const double g = ell.quad(x);
  if (g > ell.r) {
    const double tau = std::sqrt(ell.r / g) * (1.0 - 1e-12);
    x = ell.center + tau * (x - ell.center);
  }
  return x;
}

struct LocalDrawState {
  Matrix w;        // warm start, feasible
  double value = 0.0;
  bool converged = true;
};

// per-draw maximization of <W, V>/T over ball cap ellipsoid
void solve_local_draw(const Matrix& v, const HypothesisFamily& family,
                      const EllipsoidGeometry& ell, const LocalRcOptions& options,
                      LocalDrawState& state) {
  const double T = ell.T;
  const Matrix wg = dual_maximizer(v, family);
  const double global_value = wg.cwiseProduct(v).sum() / T;
  if (ell.quad(wg) <= ell.r) {
    state.w = wg;
    state.value = global_value;
    state.converged = true;
    return;
  }
  const auto objective = [&](const Matrix& w) { return w.cwiseProduct(v).sum() / T; };

  Matrix x = enforce_feasible(dykstra_project(wg, family, ell), family, ell);
  double best = objective(x);
  Matrix best_w = x;
  if (state.value > best) {  // warm start from the previous radius
    best = state.value;
    best_w = state.w;
    x = state.w;
  }
  const double vnorm = v.norm();
  if (vnorm == 0.0) {
    state.w = best_w;
    state.value = best;
    return;
  }
  const double step = 0.5 * family.ball_radius() / vnorm;
  const double floor = std::abs(global_value) * 1e-12 + 1e-300;
  std::size_t since_improvement = 0;
  state.converged = false;
  for (std::size_t it = 0; it < options.max_iters; ++it) {
    x = enforce_feasible(dykstra_project(x + step * v, family, ell), family, ell);
    const double val = objective(x);
    const bool significant = val - best > options.tol * std::max(std::abs(best), floor);
    if (val > best) {
      best = val;
      best_w = x;
    }
    if (significant) {
      since_improvement = 0;
    } else if (++since_improvement >= 50) {
      state.converged = true;
      break;
    }
  }
  state.w = best_w;
  state.value = best;
}

EllipsoidGeometry make_geometry(const MultiTaskSample& sample, double r,
                                const LocalRcOptions& options) {
  EllipsoidGeometry ell;
  const auto T = sample.tasks();
  ell.T = static_cast<double>(T);
  ell.r = r;
  ell.basis.resize(T);
  ell.eigenvalues.resize(T);
  ell.center = options.center ? *options.center
                              : Matrix::Zero(static_cast<Eigen::Index>(sample.dim()),
                                             static_cast<Eigen::Index>(T));
  for (std::size_t t = 0; t < T; ++t) {
    const Matrix jhat = sample.features[t].transpose() * sample.features[t] /
                        static_cast<double>(sample.samples());
    Eigen::SelfAdjointEigenSolver<Matrix> es(jhat);
    ell.basis[t] = es.eigenvectors();
    ell.eigenvalues[t] = es.eigenvalues().cwiseMax(0.0);
  }
  return ell;
}

void check_local_family(const HypothesisFamily& family) {
  if (family.kind != FamilyKind::Graph && family.q != 1.0 && family.q != 2.0)
    throw std::invalid_argument("empirical_local_rc: group/Schatten q in {1,2} or graph only");
}

}  // namespace

std::vector<LocalRcEstimate> empirical_local_rc_profile(
    const MultiTaskSample& sample, const HypothesisFamily& family,
    const std::vector<double>& r_grid, std::size_t mc_draws, std::uint64_t seed,
    const LocalRcOptions& options) {
  sample.validate();
  check_local_family(family);
  if (mc_draws < 1) throw std::invalid_argument("empirical_local_rc: mc_draws >= 1 required");
  // the feasibility correction walks toward the centre, so it must lie in the ball
  if (options.center &&
      family_norm(*options.center, family) > family.ball_radius() * (1.0 + 1e-9))
    throw std::invalid_argument("empirical_local_rc: ellipsoid center outside the family ball");
  for (std::size_t i = 0; i + 1 < r_grid.size(); ++i)
    if (!(r_grid[i] > 0.0 && r_grid[i] < r_grid[i + 1]))
      throw std::invalid_argument("empirical_local_rc: increasing positive r grid required");

  const std::size_t count = sample.tasks() * sample.samples();
  std::vector<Matrix> increments(mc_draws);
  for (std::size_t k = 0; k < mc_draws; ++k)
    increments[k] = rademacher_increment(sample, signs_from_rng(seed, k, count)).v;

  std::vector<LocalDrawState> states(mc_draws);
  for (auto& s : states)
    s.w = Matrix::Zero(static_cast<Eigen::Index>(sample.dim()),
                       static_cast<Eigen::Index>(sample.tasks()));

  std::vector<LocalRcEstimate> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    EllipsoidGeometry ell = make_geometry(sample, r, options);
    std::vector<double> values(mc_draws);
    std::vector<char> converged(mc_draws, 1);
    parallel_for(mc_draws, [&](std::size_t k) {
      solve_local_draw(increments[k], family, ell, options, states[k]);
      values[k] = states[k].value;
      converged[k] = states[k].converged ? 1 : 0;
    });
    const auto ms = summarize(values);
    LocalRcEstimate est;
    est.estimate = ms.mean;
    est.std_error = ms.std_error;
    est.draws = mc_draws;
    est.converged = std::all_of(converged.begin(), converged.end(), [](char c) { return c == 1; });
    out.push_back(est);
  }
  return out;
}

LocalRcEstimate empirical_local_rc(const MultiTaskSample& sample, const HypothesisFamily& family,
                                   double r, std::size_t mc_draws, std::uint64_t seed,
                                   const LocalRcOptions& options) {
  if (!(r > 0.0)) throw std::invalid_argument("empirical_local_rc: r > 0 required");
  return empirical_local_rc_profile(sample, family, {r}, mc_draws, seed, options).front();
}

double empirical_spectrum_max(const MultiTaskSample& sample) {
  sample.validate();
  double out = 0.0;
  for (std::size_t t = 0; t < sample.tasks(); ++t) {
    const Matrix jhat = sample.features[t].transpose() * sample.features[t] /
                        static_cast<double>(sample.samples());
    Eigen::SelfAdjointEigenSolver<Matrix> es(jhat);
    out = std::max(out, es.eigenvalues().maxCoeff());
  }
  return out;
}

IdentityCheckReport second_moment_identity_check(const EigenSystem& eigensystem, std::size_t n,
                                              std::size_t mc_draws, std::uint64_t seed,
                                              std::size_t top_directions, double rel_tol) {
  eigensystem.validate();
  if (n < 1 || mc_draws < 1)
    throw std::invalid_argument("second_moment_identity_check: n, draws >= 1 required");
  IdentityCheckReport rep;
  const std::size_t T = eigensystem.tasks();
  for (std::size_t t = 0; t < T; ++t) {
    const auto p = static_cast<std::size_t>(eigensystem.basis[t].rows());
    const std::size_t dirs = std::min(top_directions, p);
    // sample in eigencoordinates: <phi(X), u_j> = sqrt(lambda_j) g_j
    std::vector<std::vector<double>> per_draw(dirs, std::vector<double>(mc_draws, 0.0));
    parallel_for(mc_draws, [&](std::size_t k) {
      DrawRng rng(seed, t * mc_draws + k);
      std::vector<double> dot(dirs, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double sig = rng.rademacher();
        for (std::size_t j = 0; j < dirs; ++j) {
          const double coord = std::sqrt(eigensystem.values[t][j]) * rng.normal();
          dot[j] += sig * coord;
        }
      }
      for (std::size_t j = 0; j < dirs; ++j) {
        const double s = dot[j] / static_cast<double>(n);
        per_draw[j][k] = s * s;
      }
    });
    const double lam_scale = eigensystem.values[t].empty() ? 1.0 : eigensystem.values[t][0];
    for (std::size_t j = 0; j < dirs; ++j) {
      const double est = summarize(per_draw[j]).mean;
      const double target = eigensystem.values[t][j] / static_cast<double>(n);
      const double abs_err = std::abs(est - target);
      rep.max_abs_error = std::max(rep.max_abs_error, abs_err);
      const double small = 1e-3 * lam_scale / static_cast<double>(n);
      if (target > small)
        rep.max_rel_error = std::max(rep.max_rel_error, abs_err / target);
      else if (abs_err > small)
        rep.pass = false;  // near-zero directions checked in absolute terms
    }
  }
  if (rep.max_rel_error > rel_tol) rep.pass = false;
  return rep;
}

IdentityCheckReport population_variance_identity_check(const WeightMatrix& w,
                                                    const EigenSystem& eigensystem,
                                                    double tol) {
  eigensystem.validate();
  if (w.tasks() != eigensystem.tasks())
    throw std::invalid_argument("population_variance_identity_check: task count mismatch");
  const double T = static_cast<double>(w.tasks());
  double quad_route = 0.0;
  double eigen_route = 0.0;
  for (std::size_t t = 0; t < eigensystem.tasks(); ++t) {
    const Eigen::Index tc = static_cast<Eigen::Index>(t);
    quad_route += w.w.col(tc).dot(eigensystem.covariance(t) * w.w.col(tc));
    const Vector coords = eigensystem.basis[t].transpose() * w.w.col(tc);
    for (Eigen::Index j = 0; j < coords.size(); ++j)
      eigen_route += eigensystem.values[t][static_cast<std::size_t>(j)] * coords(j) * coords(j);
  }
  quad_route /= T;
  eigen_route /= T;
  IdentityCheckReport rep;
  rep.max_abs_error = std::abs(quad_route - eigen_route);
  const double scale = std::max({std::abs(quad_route), std::abs(eigen_route), 1e-300});
  rep.max_rel_error = rep.max_abs_error / scale;
  rep.pass = rep.max_rel_error <= tol;
  return rep;
}

TalagrandReport talagrand_experiment(const TalagrandConfig& config) {
  const std::size_t M = config.class_size;
  const std::size_t T = config.T;
  const std::size_t n = config.n;
  const std::size_t p = config.p;
  if (M < 1 || T < 1 || n < 1 || p < 1)
    throw std::invalid_argument("talagrand_experiment: positive dimensions required");

  // finite class inside the family ball
  const double rho = config.family.ball_radius();
  std::vector<Matrix> members(M);
  {
    DrawRng rng(config.seed, 0xC1A55);
    for (std::size_t m = 0; m < M; ++m) {
      Matrix w(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(T));
      for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = rng.normal();
      const double nrm = family_norm(w, config.family);
      const double frac = 0.2 + 0.8 * rng.uniform();
      members[m] = (rho * frac / nrm) * w;
    }
  }

  const double s2 = config.feature_scale * config.feature_scale;
  // r = sup_f (1/T) sum_t E f_t^2 and the effective range proxy for b
  double r = 0.0;
  double b = 0.0;
  for (const auto& w : members) {
    double acc = 0.0;
    for (Eigen::Index t = 0; t < w.cols(); ++t) {
      const double colsq = w.col(t).squaredNorm();
      acc += s2 * colsq;
      b = std::max(b, 4.0 * config.feature_scale * std::sqrt(colsq));
    }
    r = std::max(r, acc / static_cast<double>(T));
  }

  const ProblemParams params(n, T, 1.0);

  // one-off Rademacher complexity of the finite class (sup exact per draw)
  std::vector<double> rc_vals(config.rc_draws);
  parallel_for(config.rc_draws, [&](std::size_t k) {
    DrawRng rng(config.seed, 0xA000000 + k);
    Matrix xsum = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(T));
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t i = 0; i < n; ++i) {
        const double sig = rng.rademacher();
        for (std::size_t c = 0; c < p; ++c)
          xsum(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(t)) +=
              sig * config.feature_scale * rng.normal();
      }
    double sup = -std::numeric_limits<double>::infinity();
    for (const auto& w : members)
      sup = std::max(sup, w.cwiseProduct(xsum).sum() / static_cast<double>(n * T));
    rc_vals[k] = sup;
  });
  const double rc = summarize(rc_vals).mean;
  const double rhs = talagrand_rhs(rc, r, config.x, params, b);

  // violation frequency of Z = sup_f (P f - P_n f) over dataset redraws;
  // P f = 0 for centred features, P_n f depends on the feature means only
  std::vector<char> violated(config.redraws, 0);
  parallel_for(config.redraws, [&](std::size_t k) {
    DrawRng rng(config.seed, 0xB000000 + k);
    Matrix mean = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(T));
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < p; ++c)
          mean(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(t)) +=
              config.feature_scale * rng.normal();
    mean /= static_cast<double>(n);
    double z = -std::numeric_limits<double>::infinity();
    for (const auto& w : members) {
      double pnf = 0.0;
      for (Eigen::Index t = 0; t < mean.cols(); ++t) pnf += w.col(t).dot(mean.col(t));
      z = std::max(z, -pnf / static_cast<double>(T));
    }
    violated[k] = z > rhs ? 1 : 0;
  });

  TalagrandReport rep;
  rep.redraws = config.redraws;
  for (char c : violated) rep.violations += c;
  rep.violation_frequency =
      static_cast<double>(rep.violations) / static_cast<double>(config.redraws);
  const double f = rep.violation_frequency;
  rep.binomial_std_error = std::sqrt(std::max(f * (1.0 - f), 1.0 / static_cast<double>(config.redraws)) /
                                     static_cast<double>(config.redraws));
  rep.target = std::exp(-config.x);
  rep.rhs_rademacher = rc;
  rep.variance_radius = r;
  rep.range_bound = b;
  return rep;
}

InequalityReport khintchine_check(const std::vector<Vector>& vectors, double p_exponent,
                                  std::size_t mc_draws, std::uint64_t seed) {
  if (vectors.empty() || mc_draws < 1)
    throw std::invalid_argument("khintchine_check: vectors and draws required");
  if (!(p_exponent >= 1.0)) throw std::invalid_argument("khintchine_check: p >= 1 required");
  double sq = 0.0;
  for (const auto& v : vectors) sq += v.squaredNorm();
  const double c = std::max(1.0, p_exponent - 1.0);
  std::vector<double> values(mc_draws);
  parallel_for(mc_draws, [&](std::size_t k) {
    DrawRng rng(seed, k);
    Vector acc = Vector::Zero(vectors[0].size());
    for (const auto& v : vectors) acc += rng.rademacher() * v;
    values[k] = std::pow(acc.norm(), p_exponent);
  });
  const auto ms = summarize(values);
  InequalityReport rep;
  rep.lhs = ms.mean;
  rep.std_error = ms.std_error;
  rep.rhs = std::pow(c * sq, p_exponent / 2.0);
  rep.margin = rep.rhs + 3.0 * ms.std_error - ms.mean;
  rep.pass = rep.margin >= 0.0;
  return rep;
}

InequalityReport rosenthal_young_check(const std::vector<double>& upper_bounds, double q_moment,
                                       std::size_t mc_draws, std::uint64_t seed) {
  if (upper_bounds.empty() || mc_draws < 1)
    throw std::invalid_argument("rosenthal_young_check: bounds and draws required");
  if (!(q_moment >= 0.5)) throw std::invalid_argument("rosenthal_young_check: q >= 1/2 required");
  double bmax = 0.0;
  double mean_expectation = 0.0;
  for (double b : upper_bounds) {
    if (!(b > 0.0)) throw std::invalid_argument("rosenthal_young_check: positive bounds required");
    bmax = std::max(bmax, b);
    mean_expectation += 0.5 * b;  // X_i ~ U(0, b_i)
  }
  const double n = static_cast<double>(upper_bounds.size());
  mean_expectation /= n;
  std::vector<double> values(mc_draws);
  parallel_for(mc_draws, [&](std::size_t k) {
    DrawRng rng(seed, k);
    double acc = 0.0;
    for (double b : upper_bounds) acc += b * rng.uniform();
    values[k] = std::pow(acc / n, q_moment);
  });
  const auto ms = summarize(values);
  InequalityReport rep;
  rep.lhs = ms.mean;
  rep.std_error = ms.std_error;
  rep.rhs = std::pow(2.0 * q_moment * 2.718281828459045, q_moment) *
            (std::pow(bmax / n, q_moment) + std::pow(mean_expectation, q_moment));
  rep.margin = rep.rhs + 3.0 * ms.std_error - ms.mean;
  rep.pass = rep.margin >= 0.0;
  return rep;
}

}  // namespace mtlrc
