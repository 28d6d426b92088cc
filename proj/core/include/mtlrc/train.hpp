#pragma once

#include "mtlrc/empirical.hpp"
#include "mtlrc/sample.hpp"
#include "mtlrc/types.hpp"

#include <optional>

namespace mtlrc {

enum class TaskStructure { SharedLowRank, GroupSparse, GraphSmooth };
enum class FeatureModel { Gaussian, Sphere };  // Sphere: ||x|| = sqrt(kernel_bound) exactly

struct SyntheticTaskConfig {
  std::size_t T = 4;
  std::size_t n = 100;
  std::size_t p = 10;
  TaskStructure structure = TaskStructure::SharedLowRank;
  std::size_t structure_size = 1;       // rank or support size
  double noise_std = 0.0;
  FeatureModel feature_model = FeatureModel::Sphere;
  double kernel_bound = 1.0;            // sup k(x,x) for the sphere model
  std::vector<double> covariance_diag;  // Gaussian model: diagonal feature covariance
  bool clip = false;                    // clip labels so |f0(x) - y| <= 1
  double target_norm_fraction = 0.5;    // ||W0|| as a fraction of the family ball radius
  std::uint64_t resample_salt = 0;      // same truth, independent feature draw
};

// Analytic task distribution: zero-mean features with known covariance, so
// Pf, Pf^2 and the squared-error risk of any linear model are exact.
struct DistributionHandle {
  std::vector<Matrix> covariance;  // T blocks, p x p
  Matrix truth;                    // W0, p x T
  double noise_var = 0.0;

  double pf(const Matrix& w, std::size_t t) const { (void)w; (void)t; return 0.0; }  // zero-mean features
  double pf_sq(const Matrix& w) const;                  // (1/T) sum_t w_t' C_t w_t
  double squared_risk(const Matrix& w) const;           // (1/T) sum_t (w_t-w0_t)' C_t (w_t-w0_t) + noise_var
  double excess_squared_risk(const Matrix& w) const;    // squared_risk(w) - noise_var
};

struct GeneratedTasks {
  MultiTaskSample sample;
  WeightMatrix truth;
  DistributionHandle handle;
};

GeneratedTasks generate_tasks(const SyntheticTaskConfig& config, const HypothesisFamily& family,
                              std::uint64_t seed);

// Linear minimization oracle over the family ball: argmin_{W in ball} <W, G>
// = -rho * (dual-norm-achieving direction). Zero gradient returns zero.
Matrix lmo(const Matrix& gradient, const HypothesisFamily& family);

struct TrainedModel {
  WeightMatrix weights;
  HypothesisFamily family;
  std::vector<double> objective_trace;    // P_n loss per iteration
  std::vector<double> duality_gap_trace;
  double final_gap = 0.0;
  std::size_t iterations = 0;
};

// Frank-Wolfe with exact line search on the squared loss
//   P_n l = (1/nT) sum_t sum_i (<w_t, x_t^i> - y_t^i)^2
// over the family ball; stops when the duality gap <= tol.
TrainedModel train_frank_wolfe(const MultiTaskSample& sample, const HypothesisFamily& family,
                               std::size_t max_iters, double tol);

// Empirical squared risk of a model on a sample.
double empirical_squared_risk(const Matrix& w, const MultiTaskSample& sample);

// Exact minimizer of the squared loss over the graph-family ball: normal
// equations in the whitened variable U = W D^{1/2}, with a multiplier
// root-finding step when the unconstrained solution falls outside the ball.
// Independent of the Frank-Wolfe path; used as its oracle.
Matrix graph_quadratic_oracle(const MultiTaskSample& sample, const HypothesisFamily& family);

// Per-task unconstrained least squares (requires n >= p).
Matrix least_squares_per_task(const MultiTaskSample& sample);

struct RiskReport {
  double empirical_loss = 0.0;
  double population_loss = 0.0;
  double excess = 0.0;        // against f* (or its proxy); may be slightly negative
  double proxy_gap = 0.0;     // empirical loss gap of the proxy, 0 when exact truth used
};

// Risk of a trained model: exact population loss through the analytic handle,
// excess against f_star (truth for realizable noiseless data, or a proxy
// trained on a larger sample).
RiskReport risk_report(const TrainedModel& model, const DistributionHandle& handle,
                       const std::optional<Matrix>& f_star_proxy = std::nullopt);

// Class-optimal reference trained on an independent sample 50x the size with
// a tenth of the duality-gap tolerance.
Matrix train_f_star_proxy(const SyntheticTaskConfig& config, const HypothesisFamily& family,
                          std::uint64_t seed, std::size_t max_iters, double tol);

}  // namespace mtlrc
