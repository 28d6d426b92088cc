#pragma once

#include "mtlrc/rng.hpp"
#include "mtlrc/sample.hpp"
#include "mtlrc/types.hpp"

#include <optional>

namespace mtlrc {

// Dual norm of the family's constraint norm, evaluated on a p x T matrix:
// group -> l_{q*} of column norms (max column at q* = inf), Schatten -> l_{q*}
// of singular values, graph -> || V D^{-1/2} ||_F.
double dual_norm(const Matrix& v, const HypothesisFamily& family);

// Direction achieving the Hoelder equality: returns W in the family ball of
// radius rho with <W, V> = rho * dual_norm(V). Zero input gives zero.
Matrix dual_maximizer(const Matrix& v, const HypothesisFamily& family);

// Membership distance: family norm of W (group/Schatten/graph), to check
// ball membership.
double family_norm(const Matrix& w, const HypothesisFamily& family);

// Columns (1/n) sum_i sigma_t^i phi(X_t^i) for one sign assignment, the
// increment every per-draw supremum is taken against.
DualIncrement rademacher_increment(const MultiTaskSample& sample,
                                   const std::vector<double>& signs);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t draws = 0;
};

// Monte Carlo estimate of the global Rademacher complexity: per sigma-draw the
// supremum over the ball is rho * dual_norm(V) / T in closed form. With
// enumerate = true, all 2^{nT} sign patterns are visited in index order
// instead of sampling (requires nT <= 20).
McEstimate empirical_grc(const MultiTaskSample& sample, const HypothesisFamily& family,
                         std::size_t mc_draws, std::uint64_t seed, bool enumerate = false);

// Exhaustive-enumeration oracle for the same quantity, nT <= 20.
double brute_force_rc(const MultiTaskSample& sample, const HypothesisFamily& family);

struct LocalRcOptions {
  std::size_t max_iters = 2000;
  double tol = 1e-6;             // relative objective tolerance
  std::optional<Matrix> center;  // ellipsoid center (f-hat weights); default 0
};

struct LocalRcEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t draws = 0;
  bool converged = true;
};

// Monte Carlo estimate of the local Rademacher complexity: per draw, maximize
// <W, V>/T over {family ball} intersected with {(1/T) sum_t w_t' Jhat_t w_t <= r}
// by projected gradient ascent with Dykstra alternating projections.
// Supported families: group q in {1,2}, Schatten q in {1,2}, graph.
LocalRcEstimate empirical_local_rc(const MultiTaskSample& sample, const HypothesisFamily& family,
                                   double r, std::size_t mc_draws, std::uint64_t seed,
                                   const LocalRcOptions& options = {});

// Same estimator over an increasing r grid with per-draw warm starts, which
// makes the profile non-decreasing by construction.
std::vector<LocalRcEstimate> empirical_local_rc_profile(
    const MultiTaskSample& sample, const HypothesisFamily& family,
    const std::vector<double>& r_grid, std::size_t mc_draws, std::uint64_t seed,
    const LocalRcOptions& options = {});

// Largest eigenvalue of the empirical second-moment matrices Jhat_t.
double empirical_spectrum_max(const MultiTaskSample& sample);

struct IdentityCheckReport {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  bool pass = true;
};

// Per-direction Monte Carlo check of E <(1/n) sum_i sigma_i phi(X_i), u_t^j>^2
// = lambda_t^j / n under a Gaussian generator matching the eigensystem.
IdentityCheckReport second_moment_identity_check(const EigenSystem& eigensystem, std::size_t n,
                                              std::size_t mc_draws, std::uint64_t seed,
                                              std::size_t top_directions = 3,
                                              double rel_tol = 0.05);

// Exact identity P f^2 = (1/T) sum_t sum_j lambda_t^j <w_t, u_t^j>^2, both
// sides computed independently (quadratic form vs. eigen-expansion).
IdentityCheckReport population_variance_identity_check(const WeightMatrix& w,
                                                    const EigenSystem& eigensystem,
                                                    double tol = 1e-10);

struct TalagrandConfig {
  std::size_t class_size = 50;   // finite class of weight matrices in the ball
  std::size_t T = 3;
  std::size_t n = 20;
  std::size_t p = 4;
  double x = 1.0;
  std::size_t redraws = 10000;
  std::size_t rc_draws = 4000;   // draws for the one-off Rademacher estimate
  std::uint64_t seed = 1;
  HypothesisFamily family = HypothesisFamily::group(2.0, 1.0);
  double feature_scale = 1.0;    // features are N(0, scale^2 I)
};

struct TalagrandReport {
  double violation_frequency = 0.0;
  double binomial_std_error = 0.0;
  double target = 0.0;           // e^{-x}
  double rhs_rademacher = 0.0;   // estimated R(F)
  double variance_radius = 0.0;  // analytic r
  double range_bound = 0.0;      // effective b used in the RHS
  std::size_t violations = 0;
  std::size_t redraws = 0;
};

// Frequency over dataset redraws of sup_f (P f - P_n f) exceeding the
// concentration right-hand side, with Pf and r computed analytically for the
// finite linear class.
TalagrandReport talagrand_experiment(const TalagrandConfig& config);

struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;      // rhs + 3 SE - lhs
  double std_error = 0.0;
  bool pass = true;
};

// Monte Carlo check of E || sum_i sigma_i v_i ||^p <= (c sum_i ||v_i||^2)^{p/2},
// c = max(1, p-1).
InequalityReport khintchine_check(const std::vector<Vector>& vectors, double p_exponent,
                                  std::size_t mc_draws, std::uint64_t seed);

// Monte Carlo check of E (mean_i X_i)^q <= (2qe)^q [ (B/n)^q + (mean_i E X_i)^q ]
// for bounded non-negative variables (here scaled uniforms).
InequalityReport rosenthal_young_check(const std::vector<double>& upper_bounds, double q_moment,
                                       std::size_t mc_draws, std::uint64_t seed);

}  // namespace mtlrc
