#pragma once

#include "mtlrc/bounds.hpp"
#include "mtlrc/types.hpp"

#include <functional>
#include <optional>

namespace mtlrc {

// A sub-root evaluator r -> psi(r), typically an LRC bound wrapped with the
// 2BL * R(F, r/4L^2) excess-risk scaling.
struct SubRootBound {
  std::function<double(double)> evaluator;
  double domain_floor = 1e-15;
};

// Wrap an LRC bound evaluator into the excess-risk sub-root psi(r) = 2BL * lrc(r / (4 L^2)).
SubRootBound make_excess_subroot(std::function<double(double)> lrc_of_r, const LossSpec& loss);

enum class FixedPointMethod { Bisection, ClosedForm };

struct FixedPointResult {
  double r_star = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
  FixedPointMethod method = FixedPointMethod::Bisection;
};

// Bisection on the predicate r > psi(r): grow the upper bracket geometrically
// until the predicate holds, then bisect. Returns the lower bracket end, so
// the result never exceeds the true fixed point.
FixedPointResult solve_fixed_point(const SubRootBound& psi, double tol = 1e-10);

struct QuadraticFixedPoint {
  double exact_root = 0.0;        // larger root of r^2 - (alpha+2gamma) r + gamma^2
  double bound = 0.0;             // alpha + 2 gamma, always >= exact_root
  bool degenerate_zero = false;   // alpha = gamma = 0
};

// Fixed point of psi(r) = sqrt(alpha r) + gamma in closed form.
QuadraticFixedPoint closed_form_quadratic(double alpha, double gamma);

// Data-dependent constants of the empirical fixed-point bound.
struct DataDependentConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  static DataDependentConstants from(const LossSpec& loss, const ConfidenceParams& conf);
};

// Closed-form upper bound on the fixed point r* of 2BL R(F, r/4L^2):
//   min_h  B^2 sum h_t/(Tn) + 4BL * A2(tails at h) + 4BL * additive,
// minimized over integer truncation levels by coordinate descent. Spectra
// tails are exact finite sums; the decay overload uses the analytic integral
// tail (full trace at h = 0).
double fixed_point_bound(const HypothesisFamily& family, const TaskSpectra& spectra,
                         const ProblemParams& params, const LossSpec& loss,
                         const std::optional<std::vector<std::size_t>>& h = std::nullopt);
double fixed_point_bound(const HypothesisFamily& family, const PowerLawDecay& decay,
                         const ProblemParams& params, const LossSpec& loss,
                         const std::optional<std::vector<double>>& h = std::nullopt);

// Continuous optimizer of the truncation level under power-law decay:
//   h_t = (16 d_t e q*^2 R^2 B^-2 L^2 T^{2/q*-2} n)^{1/(1+alpha_t)}.
std::vector<double> optimal_truncation(const PowerLawDecay& decay, double q,
                                       const ProblemParams& params, double radius,
                                       const LossSpec& loss);

// Closed-form power-law fixed-point bound
//   14 B^2/n sqrt((a+1)/(a-1)) (d q*^2 R^2 B^-2 L^2 T^{2/q*-2} n)^{1/(1+a)}
//     + 10 sqrt(K) R B L q* T^{1/q*} / (nT),
// with a = min_t alpha_t, d = max_t d_t. log-log n-slope tends to -a/(1+a).
double fixed_point_power_law(const PowerLawDecay& decay, double q,
                             const ProblemParams& params, double radius,
                             const LossSpec& loss);

// Excess-risk assemblies, linear in the fixed point with the cited coefficients.
double excess_risk_dist(double r_star, const LossSpec& loss, const ConfidenceParams& conf,
                        const ProblemParams& params, bool convex_class);

// The five closed-form excess-risk bounds for power-law spectra (group low/high q,
// Schatten low/high q, graph).
double excess_risk_family(const HypothesisFamily& family, const PowerLawDecay& decay,
                          const ProblemParams& params, const LossSpec& loss,
                          const ConfidenceParams& conf);

// Data-dependent fixed-point bound from normalized Gram spectra:
//   c1^2 c3 sum h_t/(nT L^2) + 4 sqrt{(2 c1^2 q*^2 R^2/(nT^2)) ||tails||_{q*/2}} + 2 c2 x/(nT).
double empirical_fixed_point_bound(const TaskSpectra& gram_spectra, double q,
                                   const ProblemParams& params, double radius,
                                   const LossSpec& loss, const ConfidenceParams& conf,
                                   const std::optional<std::vector<std::size_t>>& h = std::nullopt);

struct DataRiskBound {
  double value = 0.0;
  double confidence = 0.0;  // 1 - 4 e^{-x}
};

// 32K/B r_hat* + (48Lb + 16BK) x/(nT), holding with probability 1 - 4e^{-x}.
DataRiskBound excess_risk_data(double r_hat_star, const LossSpec& loss,
                               const ConfidenceParams& conf, const ProblemParams& params);

// Uniform-deviation right-hand side 4 R(F) + sqrt(8 x r/(nT)) + 12 b x/(nT).
double talagrand_rhs(double rademacher_value, double r, double conf_x,
                     const ProblemParams& params, double b);

// Global-complexity excess right-hand side 2 L R(F) + sqrt(2 L b x / (nT)).
double grc_excess_rhs(double grc_value, const LossSpec& loss, double conf_x,
                      const ProblemParams& params);

struct SubRootReport {
  double max_negativity = 0.0;       // max over grid of relative negativity
  double max_monotone_violation = 0.0;
  double max_sqrt_violation = 0.0;   // of r -> psi(r)/sqrt(r) non-increasing
  bool pass = true;
};

// Numeric certification of the sub-root properties on a grid, relative slack 1e-10.
SubRootReport sub_root_check(const SubRootBound& psi, const std::vector<double>& grid);

// Strictly increasing log-spaced grid helper.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

}  // namespace mtlrc
