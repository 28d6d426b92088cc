#pragma once

#include "mtlrc/spectra.hpp"
#include "mtlrc/types.hpp"

#include <optional>

namespace mtlrc {

// A bound together with the named pieces it was assembled from, so that
// value == a1 + a2 + additive is recomputable.
struct BoundValue {
  double value = 0.0;
  double a1 = 0.0;        // truncation term sqrt(r * sum h_t / (nT)) where present
  double a2 = 0.0;        // dual / eigenvalue term
  double additive = 0.0;  // sqrt(kernel_bound) term (group q in [1,2] only)
};

struct StrongConvexityParams {
  double mu = 1.0;  // strong-convexity modulus, in (0, 1] for the cases used
  explicit StrongConvexityParams(double mu_in) : mu(mu_in) {
    if (!(mu > 0.0)) throw std::invalid_argument("StrongConvexityParams: mu > 0 required");
  }

  // modulus of (1/2)||.||^2: 1/q* for the group norm, q - 1 for the Schatten
  // norm, both with q in (1, 2]; the graph regulariser is 1-strongly convex.
  static StrongConvexityParams for_family(const HypothesisFamily& family);
};

// How the kappa relaxation of the group bound is evaluated: at kappa = q,
// minimized over a log grid of kappa* in [2, q*] (plus kappa* = log T when
// valid and T >= e^2), or pinned at kappa* = log T for the sparse case.
enum class KappaStrategy { Fixed, GridMin, LogT };

// Local Rademacher complexity bound for the group-norm class, q in [1,2]:
//   sqrt{(4/nT) ||(sum_j min(r T^{1-2/k*}, (2e k*^2 R^2/T) lambda_t^j))_t||_{k*/2}}
//     + sqrt(2 K e) R k* T^{1/k*} / (nT),
// minimized over the kappa grid.
BoundValue lrc_group(double r, double q, const TaskSpectra& spectra,
                     const ProblemParams& params, double radius,
                     KappaStrategy kappa_strategy = KappaStrategy::GridMin);

// Group-norm class with q >= 2: constant 2 instead of 2e q*^2, no additive term.
BoundValue lrc_group_high_q(double r, double q, const TaskSpectra& spectra,
                            const ProblemParams& params, double radius);

// Schatten class: l1 aggregation over tasks, per-eigenvalue scale
// 2 q* R^2 / T for q in (1,2], 2 R^2 / T for q = 1 and q >= 2.
BoundValue lrc_schatten(double r, double q, const TaskSpectra& spectra,
                        const ProblemParams& params, double radius);

// Graph class: per-task scale 2 D^{-1}_tt R^2 / T, l1 aggregation.
BoundValue lrc_graph(double r, const TaskSpectra& spectra, const GraphOperator& graph_op,
                     const ProblemParams& params, double radius);

struct LowerBoundValue {
  double value = 0.0;
  bool hypotheses_hold = true;  // r >= 1/n and lambda_1^1 >= 1/(n R^2)
};

// Minimax lower bound sqrt{(c / (n T^{1-2/q*})) sum_j min(r T^{1-2/q*}, (R^2/T) lambda_1^j)}.
// Uses only task 1's spectrum. Violated hypotheses flag the result instead of failing.
LowerBoundValue lrc_lower_group(double r, double q, const TaskSpectra& spectra,
                                const ProblemParams& params, double radius, double c = 1.0);

// Global (r-independent) counterparts driven by the traces tr(J_t).
BoundValue grc_group(double q, const TaskSpectra& spectra, const ProblemParams& params,
                     double radius, KappaStrategy kappa_strategy = KappaStrategy::GridMin);
BoundValue grc_group_high_q(double q, const TaskSpectra& spectra,
                            const ProblemParams& params, double radius);
BoundValue grc_schatten(double q, const TaskSpectra& spectra,
                        const ProblemParams& params, double radius);
BoundValue grc_graph(const TaskSpectra& spectra, const GraphOperator& graph_op,
                     const ProblemParams& params, double radius);

// Competing trace-norm excess-risk bound used in the side-by-side sweeps:
//   2 sqrt(2) L R (sqrt(||C||_inf / n) + 5 sqrt((ln(nT)+1)/(nT))) + sqrt(b L x / (nT)).
double grc_trace_competitor(double lambda_max_task_avg, const ProblemParams& params,
                            double radius, const LossSpec& loss, double x);

// Generic two-term bounds: sqrt(r sum h_t/(nT)) plus a caller-supplied
// dual-norm expectation (second moment for the strong-convexity route,
// first moment for the Hoelder route).
BoundValue generic_lrc_strong_convex(double r, const std::vector<std::size_t>& h,
                                     const StrongConvexityParams& sc,
                                     double dual_sq_expectation,
                                     const ProblemParams& params, double radius);
BoundValue generic_lrc_holder(double r, const std::vector<std::size_t>& h,
                              double dual_expectation,
                              const ProblemParams& params, double radius);

// kappa* grid used by the group bounds; exposed for tests.
std::vector<double> kappa_star_grid(double q, std::size_t T);

// Per-eigenvalue prefactor of the Schatten bounds: 2 q* for q in (1,2),
// 2 for q = 1 (the stated trace-norm choice) and for q >= 2.
double schatten_prefactor(double q);

}  // namespace mtlrc
