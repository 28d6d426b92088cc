#include "mtlrc/bounds.hpp"

#include "mtlrc/norms.hpp"

namespace mtlrc {

namespace {

constexpr double kE = 2.718281828459045235360287471353;

// sum_j min(cap, scale * lambda_t^j) per task
std::vector<double> capped_sums(const TaskSpectra& spectra, double cap,
                                const std::vector<double>& scale) {
  std::vector<double> out(spectra.tasks(), 0.0);
  for (std::size_t t = 0; t < spectra.tasks(); ++t) {
    double acc = 0.0;
    for (double lam : spectra.task(t)) acc += std::min(cap, scale[t] * lam);
    out[t] = acc;
  }
  return out;
}

void check_r(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("lrc bound: r > 0 required");
}

// group bound at one fixed dual exponent k* (= kappa*)
BoundValue group_bound_at(double r, double kstar, const TaskSpectra& spectra,
                          const ProblemParams& params, double radius) {
  const double T = static_cast<double>(params.T);
  const double n = static_cast<double>(params.n);
  const double cap = r * std::pow(T, 1.0 - 2.0 / kstar);
  const std::vector<double> scale(spectra.tasks(),
                                  2.0 * kE * kstar * kstar * radius * radius / T);
  const auto sums = capped_sums(spectra, cap, scale);
  BoundValue out;
  out.a2 = std::sqrt(4.0 / (n * T) * lp_aggregate(sums, kstar / 2.0));
  out.additive = std::sqrt(2.0 * params.kernel_bound * kE) * radius * kstar *
                 std::pow(T, 1.0 / kstar) / (n * T);
  out.value = out.a2 + out.additive;
  return out;
}

BoundValue grc_group_at(double kstar, const std::vector<double>& traces,
                        const ProblemParams& params, double radius) {
  const double T = static_cast<double>(params.T);
  const double n = static_cast<double>(params.n);
  BoundValue out;
  out.a2 = std::sqrt(2.0 * kE * kstar * kstar * radius * radius / (n * T * T) *
                     lp_aggregate(traces, kstar / 2.0));
  out.additive = std::sqrt(2.0 * params.kernel_bound * kE) * radius * kstar *
                 std::pow(T, 1.0 / kstar) / (n * T);
  out.value = out.a2 + out.additive;
  return out;
}

}  // namespace

double schatten_prefactor(double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("schatten_prefactor: q >= 1 required");
  if (q == 1.0 || q >= 2.0) return 2.0;
  return 2.0 * dual_exponent(q);
}

StrongConvexityParams StrongConvexityParams::for_family(const HypothesisFamily& family) {
  switch (family.kind) {
    case FamilyKind::GroupNorm:
      if (!(family.q > 1.0 && family.q <= 2.0))
        throw std::invalid_argument("strong convexity of the group norm needs q in (1,2]");
      return StrongConvexityParams(1.0 / dual_exponent(family.q));
    case FamilyKind::SchattenNorm:
      if (!(family.q > 1.0 && family.q <= 2.0))
        throw std::invalid_argument("strong convexity of the Schatten norm needs q in (1,2]");
      return StrongConvexityParams(family.q - 1.0);
    case FamilyKind::Graph:
      return StrongConvexityParams(1.0);
  }
  throw std::invalid_argument("unknown family");
}

// kappa* pinned at log T (clamped into [2, q*]) for the sparse group case
static double log_t_kappa_star(double q, std::size_t T) {
  const double qstar = dual_exponent(q);
  double kstar = std::max(2.0, std::log(static_cast<double>(std::max<std::size_t>(T, 2))));
  if (!std::isinf(qstar)) kstar = std::min(kstar, qstar);
  return kstar;
}

std::vector<double> kappa_star_grid(double q, std::size_t T) {
  const double qstar = dual_exponent(q);
  // kappa in [q, 2] maps to kappa* in [2, q*]; the q = 1 endpoint (q* = inf)
  // is capped, which the log T point keeps harmless for the sparse case.
  const double hi =
      std::isinf(qstar) ? std::max(64.0, 2.0 * std::log(static_cast<double>(std::max<std::size_t>(T, 2))))
                        : qstar;
  std::vector<double> grid;
  if (hi <= 2.0) {
    grid.push_back(2.0);
  } else {
    constexpr std::size_t kPoints = 64;
    const double lo = 2.0;
    for (std::size_t i = 0; i < kPoints; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(kPoints - 1);
      grid.push_back(lo * std::pow(hi / lo, f));
    }
  }
  const double logT = std::log(static_cast<double>(T));
  if (logT >= 2.0 && logT <= qstar) grid.push_back(logT);
  return grid;
}

BoundValue lrc_group(double r, double q, const TaskSpectra& spectra,
                     const ProblemParams& params, double radius,
                     KappaStrategy kappa_strategy) {
  check_r(r);
  if (!(q >= 1.0 && q <= 2.0))
    throw std::invalid_argument("lrc_group: q in [1,2] required (use lrc_group_high_q)");
  if (spectra.tasks() != params.T) throw std::invalid_argument("lrc_group: spectra/params T mismatch");
  if (kappa_strategy == KappaStrategy::Fixed) {
    if (q == 1.0) throw std::invalid_argument("lrc_group: q = 1 needs the kappa grid");
    return group_bound_at(r, dual_exponent(q), spectra, params, radius);
  }
  if (kappa_strategy == KappaStrategy::LogT)
    return group_bound_at(r, log_t_kappa_star(q, params.T), spectra, params, radius);
  BoundValue best;
  best.value = std::numeric_limits<double>::infinity();
  for (double kstar : kappa_star_grid(q, params.T)) {
    const BoundValue cand = group_bound_at(r, kstar, spectra, params, radius);
    if (cand.value < best.value) best = cand;
  }
  return best;
}

BoundValue lrc_group_high_q(double r, double q, const TaskSpectra& spectra,
                            const ProblemParams& params, double radius) {
  check_r(r);
  if (!(q >= 2.0)) throw std::invalid_argument("lrc_group_high_q: q >= 2 required");
  if (spectra.tasks() != params.T)
    throw std::invalid_argument("lrc_group_high_q: spectra/params T mismatch");
  const double qstar = dual_exponent(q);
  const double T = static_cast<double>(params.T);
  const double n = static_cast<double>(params.n);
  const double cap = r * std::pow(T, 1.0 - 2.0 / qstar);
  const std::vector<double> scale(spectra.tasks(), 2.0 * radius * radius / T);
  const auto sums = capped_sums(spectra, cap, scale);
  BoundValue out;
  out.a2 = std::sqrt(4.0 / (n * T) * lp_aggregate(sums, qstar / 2.0));
  out.value = out.a2;
  return out;
}

BoundValue lrc_schatten(double r, double q, const TaskSpectra& spectra,
                        const ProblemParams& params, double radius) {
  check_r(r);
  if (spectra.tasks() != params.T) throw std::invalid_argument("lrc_schatten: spectra/params T mismatch");
  const double T = static_cast<double>(params.T);
  const double n = static_cast<double>(params.n);
  const std::vector<double> scale(spectra.tasks(), schatten_prefactor(q) * radius * radius / T);
  const auto sums = capped_sums(spectra, r, scale);
  BoundValue out;
  out.a2 = std::sqrt(4.0 / (n * T) * lp_aggregate(sums, 1.0));
  out.value = out.a2;
  return out;
}

BoundValue lrc_graph(double r, const TaskSpectra& spectra, const GraphOperator& graph_op,
                     const ProblemParams& params, double radius) {
  check_r(r);
  if (spectra.tasks() != params.T || graph_op.tasks() != params.T)
    throw std::invalid_argument("lrc_graph: spectra/graph/params T mismatch");
  const double T = static_cast<double>(params.T);
  const double n = static_cast<double>(params.n);
  std::vector<double> scale(spectra.tasks());
  for (std::size_t t = 0; t < scale.size(); ++t)
    scale[t] = 2.0 * graph_op.d_inv_diag[t] * radius * radius / T;
  const auto sums = capped_sums(spectra, r, scale);
  BoundValue out;
  out.a2 = std::sqrt(4.0 / (n * T) * lp_aggregate(sums, 1.0));
  out.value = out.a2;
  return out;
}

LowerBoundValue lrc_lower_group(double r, double q, const TaskSpectra& spectra,
                                const ProblemParams& params, double radius, double c) {
  check_r(r);
  if (!(c >= 0.0)) throw std::invalid_argument("lrc_lower_group: c >= 0 required");
  const double qstar = dual_exponent(q);
  const double T = static_cast<double>(params.T);
  const double n = static_cast<double>(params.n);
  const double tpow = std::isinf(qstar) ? T : std::pow(T, 1.0 - 2.0 / qstar);
  LowerBoundValue out;
  out.hypotheses_hold =
      r >= 1.0 / n && spectra.task(0).front() >= 1.0 / (n * radius * radius);
  double acc = 0.0;
  for (double lam : spectra.task(0)) acc += std::min(r * tpow, radius * radius / T * lam);
  out.value = std::sqrt(c / (n * tpow) * acc);
  return out;
}

BoundValue grc_group(double q, const TaskSpectra& spectra, const ProblemParams& params,
                     double radius, KappaStrategy kappa_strategy) {
  if (!(q >= 1.0 && q <= 2.0)) throw std::invalid_argument("grc_group: q in [1,2] required");
  const auto traces = spectra.traces();
  if (kappa_strategy == KappaStrategy::Fixed) {
    if (q == 1.0) throw std::invalid_argument("grc_group: q = 1 needs the kappa grid");
    return grc_group_at(dual_exponent(q), traces, params, radius);
  }
  if (kappa_strategy == KappaStrategy::LogT)
    return grc_group_at(log_t_kappa_star(q, params.T), traces, params, radius);
  BoundValue best;
  best.value = std::numeric_limits<double>::infinity();
  for (double kstar : kappa_star_grid(q, params.T)) {
    const BoundValue cand = grc_group_at(kstar, traces, params, radius);
    if (cand.value < best.value) best = cand;
  }
  return best;
}

BoundValue grc_group_high_q(double q, const TaskSpectra& spectra,
                            const ProblemParams& params, double radius) {
  if (!(q >= 2.0)) throw std::invalid_argument("grc_group_high_q: q >= 2 required");
  const double T = static_cast<double>(params.T);
  const double n = static_cast<double>(params.n);
  BoundValue out;
  out.a2 = std::sqrt(2.0 * radius * radius / (n * T * T) *
                     lp_aggregate(spectra.traces(), dual_exponent(q) / 2.0));
  out.value = out.a2;
  return out;
}

BoundValue grc_schatten(double q, const TaskSpectra& spectra,
                        const ProblemParams& params, double radius) {
  const double T = static_cast<double>(params.T);
  const double n = static_cast<double>(params.n);
  BoundValue out;
  out.a2 = std::sqrt(schatten_prefactor(q) * radius * radius / (n * T * T) *
                     lp_aggregate(spectra.traces(), 1.0));
  out.value = out.a2;
  return out;
}

BoundValue grc_graph(const TaskSpectra& spectra, const GraphOperator& graph_op,
                     const ProblemParams& params, double radius) {
  if (spectra.tasks() != graph_op.tasks())
    throw std::invalid_argument("grc_graph: spectra/graph T mismatch");
  const double T = static_cast<double>(params.T);
  const double n = static_cast<double>(params.n);
  const auto traces = spectra.traces();
  double weighted = 0.0;
  for (std::size_t t = 0; t < traces.size(); ++t) weighted += graph_op.d_inv_diag[t] * traces[t];
  BoundValue out;
  out.a2 = std::sqrt(2.0 * radius * radius / (n * T * T) * weighted);
  out.value = out.a2;
  return out;
}

double grc_trace_competitor(double lambda_max_task_avg, const ProblemParams& params,
                            double radius, const LossSpec& loss, double x) {
  if (!(lambda_max_task_avg >= 0.0))
    throw std::invalid_argument("grc_trace_competitor: ||C||_inf >= 0 required");
  const double n = static_cast<double>(params.n);
  const double nT = n * static_cast<double>(params.T);
  const double L = loss.lipschitz;
  return 2.0 * std::sqrt(2.0) * L * radius *
             (std::sqrt(lambda_max_task_avg / n) + 5.0 * std::sqrt((std::log(nT) + 1.0) / nT)) +
         std::sqrt(loss.range_bound * L * x / nT);
}

BoundValue generic_lrc_strong_convex(double r, const std::vector<std::size_t>& h,
                                     const StrongConvexityParams& sc,
                                     double dual_sq_expectation,
                                     const ProblemParams& params, double radius) {
  if (!(r >= 0.0)) throw std::invalid_argument("generic_lrc_strong_convex: r >= 0 required");
  if (!(dual_sq_expectation >= 0.0))
    throw std::invalid_argument("generic_lrc_strong_convex: expectation >= 0 required");
  const double T = static_cast<double>(params.T);
  const double n = static_cast<double>(params.n);
  double hsum = 0.0;
  for (std::size_t v : h) hsum += static_cast<double>(v);
  BoundValue out;
  out.a1 = std::sqrt(r * hsum / (n * T));
  out.a2 = radius / T * std::sqrt(2.0 / sc.mu * dual_sq_expectation);
  out.value = out.a1 + out.a2;
  return out;
}

BoundValue generic_lrc_holder(double r, const std::vector<std::size_t>& h,
                              double dual_expectation,
                              const ProblemParams& params, double radius) {
  if (!(r >= 0.0)) throw std::invalid_argument("generic_lrc_holder: r >= 0 required");
  if (!(dual_expectation >= 0.0))
    throw std::invalid_argument("generic_lrc_holder: expectation >= 0 required");
  const double T = static_cast<double>(params.T);
  const double n = static_cast<double>(params.n);
  double hsum = 0.0;
  for (std::size_t v : h) hsum += static_cast<double>(v);
  BoundValue out;
  out.a1 = std::sqrt(r * hsum / (n * T));
  out.a2 = std::sqrt(2.0) * radius / T * dual_expectation;
  out.value = out.a1 + out.a2;
  return out;
}

}  // namespace mtlrc
