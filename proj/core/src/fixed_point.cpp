#include "mtlrc/fixed_point.hpp"

#include "mtlrc/norms.hpp"

namespace mtlrc {

namespace {

constexpr double kE = 2.718281828459045235360287471353;

double x_term(const LossSpec& loss, const ConfidenceParams& conf, const ProblemParams& params) {
  const double nT = static_cast<double>(params.n) * static_cast<double>(params.T);
  return (48.0 * loss.lipschitz * loss.range_bound + 16.0 * loss.B() * conf.K) * conf.x / nT;
}

// Minimizes c_lin * sum h_t + c_sqrt * sqrt(||(w_t * tail_t(h_t))||_p) over
// integer truncation levels by coordinate descent with full per-coordinate
// enumeration. tails[t][h] = sum_{j > h} lambda_t^j.
struct TruncationObjective {
  double c_lin = 0.0;
  double c_sqrt = 0.0;
  double p = 1.0;
  std::vector<double> weight;                // per-task multiplier inside the norm
  std::vector<std::vector<double>> tails;    // per task, indexed by h = 0..J_t

  double eval(const std::vector<std::size_t>& h) const {
    double hsum = 0.0;
    std::vector<double> entries(tails.size());
    for (std::size_t t = 0; t < tails.size(); ++t) {
      hsum += static_cast<double>(h[t]);
      entries[t] = weight[t] * tails[t][h[t]];
    }
    return c_lin * hsum + c_sqrt * std::sqrt(lp_aggregate(entries, p));
  }

  std::vector<std::size_t> minimize() const {
    std::vector<std::size_t> h(tails.size(), 0);
    double best = eval(h);
    for (int sweep = 0; sweep < 3; ++sweep) {
      for (std::size_t t = 0; t < tails.size(); ++t) {
        std::size_t arg = h[t];
        for (std::size_t cand = 0; cand < tails[t].size(); ++cand) {
          h[t] = cand;
          const double v = eval(h);
          if (v < best) {
            best = v;
            arg = cand;
          }
        }
        h[t] = arg;
      }
    }
    return h;
  }
};

}  // namespace

SubRootBound make_excess_subroot(std::function<double(double)> lrc_of_r, const LossSpec& loss) {
  const double B = loss.B();
  const double L = loss.lipschitz;
  SubRootBound out;
  out.evaluator = [lrc = std::move(lrc_of_r), B, L](double r) {
    return 2.0 * B * L * lrc(r / (4.0 * L * L));
  };
  return out;
}

FixedPointResult solve_fixed_point(const SubRootBound& psi, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_fixed_point: tol > 0 required");
  FixedPointResult res;
  double lo = std::max(psi.domain_floor, 1e-15);
  if (lo > psi.evaluator(lo)) {
    // fixed point at or below the floor
    res.r_star = lo;
    res.residual = std::abs(psi.evaluator(lo) - lo);
    return res;
  }
  double hi = lo;
  bool bracketed = false;
  for (int i = 0; i < 64; ++i) {
    hi *= 4.0;
    ++res.iterations;
    if (hi > psi.evaluator(hi)) {
      bracketed = true;
      break;
    }
  }
  if (!bracketed)
    throw std::runtime_error("solve_fixed_point: predicate r > psi(r) never holds; psi not sub-root?");
  while (hi - lo > tol * (1.0 + lo)) {
    const double mid = 0.5 * (lo + hi);
    ++res.iterations;
    if (mid > psi.evaluator(mid))
      hi = mid;
    else
      lo = mid;
  }
  res.r_star = lo;  // predicate-false end: never exceeds the true fixed point
  res.residual = std::abs(psi.evaluator(lo) - lo);
  return res;
}

QuadraticFixedPoint closed_form_quadratic(double alpha, double gamma) {
  if (!(alpha >= 0.0) || !(gamma >= 0.0))
    throw std::invalid_argument("closed_form_quadratic: alpha, gamma >= 0 required");
  QuadraticFixedPoint out;
  out.bound = alpha + 2.0 * gamma;
  if (alpha == 0.0 && gamma == 0.0) {
    out.degenerate_zero = true;
    return out;
  }
  const double disc = alpha * (alpha + 4.0 * gamma);
  out.exact_root = 0.5 * (alpha + 2.0 * gamma + std::sqrt(disc));
  return out;
}

DataDependentConstants DataDependentConstants::from(const LossSpec& loss,
                                                    const ConfidenceParams& conf) {
  DataDependentConstants c;
  const double L = loss.lipschitz;
  const double b = loss.range_bound;
  const double B = loss.B();
  c.c1 = 2.0 * L * std::max(B, 16.0 * L * b);
  c.c2 = 128.0 * L * L * b * b + 2.0 * b * c.c1;
  c.c3 = 4.0 + 128.0 * conf.K + 4.0 * B * (48.0 * L * b + 16.0 * B * conf.K) / c.c2;
  return c;
}

namespace {

struct FamilyTailCoeffs {
  double scale = 0.0;      // multiplier under the sqrt, per task weighting separate
  double p = 1.0;          // aggregation exponent
  std::vector<double> weight;
  double additive = 0.0;   // kernel-bound term (group q in [1,2] only)
};

// Coefficients of the A2 tail term sqrt(scale * ||(weight_t * tail_t)||_p)
// at a given dual exponent.
FamilyTailCoeffs family_tail_coeffs(const HypothesisFamily& family, double kstar,
                                    const ProblemParams& params) {
  const double T = static_cast<double>(params.T);
  const double n = static_cast<double>(params.n);
  const double R = family.radius;
  FamilyTailCoeffs c;
  c.weight.assign(params.T, 1.0);
  switch (family.kind) {
    case FamilyKind::GroupNorm:
      if (family.q <= 2.0) {
        c.scale = 2.0 * kE * kstar * kstar * R * R / (n * T * T);
        c.p = kstar / 2.0;
        c.additive = std::sqrt(2.0 * params.kernel_bound * kE) * R * kstar *
                     std::pow(T, 1.0 / kstar) / (n * T);
      } else {
        c.scale = 2.0 * R * R / (n * T * T);
        c.p = kstar / 2.0;
      }
      break;
    case FamilyKind::SchattenNorm:
      c.scale = schatten_prefactor(family.q) * R * R / (n * T * T);
      c.p = 1.0;
      break;
    case FamilyKind::Graph:
      if (family.graph_op.tasks() != params.T)
        throw std::invalid_argument("fixed_point_bound: graph/params T mismatch");
      c.scale = 2.0 * R * R / (n * T * T);
      c.p = 1.0;
      c.weight.assign(family.graph_op.d_inv_diag.begin(), family.graph_op.d_inv_diag.end());
      break;
  }
  return c;
}

std::vector<double> group_kstars(const HypothesisFamily& family, std::size_t T) {
  if (family.kind == FamilyKind::GroupNorm) {
    if (family.q == 1.0) return kappa_star_grid(family.q, T);
    return {dual_exponent(family.q)};
  }
  return {2.0};  // unused by the Schatten/graph coefficient paths
}

}  // namespace

double fixed_point_bound(const HypothesisFamily& family, const TaskSpectra& spectra,
                         const ProblemParams& params, const LossSpec& loss,
                         const std::optional<std::vector<std::size_t>>& h) {
  if (spectra.tasks() != params.T)
    throw std::invalid_argument("fixed_point_bound: spectra/params T mismatch");
  const double B = loss.B();
  const double L = loss.lipschitz;
  const double Tn = static_cast<double>(params.T) * static_cast<double>(params.n);

  // per-task exact suffix sums indexed by truncation level
  std::vector<std::vector<double>> tails(params.T);
  for (std::size_t t = 0; t < params.T; ++t) {
    const auto& seq = spectra.task(t);
    tails[t].assign(seq.size() + 1, 0.0);
    for (std::size_t j = seq.size(); j > 0; --j) tails[t][j - 1] = tails[t][j] + seq[j - 1];
  }

  double best = std::numeric_limits<double>::infinity();
  for (double kstar : group_kstars(family, params.T)) {
    const FamilyTailCoeffs c = family_tail_coeffs(family, kstar, params);
    TruncationObjective obj;
    obj.c_lin = B * B / Tn;
    obj.c_sqrt = 4.0 * B * L;
    obj.p = c.p;
    obj.weight = c.weight;
    obj.tails = tails;
    // replace tail values by scale*tail so sqrt(scale * ||.||) folds in
    for (auto& tv : obj.tails)
      for (auto& v : tv) v *= c.scale;
    double value;
    if (h) {
      if (h->size() != params.T)
        throw std::invalid_argument("fixed_point_bound: one h_t per task required");
      for (std::size_t t = 0; t < params.T; ++t)
        if ((*h)[t] > spectra.length(t))
          throw std::out_of_range("fixed_point_bound: h_t exceeds spectrum length");
      value = obj.eval(*h);
    } else {
      value = obj.eval(obj.minimize());
    }
    value += 4.0 * B * L * c.additive;
    best = std::min(best, value);
  }
  return best;
}

double fixed_point_bound(const HypothesisFamily& family, const PowerLawDecay& decay,
                         const ProblemParams& params, const LossSpec& loss,
                         const std::optional<std::vector<double>>& h) {
  if (decay.tasks() != params.T)
    throw std::invalid_argument("fixed_point_bound: decay/params T mismatch");
  const double B = loss.B();
  const double L = loss.lipschitz;
  const double Tn = static_cast<double>(params.T) * static_cast<double>(params.n);
  const auto traces = power_law_trace(decay);

  const auto analytic_tail = [&](std::size_t t, double ht) {
    if (ht <= 0.0) return traces[t];
    return decay.d[t] * std::pow(ht, 1.0 - decay.alpha[t]) / (decay.alpha[t] - 1.0);
  };

  double best = std::numeric_limits<double>::infinity();
  for (double kstar : group_kstars(family, params.T)) {
    const FamilyTailCoeffs c = family_tail_coeffs(family, kstar, params);
    const auto eval_at = [&](const std::vector<double>& hv) {
      double hsum = 0.0;
      std::vector<double> entries(params.T);
      for (std::size_t t = 0; t < params.T; ++t) {
        hsum += hv[t];
        entries[t] = c.weight[t] * c.scale * analytic_tail(t, hv[t]);
      }
      return B * B * hsum / Tn + 4.0 * B * L * std::sqrt(lp_aggregate(entries, c.p)) +
             4.0 * B * L * c.additive;
    };
    if (h) {
      if (h->size() != params.T)
        throw std::invalid_argument("fixed_point_bound: one h_t per task required");
      best = std::min(best, eval_at(*h));
      continue;
    }
    // continuous optimum rounded both ways, plus the degenerate endpoints
    std::vector<std::vector<double>> cand_per_task(params.T);
    for (std::size_t t = 0; t < params.T; ++t) {
      const double lead = 16.0 * decay.d[t] * kE * kstar * kstar * family.radius * family.radius *
                          L * L / (B * B) *
                          std::pow(static_cast<double>(params.T), 2.0 / kstar - 2.0) *
                          static_cast<double>(params.n);
      const double hbar = std::pow(lead, 1.0 / (1.0 + decay.alpha[t]));
      cand_per_task[t] = {0.0, 1.0, std::floor(hbar), std::ceil(hbar), std::ceil(2.0 * hbar)};
    }
    std::vector<double> hv(params.T, 0.0);
    double local = eval_at(hv);
    for (int sweep = 0; sweep < 3; ++sweep) {
      for (std::size_t t = 0; t < params.T; ++t) {
        double arg = hv[t];
        for (double cand : cand_per_task[t]) {
          hv[t] = cand;
          const double v = eval_at(hv);
          if (v < local) {
            local = v;
            arg = cand;
          }
        }
        hv[t] = arg;
      }
    }
    best = std::min(best, local);
  }
  return best;
}

std::vector<double> optimal_truncation(const PowerLawDecay& decay, double q,
                                       const ProblemParams& params, double radius,
                                       const LossSpec& loss) {
  if (!(q > 1.0 && q <= 2.0))
    throw std::invalid_argument("optimal_truncation: q in (1,2] required (q = 1 has q* = inf)");
  const double qstar = dual_exponent(q);
  const double B = loss.B();
  const double L = loss.lipschitz;
  std::vector<double> out(decay.tasks());
  for (std::size_t t = 0; t < decay.tasks(); ++t) {
    const double lead = 16.0 * decay.d[t] * kE * qstar * qstar * radius * radius / (B * B) * L * L *
                        std::pow(static_cast<double>(params.T), 2.0 / qstar - 2.0) *
                        static_cast<double>(params.n);
    out[t] = std::pow(lead, 1.0 / (1.0 + decay.alpha[t]));
  }
  return out;
}

double fixed_point_power_law(const PowerLawDecay& decay, double q,
                             const ProblemParams& params, double radius,
                             const LossSpec& loss) {
  if (!(q > 1.0 && q <= 2.0))
    throw std::invalid_argument("fixed_point_power_law: q in (1,2] required");
  const double alpha = decay.alpha_min();
  const double d = decay.d_max();
  const double qstar = dual_exponent(q);
  const double B = loss.B();
  const double L = loss.lipschitz;
  const double n = static_cast<double>(params.n);
  const double T = static_cast<double>(params.T);
  const double lead = d * qstar * qstar * radius * radius / (B * B) * L * L *
                      std::pow(T, 2.0 / qstar - 2.0) * n;
  return 14.0 * B * B / n * std::sqrt((alpha + 1.0) / (alpha - 1.0)) *
             std::pow(lead, 1.0 / (1.0 + alpha)) +
         10.0 * std::sqrt(params.kernel_bound) * radius * B * L * qstar * std::pow(T, 1.0 / qstar) /
             (n * T);
}

double excess_risk_dist(double r_star, const LossSpec& loss, const ConfidenceParams& conf,
                        const ProblemParams& params, bool convex_class) {
  if (!(r_star >= 0.0)) throw std::invalid_argument("excess_risk_dist: r* >= 0 required");
  const double B = loss.B();
  const double nT = static_cast<double>(params.n) * static_cast<double>(params.T);
  if (convex_class)
    return 32.0 * conf.K / B * r_star +
           (48.0 * loss.lipschitz * loss.range_bound + 16.0 * B * conf.K) * conf.x / nT;
  return 560.0 * conf.K / B * r_star +
         (48.0 * loss.lipschitz * loss.range_bound + 28.0 * B * conf.K) * conf.x / nT;
}

double excess_risk_family(const HypothesisFamily& family, const PowerLawDecay& decay,
                          const ProblemParams& params, const LossSpec& loss,
                          const ConfidenceParams& conf) {
  const double alpha = decay.alpha_min();
  const double d = decay.d_max();
  const double B = loss.B();
  const double L = loss.lipschitz;
  const double K = conf.K;
  const double n = static_cast<double>(params.n);
  const double T = static_cast<double>(params.T);
  const double R = family.radius;
  const double shape = std::sqrt((alpha + 1.0) / (alpha - 1.0));
  const double bpow = std::pow(B, (alpha - 1.0) / (alpha + 1.0));
  const double npow = std::pow(n, -alpha / (1.0 + alpha));
  const double e1 = 1.0 / (1.0 + alpha);

  double lead = 0.0;
  switch (family.kind) {
    case FamilyKind::GroupNorm:
      if (family.q <= 2.0) {
        double best = std::numeric_limits<double>::infinity();
        for (double kstar : kappa_star_grid(family.q, params.T)) {
          const double tpow = std::pow(T, 2.0 - 2.0 / kstar);  // T^{2/kappa}
          const double main = 448.0 * K * shape *
                              std::pow(d * kstar * kstar * R * R * L * L, e1) * bpow *
                              std::pow(tpow, -e1) * npow;
          const double add = 320.0 * std::sqrt(params.kernel_bound) * R * K * L * kstar *
                             std::pow(T, 1.0 / kstar) / (n * T);
          best = std::min(best, main + add);
        }
        lead = best;
      } else {
        const double tpow = std::pow(T, 2.0 / family.q);
        lead = 256.0 * K * shape * std::pow(d * R * R * L * L, e1) * bpow *
               std::pow(tpow, -e1) * npow;
      }
      break;
    case FamilyKind::SchattenNorm:
      if (family.q <= 2.0) {
        double best = std::numeric_limits<double>::infinity();
        for (double kstar : kappa_star_grid(family.q, params.T)) {
          best = std::min(best, 256.0 * K * shape * std::pow(d * kstar * R * R * L * L, e1) *
                                    bpow * std::pow(T, -e1) * npow);
        }
        lead = best;
      } else {
        lead = 256.0 * K * shape * std::pow(d * R * R * L * L, e1) * bpow * std::pow(T, -e1) * npow;
      }
      break;
    case FamilyKind::Graph:
      lead = 256.0 * K * shape *
             std::pow(d * R * R * L * L * family.graph_op.d_inv_max, e1) * bpow *
             std::pow(T, -e1) * npow;
      break;
  }
  return lead + x_term(loss, conf, params);
}

double empirical_fixed_point_bound(const TaskSpectra& gram_spectra, double q,
                                   const ProblemParams& params, double radius,
                                   const LossSpec& loss, const ConfidenceParams& conf,
                                   const std::optional<std::vector<std::size_t>>& h) {
  if (gram_spectra.tasks() != params.T)
    throw std::invalid_argument("empirical_fixed_point_bound: spectra/params T mismatch");
  for (std::size_t t = 0; t < params.T; ++t)
    if (gram_spectra.length(t) != params.n)
      throw std::invalid_argument("empirical_fixed_point_bound: gram spectra must have length n");
  if (!(q > 1.0 && q <= 2.0))
    throw std::invalid_argument("empirical_fixed_point_bound: q in (1,2] required");
  const auto c = DataDependentConstants::from(loss, conf);
  const double qstar = dual_exponent(q);
  const double n = static_cast<double>(params.n);
  const double T = static_cast<double>(params.T);
  const double L = loss.lipschitz;

  std::vector<std::vector<double>> tails(params.T);
  for (std::size_t t = 0; t < params.T; ++t) {
    const auto& seq = gram_spectra.task(t);
    tails[t].assign(seq.size() + 1, 0.0);
    for (std::size_t j = seq.size(); j > 0; --j) tails[t][j - 1] = tails[t][j] + seq[j - 1];
  }

  TruncationObjective obj;
  obj.c_lin = c.c1 * c.c1 * c.c3 / (n * T * L * L);
  obj.c_sqrt = 4.0;
  obj.p = qstar / 2.0;
  obj.weight.assign(params.T, 1.0);
  obj.tails = tails;
  const double scale = 2.0 * c.c1 * c.c1 * qstar * qstar * radius * radius / (n * T * T);
  for (auto& tv : obj.tails)
    for (auto& v : tv) v *= scale;

  double value;
  if (h) {
    if (h->size() != params.T)
      throw std::invalid_argument("empirical_fixed_point_bound: one h_t per task required");
    for (std::size_t t = 0; t < params.T; ++t)
      if ((*h)[t] > params.n)
        throw std::out_of_range("empirical_fixed_point_bound: h_t exceeds n");
    value = obj.eval(*h);
  } else {
    value = obj.eval(obj.minimize());
  }
  return value + 2.0 * c.c2 * conf.x / (n * T);
}

DataRiskBound excess_risk_data(double r_hat_star, const LossSpec& loss,
                               const ConfidenceParams& conf, const ProblemParams& params) {
  if (!(r_hat_star >= 0.0)) throw std::invalid_argument("excess_risk_data: r* >= 0 required");
  DataRiskBound out;
  const double B = loss.B();
  const double nT = static_cast<double>(params.n) * static_cast<double>(params.T);
  out.value = 32.0 * conf.K / B * r_hat_star +
              (48.0 * loss.lipschitz * loss.range_bound + 16.0 * B * conf.K) * conf.x / nT;
  out.confidence = 1.0 - 4.0 * std::exp(-conf.x);
  return out;
}

double talagrand_rhs(double rademacher_value, double r, double conf_x,
                     const ProblemParams& params, double b) {
  if (!(rademacher_value >= 0.0 && r >= 0.0 && conf_x >= 0.0 && b >= 0.0))
    throw std::invalid_argument("talagrand_rhs: non-negative inputs required");
  const double nT = static_cast<double>(params.n) * static_cast<double>(params.T);
  return 4.0 * rademacher_value + std::sqrt(8.0 * conf_x * r / nT) + 12.0 * b * conf_x / nT;
}

double grc_excess_rhs(double grc_value, const LossSpec& loss, double conf_x,
                      const ProblemParams& params) {
  const double nT = static_cast<double>(params.n) * static_cast<double>(params.T);
  return 2.0 * loss.lipschitz * grc_value +
         std::sqrt(2.0 * loss.lipschitz * loss.range_bound * conf_x / nT);
}

SubRootReport sub_root_check(const SubRootBound& psi, const std::vector<double>& grid) {
  if (grid.size() < 2) throw std::invalid_argument("sub_root_check: grid needs >= 2 points");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] > 0.0 && grid[i] < grid[i + 1]))
      throw std::invalid_argument("sub_root_check: grid must be positive, strictly increasing");
  SubRootReport rep;
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = psi.evaluator(grid[i]);
  constexpr double kSlack = 1e-10;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double scale = std::max(std::abs(vals[i]), 1e-300);
    rep.max_negativity = std::max(rep.max_negativity, -vals[i] / scale);
  }
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double scale = std::max({std::abs(vals[i]), std::abs(vals[i + 1]), 1e-300});
    rep.max_monotone_violation =
        std::max(rep.max_monotone_violation, (vals[i] - vals[i + 1]) / scale);
    const double gi = vals[i] / std::sqrt(grid[i]);
    const double gj = vals[i + 1] / std::sqrt(grid[i + 1]);
    const double gscale = std::max({std::abs(gi), std::abs(gj), 1e-300});
    rep.max_sqrt_violation = std::max(rep.max_sqrt_violation, (gj - gi) / gscale);
  }
  rep.pass = rep.max_negativity <= kSlack && rep.max_monotone_violation <= kSlack &&
             rep.max_sqrt_violation <= kSlack;
  return rep;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0 && hi > lo && points >= 2))
    throw std::invalid_argument("log_grid: need 0 < lo < hi and >= 2 points");
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    out[i] = lo * std::pow(hi / lo, f);
  }
  return out;
}

}  // namespace mtlrc
