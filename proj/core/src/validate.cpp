#include "mtlrc/validate.hpp"

#include "mtlrc/empirical.hpp"
#include "mtlrc/fixed_point.hpp"
#include "mtlrc/graph.hpp"
#include "mtlrc/norms.hpp"
#include "mtlrc/rng.hpp"
#include "mtlrc/sweeps.hpp"
#include "mtlrc/train.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

namespace mtlrc {

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

CriterionResult fixed_point_exactness(std::uint64_t seed) {
  Check c;
  DrawRng rng(seed, 101);
  for (int i = 0; i < 100; ++i) {
    const double a = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
    const double g = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
    SubRootBound psi{[a, g](double r) { return std::sqrt(a * r) + g; }, 1e-15};
    const auto solved = solve_fixed_point(psi, 1e-10);
    const auto exact = closed_form_quadratic(a, g);
    c.expect(std::abs(solved.r_star - exact.exact_root) <= 1e-8 * (1.0 + exact.exact_root),
             "bisection drifted at a=" + fmt(a) + " g=" + fmt(g));
    c.expect(solved.r_star <= exact.bound, "exceeded alpha+2gamma at a=" + fmt(a));
  }
  return {1, "fixed-point exactness", c.pass, c.detail.str(), 0.0};
}

CriterionResult sub_root_certification(std::uint64_t) {
  Check c;
  const std::size_t T = 4;
  const auto spectra =
      power_law_spectra(broadcast_decay(PowerLawDecay({1.0}, {2.0}), T), 500);
  const ProblemParams params(100, T, 1.0);
  const double radius = 1.0;
  Matrix w = Matrix::Zero(T, T);
  for (std::size_t i = 0; i + 1 < T; ++i) {
    w(i, i + 1) = 1.0;
    w(i + 1, i) = 1.0;
  }
  const auto op = build_graph_operator(w, 0.5);
  const auto grid = log_grid(1e-8, 1e4, 100);

  std::vector<std::pair<std::string, std::function<double(double)>>> evaluators;
  for (double q : {1.0, 4.0 / 3.0, 2.0})
    evaluators.push_back({"group q=" + fmt(q), [=, &spectra, &params](double r) {
                            return lrc_group(r, q, spectra, params, radius).value;
                          }});
  evaluators.push_back({"group q=3", [&](double r) {
                          return lrc_group_high_q(r, 3.0, spectra, params, radius).value;
                        }});
  for (double q : {1.0, 2.0, 4.0})
    evaluators.push_back({"schatten q=" + fmt(q), [=, &spectra, &params](double r) {
                            return lrc_schatten(r, q, spectra, params, radius).value;
                          }});
  evaluators.push_back({"graph", [&](double r) {
                          return lrc_graph(r, spectra, op, params, radius).value;
                        }});
  for (const auto& [name, eval] : evaluators) {
    const auto rep = sub_root_check(SubRootBound{eval, 1e-15}, grid);
    c.expect(rep.pass, name + " violated sub-root properties");
  }
  return {2, "sub-root certification", c.pass, c.detail.str(), 0.0};
}

CriterionResult rate_reproduction(std::uint64_t) {
  Check c;
  for (double alpha : {1.5, 3.0, 10.0}) {
    SweepConfig cfg;
    cfg.vary = SweepVariable::N;
    cfg.grid.from = 256;
    cfg.grid.to = 262144;
    cfg.grid.points = 11;
    cfg.base.family = HypothesisFamily::group(2.0, 1.0);
    cfg.base.decay = PowerLawDecay({1.0}, {alpha});
    cfg.base.params = ProblemParams(256, 1, 1.0);
    cfg.outputs = {"fixed_point_power_law", "grc_excess"};
    const auto res = run_sweep(cfg);
    const double target = -alpha / (1.0 + alpha);
    c.expect(std::abs(res.slopes.at("fixed_point_power_law") - target) <= 0.05,
             "power-law slope off at alpha=" + fmt(alpha) + ": " +
                 fmt(res.slopes.at("fixed_point_power_law")));
    c.expect(std::abs(res.slopes.at("grc_excess") + 0.5) <= 0.02,
             "GRC slope off at alpha=" + fmt(alpha) + ": " + fmt(res.slopes.at("grc_excess")));
  }
  return {3, "rate reproduction", c.pass, c.detail.str(), 0.0};
}

CriterionResult upper_lower_sandwich(std::uint64_t) {
  Check c;
  const std::size_t T = 2;
  const auto spectra =
      power_law_spectra(broadcast_decay(PowerLawDecay({1.0}, {2.0}), T), 2000);
  double worst = 0.0;
  for (std::size_t n : {100u, 1000u, 10000u}) {
    const ProblemParams params(n, T, 1.0);
    const auto grid = log_grid(1.0 / static_cast<double>(n), 100.0, 40);
    for (double r : grid) {
      const double up = lrc_group(r, 2.0, spectra, params, 1.0, KappaStrategy::Fixed).value;
      const auto low = lrc_lower_group(r, 2.0, spectra, params, 1.0, 1.0);
      c.expect(low.hypotheses_hold, "lower-bound hypotheses failed at n=" + fmt(n));
      const double ratio = up / low.value;
      worst = std::max(worst, ratio);
      c.expect(ratio <= 10.0, "ratio " + fmt(ratio) + " at n=" + fmt(n) + " r=" + fmt(r));
    }
  }
  return {4, "upper/lower sandwich (worst ratio " + fmt(worst) + ")", c.pass, c.detail.str(),
          0.0};
}

CriterionResult brute_force_equivalence(std::uint64_t seed) {
  Check c;
  DrawRng rng(seed, 505);
  for (int cfg = 0; cfg < 20; ++cfg) {
    const std::size_t T = 2 + rng.below(2);           // 2 or 3
    const std::size_t n = (T == 2) ? 3 + rng.below(3)  // nT in [6, 12]
                                   : 2 + rng.below(2);
    const std::size_t p = 2 + rng.below(2);
    MultiTaskSample s;
    for (std::size_t t = 0; t < T; ++t) {
      Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
      for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.normal();
      s.features.push_back(std::move(x));
      s.labels.push_back(Vector::Zero(static_cast<Eigen::Index>(n)));
    }
    HypothesisFamily family = HypothesisFamily::group(2.0, 1.0);
    if (cfg % 3 == 0) family = HypothesisFamily::group(1.0, 0.9);
    if (cfg % 3 == 1) family = HypothesisFamily::schatten(1.0, 1.1);
    if (cfg % 3 == 2) {
      Matrix w = Matrix::Zero(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(T));
      for (std::size_t i = 0; i + 1 < T; ++i) {
        w(i, i + 1) = 1.0;
        w(i + 1, i) = 1.0;
      }
      family = HypothesisFamily::graph(build_graph_operator(w, 1.0), 1.0);
    }
    const double oracle = brute_force_rc(s, family);
    const auto enumerated = empirical_grc(s, family, 0, seed, true);
    c.expect(enumerated.estimate == oracle, "enumeration mismatch in config " + fmt(cfg));
    const auto mc = empirical_grc(s, family, 10000, seed + cfg);
    c.expect(std::abs(mc.estimate - oracle) <= 3.0 * mc.std_error,
             "MC outside 3 std errors in config " + fmt(cfg));
  }
  return {5, "brute-force oracle equivalence", c.pass, c.detail.str(), 0.0};
}

CriterionResult local_global_coupling(std::uint64_t seed) {
  Check c;
  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = w(1, 0) = 1.0;
  w(1, 2) = w(2, 1) = 1.0;
  const auto op = build_graph_operator(w, 1.0);
  const std::vector<HypothesisFamily> families = {
      HypothesisFamily::group(1.0, 0.8), HypothesisFamily::group(2.0, 0.8),
      HypothesisFamily::schatten(1.0, 0.8), HypothesisFamily::schatten(2.0, 0.8),
      HypothesisFamily::graph(op, 0.8)};
  for (std::uint64_t ds = 0; ds < 5; ++ds) {
    MultiTaskSample s;
    DrawRng rng(seed, 7100 + ds);
    for (std::size_t t = 0; t < 3; ++t) {
      Matrix x(12, 5);
      for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.normal();
      s.features.push_back(std::move(x));
      s.labels.push_back(Vector::Zero(12));
    }
    const double lam_max = empirical_spectrum_max(s);
    for (const auto& family : families) {
      const double rho = family.ball_radius();
      const double sat = rho * rho * lam_max;
      auto rs = log_grid(1e-4 * sat, sat, 7);
      rs.push_back(sat * 1.0001);
      const std::size_t draws = 48;
      const auto prof = empirical_local_rc_profile(s, family, rs, draws, seed + ds);
      const auto global = empirical_grc(s, family, draws, seed + ds);
      for (std::size_t i = 0; i + 1 < prof.size(); ++i)
        c.expect(prof[i].estimate <= prof[i + 1].estimate + 1e-12,
                 "profile decreased (dataset " + fmt(ds) + ")");
      for (const auto& est : prof)
        c.expect(est.estimate <= global.estimate + 1e-9,
                 "local exceeded global (dataset " + fmt(ds) + ")");
      c.expect(std::abs(prof.back().estimate - global.estimate) <=
                   1e-4 * std::max(1.0, global.estimate),
               "no saturation at rho^2 lambda-max (dataset " + fmt(ds) + ")");
    }
  }
  return {6, "local/global coupling", c.pass, c.detail.str(), 0.0};
}

CriterionResult moment_identities(std::uint64_t seed) {
  Check c;
  DrawRng rng(seed, 909);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t T = 1 + rng.below(3);
    const std::size_t p = 2 + rng.below(5);
    const auto sys = EigenSystem::random(T, p, seed + 1000 + trial);
    WeightMatrix wm;
    wm.w = Matrix(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(T));
    for (Eigen::Index i = 0; i < wm.w.rows(); ++i)
      for (Eigen::Index j = 0; j < wm.w.cols(); ++j) wm.w(i, j) = rng.normal();
    const auto rep = population_variance_identity_check(wm, sys, 1e-10);
    c.expect(rep.pass, "variance identity broke at trial " + fmt(trial) + " (rel " +
                           fmt(rep.max_rel_error) + ")");
  }
  const auto sys = EigenSystem::random(2, 5, seed + 77);
  const auto mc = second_moment_identity_check(sys, 4, 200000, seed + 78, 3, 0.05);
  c.expect(mc.pass, "second-moment identity off by " + fmt(mc.max_rel_error));
  return {7, "moment identities", c.pass, c.detail.str(), 0.0};
}

CriterionResult talagrand_validity(std::uint64_t seed) {
  Check c;
  for (double x : {1.0, 2.0}) {
    TalagrandConfig cfg;
    cfg.class_size = 50;
    cfg.T = 3;
    cfg.n = 20;
    cfg.p = 4;
    cfg.x = x;
    cfg.redraws = 10000;
    cfg.rc_draws = 4000;
    cfg.seed = seed + static_cast<std::uint64_t>(x);
    const auto rep = talagrand_experiment(cfg);
    c.expect(rep.violation_frequency <= rep.target + 3.0 * rep.binomial_std_error,
             "violation frequency " + fmt(rep.violation_frequency) + " above target at x=" +
                 fmt(x));
  }
  return {8, "concentration validity", c.pass, c.detail.str(), 0.0};
}

CriterionResult erm_oracle_match(std::uint64_t seed) {
  Check c;
  const double tol = 2e-4;
  for (std::uint64_t run = 0; run < 10; ++run) {
    DrawRng rng(seed, 1300 + run);
    const std::size_t T = 2 + rng.below(4);   // up to 5
    const std::size_t p = 4 + rng.below(17);  // up to 20
    const std::size_t n = 50 + rng.below(151);
    Matrix w = Matrix::Zero(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(T));
    for (std::size_t i = 0; i + 1 < T; ++i) {
      w(i, i + 1) = 0.5 + rng.uniform();
      w(i + 1, i) = w(i, i + 1);
    }
    const auto family = HypothesisFamily::graph(build_graph_operator(w, 1.0), 0.7);
    SyntheticTaskConfig scfg;
    scfg.T = T;
    scfg.n = n;
    scfg.p = p;
    scfg.noise_std = 0.2;
    scfg.structure = TaskStructure::GraphSmooth;
    scfg.target_norm_fraction = 1.6;  // constraint active in most runs
    const auto gen = generate_tasks(scfg, family, seed + 31 * run);
    const auto model = train_frank_wolfe(gen.sample, family, 50000, tol);
    const Matrix exact = graph_quadratic_oracle(gen.sample, family);
    const double fw = empirical_squared_risk(model.weights.w, gen.sample);
    const double opt = empirical_squared_risk(exact, gen.sample);
    c.expect(model.final_gap <= tol, "gap " + fmt(model.final_gap) + " above tol in run " +
                                         fmt(run));
    c.expect(fw - opt <= 1e-3, "objective off by " + fmt(fw - opt) + " in run " + fmt(run));
    c.expect(fw >= opt - 1e-9, "oracle beaten (impossible) in run " + fmt(run));
    c.expect(family_norm(model.weights.w, family) <=
                 family.ball_radius() * (1.0 + 1e-8),
             "iterate left the ball in run " + fmt(run));
  }
  return {9, "ERM oracle match", c.pass, c.detail.str(), 0.0};
}

CriterionResult bound_holds_experiment(std::uint64_t seed) {
  Check c;
  const std::size_t T = 4, n = 500, p = 8;
  const double radius = 1.0;
  const auto family = HypothesisFamily::group(2.0, radius);
  const double b = std::sqrt(2.0) * radius;  // class range for unit kernel bound
  const LossSpec loss(1.0, b, 1.0);
  const ConfidenceParams conf(2.0, 3.0);
  const ProblemParams params(n, T, 1.0);
  std::size_t holds = 0;
  for (std::uint64_t run = 0; run < 100; ++run) {
    SyntheticTaskConfig scfg;
    scfg.T = T;
    scfg.n = n;
    scfg.p = p;
    scfg.noise_std = 0.0;
    scfg.clip = true;
    scfg.feature_model = FeatureModel::Sphere;
    scfg.kernel_bound = 1.0;
    const auto gen = generate_tasks(scfg, family, seed + 17 * run);
    const auto model = train_frank_wolfe(gen.sample, family, 3000, 1e-5);
    const auto report = risk_report(model, gen.handle);
    const auto gram = gram_spectra(gen.sample, LinearKernel{});
    const double r_hat = empirical_fixed_point_bound(gram, 2.0, params, radius, loss, conf);
    const auto bound = excess_risk_data(r_hat, loss, conf, params);
    if (report.excess <= bound.value) ++holds;
  }
  c.expect(holds >= 95, "bound held only " + fmt(holds) + "/100 times");
  return {10, "bound-holds experiment (" + fmt(holds) + "/100)", c.pass, c.detail.str(), 0.0};
}

CriterionResult constant_integrity(std::uint64_t seed) {
  Check c;
  DrawRng rng(seed, 2100);
  for (int trial = 0; trial < 20; ++trial) {
    const LossSpec loss(0.5 + rng.uniform(), 0.5 + rng.uniform(), 1.0 + rng.uniform());
    const ConfidenceParams conf(1.5 + rng.uniform(), 0.5 + rng.uniform());
    const ProblemParams params(64 + rng.below(400), 1 + rng.below(6), 1.0);
    const double B = loss.B();
    const double convex =
        excess_risk_dist(2.0, loss, conf, params, true) -
        excess_risk_dist(1.0, loss, conf, params, true);
    c.expect(std::abs(convex - 32.0 * conf.K / B) <= 1e-12 * (32.0 * conf.K / B),
             "convex slope drifted");
    const double general =
        excess_risk_dist(2.0, loss, conf, params, false) -
        excess_risk_dist(1.0, loss, conf, params, false);
    c.expect(std::abs(general - 560.0 * conf.K / B) <= 1e-12 * (560.0 * conf.K / B),
             "general slope drifted");
    const double data_slope = excess_risk_data(2.0, loss, conf, params).value -
                              excess_risk_data(1.0, loss, conf, params).value;
    c.expect(std::abs(data_slope - 32.0 * conf.K / B) <= 1e-12 * (32.0 * conf.K / B),
             "data slope drifted");

    const auto dc = DataDependentConstants::from(loss, conf);
    const double L = loss.lipschitz, bb = loss.range_bound;
    c.expect(dc.c1 == 2.0 * L * std::max(B, 16.0 * L * bb), "c1 mismatch");
    c.expect(dc.c2 == 128.0 * L * L * bb * bb + 2.0 * bb * dc.c1, "c2 mismatch");
    c.expect(dc.c3 == 4.0 + 128.0 * conf.K +
                          4.0 * B * (48.0 * L * bb + 16.0 * B * conf.K) / dc.c2,
             "c3 mismatch");
  }
  return {11, "constant integrity", c.pass, c.detail.str(), 0.0};
}

CriterionResult crossover_existence(std::uint64_t) {
  Check c;
  SweepConfig cfg;
  cfg.vary = SweepVariable::N;
  cfg.grid.from = 256;
  cfg.grid.to = 1 << 26;
  cfg.grid.points = 19;
  cfg.base.family = HypothesisFamily::group(2.0, 100.0);
  cfg.base.decay = PowerLawDecay({1.0}, {3.0});
  cfg.base.params = ProblemParams(256, 4, 1.0);
  cfg.base.loss = LossSpec(1.0, std::sqrt(2.0) * 100.0, 1.0);
  cfg.outputs = {"excess_risk_family", "grc_excess"};
  const auto res = run_sweep(cfg);
  std::vector<double> local, global;
  for (const auto& row : res.rows) {
    if (row.bound == "excess_risk_family") local.push_back(row.value);
    if (row.bound == "grc_excess") global.push_back(row.value);
  }
  int sign_changes = 0;
  for (std::size_t i = 0; i + 1 < local.size(); ++i)
    if ((local[i] < global[i]) != (local[i + 1] < global[i + 1])) ++sign_changes;
  c.expect(local.front() > global.front(), "local already below at the grid start");
  c.expect(local.back() < global.back(), "local never crossed below");
  c.expect(sign_changes == 1, "crossover not unique: " + fmt(sign_changes) + " sign changes");
  return {12, "crossover existence", c.pass, c.detail.str(), 0.0};
}

}  // namespace

std::vector<CriterionResult> run_validation(std::uint64_t seed, std::ostream& out) {
  using Fn = CriterionResult (*)(std::uint64_t);
  const Fn criteria[] = {fixed_point_exactness, sub_root_certification, rate_reproduction,
                         upper_lower_sandwich,  brute_force_equivalence, local_global_coupling,
                         moment_identities,   talagrand_validity,      erm_oracle_match,
                         bound_holds_experiment, constant_integrity,     crossover_existence};
  std::vector<CriterionResult> results;
  for (Fn fn : criteria) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult res = fn(seed);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << (res.pass ? "PASS" : "FAIL") << "  [" << res.id << "] " << res.name << " ("
        << fmt(res.seconds) << " s)";
    if (!res.pass) out << "  -- " << res.detail;
    out << '\n';
    out.flush();
    results.push_back(std::move(res));
  }
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return !results.empty();
}

}  // namespace mtlrc
