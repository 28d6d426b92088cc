#include "mtlrc/sweeps.hpp"

#include "mtlrc/graph.hpp"

#include <cstdio>
#include <sstream>

namespace mtlrc {

std::vector<double> SweepGrid::values() const {
  if (points < 3) throw std::invalid_argument("SweepGrid: >= 3 points required");
  if (!(from > 0.0 && to > from)) throw std::invalid_argument("SweepGrid: 0 < from < to required");
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    out[i] = log_spaced ? from * std::pow(to / from, f) : from + f * (to - from);
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double fit_loglog_slope_upper_half(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_loglog_slope_upper_half: matched series of >= 2 points required");
  const std::size_t start = xs.size() / 2;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t i = start; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0 && ys[i] > 0.0)) continue;
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) throw std::invalid_argument("fit_loglog_slope_upper_half: not enough positive points");
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  return (static_cast<double>(m) * sxy - sx * sy) / denom;
}

std::string SweepResult::csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows)
    out << format_number(row.x) << ',' << row.bound << ',' << format_number(row.value) << '\n';
  return out.str();
}

namespace {

struct PointConfig {
  ProblemParams params{1, 1, 1.0};
  HypothesisFamily family;
  double r = 1.0;
};

PointConfig apply_variation(const ExperimentBase& base, SweepVariable vary, double x) {
  PointConfig pc{base.params, base.family, base.r};
  switch (vary) {
    case SweepVariable::N:
      pc.params = ProblemParams(static_cast<std::size_t>(std::llround(x)), base.params.T,
                                base.params.kernel_bound);
      break;
    case SweepVariable::T:
      pc.params = ProblemParams(base.params.n, static_cast<std::size_t>(std::llround(x)),
                                base.params.kernel_bound);
      break;
    case SweepVariable::R:
      pc.r = x;
      break;
    case SweepVariable::Radius:
      pc.family.radius = x;
      break;
  }
  return pc;
}

TaskSpectra spectra_from_traces(const std::vector<double>& traces) {
  std::vector<std::vector<double>> per_task(traces.size());
  for (std::size_t t = 0; t < traces.size(); ++t) per_task[t] = {traces[t]};
  return TaskSpectra(std::move(per_task));
}

double evaluate_named_bound(const std::string& name, const PointConfig& pc,
                            const ExperimentBase& base) {
  const auto decay = broadcast_decay(base.decay, pc.params.T);
  const auto& family = pc.family;
  const auto grc_value = [&]() -> double {
    const TaskSpectra traces = spectra_from_traces(power_law_trace(decay));
    switch (family.kind) {
      case FamilyKind::GroupNorm:
        return family.q <= 2.0
                   ? grc_group(family.q, traces, pc.params, family.radius).value
                   : grc_group_high_q(family.q, traces, pc.params, family.radius).value;
      case FamilyKind::SchattenNorm:
        return grc_schatten(family.q, traces, pc.params, family.radius).value;
      case FamilyKind::Graph:
        return grc_graph(traces, family.graph_op, pc.params, family.radius).value;
    }
    return 0.0;
  };
  const auto lrc_value = [&]() -> double {
    const TaskSpectra spectra = power_law_spectra(decay, 4096);
    switch (family.kind) {
      case FamilyKind::GroupNorm:
        return family.q <= 2.0
                   ? lrc_group(pc.r, family.q, spectra, pc.params, family.radius).value
                   : lrc_group_high_q(pc.r, family.q, spectra, pc.params, family.radius).value;
      case FamilyKind::SchattenNorm:
        return lrc_schatten(pc.r, family.q, spectra, pc.params, family.radius).value;
      case FamilyKind::Graph:
        return lrc_graph(pc.r, spectra, family.graph_op, pc.params, family.radius).value;
    }
    return 0.0;
  };

  if (name == "fixed_point_power_law")
    return fixed_point_power_law(decay, family.q, pc.params, family.radius, base.loss);
  if (name == "excess_risk_family")
    return excess_risk_family(family, decay, pc.params, base.loss, base.conf);
  if (name == "grc") return grc_value();
  if (name == "grc_excess") return grc_excess_rhs(grc_value(), base.loss, base.conf.x, pc.params);
  if (name == "lrc") return lrc_value();
  if (name == "fixed_point_bound")
    return fixed_point_bound(family, decay, pc.params, base.loss);
  if (name == "trace_competitor") {
    const auto traces = power_law_trace(decay);
    double cmax = 0.0;
    for (double tr : traces) cmax = std::max(cmax, tr);
    return grc_trace_competitor(cmax, pc.params, family.radius, base.loss, base.conf.x);
  }
  throw std::invalid_argument("run_sweep: unknown bound name '" + name + "'");
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  if (config.outputs.empty()) throw std::invalid_argument("run_sweep: outputs required");
  const auto grid = config.grid.values();
  SweepResult res;
  res.header = {"x", "bound", "value"};
  std::map<std::string, std::vector<double>> series;
  for (double x : grid) {
    const PointConfig pc = apply_variation(config.base, config.vary, x);
    for (const auto& name : config.outputs) {
      const double v = evaluate_named_bound(name, pc, config.base);
      res.rows.push_back({x, name, v});
      series[name].push_back(v);
    }
  }
  for (const auto& [name, ys] : series)
    res.slopes[name] = fit_loglog_slope_upper_half(grid, ys);
  return res;
}

SweepResult run_comparison_trace(const TraceComparisonConfig& config) {
  const auto grid = config.grid.values();
  const double alpha = config.decay.alpha_min();
  const double d = config.decay.d_max();
  const double L = config.loss.lipschitz;
  const double B = config.loss.B();
  const double K = config.conf.K;
  const double x = config.conf.x;
  const double b = config.loss.range_bound;
  const double R = config.radius;
  const double T = static_cast<double>(config.params.T);

  SweepResult res;
  res.header = {"x", "bound", "value"};
  std::map<std::string, std::vector<double>> series;
  for (double xn : grid) {
    const double n = std::round(xn);
    const double nT = n * T;
    const double local = 256.0 * K * std::sqrt((alpha + 1.0) / (alpha - 1.0)) *
                             std::pow(2.0 * d * R * R * L * L, 1.0 / (1.0 + alpha)) *
                             std::pow(B, (alpha - 1.0) / (alpha + 1.0)) *
                             std::pow(n, -alpha / (1.0 + alpha)) +
                         (48.0 * L * b + 16.0 * B * K) * x / nT;
    const double ours_global =
        4.0 * L * R * std::sqrt(config.rank * config.lambda_max / n) + std::sqrt(b * L * x / nT);
    const ProblemParams pp(static_cast<std::size_t>(n), config.params.T,
                           config.params.kernel_bound);
    const double competitor = grc_trace_competitor(config.lambda_max, pp, R, config.loss, x);
    res.rows.push_back({n, "local", local});
    res.rows.push_back({n, "ours_global", ours_global});
    res.rows.push_back({n, "competitor", competitor});
    series["local"].push_back(local);
    series["ours_global"].push_back(ours_global);
    series["competitor"].push_back(competitor);
  }
  for (const auto& [name, ys] : series)
    res.slopes[name] = fit_loglog_slope_upper_half(grid, ys);
  return res;
}

namespace {

GraphOperator regenerate_graph(const std::string& kind, std::size_t T, double weight, double eta) {
  Matrix w = Matrix::Zero(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(T));
  if (kind == "complete") {
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j)
        if (i != j) w(i, j) = weight;
  } else if (kind == "path") {
    for (Eigen::Index i = 0; i + 1 < w.rows(); ++i) {
      w(i, i + 1) = weight;
      w(i + 1, i) = weight;
    }
  } else if (kind != "none") {
    throw std::invalid_argument("run_comparison_graph: graph kind must be none|complete|path");
  }
  return build_graph_operator(w, eta);
}

struct GraphCurves {
  double local = 0.0;
  double global = 0.0;
};

GraphCurves graph_curves(const GraphOperator& op, double n, std::size_t T_count,
                         const GraphComparisonConfig& config) {
  const double alpha = config.decay.alpha_min();
  const double d = config.decay.d_max();
  const double L = config.loss.lipschitz;
  const double B = config.loss.B();
  const double K = config.conf.K;
  const double x = config.conf.x;
  const double b = config.loss.range_bound;
  const double R = config.radius;
  const double T = static_cast<double>(T_count);
  const double nT = n * T;

  GraphCurves out;
  out.local = 256.0 * K * std::sqrt((alpha + 1.0) / (alpha - 1.0)) *
                  std::pow(d * R * R * L * L * op.d_inv_max, 1.0 / (1.0 + alpha)) *
                  std::pow(B, (alpha - 1.0) / (alpha + 1.0)) *
                  std::pow(n, -alpha / (1.0 + alpha)) +
              (48.0 * L * b + 16.0 * B * K) * x / nT;

  const double gap = laplacian_spectral_gap(op);
  double coupling;
  if (gap > 0.0) {
    coupling = 1.0 / gap + 1.0 / (T * op.eta);
  } else {
    // disconnected-weights degenerate case: exact trace identity tr(D^{-1}) = T/eta
    coupling = 1.0 / op.eta;
  }
  out.global = 2.0 * L * R / std::sqrt(n) *
                   std::sqrt(2.0 * config.rank * config.lambda_max * coupling) +
               std::sqrt(b * L * x / nT);
  return out;
}

}  // namespace

SweepResult run_comparison_graph(const GraphComparisonConfig& config) {
  const auto grid = config.grid.values();
  SweepResult res;
  res.header = {"x", "bound", "value"};
  std::map<std::string, std::vector<double>> series;

  if (config.vary == SweepVariable::N) {
    const GraphOperator& op = config.graph_op;
    if (op.tasks() != config.params.T)
      throw std::invalid_argument("run_comparison_graph: graph/params T mismatch");
    for (double xn : grid) {
      const double n = std::round(xn);
      const auto c = graph_curves(op, n, config.params.T, config);
      res.rows.push_back({n, "local", c.local});
      res.rows.push_back({n, "global", c.global});
      series["local"].push_back(c.local);
      series["global"].push_back(c.global);
    }
    for (const auto& [name, ys] : series)
      res.slopes[name] = fit_loglog_slope_upper_half(grid, ys);
    return res;
  }

  if (config.vary != SweepVariable::T)
    throw std::invalid_argument("run_comparison_graph: vary must be n or T");
  const double n = static_cast<double>(config.params.n);
  std::vector<double> xs;
  for (double xt : grid) {
    const auto T_count = static_cast<std::size_t>(std::llround(xt));
    const auto op = regenerate_graph(config.graph_kind, T_count, config.graph_weight, config.eta);
    const auto c = graph_curves(op, n, T_count, config);
    res.rows.push_back({static_cast<double>(T_count), "local", c.local});
    res.rows.push_back({static_cast<double>(T_count), "global", c.global});
    series["local"].push_back(c.local);
    series["global"].push_back(c.global);
    xs.push_back(static_cast<double>(T_count));
  }
  if (config.graph_kind == "none") {
    // decoupled-tasks case: both curves approach analytic T-free limits, so
    // the fits run on the gap to those limits
    const double alpha = config.decay.alpha_min();
    const double d = config.decay.d_max();
    const double L = config.loss.lipschitz;
    const double B = config.loss.B();
    const double local_limit =
        256.0 * config.conf.K * std::sqrt((alpha + 1.0) / (alpha - 1.0)) *
        std::pow(d * config.radius * config.radius * L * L / config.eta, 1.0 / (1.0 + alpha)) *
        std::pow(B, (alpha - 1.0) / (alpha + 1.0)) * std::pow(n, -alpha / (1.0 + alpha));
    const double global_limit =
        2.0 * L * config.radius / std::sqrt(n) *
        std::sqrt(2.0 * config.rank * config.lambda_max / config.eta);
    const std::map<std::string, double> limits = {{"local", local_limit},
                                                  {"global", global_limit}};
    for (const auto& [name, ys] : series) {
      std::vector<double> gaps(ys.size());
      for (std::size_t i = 0; i < ys.size(); ++i)
        gaps[i] = std::max(ys[i] - limits.at(name), 1e-300);
      res.slopes[name] = fit_loglog_slope_upper_half(xs, gaps);
    }
  } else {
    for (const auto& [name, ys] : series)
      res.slopes[name] = fit_loglog_slope_upper_half(xs, ys);
  }
  return res;
}

}  // namespace mtlrc
