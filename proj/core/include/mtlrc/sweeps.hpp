#pragma once

#include "mtlrc/fixed_point.hpp"
#include "mtlrc/types.hpp"

#include <map>
#include <string>

namespace mtlrc {

enum class SweepVariable { N, T, R, Radius };

struct SweepGrid {
  bool log_spaced = true;
  double from = 0.0;
  double to = 0.0;
  std::size_t points = 0;

  std::vector<double> values() const;
};

// Base configuration shared by the sweep experiments.
struct ExperimentBase {
  HypothesisFamily family = HypothesisFamily::group(2.0, 1.0);
  PowerLawDecay decay{{1.0}, {3.0}};
  ProblemParams params{100, 1, 1.0};
  LossSpec loss{1.0, 1.0, 1.0};
  ConfidenceParams conf{2.0, 1.0};
  double r = 1.0;  // fixed r when sweeping something else
};

struct SweepConfig {
  SweepVariable vary = SweepVariable::N;
  SweepGrid grid;
  ExperimentBase base;
  std::vector<std::string> outputs;  // bound names, see run_sweep
};

struct SweepRow {
  double x = 0.0;
  std::string bound;
  double value = 0.0;
};

struct SweepResult {
  std::vector<std::string> header;   // fixed per subcommand
  std::vector<SweepRow> rows;        // grid order, one row per point per bound
  std::map<std::string, double> slopes;  // log-log LS fit over the upper half

  std::string csv() const;
};

// Bound names: fixed_point_power_law, excess_risk_family, grc, grc_excess,
// lrc, fixed_point_bound, trace_competitor.
SweepResult run_sweep(const SweepConfig& config);

struct TraceComparisonConfig {
  SweepGrid grid;               // over n
  double rank = 1.0;            // M
  double lambda_max = 1.0;
  double radius = 1.0;          // R'
  PowerLawDecay decay{{1.0}, {3.0}};
  ProblemParams params{100, 4, 1.0};
  LossSpec loss{1.0, 1.0, 1.0};
  ConfidenceParams conf{2.0, 1.0};
};

// Trace-norm comparison: local bound, our global bound, and the competing
// global bound, over an n grid, with slope fits.
SweepResult run_comparison_trace(const TraceComparisonConfig& config);

struct GraphComparisonConfig {
  SweepVariable vary = SweepVariable::N;  // N or T
  SweepGrid grid;
  GraphOperator graph_op;       // used for the n sweep
  std::string graph_kind = "none";  // T sweep regenerates: none | complete | path
  double graph_weight = 1.0;
  double eta = 1.0;
  double rank = 1.0;
  double lambda_max = 1.0;
  double radius = 1.0;          // R''
  PowerLawDecay decay{{1.0}, {3.0}};
  ProblemParams params{100, 4, 1.0};
  LossSpec loss{1.0, 1.0, 1.0};
  ConfidenceParams conf{2.0, 1.0};
};

// Graph comparison: local vs global excess bounds over n or T. T-sweep slopes
// are fitted on the gap to the analytic large-T limit.
SweepResult run_comparison_graph(const GraphComparisonConfig& config);

// Least-squares slope of log(value) against log(x) over the upper half of the
// grid (suppresses additive lower-order transients).
double fit_loglog_slope_upper_half(const std::vector<double>& xs, const std::vector<double>& ys);

// 17-significant-digit numeric formatting shared by all CSV writers.
std::string format_number(double v);

}  // namespace mtlrc
