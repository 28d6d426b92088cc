#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtlrc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Per-task eigenvalue sequences of the feature covariance operators,
// non-increasing within each task. Finite truncations stand in for the
// operator spectra; analytic power-law tails cover the rest.
class TaskSpectra {
 public:
  explicit TaskSpectra(std::vector<std::vector<double>> per_task)
      : per_task_(std::move(per_task)) {
    if (per_task_.empty()) throw std::invalid_argument("TaskSpectra: T >= 1 required");
    for (const auto& seq : per_task_) {
      if (seq.empty()) throw std::invalid_argument("TaskSpectra: every task needs J_t >= 1 eigenvalues");
      double prev = std::numeric_limits<double>::infinity();
      for (double v : seq) {
        if (!(v >= 0.0)) throw std::invalid_argument("TaskSpectra: eigenvalues must be >= 0 and finite");
        if (v > prev + 1e-12 * std::max(1.0, prev))
          throw std::invalid_argument("TaskSpectra: eigenvalues must be non-increasing");
        prev = v;
      }
    }
  }

  std::size_t tasks() const { return per_task_.size(); }
  std::size_t length(std::size_t t) const { return per_task_[t].size(); }
  const std::vector<double>& task(std::size_t t) const { return per_task_[t]; }
  const std::vector<std::vector<double>>& all() const { return per_task_; }

  std::vector<double> traces() const {
    std::vector<double> out(per_task_.size(), 0.0);
    for (std::size_t t = 0; t < per_task_.size(); ++t)
      for (double v : per_task_[t]) out[t] += v;
    return out;
  }

  double max_leading() const {
    double m = 0.0;
    for (const auto& seq : per_task_) m = std::max(m, seq.front());
    return m;
  }

 private:
  std::vector<std::vector<double>> per_task_;
};

inline TaskSpectra make_spectra(std::vector<std::vector<double>> per_task) {
  return TaskSpectra(std::move(per_task));
}

// lambda_t^j <= d_t * j^{-alpha_t}; alpha_t > 1 keeps the tail integral finite.
struct PowerLawDecay {
  std::vector<double> d;
  std::vector<double> alpha;

  PowerLawDecay(std::vector<double> d_in, std::vector<double> alpha_in)
      : d(std::move(d_in)), alpha(std::move(alpha_in)) {
    if (d.empty() || d.size() != alpha.size())
      throw std::invalid_argument("PowerLawDecay: d and alpha must be non-empty, same length");
    for (std::size_t t = 0; t < d.size(); ++t) {
      if (!(d[t] > 0.0)) throw std::invalid_argument("PowerLawDecay: d_t > 0 required");
      if (!(alpha[t] > 1.0)) throw std::invalid_argument("PowerLawDecay: alpha_t > 1 required");
    }
  }

  std::size_t tasks() const { return d.size(); }
  // aggregates used by the closed forms: alpha = min_t alpha_t, d = max_t d_t
  double alpha_min() const { return *std::min_element(alpha.begin(), alpha.end()); }
  double d_max() const { return *std::max_element(d.begin(), d.end()); }
};

// D = Laplacian(edge weights) + eta*I coupling the tasks; stores the inverse
// diagonal entering the graph bounds.
struct GraphOperator {
  Matrix edge_weights;
  double eta = 0.0;
  Matrix d;        // L + eta*I
  Matrix d_inv;
  Matrix d_sqrt;
  Matrix d_inv_sqrt;
  std::vector<double> d_inv_diag;
  double d_inv_max = 0.0;

  std::size_t tasks() const { return static_cast<std::size_t>(d.rows()); }
};

struct ProblemParams {
  std::size_t n = 1;           // samples per task
  std::size_t T = 1;           // number of tasks
  double kernel_bound = 1.0;   // sup_x k(x,x)

  ProblemParams(std::size_t n_in, std::size_t T_in, double kernel_bound_in)
      : n(n_in), T(T_in), kernel_bound(kernel_bound_in) {
    if (n < 1 || T < 1) throw std::invalid_argument("ProblemParams: n >= 1 and T >= 1 required");
    if (!(kernel_bound > 0.0)) throw std::invalid_argument("ProblemParams: kernel_bound > 0 required");
  }
};

// Loss constants: L-Lipschitz loss, |f| <= b, Bernstein constant B' >= 1,
// derived B = B'*L^2 (always recomputed).
struct LossSpec {
  double lipschitz = 1.0;
  double range_bound = 1.0;
  double bernstein = 1.0;

  LossSpec(double lipschitz_in, double range_bound_in, double bernstein_in)
      : lipschitz(lipschitz_in), range_bound(range_bound_in), bernstein(bernstein_in) {
    if (!(lipschitz > 0.0)) throw std::invalid_argument("LossSpec: L > 0 required");
    if (!(range_bound > 0.0)) throw std::invalid_argument("LossSpec: b > 0 required");
    if (!(bernstein >= 1.0)) throw std::invalid_argument("LossSpec: B' >= 1 required");
  }

  double B() const { return bernstein * lipschitz * lipschitz; }
};

struct ConfidenceParams {
  double K = 2.0;  // trade-off constant, > 1
  double x = 1.0;  // failure probability e^{-x}

  ConfidenceParams(double K_in, double x_in) : K(K_in), x(x_in) {
    if (!(K > 1.0)) throw std::invalid_argument("ConfidenceParams: K > 1 required");
    if (!(x > 0.0)) throw std::invalid_argument("ConfidenceParams: x > 0 required");
  }
};

enum class FamilyKind { GroupNorm, SchattenNorm, Graph };

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& name);

// Constraint set of one hypothesis space: a norm exponent (group/Schatten)
// or a graph operator, plus the radius R of the half-squared-norm bound
// (1/2)*||.||^2 <= R^2. Every supremum uses the ball radius rho = sqrt(2)*R.
struct HypothesisFamily {
  FamilyKind kind = FamilyKind::GroupNorm;
  double q = 2.0;
  double radius = 1.0;  // R in (1/2)||.||^2 <= R^2
  GraphOperator graph_op;

  static HypothesisFamily group(double q, double radius) {
    check_q_radius(q, radius);
    HypothesisFamily f;
    f.kind = FamilyKind::GroupNorm;
    f.q = q;
    f.radius = radius;
    return f;
  }

  static HypothesisFamily schatten(double q, double radius) {
    check_q_radius(q, radius);
    HypothesisFamily f;
    f.kind = FamilyKind::SchattenNorm;
    f.q = q;
    f.radius = radius;
    return f;
  }

  static HypothesisFamily graph(GraphOperator op, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("HypothesisFamily: radius > 0 required");
    HypothesisFamily f;
    f.kind = FamilyKind::Graph;
    f.radius = radius;
    f.graph_op = std::move(op);
    return f;
  }

  double ball_radius() const { return std::sqrt(2.0) * radius; }  // rho

 private:
  static void check_q_radius(double q, double radius) {
    if (!(q >= 1.0)) throw std::invalid_argument("HypothesisFamily: q >= 1 required");
    if (!(radius > 0.0)) throw std::invalid_argument("HypothesisFamily: radius > 0 required");
  }
};

}  // namespace mtlrc
