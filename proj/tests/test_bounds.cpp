#include <doctest.h>

#include "mtlrc/bounds.hpp"
#include "mtlrc/fixed_point.hpp"
#include "mtlrc/graph.hpp"
#include "mtlrc/rng.hpp"

#include <cmath>

using namespace mtlrc;

namespace {
constexpr double kE = 2.718281828459045235360287471353;
}

TEST_CASE("group LRC degenerate zero spectrum leaves the additive term") {
  const TaskSpectra zero = make_spectra({{0.0}});
  const ProblemParams params(100, 1, 1.0);
  const auto b = lrc_group(1.0, 2.0, zero, params, 1.0);
  const double additive = std::sqrt(2.0 * kE) * 2.0 / 100.0;  // sqrt(2Ke) R q* T^{1/q*} / nT
  CHECK(b.a2 == doctest::Approx(0.0));
  CHECK(b.value == doctest::Approx(additive).epsilon(1e-12));
  CHECK(b.value == doctest::Approx(0.04661).epsilon(1e-3));
}

TEST_CASE("group LRC saturates to twice the GRC main term") {
  const auto spectra = power_law_spectra(PowerLawDecay({1.0, 2.0}, {2.0, 3.0}), 200);
  const ProblemParams params(100, 2, 1.0);
  const double huge_r = 1e9;
  for (double q : {1.5, 2.0}) {
    const auto sat = lrc_group(huge_r, q, spectra, params, 1.0, KappaStrategy::Fixed);
    const auto grc = grc_group(q, spectra, params, 1.0, KappaStrategy::Fixed);
    CHECK(sat.a2 == doctest::Approx(2.0 * grc.a2).epsilon(1e-12));
    CHECK(sat.additive == doctest::Approx(grc.additive).epsilon(1e-12));
  }
  const auto sat_hi = lrc_group_high_q(huge_r, 3.0, spectra, params, 1.0);
  const auto grc_hi = grc_group_high_q(3.0, spectra, params, 1.0);
  CHECK(sat_hi.a2 == doctest::Approx(2.0 * grc_hi.a2).epsilon(1e-12));
  for (double q : {1.0, 1.5, 2.0, 4.0}) {
    const auto sat = lrc_schatten(huge_r, q, spectra, params, 1.0);
    const auto grc = grc_schatten(q, spectra, params, 1.0);
    CHECK(sat.a2 == doctest::Approx(2.0 * grc.a2).epsilon(1e-12));
  }
  Matrix w(2, 2);
  w << 0, 1, 1, 0;
  const auto op = build_graph_operator(w, 1.0);
  const auto satg = lrc_graph(huge_r, spectra, op, params, 1.0);
  const auto grcg = grc_graph(spectra, op, params, 1.0);
  CHECK(satg.a2 == doctest::Approx(2.0 * grcg.a2).epsilon(1e-12));
}

TEST_CASE("group LRC is monotone in r") {
  const auto spectra = power_law_spectra(PowerLawDecay({1.0}, {2.5}), 100);
  const ProblemParams params(50, 1, 1.0);
  double prev = 0.0;
  for (double r : {1e-6, 1e-4, 1e-2, 1.0, 100.0}) {
    const double v = lrc_group(r, 2.0, spectra, params, 1.0).value;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("high-q group bound at q=2 never exceeds the low-q constants") {
  const auto spectra = power_law_spectra(PowerLawDecay({1.0, 1.0, 0.5}, {2.0, 2.2, 3.0}), 150);
  const ProblemParams params(80, 3, 1.0);
  for (double r : {1e-4, 1e-2, 1.0}) {
    const double hi = lrc_group_high_q(r, 2.0, spectra, params, 1.0).value;
    const double lo = lrc_group(r, 2.0, spectra, params, 1.0, KappaStrategy::Fixed).value;
    CHECK(hi <= lo);
  }
  // r -> 0 kills the high-q bound entirely
  CHECK(lrc_group_high_q(1e-300, 2.5, spectra, params, 1.0).value ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("identical spectra make the l1 aggregation T times the single task sum") {
  std::vector<std::vector<double>> rep(4, {0.5, 0.25, 0.125});
  const TaskSpectra spectra(std::move(rep));
  const ProblemParams params(100, 4, 1.0);
  const double r = 0.05;
  const double R = 1.0;
  const auto b4 = lrc_group_high_q(r, 2.0, spectra, params, R);
  double single = 0.0;
  for (double lam : spectra.task(0)) single += std::min(r, 2.0 * R * R / 4.0 * lam);
  CHECK(b4.a2 == doctest::Approx(std::sqrt(4.0 / 400.0 * 4.0 * single)).epsilon(1e-12));
}

TEST_CASE("schatten LRC trace-norm example") {
  const TaskSpectra spectra = make_spectra({{0.5, 0.25}, {0.5, 0.25}});
  const ProblemParams params(50, 2, 1.0);
  const auto b = lrc_schatten(0.01, 1.0, spectra, params, 1.0);
  // scale 2*1*R^2/T = 1 per eigenvalue; each min caps at r = 0.01
  CHECK(b.value == doctest::Approx(0.04).epsilon(1e-12));
  // all-zero spectra vanish
  const TaskSpectra zeros = make_spectra({{0.0}, {0.0}});
  CHECK(lrc_schatten(1.0, 1.0, zeros, params, 1.0).value == doctest::Approx(0.0));
}

TEST_CASE("graph LRC with identity coupling equals the q>=2 schatten form") {
  const auto spectra = power_law_spectra(PowerLawDecay({1.0, 0.7}, {2.0, 2.5}), 120);
  const ProblemParams params(60, 2, 1.0);
  const auto op = build_graph_operator(Matrix::Zero(2, 2), 1.0);
  for (double r : {1e-3, 0.1, 10.0}) {
    const double g = lrc_graph(r, spectra, op, params, 1.3).value;
    const double s = lrc_schatten(r, 4.0, spectra, params, 1.3).value;
    CHECK(g == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("graph LRC uses the per-task inverse diagonal") {
  Matrix w(2, 2);
  w << 0, 1, 1, 0;
  const auto op = build_graph_operator(w, 1.0);  // D^{-1} diag = 2/3
  const TaskSpectra spectra = make_spectra({{0.3, 0.1}, {0.2, 0.05}});
  const ProblemParams params(40, 2, 1.0);
  const double r = 1e9;  // saturate the min at the eigenvalue branch
  const double R = 1.1;
  double inner = 0.0;
  for (std::size_t t = 0; t < 2; ++t)
    for (double lam : spectra.task(t)) inner += 2.0 * (2.0 / 3.0) * R * R / 2.0 * lam;
  const double expect = std::sqrt(4.0 / (40.0 * 2.0) * inner);
  CHECK(lrc_graph(r, spectra, op, params, R).value == doctest::Approx(expect).epsilon(1e-12));
  CHECK(lrc_graph(1e-300, spectra, op, params, R).value == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("group lower bound arithmetic and flags") {
  const TaskSpectra spectra = make_spectra({{0.5, 0.25}, {0.5, 0.25}, {0.5, 0.25}, {0.5, 0.25}});
  const ProblemParams params(100, 4, 1.0);
  const auto lb = lrc_lower_group(0.01, 2.0, spectra, params, 1.0, 1.0);
  CHECK(lb.hypotheses_hold);
  CHECK(lb.value == doctest::Approx(std::sqrt(0.0002)).epsilon(1e-12));
  CHECK(lb.value == doctest::Approx(0.014142).epsilon(1e-4));
  CHECK(lrc_lower_group(0.01, 2.0, spectra, params, 1.0, 0.0).value == doctest::Approx(0.0));
  // violated hypotheses flag but still evaluate
  const auto flagged = lrc_lower_group(1e-8, 2.0, spectra, params, 1.0, 1.0);
  CHECK_FALSE(flagged.hypotheses_hold);
  CHECK(flagged.value > 0.0);
}

TEST_CASE("lower bound stays below the matching upper bound") {
  const auto spectra = power_law_spectra(PowerLawDecay(std::vector<double>(2, 1.0),
                                                       std::vector<double>(2, 2.0)),
                                         400);
  const ProblemParams params(100, 2, 1.0);
  for (double r : log_grid(0.01, 100.0, 20)) {
    const double up = lrc_group(r, 2.0, spectra, params, 1.0, KappaStrategy::Fixed).value;
    const double low = lrc_lower_group(r, 2.0, spectra, params, 1.0, 1.0).value;
    CHECK(low <= up);
  }
}

TEST_CASE("graph GRC example") {
  const TaskSpectra spectra = make_spectra({{0.5, 0.25}, {0.5, 0.25}});  // traces 0.75 each
  const ProblemParams params(50, 2, 1.0);
  const auto op = build_graph_operator(Matrix::Zero(2, 2), 1.0);
  CHECK(grc_graph(spectra, op, params, 1.0).value ==
        doctest::Approx(std::sqrt(0.015)).epsilon(1e-12));
}

TEST_CASE("GRC zero-spectra degenerate cases") {
  const TaskSpectra zeros = make_spectra({{0.0}, {0.0}});
  const ProblemParams params(50, 2, 1.0);
  const auto g = grc_group(1.5, zeros, params, 1.0);
  CHECK(g.a2 == doctest::Approx(0.0));
  CHECK(g.value == doctest::Approx(g.additive));
  CHECK(g.additive > 0.0);
  CHECK(grc_schatten(2.0, zeros, params, 1.0).value == doctest::Approx(0.0));
  const auto op = build_graph_operator(Matrix::Zero(2, 2), 1.0);
  CHECK(grc_graph(zeros, op, params, 1.0).value == doctest::Approx(0.0));
}

TEST_CASE("kappa grid minimisation never loses to the endpoint") {
  std::vector<std::vector<double>> rep(100, {1.0, 0.5, 0.25});
  const TaskSpectra spectra(std::move(rep));
  const ProblemParams params(200, 100, 1.0);
  const double grid_min = grc_group(1.0, spectra, params, 1.0, KappaStrategy::GridMin).value;
  const double at_two = grc_group(2.0, spectra, params, 1.0, KappaStrategy::Fixed).value;
  CHECK(grid_min <= at_two + 1e-15);
  // same for the local bound
  const double lg = lrc_group(0.1, 1.0, spectra, params, 1.0, KappaStrategy::GridMin).value;
  const double lg2 = lrc_group(0.1, 2.0, spectra, params, 1.0, KappaStrategy::Fixed).value;
  CHECK(lg <= lg2 + 1e-15);
}

TEST_CASE("trace competitor bound arithmetic") {
  const ProblemParams params(100, 10, 1.0);
  const LossSpec loss(1.0, 1.0, 1.0);
  const double v = grc_trace_competitor(1.0, params, 1.0, loss, 1.0);
  const double lnterm = std::sqrt((std::log(1000.0) + 1.0) / 1000.0);
  const double expect = 2.0 * std::sqrt(2.0) * (0.1 + 5.0 * lnterm) + std::sqrt(1.0 / 1000.0);
  CHECK(v == doctest::Approx(expect).epsilon(1e-14));
  CHECK(v == doctest::Approx(1.5720628235981393).epsilon(1e-12));
  // vanishes as n grows
  const ProblemParams big(100000000, 10, 1.0);
  CHECK(grc_trace_competitor(1.0, big, 1.0, loss, 1.0) < 0.003);
}

TEST_CASE("generic strong-convexity and Hoelder bounds") {
  const ProblemParams params(100, 4, 1.0);
  const StrongConvexityParams sc(0.5);
  const auto zero = generic_lrc_strong_convex(1.0, {0, 0, 0, 0}, sc, 0.0, params, 1.0);
  CHECK(zero.value == doctest::Approx(0.0));
  const auto b = generic_lrc_strong_convex(1.0, {1, 1, 1, 1}, sc, 0.0, params, 1.0);
  CHECK(b.a1 == doctest::Approx(0.1));
  // Hoelder with the same first moment is never worse for mu <= 1 (Jensen)
  const double first_moment = 0.37;
  const auto hold = generic_lrc_holder(1.0, {1, 1, 1, 1}, first_moment, params, 1.0);
  const auto strong =
      generic_lrc_strong_convex(1.0, {1, 1, 1, 1}, sc, first_moment * first_moment, params, 1.0);
  CHECK(hold.value <= strong.value + 1e-15);
  // full truncation: first term only
  const auto full = generic_lrc_holder(2.0, {3, 3, 3, 3}, 0.0, params, 1.0);
  CHECK(full.value == doctest::Approx(std::sqrt(2.0 * 12.0 / 400.0)));
}

TEST_CASE("group bound collapses to the single-task form at T = 1") {
  const TaskSpectra spectra = make_spectra({{0.8, 0.4, 0.2}});
  const ProblemParams params(64, 1, 2.0);
  const double r = 0.05;
  const double R = 1.2;
  for (double q : {1.5, 2.0}) {
    const double qs = dual_exponent(q);
    double inner = 0.0;
    for (double lam : spectra.task(0))
      inner += std::min(r, 2.0 * kE * qs * qs * R * R * lam);
    const double expect = std::sqrt(4.0 / 64.0 * inner) +
                          std::sqrt(2.0 * 2.0 * kE) * R * qs / 64.0;
    CHECK(lrc_group(r, q, spectra, params, R, KappaStrategy::Fixed).value ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("log-T strategy matches the pinned grid point") {
  std::vector<std::vector<double>> rep(100, {1.0, 0.5, 0.25, 0.125});
  const TaskSpectra spectra(std::move(rep));
  const ProblemParams params(200, 100, 1.0);  // log T = 4.6 >= 2
  const auto pinned = lrc_group(0.1, 1.0, spectra, params, 1.0, KappaStrategy::LogT);
  const auto grid = lrc_group(0.1, 1.0, spectra, params, 1.0, KappaStrategy::GridMin);
  CHECK(grid.value <= pinned.value + 1e-15);
  const double kstar = std::log(100.0);
  double inner = 0.0;
  for (double lam : spectra.task(0))
    inner += std::min(0.1 * std::pow(100.0, 1.0 - 2.0 / kstar),
                      2.0 * kE * kstar * kstar / 100.0 * lam);
  const double expect =
      std::sqrt(4.0 / (200.0 * 100.0) * std::pow(100.0, 2.0 / kstar) * inner) +
      std::sqrt(2.0 * kE) * kstar * std::pow(100.0, 1.0 / kstar) / 20000.0;
  CHECK(pinned.value == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("strong convexity moduli per family") {
  CHECK(StrongConvexityParams::for_family(HypothesisFamily::group(2.0, 1.0)).mu ==
        doctest::Approx(0.5));
  CHECK(StrongConvexityParams::for_family(HypothesisFamily::group(1.5, 1.0)).mu ==
        doctest::Approx(1.0 / 3.0));
  CHECK(StrongConvexityParams::for_family(HypothesisFamily::schatten(1.5, 1.0)).mu ==
        doctest::Approx(0.5));
  CHECK_THROWS_AS(StrongConvexityParams::for_family(HypothesisFamily::group(1.0, 1.0)),
                  std::invalid_argument);
}
