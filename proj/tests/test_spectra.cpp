#include <doctest.h>

#include "mtlrc/rng.hpp"
#include "mtlrc/spectra.hpp"

#include <cmath>
#include <cstdlib>

using namespace mtlrc;

TEST_CASE("dual exponent basics") {
  CHECK(dual_exponent(2.0) == doctest::Approx(2.0));
  CHECK(std::isinf(dual_exponent(1.0)));
  CHECK(dual_exponent(4.0 / 3.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(dual_exponent(0.5), std::invalid_argument);
}

TEST_CASE("dual exponent is an involution on (1, inf)") {
  DrawRng rng(7, 0);
  for (int i = 0; i < 200; ++i) {
    const double q = 1.0 + 9.0 * rng.uniform();
    CHECK(dual_exponent(dual_exponent(q)) == doctest::Approx(q).epsilon(1e-12));
  }
}

TEST_CASE("tail sums of stored spectra") {
  const TaskSpectra s = make_spectra({{0.5, 0.25, 0.125}});
  CHECK(tail_sum(s, {1})[0] == doctest::Approx(0.375));
  CHECK(tail_sum(s, {3})[0] == 0.0);
  CHECK(tail_sum(s, {0})[0] == doctest::Approx(0.875));
  CHECK_THROWS_AS(tail_sum(s, {4}), std::out_of_range);

  const TaskSpectra single = make_spectra({{1.0}});
  CHECK(tail_sum(single, {1})[0] == 0.0);
}

TEST_CASE("tail sum against a long direct-summation oracle") {
  // lambda_j = j^-2 up to 1e6: tail past h=1 approaches pi^2/6 - 1
  const std::size_t J = 1000000;
  std::vector<double> lam(J);
  for (std::size_t j = 0; j < J; ++j)
    lam[j] = 1.0 / (static_cast<double>(j + 1) * static_cast<double>(j + 1));
  const TaskSpectra s({lam});
  long double oracle = 0.0L;
  for (std::size_t j = J; j >= 2; --j)
    oracle += 1.0L / (static_cast<long double>(j) * static_cast<long double>(j));
  const double tail = tail_sum(s, {1})[0];
  CHECK(tail == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-12));
  const double pi = 3.14159265358979323846;
  CHECK(tail == doctest::Approx(pi * pi / 6.0 - 1.0).epsilon(1e-5));
}

TEST_CASE("tail_sum is the full trace at h = 0 and non-increasing in h") {
  const TaskSpectra s = make_spectra({{0.9, 0.3, 0.3, 0.1}, {2.0, 1.0}});
  const auto traces = s.traces();
  const auto full = tail_sum(s, {0, 0});
  CHECK(full[0] == doctest::Approx(traces[0]));
  CHECK(full[1] == doctest::Approx(traces[1]));
  for (std::size_t h = 0; h < 4; ++h)
    CHECK(tail_sum(s, {h, 0})[0] >= tail_sum(s, {h + 1, 0})[0]);
}

TEST_CASE("power-law tail bound arithmetic") {
  CHECK(tail_sum_power_law_bound(PowerLawDecay({1.0}, {2.0}), {10.0})[0] == doctest::Approx(0.1));
  CHECK(tail_sum_power_law_bound(PowerLawDecay({3.0}, {3.0}), {2.0})[0] == doctest::Approx(0.375));
  CHECK_THROWS_AS(tail_sum_power_law_bound(PowerLawDecay({1.0}, {2.0}), {0.0}), std::domain_error);
}

TEST_CASE("power-law bound dominates exact tails on a grid") {
  const PowerLawDecay decay({1.0}, {2.0});
  const auto spectra = power_law_spectra(decay, 5000);
  for (std::size_t h = 1; h <= 50; h += 7) {
    const double exact = tail_sum(spectra, {h})[0];
    const double bound = tail_sum_power_law_bound(decay, {static_cast<double>(h)})[0];
    CHECK(bound >= exact);
  }
  // spot value: h = 10 gives the 0.1 bound vs ~0.0952 exact
  CHECK(tail_sum(spectra, {10})[0] == doctest::Approx(0.0951663).epsilon(2.5e-3));
}

TEST_CASE("power-law spectra generator") {
  const auto s = power_law_spectra(PowerLawDecay({1.0}, {1.5}), 3);
  CHECK(s.task(0)[0] == doctest::Approx(1.0));
  CHECK(s.task(0)[1] == doctest::Approx(std::pow(2.0, -1.5)));
  CHECK(s.task(0)[2] == doctest::Approx(std::pow(3.0, -1.5)));

  const auto one = power_law_spectra(PowerLawDecay({2.0}, {4.0}), 1);
  CHECK(one.task(0)[0] == doctest::Approx(2.0));

  DrawRng rng(3, 0);
  for (int i = 0; i < 20; ++i) {
    const double d = 0.1 + 5.0 * rng.uniform();
    const double a = 1.01 + 4.0 * rng.uniform();
    CHECK_NOTHROW(power_law_spectra(PowerLawDecay({d}, {a}), 64));
  }
}

TEST_CASE("power-law trace matches the zeta values") {
  const double pi = 3.14159265358979323846;
  CHECK(power_law_trace(PowerLawDecay({1.0}, {2.0}))[0] ==
        doctest::Approx(pi * pi / 6.0).epsilon(1e-12));
  CHECK(power_law_trace(PowerLawDecay({3.0}, {4.0}))[0] ==
        doctest::Approx(3.0 * pi * pi * pi * pi / 90.0).epsilon(1e-12));
}

TEST_CASE("spectra invariants rejected on bad input") {
  CHECK_THROWS_AS(make_spectra({{0.1, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(make_spectra({{-0.1}}), std::invalid_argument);
  CHECK_THROWS_AS(TaskSpectra(std::vector<std::vector<double>>{}), std::invalid_argument);
  CHECK_THROWS_AS(PowerLawDecay({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("rng substreams are deterministic and thread-count independent") {
  std::vector<double> a(64), b(64);
  setenv("MTLRC_THREADS", "1", 1);
  parallel_for(64, [&](std::size_t i) {
    DrawRng rng(42, i);
    a[i] = rng.normal() + rng.uniform() + rng.rademacher();
  });
  setenv("MTLRC_THREADS", "2", 1);
  parallel_for(64, [&](std::size_t i) {
    DrawRng rng(42, i);
    b[i] = rng.normal() + rng.uniform() + rng.rademacher();
  });
  unsetenv("MTLRC_THREADS");
  for (std::size_t i = 0; i < 64; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("rng normal moments are sane") {
  DrawRng rng(11, 0);
  double m1 = 0.0, m2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double g = rng.normal();
    m1 += g;
    m2 += g * g;
  }
  m1 /= n;
  m2 /= n;
  CHECK(std::abs(m1) < 0.01);
  CHECK(m2 == doctest::Approx(1.0).epsilon(0.02));
}
