#include "mtlrc/spectra.hpp"

namespace mtlrc {

double dual_exponent(double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("dual_exponent: q >= 1 required");
  if (q == 1.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(q)) return 1.0;
  return q / (q - 1.0);
}

std::vector<double> tail_sum(const TaskSpectra& spectra, const std::vector<std::size_t>& h) {
  if (h.size() != spectra.tasks())
    throw std::invalid_argument("tail_sum: one truncation level per task required");
  std::vector<double> out(spectra.tasks(), 0.0);
  for (std::size_t t = 0; t < spectra.tasks(); ++t) {
    const auto& seq = spectra.task(t);
    if (h[t] > seq.size())
      throw std::out_of_range("tail_sum: h_t exceeds spectrum length");
    // smallest-first accumulation keeps long tails accurate
    double acc = 0.0;
    for (std::size_t j = seq.size(); j > h[t]; --j) acc += seq[j - 1];
    out[t] = acc;
  }
  return out;
}

std::vector<double> tail_sum_power_law_bound(const PowerLawDecay& decay,
                                             const std::vector<double>& h) {
  if (h.size() != decay.tasks())
    throw std::invalid_argument("tail_sum_power_law_bound: one level per task required");
  std::vector<double> out(decay.tasks(), 0.0);
  for (std::size_t t = 0; t < decay.tasks(); ++t) {
    if (!(h[t] > 0.0))
      throw std::domain_error("tail_sum_power_law_bound: h_t > 0 required (use the trace at h = 0)");
    out[t] = decay.d[t] * std::pow(h[t], 1.0 - decay.alpha[t]) / (decay.alpha[t] - 1.0);
  }
  return out;
}

TaskSpectra power_law_spectra(const PowerLawDecay& decay, std::size_t length) {
  if (length < 1) throw std::invalid_argument("power_law_spectra: length >= 1 required");
  std::vector<std::vector<double>> per_task(decay.tasks());
  for (std::size_t t = 0; t < decay.tasks(); ++t) {
    per_task[t].resize(length);
    for (std::size_t j = 0; j < length; ++j)
      per_task[t][j] = decay.d[t] * std::pow(static_cast<double>(j + 1), -decay.alpha[t]);
  }
  return TaskSpectra(std::move(per_task));
}

PowerLawDecay broadcast_decay(const PowerLawDecay& decay, std::size_t T) {
  if (decay.tasks() == T) return decay;
  if (decay.tasks() == 1)
    return PowerLawDecay(std::vector<double>(T, decay.d[0]), std::vector<double>(T, decay.alpha[0]));
  throw std::invalid_argument("broadcast_decay: decay must have 1 or T tasks");
}

std::vector<double> power_law_trace(const PowerLawDecay& decay) {
  std::vector<double> out(decay.tasks(), 0.0);
  constexpr std::size_t kDirect = 100000;
  for (std::size_t t = 0; t < decay.tasks(); ++t) {
    const double a = decay.alpha[t];
    double acc = 0.0;
    for (std::size_t j = kDirect; j >= 1; --j) acc += std::pow(static_cast<double>(j), -a);
    // Euler-Maclaurin remainder past kDirect
    const double N = static_cast<double>(kDirect);
    const double rem = std::pow(N, 1.0 - a) / (a - 1.0) - 0.5 * std::pow(N, -a) +
                       (a / 12.0) * std::pow(N, -a - 1.0);
    out[t] = decay.d[t] * (acc + rem);
  }
  return out;
}

}  // namespace mtlrc
