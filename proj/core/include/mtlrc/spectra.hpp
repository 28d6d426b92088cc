#pragma once

#include "mtlrc/types.hpp"

namespace mtlrc {

// q* = q/(q-1); +infinity for q = 1. Involution on (1, inf).
double dual_exponent(double q);

// Exact tail sums sum_{j > h_t} lambda_t^j of the stored finite spectra.
// h_t = J_t gives 0, h_t > J_t is an error.
std::vector<double> tail_sum(const TaskSpectra& spectra, const std::vector<std::size_t>& h);

// Integral bound d_t * h_t^{1-alpha_t} / (alpha_t - 1); requires h_t > 0
// (at h = 0 use the full trace instead).
std::vector<double> tail_sum_power_law_bound(const PowerLawDecay& decay,
                                             const std::vector<double>& h);

// Spectra saturating the decay with equality: lambda_t^j = d_t * j^{-alpha_t}.
TaskSpectra power_law_spectra(const PowerLawDecay& decay, std::size_t length);

// Broadcast a single-task decay to T tasks (identity when sizes match).
PowerLawDecay broadcast_decay(const PowerLawDecay& decay, std::size_t T);

// Full series sum_{j>=1} d_t * j^{-alpha_t} = d_t * zeta(alpha_t), via direct
// summation plus an Euler-Maclaurin tail correction (abs error < 1e-12 for
// alpha >= 1.1).
std::vector<double> power_law_trace(const PowerLawDecay& decay);

}  // namespace mtlrc
