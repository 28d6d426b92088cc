#pragma once

#include "mtlrc/types.hpp"

namespace mtlrc {

// (sum_t a_t^p)^(1/p) over non-negative entries; p = inf gives the max.
// Also evaluated verbatim for p < 1 where it is a formal power sum, exactly
// as the bound formulas use it.
double lp_aggregate(const std::vector<double>& a, double p);

// Euclidean norms of the columns of a p x T matrix.
std::vector<double> column_norms(const Matrix& m);

// Singular values of a matrix, non-increasing.
std::vector<double> singular_values(const Matrix& m);

// Symmetric inverse square root via eigendecomposition (SPD input).
Matrix inverse_sqrt_spd(const Matrix& m);

}  // namespace mtlrc
