#pragma once

#include "mtlrc/types.hpp"

namespace mtlrc {

// D = diag(row sums) - omega + eta*I from a symmetric non-negative weight
// matrix with zero diagonal; eta > 0 makes D positive definite.
GraphOperator build_graph_operator(const Matrix& edge_weights, double eta);

// Eigenvalues of the Laplacian part alone (without eta*I), ascending.
std::vector<double> laplacian_eigenvalues(const GraphOperator& op);

// Smallest Laplacian eigenvalue above tol (the spectral gap); 0 if none.
double laplacian_spectral_gap(const GraphOperator& op, double tol = 1e-10);

}  // namespace mtlrc
