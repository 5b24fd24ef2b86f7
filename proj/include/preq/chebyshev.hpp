#pragma once

// Chebyshev-Lobatto collocation on [0, 1]: nodes, differentiation matrix and
// Clenshaw-Curtis weights.

#include <vector>

#include <Eigen/Dense>

namespace preq::cheb {

/// t_j = (1 - cos(pi j / n)) / 2, j = 0..n. t_0 = 0, t_n = 1.
std::vector<double> lobatto_nodes(int n);

/// D such that (D f)(t_j) approximates f'(t_j) for samples f(t_j).
Eigen::MatrixXd differentiation_matrix(int n);

/// Weights w_j with sum_j w_j f(t_j) approximating the integral over [0, 1].
std::vector<double> clenshaw_curtis_weights(int n);

}  // namespace preq::cheb
