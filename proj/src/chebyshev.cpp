#include "preq/chebyshev.hpp"

#include <cmath>

#include "preq/common.hpp"

namespace preq::cheb {

std::vector<double> lobatto_nodes(int n) {
  std::vector<double> t(n + 1);
  for (int j = 0; j <= n; ++j) t[j] = 0.5 * (1.0 - std::cos(kPi * j / n));
  return t;
}

// Trefethen's cheb() on x_j = cos(pi j / n), then the chain rule for t = (1 - x) / 2.
Eigen::MatrixXd differentiation_matrix(int n) {
  Eigen::VectorXd x(n + 1), c(n + 1);
  for (int j = 0; j <= n; ++j) {
    x(j) = std::cos(kPi * j / n);
    c(j) = ((j == 0 || j == n) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0);
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    double row = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      d(i, j) = (c(i) / c(j)) / (x(i) - x(j));
      row += d(i, j);
    }
    d(i, i) = -row;
  }
  return -2.0 * d;
}

std::vector<double> clenshaw_curtis_weights(int n) {
  std::vector<double> w(n + 1, 0.0);
  const bool even = n % 2 == 0;
  w[0] = w[n] = even ? 1.0 / (n * n - 1.0) : 1.0 / (double(n) * n);
  for (int i = 1; i < n; ++i) {
    const double theta = kPi * i / n;
    double v = 1.0;
    const int half = even ? n / 2 - 1 : (n - 1) / 2;
    for (int k = 1; k <= half; ++k) v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
    if (even) v -= std::cos(n * theta) / (n * n - 1.0);
    w[i] = 2.0 * v / n;
  }
  for (double& wi : w) wi *= 0.5;  // [-1, 1] -> [0, 1]
  return w;
}

}  // namespace preq::cheb
