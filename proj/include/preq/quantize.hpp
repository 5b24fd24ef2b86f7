#pragma once

// Holomorphic sections of O(k) over the sphere in the monomial basis
// s_m = z^m, z = (x1 + i x2) / (1 + x3), with |s_m|^2 = u^m (1 - u)^(k - m),
// u = (1 - x3) / 2. Operators are matrices in the orthonormalised basis.

#include <vector>

#include "preq/sphere.hpp"

namespace preq {

struct QuantumSpace {
  int k = 0;
  SphereGrid grid;
  std::vector<double> basisNorms;  // squared L^2 norms of s_m, by quadrature
  Eigen::MatrixXd amplitude;       // (ring, m): |s_m| / sqrt(norm_m) on each ring

  int dimension() const { return k + 1; }
};

/// Grid on which every matrix element with a polynomial symbol of degree
/// below `band` is computed exactly.
SphereGrid quantum_grid(int k, int band = 24);

/// Throws AccuracyError when the quadrature norms miss the closed form.
QuantumSpace build_space(int k, const SphereGrid& grid);
QuantumSpace build_space(int k);

/// 2 pi m! (k - m)! / (k + 1)!.
double closed_form_norm(int k, int m);

/// Symbol values and ambient gradients on the grid of a space.
struct SymbolField {
  std::vector<double> values;
  std::vector<Vec3> gradients;
};

SymbolField symbol(const SphereGrid& grid, const HamiltonianPath& path, double t);

enum class OperatorKind { Toeplitz, KostantSouriau };

struct QuantumOperator {
  CMatrix matrix;  // entry (n, m) = <A e_m, e_n>
  OperatorKind kind = OperatorKind::Toeplitz;
  int k = 0;

  double hermitian_defect() const { return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff(); }
  CMatrix hermitian_part() const { return 0.5 * (matrix + matrix.adjoint()); }
};

QuantumOperator toeplitz(const QuantumSpace& space, const ScalarField& f, Exec exec = Exec::Parallel);
QuantumOperator toeplitz(const QuantumSpace& space, const std::vector<double>& f,
                         Exec exec = Exec::Parallel);

/// Pi K(f) Pi with K(f) = f + (1 / ik) nabla_X on the sections of L^k.
QuantumOperator kostant_souriau(const QuantumSpace& space, const SymbolField& f,
                                Exec exec = Exec::Parallel);

/// (n / 2) int rho / int w for n = 1; on the round sphere int rho = 4 pi.
double lambda_prime(double integral_rho = 4.0 * kPi, double volume = kTwoPi);

/// int exp(k w / 2 pi) Todd = k int w / 2 pi + int rho / 4 pi.
double riemann_roch_dimension(int k, double integral_rho = 4.0 * kPi, double volume = kTwoPi);

/// tr Pi K(f) Pi - (k / 2 pi) [(1 + lambda' / k) int f + (1 / 2k) int fbar S]
/// with fbar the normalised symbol and S sampled on the space's grid.
double trace_expansion_check(const QuantumSpace& space, const SymbolField& f,
                             const ScalarField& curvature);

}  // namespace preq
