#pragma once

// Operator-norm Finsler distance on U(N) and on its universal cover, realised
// as pairs (u, phi) with det u = exp(i phi).

#include <span>
#include <vector>

#include "preq/common.hpp"

namespace preq::unimetric {

class Unitary {
 public:
  explicit Unitary(CMatrix u, double tol = 1e-10);
  static Unitary identity(int n);

  const CMatrix& matrix() const { return u_; }
  int size() const { return static_cast<int>(u_.rows()); }

 private:
  CMatrix u_;
};

class UnitaryWithPhase {
 public:
  UnitaryWithPhase(Unitary u, double phase, double tol = 1e-8);
  static UnitaryWithPhase identity(int n) { return {Unitary::identity(n), 0.0}; }

  const Unitary& unitary() const { return u_; }
  double phase() const { return phase_; }

  UnitaryWithPhase inverse() const;

 private:
  Unitary u_;
  double phase_;
};

/// Group law of the universal cover: matrices multiply, phases add.
UnitaryWithPhase operator*(const UnitaryWithPhase& a, const UnitaryWithPhase& b);

/// Argument in (-pi, pi]; -pi itself is sent to +pi.
double principal_arg(cplx z);

/// Principal arguments of the eigenvalues of a unitary (any order).
std::vector<double> eigen_args(const CMatrix& u);

/// max_i |arg lambda_i| over the eigenvalues of u^-1 v.
double distance(const Unitary& u, const Unitary& v);

struct LatticeProblem {
  std::vector<double> baseArgs;
  double targetSum = 0.0;
};

struct LatticeSolution {
  double m = 0.0;
  std::vector<double> thetaStar;
};

/// Minimises max_i |theta_i| over theta_i = baseArgs_i + 2 pi n_i with
/// sum theta_i = targetSum.
LatticeSolution solve_lattice(const LatticeProblem& p);

double cover_distance(const UnitaryWithPhase& a, const UnitaryWithPhase& b);

/// Hermitian H with exp(iH) u = v, tr H = psi - phi and ||H|| = cover_distance.
CMatrix minimizing_curve(const UnitaryWithPhase& a, const UnitaryWithPhase& b);

/// Lifts a sampled path of unitaries to the universal cover starting from
/// `start_phase`. Consecutive samples must be closer than pi / 2.
UnitaryWithPhase lift_path(std::span<const Unitary> path, double start_phase);

}  // namespace preq::unimetric
