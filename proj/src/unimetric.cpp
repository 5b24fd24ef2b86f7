#include "preq/unimetric.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace preq::unimetric {

Unitary::Unitary(CMatrix u, double tol) : u_(std::move(u)) {
  if (u_.rows() != u_.cols() || u_.rows() == 0) throw DomainError("unitary must be square");
  const CMatrix defect = u_.adjoint() * u_ - CMatrix::Identity(u_.rows(), u_.cols());
  if (!(defect.cwiseAbs().maxCoeff() <= tol)) throw DomainError("matrix is not unitary");
}

Unitary Unitary::identity(int n) { return Unitary(CMatrix::Identity(n, n)); }

UnitaryWithPhase::UnitaryWithPhase(Unitary u, double phase, double tol)
    : u_(std::move(u)), phase_(phase) {
  if (!std::isfinite(phase)) throw DomainError("phase is not finite");
  if (std::abs(u_.matrix().determinant() - std::polar(1.0, phase)) > tol)
    throw DomainError("phase does not match the determinant");
}

UnitaryWithPhase UnitaryWithPhase::inverse() const {
  return {Unitary(u_.matrix().adjoint()), -phase_};
}

UnitaryWithPhase operator*(const UnitaryWithPhase& a, const UnitaryWithPhase& b) {
  if (a.unitary().size() != b.unitary().size()) throw DomainError("dimension mismatch");
  return {Unitary(a.unitary().matrix() * b.unitary().matrix(), 1e-8), a.phase() + b.phase()};
}

double principal_arg(cplx z) {
  const double a = std::arg(z);
  return a <= -kPi ? kPi : a;
}

namespace {

// Eigen-decomposition of a normal matrix: w = Q diag(lambda) Q^*.
Eigen::ComplexSchur<CMatrix> schur(const CMatrix& w) { return Eigen::ComplexSchur<CMatrix>(w); }

std::vector<double> diagonal_args(const CMatrix& t) {
  std::vector<double> out(t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) out[i] = principal_arg(t(i, i));
  return out;
}

void require_same_size(int a, int b) {
  if (a != b) throw DomainError("dimension mismatch");
}

}  // namespace

std::vector<double> eigen_args(const CMatrix& u) { return diagonal_args(schur(u).matrixT()); }

double distance(const Unitary& u, const Unitary& v) {
  require_same_size(u.size(), v.size());
  double m = 0.0;
  for (double a : eigen_args(u.matrix().adjoint() * v.matrix())) m = std::max(m, std::abs(a));
  return m;
}

LatticeSolution solve_lattice(const LatticeProblem& p) {
  const auto& a = p.baseArgs;
  const int n = static_cast<int>(a.size());
  if (n == 0) throw DomainError("empty lattice problem");
  double base = 0.0;
  for (double ai : a) {
    if (!(ai > -kPi - 1e-12 && ai <= kPi + 1e-12)) throw DomainError("base argument out of range");
    base += ai;
  }
  const double kreal = (p.targetSum - base) / kTwoPi;
  const double kround = std::round(kreal);
  const double mismatch = p.targetSum - base - kTwoPi * kround;
  if (std::abs(mismatch) > 1e-8 + 1e-14 * std::abs(p.targetSum))
    throw DomainError("target sum is not congruent to the base arguments");
  const long long target = static_cast<long long>(kround);

  // theta_i = a_i + 2 pi n_i with |theta_i| <= r iff n_i lies in [lo_i, hi_i].
  const double eps = 1e-12;
  auto bounds = [&](double r, std::vector<long long>& lo, std::vector<long long>& hi) {
    long long slo = 0, shi = 0;
    for (int i = 0; i < n; ++i) {
      lo[i] = static_cast<long long>(std::ceil((-r - a[i]) / kTwoPi - eps));
      hi[i] = static_cast<long long>(std::floor((r - a[i]) / kTwoPi + eps));
      if (lo[i] > hi[i]) return false;
      slo += lo[i];
      shi += hi[i];
    }
    return slo <= target && target <= shi;
  };

  // The optimum is attained at one of the values |a_i + 2 pi n|, and it never
  // exceeds |target sum| / N + 2 pi.
  const double rmax = std::abs(p.targetSum) / n + 3.0 * kPi;
  const long long nmax = static_cast<long long>(std::ceil(rmax / kTwoPi)) + 1;
  std::vector<double> radii;
  radii.reserve(static_cast<std::size_t>(n) * (2 * nmax + 1));
  for (double ai : a)
    for (long long k = -nmax; k <= nmax; ++k) radii.push_back(std::abs(ai + kTwoPi * k));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  std::vector<long long> lo(n), hi(n);
  std::size_t left = 0, right = radii.size() - 1;
  if (!bounds(radii[right], lo, hi)) throw AccuracyError("lattice search range too small");
  while (left < right) {
    const std::size_t mid = (left + right) / 2;
    if (bounds(radii[mid], lo, hi))
      right = mid;
    else
      left = mid + 1;
  }
  bounds(radii[left], lo, hi);

  long long remaining = target;
  for (long long l : lo) remaining -= l;
  LatticeSolution sol;
  sol.thetaStar.resize(n);
  for (int i = 0; i < n; ++i) {
    const long long step = std::min(remaining, hi[i] - lo[i]);
    remaining -= step;
    sol.thetaStar[i] = a[i] + kTwoPi * static_cast<double>(lo[i] + step) + mismatch / n;
    sol.m = std::max(sol.m, std::abs(sol.thetaStar[i]));
  }
  return sol;
}

double cover_distance(const UnitaryWithPhase& a, const UnitaryWithPhase& b) {
  require_same_size(a.unitary().size(), b.unitary().size());
  LatticeProblem p;
  p.baseArgs = eigen_args(a.unitary().matrix().adjoint() * b.unitary().matrix());
  p.targetSum = b.phase() - a.phase();
  return solve_lattice(p).m;
}

CMatrix minimizing_curve(const UnitaryWithPhase& a, const UnitaryWithPhase& b) {
  require_same_size(a.unitary().size(), b.unitary().size());
  const auto s = schur(b.unitary().matrix() * a.unitary().matrix().adjoint());
  LatticeProblem p;
  p.baseArgs = diagonal_args(s.matrixT());
  p.targetSum = b.phase() - a.phase();
  const LatticeSolution sol = solve_lattice(p);
  Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(sol.thetaStar.data(), sol.thetaStar.size());
  const CMatrix& q = s.matrixU();
  CMatrix h = q * theta.cast<cplx>().asDiagonal() * q.adjoint();
  return 0.5 * (h + h.adjoint());
}

UnitaryWithPhase lift_path(std::span<const Unitary> path, double start_phase) {
  if (path.empty()) throw DomainError("empty path");
  (void)UnitaryWithPhase(path.front(), start_phase);
  double phase = start_phase;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    require_same_size(path[i].size(), path[i + 1].size());
    // The increment of the lifted determinant is the sum of the eigenvalue
    // arguments of U_i^-1 U_{i+1}; each lies well inside (-pi/2, pi/2).
    for (double x : eigen_args(path[i].matrix().adjoint() * path[i + 1].matrix())) {
      if (std::abs(x) >= kPi / 2) throw StepSizeError("path samples too far apart to lift");
      phase += x;
    }
  }
  return {path.back(), phase};
}

}  // namespace preq::unimetric
