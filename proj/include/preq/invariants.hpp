#pragma once

// Scalar curvature of a compatible structure, the Shelukhin quasimorphism and
// the homomorphism defect of the quantum propagators.

#include <vector>

#include "preq/flow.hpp"
#include "preq/propagate.hpp"

namespace preq {

struct CurvatureField {
  ScalarField values;
};

/// Gauss curvature of g = w(., j .) at x: Brioschi's formula in the
/// stereographic chart of x's hemisphere, with fourth-order differences of
/// step h in the chart coordinates.
double scalar_curvature_at(const ComplexStructureField& j, const Vec3& x, double h = 1e-3);

CurvatureField scalar_curvature(const ComplexStructureField& j, const SphereGrid& grid,
                                Exec exec = Exec::Parallel);

struct ShelukhinValue {
  double discTerm = 0.0;
  double curvatureTerm = 0.0;
  double total = 0.0;
};

struct ShelukhinOptions {
  int chebyshevOrder = 32;   // samples of t -> j_t(x) per node, minus one
  int timeNodes = 24;        // Gauss nodes for the curvature term
  int flowStepsPerUnit = 512;
  Exec exec = Exec::Parallel;
};

/// int_M (int_{D_x} sigma) mu + int_0^1 int_M S(j_t) Hbar_t mu dt, where D_x is
/// bounded by t -> j_t(x) and the geodesic from j_1(x) back to j_0(x), and
/// Hbar_t is the normalised generator.
ShelukhinValue shelukhin(const ComplexStructureField& j0, const HamiltonianPath& path,
                         const SphereGrid& grid, const ShelukhinOptions& opt = {});

/// int_0^1 int_M S(j_t) Hbar_t mu dt alone (the curvature term of `shelukhin`).
double curvature_pairing(const ComplexStructureField& j0, const HamiltonianPath& path,
                         const SphereGrid& grid, const ShelukhinOptions& opt = {});

struct DefectRow {
  int k = 0;
  double defect = 0.0;
  double phaseProduct = 0.0;   // phase of Phi(A) Phi(B)
  double phaseComposed = 0.0;  // phase of Phi(A * B)
  int steps = 0;
};

/// d~(Phi_k(A) Phi_k(B), Phi_k(A * B)) for each k. All k share one grid,
/// sized for the largest k, and one time discretisation, so the samples of
/// the composed generator are computed once.
std::vector<DefectRow> defect(PathPtr a, PathPtr b, const std::vector<int>& ks,
                              const PropagationOptions& opt = {}, int steps = 0);

/// Memoises `sample_many` on one grid; used to share samples across k.
class CachedPath final : public HamiltonianPath {
 public:
  explicit CachedPath(PathPtr base) : base_(std::move(base)) {}

  double value(double t, const Vec3& x) const override { return base_->value(t, x); }
  Vec3 gradient(double t, const Vec3& x) const override { return base_->gradient(t, x); }
  Mat3 hessian(double t, const Vec3& x) const override { return base_->hessian(t, x); }
  bool autonomous() const override { return base_->autonomous(); }
  bool affine() const override { return base_->affine(); }
  std::string describe() const override { return base_->describe(); }
  double mean(double t) const override { return base_->mean(t); }
  std::vector<ScalarField> sample_many(const SphereGrid& grid,
                                       const std::vector<double>& times) const override;

 private:
  PathPtr base_;
  mutable std::vector<std::pair<double, ScalarField>> cache_;
  mutable int nTheta_ = -1, nPhi_ = -1;
};

}  // namespace preq
