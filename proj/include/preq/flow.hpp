#pragma once

// Hamiltonian flows on the sphere, their tangent maps, and complex structure
// fields transported by them.

#include <functional>
#include <vector>

#include "preq/lincx.hpp"
#include "preq/sphere.hpp"

namespace preq {

/// Orthonormal, positively oriented frame of T_x S^2: the normalised
/// coordinate vectors of the north stereographic chart when x3 >= 0 and of
/// the south chart otherwise.
Frame frame_at(const Vec3& x);

/// A point carried by the flow together with the ambient tangent map.
struct FlowSample {
  Vec3 point;
  Mat3 jacobian3;
};

/// RK4 for x' = 2 x cross grad H_t(x) and its variational equation, from
/// time t0 to t1 (t1 < t0 integrates backwards) with `steps` steps.
FlowSample flow_point(const HamiltonianPath& path, const Vec3& x, double t0, double t1, int steps);

/// The flow at time t on a set of nodes.
struct FlowMap {
  double t = 0.0;
  std::vector<Vec3> forward;
  std::vector<Mat3> jacobian3;
  std::vector<Mat2> jacobian;  // frame at x to frame at forward(x)
};

struct FlowOptions {
  int stepsPerUnit = 256;     // RK4 steps per unit of time
  double detTolerance = 1e-6; // allowed drift of det(jacobian) from 1
  Exec exec = Exec::Parallel;
};

/// Flow maps phi_t at each of the ascending `times` (all >= 0), computed
/// incrementally along each trajectory.
std::vector<FlowMap> integrate_flow(const HamiltonianPath& path, const std::vector<Vec3>& nodes,
                                    const std::vector<double>& times, const FlowOptions& opt = {});

/// Grid version: maps at t = i / steps, i = 0..steps, with `substeps` RK4
/// steps per interval.
std::vector<FlowMap> integrate_flow(const HamiltonianPath& path, const SphereGrid& grid, int steps,
                                    int substeps = 8, Exec exec = Exec::Parallel);

/// Carries a set of nodes forward in time, for consumers that need the flow
/// at many times without storing every map.
class FlowIntegrator {
 public:
  FlowIntegrator(const HamiltonianPath& path, std::vector<Vec3> nodes, int steps_per_unit = 256,
                 Exec exec = Exec::Parallel);

  /// Advances every node to time t >= time().
  void advance_to(double t);
  double time() const { return t_; }
  const std::vector<Vec3>& points() const { return points_; }
  const std::vector<Mat3>& jacobians() const { return jac_; }

 private:
  const HamiltonianPath& path_;
  std::vector<Vec3> points_;
  std::vector<Mat3> jac_;
  int stepsPerUnit_;
  Exec exec_;
  double t_ = 0.0;
};

/// phi_t^-1(x) and its tangent map for every time in `times` (ascending,
/// >= 0) and every node; indexed [time][node]. Autonomous paths are
/// integrated incrementally, others backwards from each time to 0.
std::vector<std::vector<FlowSample>> inverse_flow(const HamiltonianPath& path,
                                                  const std::vector<Vec3>& nodes,
                                                  const std::vector<double>& times,
                                                  const FlowOptions& opt = {});

/// Almost complex structure on the sphere, stored as the embedded tangent
/// endomorphism E(x) = F j F^T so that it is independent of the frame.
class ComplexStructureField {
 public:
  using Evaluator = std::function<Mat3(const Vec3&)>;

  explicit ComplexStructureField(Evaluator e) : eval_(std::move(e)) {}

  /// The round structure: E(x) v = x cross v.
  static ComplexStructureField round();
  /// A J0 A^-1 with A = exp(eps S), S the traceless part of P a a^T P for a
  /// fixed smooth vector field a.
  static ComplexStructureField deformed(double eps);

  Mat3 embedded(const Vec3& x) const { return eval_(x); }
  /// Matrix in the frame at x.
  lincx::LinearComplexStructure at(const Vec3& x) const;
  std::vector<lincx::LinearComplexStructure> sample(const std::vector<Vec3>& nodes) const;

 private:
  Evaluator eval_;
};

/// Values of a structure at scattered points (the images of grid nodes).
struct SampledStructure {
  std::vector<Vec3> points;
  std::vector<lincx::LinearComplexStructure> values;
};

/// (phi_* j)(phi(x)) = d phi_x j(x) d phi_x^-1 for every node x of the map.
SampledStructure pushforward(const ComplexStructureField& j, const FlowMap& flow,
                             const std::vector<Vec3>& nodes);

/// Lazy transport of j by phi_t: evaluation at x integrates back to
/// phi_t^-1(x).
ComplexStructureField pushforward(const ComplexStructureField& j, PathPtr path, double t,
                                  int steps_per_unit = 256);

/// j_t computed from phi_t^-1(x) and D(phi_t^-1)(x).
lincx::LinearComplexStructure transported(const ComplexStructureField& j, const Vec3& x,
                                          const FlowSample& back);

/// Nodewise geodesics between two sampled structures; result[i][node].
std::vector<std::vector<lincx::LinearComplexStructure>> geodesic_sweep(
    const std::vector<lincx::LinearComplexStructure>& j0,
    const std::vector<lincx::LinearComplexStructure>& j1, const std::vector<double>& t);

/// Generator of the pointwise product of the flows of f and g:
/// f_t + g_t o alpha_t^-1, alpha the flow of f.
class StarProductPath final : public HamiltonianPath {
 public:
  StarProductPath(PathPtr f, PathPtr g, int steps_per_unit = 256);

  double value(double t, const Vec3& x) const override;
  Vec3 gradient(double t, const Vec3& x) const override;
  bool autonomous() const override { return false; }
  std::string describe() const override;
  double mean(double t) const override { return f_->mean(t) + g_->mean(t); }
  std::vector<ScalarField> sample_many(const SphereGrid& grid,
                                       const std::vector<double>& times) const override;

 private:
  PathPtr f_, g_;
  int stepsPerUnit_;
};

PathPtr star_product(PathPtr f, PathPtr g, int steps_per_unit = 256);

}  // namespace preq
