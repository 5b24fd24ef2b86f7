#pragma once

// The unit sphere with w = dA / 2 (total area 2 pi), its product quadrature,
// and time-dependent Hamiltonians.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "preq/common.hpp"

namespace preq {

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Gauss-Legendre in x3 times a uniform azimuthal grid. Nodes are stored ring
/// by ring: node r * nPhi + j has x3 = ringX3[r] and azimuth 2 pi j / nPhi.
struct SphereGrid {
  int nTheta = 0;
  int nPhi = 0;
  std::vector<double> ringX3;
  std::vector<double> ringWeight;  // Gauss-Legendre weights, sum 2
  std::vector<Vec3> nodes;
  std::vector<double> weights;     // Liouville weights, sum 2 pi

  std::size_t size() const { return nodes.size(); }
  double azimuth(int j) const { return kTwoPi * j / nPhi; }
  /// Highest total degree of polynomials in (x1, x2, x3) integrated exactly.
  int exact_degree() const { return std::min(2 * nTheta - 1, nPhi - 1); }
};

SphereGrid make_grid(int n_theta, int n_phi);

struct ScalarField {
  std::vector<double> values;
};

/// sum_i f(node_i) w_i, the Liouville integral.
double integrate(const SphereGrid& grid, const ScalarField& f);
double integrate(const SphereGrid& grid, const std::function<double(const Vec3&)>& f);
ScalarField normalize(const SphereGrid& grid, const ScalarField& f);
ScalarField sample(const SphereGrid& grid, const std::function<double(const Vec3&)>& f);

/// H_t(x) for t in [0, 1], given through an extension to R^3 so that the
/// ambient gradient is available. The Hamiltonian vector field is
/// X = 2 x cross grad H, which satisfies w(X, .) + dH = 0 on the sphere.
class HamiltonianPath {
 public:
  virtual ~HamiltonianPath() = default;

  virtual double value(double t, const Vec3& x) const = 0;
  virtual Vec3 gradient(double t, const Vec3& x) const = 0;
  /// Ambient Hessian; the default differentiates `gradient` numerically.
  virtual Mat3 hessian(double t, const Vec3& x) const;
  virtual bool autonomous() const { return false; }
  /// True when every H_t is affine in x, i.e. the flow is by rotations.
  virtual bool affine() const { return false; }
  virtual std::string describe() const = 0;
  /// (1 / Vol) int_M H_t mu. The default uses a fixed 32 x 64 grid.
  virtual double mean(double t) const;

  ScalarField sample(const SphereGrid& grid, double t) const;
  /// Samples at several times; overridden where batching pays off.
  virtual std::vector<ScalarField> sample_many(const SphereGrid& grid,
                                               const std::vector<double>& times) const;
};

using PathPtr = std::shared_ptr<const HamiltonianPath>;

/// Time profile times a monomial x1^a x2^b x3^c.
struct PolynomialTerm {
  double coeff = 1.0;
  int e1 = 0, e2 = 0, e3 = 0;
  std::function<double(double)> profile;  // empty means constant 1
};

class PolynomialPath final : public HamiltonianPath {
 public:
  PolynomialPath(std::vector<PolynomialTerm> terms, std::string name, bool autonomous);

  double value(double t, const Vec3& x) const override;
  Vec3 gradient(double t, const Vec3& x) const override;
  Mat3 hessian(double t, const Vec3& x) const override;
  bool autonomous() const override { return autonomous_; }
  bool affine() const override;
  std::string describe() const override { return name_; }
  double mean(double t) const override;

  const std::vector<PolynomialTerm>& terms() const { return terms_; }

 private:
  std::vector<PolynomialTerm> terms_;
  std::string name_;
  bool autonomous_;
};

/// The same flow run along the time change t -> rho(t) = t^2:
/// K_t = rho'(t) H_{rho(t)}.
class ReparametrizedPath final : public HamiltonianPath {
 public:
  explicit ReparametrizedPath(PathPtr base) : base_(std::move(base)) {}

  double value(double t, const Vec3& x) const override;
  Vec3 gradient(double t, const Vec3& x) const override;
  Mat3 hessian(double t, const Vec3& x) const override;
  bool affine() const override { return base_->affine(); }
  std::string describe() const override { return base_->describe() + " along t^2"; }
  double mean(double t) const override { return 2.0 * t * base_->mean(t * t); }

 private:
  PathPtr base_;
};

/// H_t minus its mean value.
class NormalizedPath final : public HamiltonianPath {
 public:
  explicit NormalizedPath(PathPtr base) : base_(std::move(base)) {}

  double value(double t, const Vec3& x) const override { return base_->value(t, x) - base_->mean(t); }
  Vec3 gradient(double t, const Vec3& x) const override { return base_->gradient(t, x); }
  Mat3 hessian(double t, const Vec3& x) const override { return base_->hessian(t, x); }
  bool autonomous() const override { return base_->autonomous(); }
  bool affine() const override { return base_->affine(); }
  std::string describe() const override { return base_->describe() + " (normalised)"; }
  double mean(double) const override { return 0.0; }
  std::vector<ScalarField> sample_many(const SphereGrid& grid,
                                       const std::vector<double>& times) const override;

 private:
  PathPtr base_;
};

/// Gauss-Legendre rule on [0, 1] used for every time integral.
void time_rule(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// int_0^1 int_M H_t mu dt.
double calabi(const SphereGrid& grid, const HamiltonianPath& path, int time_nodes = 24);

// Named presets -------------------------------------------------------------

struct PresetInfo {
  std::string name;
  std::string formula;
  std::string params;
  bool rotation;  // affine at all times, flow preserves the round structure
};

const std::vector<PresetInfo>& preset_catalog();

/// Builds a preset; unknown names throw ConfigError. Parameters not used by
/// the preset are ignored; missing ones take the documented defaults.
PathPtr make_preset(const std::string& name, const std::function<double(const std::string&, double)>& param);
PathPtr make_preset(const std::string& name);

}  // namespace preq
