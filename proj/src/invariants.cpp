#include "preq/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "preq/chebyshev.hpp"

namespace preq {

namespace {

// Point and coordinate vectors of a stereographic chart at (u, v).
struct ChartPoint {
  Vec3 x, du, dv;
};

ChartPoint chart_point(bool north, double u, double v) {
  const double d = 1.0 + u * u + v * v;
  const double s = 2.0 / (d * d);
  ChartPoint p;
  if (north) {
    p.x = Vec3(2 * u, 2 * v, 1 - u * u - v * v) / d;
    p.du = s * Vec3(d - 2 * u * u, -2 * u * v, -2 * u);
    p.dv = s * Vec3(-2 * u * v, d - 2 * v * v, -2 * v);
  } else {
    p.x = Vec3(2 * u, -2 * v, u * u + v * v - 1) / d;
    p.du = s * Vec3(d - 2 * u * u, 2 * u * v, 2 * u);
    p.dv = s * Vec3(-2 * u * v, -(d - 2 * v * v), 2 * v);
  }
  return p;
}

// (E, F, G) of the metric w(., j .) in chart coordinates; w(X, Y) = n.(X x Y) / 2.
Eigen::Vector3d chart_metric(const ComplexStructureField& j, bool north, double u, double v) {
  const ChartPoint p = chart_point(north, u, v);
  const Mat3 e = j.embedded(p.x);
  auto w = [&](const Vec3& a, const Vec3& b) { return 0.5 * p.x.dot(a.cross(b)); };
  const double ee = w(p.du, e * p.du);
  const double ff = 0.5 * (w(p.du, e * p.dv) + w(p.dv, e * p.du));
  const double gg = w(p.dv, e * p.dv);
  return {ee, ff, gg};
}

}  // namespace

double scalar_curvature_at(const ComplexStructureField& j, const Vec3& x, double h) {
  const Vec3 n = x / x.norm();
  const bool north = n(2) >= 0.0;
  const double u0 = north ? n(0) / (1.0 + n(2)) : n(0) / (1.0 - n(2));
  const double v0 = north ? n(1) / (1.0 + n(2)) : -n(1) / (1.0 - n(2));

  // Samples on the 5 x 5 stencil, indexed by offsets -2..2.
  Eigen::Vector3d m[5][5];
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) m[a + 2][b + 2] = chart_metric(j, north, u0 + a * h, v0 + b * h);
  auto at = [&](int a, int b) -> const Eigen::Vector3d& { return m[a + 2][b + 2]; };

  const double c1[5] = {1.0, -8.0, 0.0, 8.0, -1.0};            // / 12h
  const double c2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};        // / 12h^2
  Eigen::Vector3d du = Eigen::Vector3d::Zero(), dv = du, duu = du, dvv = du, duv = du;
  for (int a = -2; a <= 2; ++a) {
    du += c1[a + 2] * at(a, 0);
    dv += c1[a + 2] * at(0, a);
    duu += c2[a + 2] * at(a, 0);
    dvv += c2[a + 2] * at(0, a);
    for (int b = -2; b <= 2; ++b) duv += c1[a + 2] * c1[b + 2] * at(a, b);
  }
  du /= 12.0 * h;
  dv /= 12.0 * h;
  duu /= 12.0 * h * h;
  dvv /= 12.0 * h * h;
  duv /= 144.0 * h * h;

  const double e = at(0, 0)(0), f = at(0, 0)(1), g = at(0, 0)(2);
  const double eu = du(0), ev = dv(0), fu = du(1), fv = dv(1), gu = du(2), gv = dv(2);
  const double evv = dvv(0), guu = duu(2), fuv = duv(1);

  Mat3 a;
  a << -0.5 * evv + fuv - 0.5 * guu, 0.5 * eu, fu - 0.5 * ev,
       fv - 0.5 * gu, e, f,
       0.5 * gv, f, g;
  Mat3 b;
  b << 0.0, 0.5 * ev, 0.5 * gu,
       0.5 * ev, e, f,
       0.5 * gu, f, g;
  const double det = e * g - f * f;
  return (a.determinant() - b.determinant()) / (det * det);
}

CurvatureField scalar_curvature(const ComplexStructureField& j, const SphereGrid& grid, Exec exec) {
  CurvatureField out;
  out.values.values.resize(grid.size());
  const long n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic, 8) if (exec == Exec::Parallel)
  for (long i = 0; i < n; ++i) out.values.values[i] = scalar_curvature_at(j, grid.nodes[i]);
  for (double s : out.values.values)
    if (!std::isfinite(s)) throw AccuracyError("scalar curvature is not finite; grid too coarse");
  return out;
}

double curvature_pairing(const ComplexStructureField& j0, const HamiltonianPath& path,
                         const SphereGrid& grid, const ShelukhinOptions& opt) {
  // S(j_t) = S(j_0) o phi_t^-1 and phi_t preserves mu, so
  // int S(j_t) Hbar_t mu = int S(j_0)(y) Hbar_t(phi_t y) mu(y).
  const long n = static_cast<long>(grid.size());
  const CurvatureField s0 = scalar_curvature(j0, grid, opt.exec);
  std::vector<double> tn, tw;
  time_rule(opt.timeNodes, tn, tw);
  FlowIntegrator flow(path, grid.nodes, opt.flowStepsPerUnit, opt.exec);
  double total = 0.0;
  for (int q = 0; q < opt.timeNodes; ++q) {
    flow.advance_to(tn[q]);
    const double mean = path.mean(tn[q]);
    double sum = 0.0;
    for (long i = 0; i < n; ++i)
      sum += grid.weights[i] * s0.values.values[i] * (path.value(tn[q], flow.points()[i]) - mean);
    total += tw[q] * sum;
  }
  return total;
}

ShelukhinValue shelukhin(const ComplexStructureField& j0, const HamiltonianPath& path,
                         const SphereGrid& grid, const ShelukhinOptions& opt) {
  ShelukhinValue out;
  const long n = static_cast<long>(grid.size());

  // Disc term: each node traces t -> j_t(x) = (phi_t)_* j0 (x) at Chebyshev
  // times, closed by the geodesic from j_1(x) back to j_0(x).
  const auto tc = cheb::lobatto_nodes(opt.chebyshevOrder);
  FlowOptions fo;
  fo.stepsPerUnit = opt.flowStepsPerUnit;
  fo.exec = opt.exec;
  const auto back = inverse_flow(path, grid.nodes, tc, fo);
  const double c_sigma = lincx::sigma_area_constant();
  std::vector<double> disc(n);
#pragma omp parallel for schedule(dynamic, 8) if (opt.exec == Exec::Parallel)
  for (long i = 0; i < n; ++i) {
    std::vector<lincx::LinearComplexStructure> js;
    js.reserve(tc.size());
    for (std::size_t c = 0; c < tc.size(); ++c) js.push_back(transported(j0, grid.nodes[i], back[c][i]));
    disc[i] = lincx::smooth_arc_primitive(js) +
              c_sigma * lincx::geodesic_primitive(js.back().upper_half_plane(),
                                                  js.front().upper_half_plane());
  }
  for (long i = 0; i < n; ++i) out.discTerm += disc[i] * grid.weights[i];

  out.curvatureTerm = curvature_pairing(j0, path, grid, opt);
  out.total = out.discTerm + out.curvatureTerm;
  return out;
}

std::vector<ScalarField> CachedPath::sample_many(const SphereGrid& grid,
                                                 const std::vector<double>& times) const {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (grid.nTheta != nTheta_ || grid.nPhi != nPhi_) {
    cache_.clear();
    nTheta_ = grid.nTheta;
    nPhi_ = grid.nPhi;
  }
  std::map<double, std::size_t> index;
  for (std::size_t i = 0; i < cache_.size(); ++i) index.emplace(cache_[i].first, i);
  std::vector<double> missing;
  for (double t : times)
    if (!index.count(t)) missing.push_back(t);
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    auto fresh = base_->sample_many(grid, missing);
    for (std::size_t i = 0; i < missing.size(); ++i) {
      index.emplace(missing[i], cache_.size());
      cache_.emplace_back(missing[i], std::move(fresh[i]));
    }
  }
  std::vector<ScalarField> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(cache_[index.at(t)].second);
  return out;
}

std::vector<DefectRow> defect(PathPtr a, PathPtr b, const std::vector<int>& ks,
                              const PropagationOptions& opt, int steps) {
  if (ks.empty()) return {};
  const int kmax = *std::max_element(ks.begin(), ks.end());
  const SphereGrid grid = quantum_grid(kmax);
  auto composed = std::make_shared<CachedPath>(star_product(a, b, opt.flowStepsPerUnit));

  if (steps <= 0) {
    double bound = 0.0;
    for (double t : {0.0, 0.5, 1.0})
      for (const auto& x : grid.nodes)
        bound = std::max(bound, std::abs(a->value(t, x)) + std::abs(b->value(t, x)));
    steps = std::max(16, static_cast<int>(std::ceil(2.5 * kmax * bound)) + 1);
  }
  PropagationOptions po = opt;
  po.steps = steps;
  po.keepSamples = false;
  // Fill the cache once; every row then reads the same samples.
  composed->sample_many(grid, stepper_times(steps, po.stepper, 0, steps));

  std::vector<DefectRow> rows(ks.size());
  const long nk = static_cast<long>(ks.size());
  PropagationOptions inner = po;
  if (opt.exec == Exec::Parallel) inner.exec = Exec::Serial;
#pragma omp parallel for schedule(dynamic, 1) if (opt.exec == Exec::Parallel)
  for (long r = 0; r < nk; ++r) {
    const QuantumSpace space = build_space(ks[r], grid);
    const auto pa = propagate_toeplitz(space, *a, inner);
    const auto pb = propagate_toeplitz(space, *b, inner);
    const auto pab = propagate_toeplitz(space, *composed, inner);
    const auto product = pa.endpoint * pb.endpoint;
    rows[r] = {ks[r], unimetric::cover_distance(product, pab.endpoint), product.phase(),
               pab.endpoint.phase(), steps};
  }
  return rows;
}

}  // namespace preq
