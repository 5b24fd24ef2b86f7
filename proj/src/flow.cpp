#include "preq/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace preq {

Frame frame_at(const Vec3& x) {
  Frame f;
  if (x(2) >= 0.0) {
    const double u = x(0) / (1.0 + x(2)), v = x(1) / (1.0 + x(2));
    const double d = 1.0 + u * u + v * v;
    f.col(0) << d - 2 * u * u, -2 * u * v, -2 * u;
    f.col(1) << -2 * u * v, d - 2 * v * v, -2 * v;
    f /= d;
  } else {
    const double u = x(0) / (1.0 - x(2)), v = -x(1) / (1.0 - x(2));
    const double d = 1.0 + u * u + v * v;
    f.col(0) << d - 2 * u * u, 2 * u * v, 2 * u;
    f.col(1) << -2 * u * v, -(d - 2 * v * v), 2 * v;
    f /= d;
  }
  return f;
}

namespace {

Mat3 cross_matrix(const Vec3& v) {
  Mat3 m;
  m << 0, -v(2), v(1), v(2), 0, -v(0), -v(1), v(0), 0;
  return m;
}

struct State {
  Vec3 x;
  Mat3 j;
};

State rhs(const HamiltonianPath& path, double t, const State& s) {
  const Vec3 g = path.gradient(t, s.x);
  const Mat3 h = path.hessian(t, s.x);
  const Mat3 dx = -2.0 * cross_matrix(g) + 2.0 * cross_matrix(s.x) * h;
  return {2.0 * s.x.cross(g), dx * s.j};
}

// One RK4 step; the flow preserves |x|, so the radius is restored afterwards.
void rk4_step(const HamiltonianPath& path, double t, double dt, State& s) {
  const double r0 = s.x.norm();
  const State k1 = rhs(path, t, s);
  const State k2 = rhs(path, t + 0.5 * dt, {s.x + 0.5 * dt * k1.x, s.j + 0.5 * dt * k1.j});
  const State k3 = rhs(path, t + 0.5 * dt, {s.x + 0.5 * dt * k2.x, s.j + 0.5 * dt * k2.j});
  const State k4 = rhs(path, t + dt, {s.x + dt * k3.x, s.j + dt * k3.j});
  s.x += dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
  s.j += dt / 6.0 * (k1.j + 2.0 * k2.j + 2.0 * k3.j + k4.j);
  s.x *= r0 / s.x.norm();
}

void advance(const HamiltonianPath& path, State& s, double t0, double t1, int steps) {
  const double dt = (t1 - t0) / steps;
  for (int i = 0; i < steps; ++i) rk4_step(path, t0 + i * dt, dt, s);
}

int steps_for(double span, int per_unit) {
  return std::max(1, static_cast<int>(std::ceil(std::abs(span) * per_unit - 1e-9)));
}

Mat2 frame_jacobian(const Vec3& x, const Vec3& y, const Mat3& j3) {
  return frame_at(y).transpose() * j3 * frame_at(x);
}

}  // namespace

FlowSample flow_point(const HamiltonianPath& path, const Vec3& x, double t0, double t1, int steps) {
  if (steps < 1) throw DomainError("flow needs at least one step");
  State s{x, Mat3::Identity()};
  if (t1 != t0) advance(path, s, t0, t1, steps);
  return {s.x, s.j};
}

std::vector<FlowMap> integrate_flow(const HamiltonianPath& path, const std::vector<Vec3>& nodes,
                                    const std::vector<double>& times, const FlowOptions& opt) {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1]))
      throw DomainError("flow times must be ascending and non-negative");
  const long n = static_cast<long>(nodes.size());
  std::vector<FlowMap> maps(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    maps[k].t = times[k];
    maps[k].forward.resize(n);
    maps[k].jacobian3.resize(n);
    maps[k].jacobian.resize(n);
  }
#pragma omp parallel for schedule(dynamic, 16) if (opt.exec == Exec::Parallel)
  for (long i = 0; i < n; ++i) {
    State s{nodes[i], Mat3::Identity()};
    double t = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (times[k] > t) advance(path, s, t, times[k], steps_for(times[k] - t, opt.stepsPerUnit));
      t = times[k];
      maps[k].forward[i] = s.x;
      maps[k].jacobian3[i] = s.j;
      maps[k].jacobian[i] = frame_jacobian(nodes[i], s.x, s.j);
    }
  }
  for (const auto& m : maps)
    for (const auto& j : m.jacobian)
      if (!(std::abs(j.determinant() - 1.0) <= opt.detTolerance))
        throw AccuracyError("flow Jacobian determinant drifted; increase the step count");
  return maps;
}

std::vector<FlowMap> integrate_flow(const HamiltonianPath& path, const SphereGrid& grid, int steps,
                                    int substeps, Exec exec) {
  if (steps < 1 || substeps < 1) throw DomainError("steps must be positive");
  std::vector<double> times(steps + 1);
  for (int i = 0; i <= steps; ++i) times[i] = static_cast<double>(i) / steps;
  FlowOptions opt;
  opt.stepsPerUnit = steps * substeps;
  opt.exec = exec;
  return integrate_flow(path, grid.nodes, times, opt);
}

FlowIntegrator::FlowIntegrator(const HamiltonianPath& path, std::vector<Vec3> nodes,
                               int steps_per_unit, Exec exec)
    : path_(path),
      points_(std::move(nodes)),
      jac_(points_.size(), Mat3::Identity()),
      stepsPerUnit_(steps_per_unit),
      exec_(exec) {}

void FlowIntegrator::advance_to(double t) {
  if (t < t_) throw DomainError("flow integrator cannot run backwards");
  if (t == t_) return;
  const int steps = steps_for(t - t_, stepsPerUnit_);
  const long n = static_cast<long>(points_.size());
#pragma omp parallel for schedule(dynamic, 16) if (exec_ == Exec::Parallel)
  for (long i = 0; i < n; ++i) {
    State s{points_[i], jac_[i]};
    advance(path_, s, t_, t, steps);
    points_[i] = s.x;
    jac_[i] = s.j;
  }
  t_ = t;
}

std::vector<std::vector<FlowSample>> inverse_flow(const HamiltonianPath& path,
                                                  const std::vector<Vec3>& nodes,
                                                  const std::vector<double>& times,
                                                  const FlowOptions& opt) {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1]))
      throw DomainError("flow times must be ascending and non-negative");
  const long n = static_cast<long>(nodes.size());
  std::vector<std::vector<FlowSample>> out(times.size(), std::vector<FlowSample>(n));
  const bool incremental = path.autonomous();
#pragma omp parallel for schedule(dynamic, 16) if (opt.exec == Exec::Parallel)
  for (long i = 0; i < n; ++i) {
    if (incremental) {
      // phi_t^-1 = phi_-t for a time-independent Hamiltonian.
      State s{nodes[i], Mat3::Identity()};
      double t = 0.0;
      for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] > t) advance(path, s, -t, -times[k], steps_for(times[k] - t, opt.stepsPerUnit));
        t = times[k];
        out[k][i] = {s.x, s.j};
      }
    } else {
      for (std::size_t k = 0; k < times.size(); ++k) {
        State s{nodes[i], Mat3::Identity()};
        if (times[k] > 0.0) advance(path, s, times[k], 0.0, steps_for(times[k], opt.stepsPerUnit));
        out[k][i] = {s.x, s.j};
      }
    }
  }
  return out;
}

// Complex structure fields ---------------------------------------------------

namespace {

const Mat2& j0() {
  static const Mat2 m = (Mat2() << 0.0, -1.0, 1.0, 0.0).finished();
  return m;
}

}  // namespace

ComplexStructureField ComplexStructureField::round() {
  return ComplexStructureField([](const Vec3& x) { return cross_matrix(x / x.norm()); });
}

ComplexStructureField ComplexStructureField::deformed(double eps) {
  return ComplexStructureField([eps](const Vec3& x) {
    const Vec3 n = x / x.norm();
    const Vec3 a(0.8 + 0.3 * n(1), 0.5 * n(2) - 0.2, 0.4 + 0.2 * n(0) * n(2));
    const Frame f = frame_at(n);
    const Eigen::Vector2d af = f.transpose() * a;
    Mat2 s = af * af.transpose();
    s -= 0.5 * s.trace() * Mat2::Identity();
    s *= eps;
    // exp of a symmetric traceless 2x2 matrix with eigenvalues +-r.
    const double r = std::sqrt(std::max(0.0, -s.determinant()));
    const double ch = std::cosh(r), shr = r > 1e-12 ? std::sinh(r) / r : 1.0;
    const Mat2 a_exp = ch * Mat2::Identity() + shr * s;
    const Mat2 a_inv = ch * Mat2::Identity() - shr * s;
    return Mat3(f * (a_exp * j0() * a_inv) * f.transpose());
  });
}

lincx::LinearComplexStructure ComplexStructureField::at(const Vec3& x) const {
  const Frame f = frame_at(x / x.norm());
  return lincx::LinearComplexStructure(f.transpose() * eval_(x) * f);
}

std::vector<lincx::LinearComplexStructure> ComplexStructureField::sample(
    const std::vector<Vec3>& nodes) const {
  std::vector<lincx::LinearComplexStructure> out;
  out.reserve(nodes.size());
  for (const auto& x : nodes) out.push_back(at(x));
  return out;
}

SampledStructure pushforward(const ComplexStructureField& j, const FlowMap& flow,
                             const std::vector<Vec3>& nodes) {
  if (nodes.size() != flow.forward.size()) throw DomainError("flow does not match the nodes");
  SampledStructure out;
  out.points = flow.forward;
  out.values.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Mat2& m = flow.jacobian[i];
    out.values.emplace_back(m * j.at(nodes[i]).matrix() * m.inverse());
  }
  return out;
}

lincx::LinearComplexStructure transported(const ComplexStructureField& j, const Vec3& x,
                                          const FlowSample& back) {
  const Mat2 b = frame_jacobian(x, back.point, back.jacobian3);
  return lincx::LinearComplexStructure(b.inverse() * j.at(back.point).matrix() * b);
}

ComplexStructureField pushforward(const ComplexStructureField& j, PathPtr path, double t,
                                  int steps_per_unit) {
  if (t == 0.0) return j;
  const int steps = steps_for(t, steps_per_unit);
  return ComplexStructureField([j, path, t, steps](const Vec3& x) {
    const Vec3 n = x / x.norm();
    const FlowSample back = flow_point(*path, n, t, 0.0, steps);
    const Frame f = frame_at(n);
    return Mat3(f * transported(j, n, back).matrix() * f.transpose());
  });
}

std::vector<std::vector<lincx::LinearComplexStructure>> geodesic_sweep(
    const std::vector<lincx::LinearComplexStructure>& j0s,
    const std::vector<lincx::LinearComplexStructure>& j1s, const std::vector<double>& t) {
  if (j0s.size() != j1s.size()) throw DomainError("structure fields differ in size");
  std::vector<std::vector<lincx::LinearComplexStructure>> out(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    out[k].reserve(j0s.size());
    for (std::size_t i = 0; i < j0s.size(); ++i) out[k].push_back(lincx::geodesic(j0s[i], j1s[i], t[k]));
  }
  return out;
}

// Product of paths -----------------------------------------------------------

StarProductPath::StarProductPath(PathPtr f, PathPtr g, int steps_per_unit)
    : f_(std::move(f)), g_(std::move(g)), stepsPerUnit_(steps_per_unit) {}

double StarProductPath::value(double t, const Vec3& x) const {
  const FlowSample back = flow_point(*f_, x, t, 0.0, steps_for(t, stepsPerUnit_));
  return f_->value(t, x) + g_->value(t, back.point);
}

Vec3 StarProductPath::gradient(double t, const Vec3& x) const {
  const FlowSample back = flow_point(*f_, x, t, 0.0, steps_for(t, stepsPerUnit_));
  return f_->gradient(t, x) + back.jacobian3.transpose() * g_->gradient(t, back.point);
}

std::string StarProductPath::describe() const {
  std::ostringstream os;
  os << "(" << f_->describe() << ") * (" << g_->describe() << ")";
  return os.str();
}

std::vector<ScalarField> StarProductPath::sample_many(const SphereGrid& grid,
                                                      const std::vector<double>& times) const {
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0))
    return HamiltonianPath::sample_many(grid, times);
  FlowOptions opt;
  opt.stepsPerUnit = stepsPerUnit_;
  const auto back = inverse_flow(*f_, grid.nodes, times, opt);
  std::vector<ScalarField> out(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    out[k].values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      out[k].values[i] = f_->value(times[k], grid.nodes[i]) + g_->value(times[k], back[k][i].point);
  }
  return out;
}

PathPtr star_product(PathPtr f, PathPtr g, int steps_per_unit) {
  return std::make_shared<StarProductPath>(std::move(f), std::move(g), steps_per_unit);
}

}  // namespace preq
