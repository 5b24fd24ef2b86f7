#include "preq/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <Eigen/Eigenvalues>

#include "preq/flow.hpp"

namespace preq {

namespace {

constexpr int kChunk = 32;  // steps whose generators are assembled together

// exp(-i M) for Hermitian M, with the step-size guard ||M|| < 0.5.
CMatrix exp_minus_i(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
  const Eigen::VectorXd& lam = es.eigenvalues();
  if (lam.cwiseAbs().maxCoeff() >= 0.5)
    throw StepSizeError("time step too large: k dt ||G|| >= 0.5");
  Eigen::VectorXcd phase(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) phase(i) = std::polar(1.0, -lam(i));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

PropagationResult run(int k, int dim, const GeneratorBatch& generators, bool constant, int steps,
                      const PropagationOptions& opt) {
  const double dt = 1.0 / steps;
  const double kd = static_cast<double>(k);
  PropagationResult res;
  res.steps = steps;
  res.times.reserve(steps + 1);
  res.phaseHistory.reserve(steps + 1);
  res.times.push_back(0.0);
  res.phaseHistory.push_back(0.0);
  CMatrix u = CMatrix::Identity(dim, dim);
  if (opt.keepSamples) res.samples.emplace_back(u);

  double trace_integral = 0.0;
  auto record = [&](int n, const CMatrix& factor, double trace_dt) {
    u = factor * u;
    trace_integral += trace_dt;
    res.times.push_back((n + 1) * dt);
    res.phaseHistory.push_back(-kd * trace_integral);
    if (opt.keepSamples) res.samples.emplace_back(u, 1e-8);
  };

  if (constant) {
    const CMatrix g = generators({0.5}).front();
    const CMatrix factor = exp_minus_i(kd * dt * g);
    const double tr = g.trace().real() * dt;
    for (int n = 0; n < steps; ++n) record(n, factor, tr);
  } else {
    for (int start = 0; start < steps; start += kChunk) {
      const int stop = std::min(steps, start + kChunk);
      const auto g = generators(stepper_times(steps, opt.stepper, start, stop));
      for (int n = start; n < stop; ++n) {
        const int i = n - start;
        if (opt.stepper == Stepper::Midpoint) {
          record(n, exp_minus_i(kd * dt * g[i]), g[i].trace().real() * dt);
        } else {
          const CMatrix& g1 = g[2 * i];
          const CMatrix& g2 = g[2 * i + 1];
          const CMatrix comm = g2 * g1 - g1 * g2;
          const CMatrix m = 0.5 * kd * dt * (g1 + g2) -
                            cplx(0.0, std::sqrt(3.0) / 12.0 * kd * kd * dt * dt) * comm;
          record(n, exp_minus_i(m), 0.5 * dt * (g1 + g2).trace().real());
        }
      }
    }
  }
  res.generatorTraceIntegral = trace_integral;
  res.endpoint = unimetric::UnitaryWithPhase(unimetric::Unitary(u, 1e-8), -kd * trace_integral);
  return res;
}

double sup_bound(const SphereGrid& grid, const HamiltonianPath& path, bool with_gradient) {
  double bound = 0.0;
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0})
    for (const auto& x : grid.nodes) {
      double b = std::abs(path.value(t, x));
      if (with_gradient) b += 2.0 * path.gradient(t, x).norm();
      bound = std::max(bound, b);
    }
  return bound;
}

}  // namespace

std::vector<double> stepper_times(int steps, Stepper stepper, int start, int stop) {
  const double dt = 1.0 / steps;
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0, c2 = 0.5 + std::sqrt(3.0) / 6.0;
  std::vector<double> times;
  for (int n = start; n < stop; ++n) {
    if (stepper == Stepper::Midpoint) {
      times.push_back((n + 0.5) * dt);
    } else {
      times.push_back((n + c1) * dt);
      times.push_back((n + c2) * dt);
    }
  }
  return times;
}

PropagationResult propagate(int k, int dim, const GeneratorBatch& generators, bool constant,
                            double norm_bound, const PropagationOptions& opt) {
  if (k < 1 || dim < 1) throw DomainError("k and the dimension must be positive");
  if (opt.steps > 0) return run(k, dim, generators, constant, opt.steps, opt);
  int steps = std::max(16, static_cast<int>(std::ceil(2.2 * k * norm_bound)) + 1);
  for (int attempt = 0;; ++attempt) {
    try {
      return run(k, dim, generators, constant, steps, opt);
    } catch (const StepSizeError&) {
      if (attempt >= 5) throw;
      steps *= 2;
    }
  }
}

PropagationResult propagate_toeplitz(const QuantumSpace& space, const HamiltonianPath& path,
                                     const PropagationOptions& opt) {
  GeneratorBatch gen = [&](const std::vector<double>& times) {
    const auto samples = path.sample_many(space.grid, times);
    std::vector<CMatrix> out;
    out.reserve(times.size());
    for (const auto& f : samples) out.push_back(toeplitz(space, f, opt.exec).hermitian_part());
    return out;
  };
  return propagate(space.k, space.dimension(), gen, path.autonomous(),
                   sup_bound(space.grid, path, false), opt);
}

PropagationResult propagate_ks(const QuantumSpace& space, const HamiltonianPath& path,
                               const PropagationOptions& opt) {
  GeneratorBatch gen = [&](const std::vector<double>& times) {
    std::vector<CMatrix> out;
    out.reserve(times.size());
    for (double t : times)
      out.push_back(kostant_souriau(space, symbol(space.grid, path, t), opt.exec).hermitian_part());
    return out;
  };
  return propagate(space.k, space.dimension(), gen, path.autonomous(),
                   sup_bound(space.grid, path, true), opt);
}

PropagationResult xi_path(const QuantumSpace& space, const HamiltonianPath& path,
                          const PropagationOptions& opt) {
  // Y = xi^-1 solves Y' = (k / i)(-G_t) Y with G_t = Pi K(H_t o phi_t) Pi. The
  // flow is restarted whenever a retry with more steps begins at t = 0.
  std::unique_ptr<FlowIntegrator> flow;
  GeneratorBatch gen = [&](const std::vector<double>& times) {
    if (!flow || flow->time() > times.front())
      flow = std::make_unique<FlowIntegrator>(path, space.grid.nodes, opt.flowStepsPerUnit, opt.exec);
    std::vector<CMatrix> out;
    out.reserve(times.size());
    SymbolField f;
    f.values.resize(space.grid.size());
    f.gradients.resize(space.grid.size());
    for (double t : times) {
      flow->advance_to(t);
      const auto& y = flow->points();
      const auto& jac = flow->jacobians();
      for (std::size_t i = 0; i < y.size(); ++i) {
        f.values[i] = path.value(t, y[i]);
        f.gradients[i] = jac[i].transpose() * path.gradient(t, y[i]);
      }
      out.push_back(-kostant_souriau(space, f, opt.exec).hermitian_part());
    }
    return out;
  };
  PropagationResult inv = propagate(space.k, space.dimension(), gen, false,
                                    sup_bound(space.grid, path, true), opt);
  PropagationResult res;
  res.steps = inv.steps;
  res.times = inv.times;
  res.phaseHistory = inv.phaseHistory;
  for (double& p : res.phaseHistory) p = -p;
  res.generatorTraceIntegral = -inv.generatorTraceIntegral;
  res.endpoint = inv.endpoint.inverse();
  for (const auto& s : inv.samples) res.samples.emplace_back(s.matrix().adjoint());
  return res;
}

double holomorphy_defect(const HamiltonianPath& path, const SphereGrid& grid, int time_samples) {
  std::vector<double> times(time_samples);
  for (int i = 0; i < time_samples; ++i) times[i] = (i + 1.0) / time_samples;
  FlowOptions fo;
  fo.exec = Exec::Serial;
  const auto maps = integrate_flow(path, grid.nodes, times, fo);
  const auto round = ComplexStructureField::round();
  double defect = 0.0;
  for (const auto& m : maps) {
    const auto pushed = pushforward(round, m, grid.nodes);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Mat2 diff = pushed.values[i].matrix() - round.at(pushed.points[i]).matrix();
      defect = std::max(defect, diff.cwiseAbs().maxCoeff());
    }
  }
  return defect;
}

PropagationResult pushforward_unitary(const QuantumSpace& space, PathPtr path,
                                      const PropagationOptions& opt) {
  if (!path->affine())
    throw PreconditionError("flow of '" + path->describe() + "' does not preserve the round structure");
  static const SphereGrid probe = make_grid(8, 16);
  if (holomorphy_defect(*path, probe) > 1e-6)
    throw PreconditionError("push-forward of the round structure moved by more than 1e-6");
  return propagate_ks(space, *path, opt);
}

}  // namespace preq
