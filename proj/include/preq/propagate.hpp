#pragma once

// Schroedinger propagation U' = (k / i) G_t U in H_k with the lifted
// determinant tracked alongside.

#include <functional>
#include <optional>
#include <vector>

#include "preq/quantize.hpp"
#include "preq/unimetric.hpp"

namespace preq {

enum class Stepper {
  Midpoint,  // exp of the midpoint generator
  Magnus4,   // two Gauss nodes plus the commutator term
};

struct PropagationOptions {
  int steps = 0;  // 0 picks a count from a bound on the generator norm
  Stepper stepper = Stepper::Magnus4;
  Exec exec = Exec::Parallel;
  bool keepSamples = false;  // store U at every step boundary
  int flowStepsPerUnit = 512;
};

struct PropagationResult {
  unimetric::UnitaryWithPhase endpoint = unimetric::UnitaryWithPhase::identity(1);
  std::vector<double> times;
  std::vector<double> phaseHistory;
  double generatorTraceIntegral = 0.0;  // int_0^1 tr G_t dt, same quadrature as the stepper
  int steps = 0;
  std::vector<unimetric::Unitary> samples;
};

/// Times at which the stepper evaluates the generator for steps [start, stop)
/// of a uniform grid with `steps` steps on [0, 1].
std::vector<double> stepper_times(int steps, Stepper stepper, int start, int stop);

/// Generic driver: `generators(times)` returns the Hermitian generator at each
/// requested time. Time-independent generators (`constant`) are exponentiated
/// once.
using GeneratorBatch = std::function<std::vector<CMatrix>(const std::vector<double>&)>;
PropagationResult propagate(int k, int dim, const GeneratorBatch& generators, bool constant,
                            double norm_bound, const PropagationOptions& opt);

/// Phi_k: generator T_k(H_t).
PropagationResult propagate_toeplitz(const QuantumSpace& space, const HamiltonianPath& path,
                                     const PropagationOptions& opt = {});

/// Generator Pi K_k(H_t) Pi.
PropagationResult propagate_ks(const QuantumSpace& space, const HamiltonianPath& path,
                               const PropagationOptions& opt = {});

/// Integrates (i / k) d/dt xi_t^-1 = -Pi K_k(H_t o phi_t) Pi xi_t^-1 and returns
/// the lift of xi_1. The flow phi_t is integrated alongside on the grid.
PropagationResult xi_path(const QuantumSpace& space, const HamiltonianPath& path,
                          const PropagationOptions& opt = {});

/// Psi_k for flows preserving the round structure: the Kostant-Souriau
/// propagation. Throws PreconditionError otherwise.
PropagationResult pushforward_unitary(const QuantumSpace& space, PathPtr path,
                                      const PropagationOptions& opt = {});

/// Largest deviation of (phi_t)_* j_round from j_round over the grid nodes
/// at a few times.
double holomorphy_defect(const HamiltonianPath& path, const SphereGrid& grid, int time_samples = 5);

}  // namespace preq
