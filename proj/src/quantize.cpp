#include "preq/quantize.hpp"

#include <cmath>

namespace preq {

SphereGrid quantum_grid(int k, int band) {
  if (k < 1) throw DomainError("k must be positive");
  return make_grid(k / 2 + band, k + 2 * band);
}

double closed_form_norm(int k, int m) {
  return kTwoPi * std::exp(std::lgamma(m + 1.0) + std::lgamma(k - m + 1.0) - std::lgamma(k + 2.0));
}

QuantumSpace build_space(int k, const SphereGrid& grid) {
  if (k < 1) throw DomainError("k must be positive");
  QuantumSpace s;
  s.k = k;
  s.grid = grid;
  const int nr = grid.nTheta;
  Eigen::MatrixXd amp(nr, k + 1);
  for (int r = 0; r < nr; ++r) {
    const double u = 0.5 * (1.0 - grid.ringX3[r]);
    const double lu = std::log(u), lv = std::log1p(-u);
    for (int m = 0; m <= k; ++m) amp(r, m) = std::exp(0.5 * (m * lu + (k - m) * lv));
  }
  // int mu = (1/2) int dphi dx3, so a ring carries pi times its Gauss weight.
  s.basisNorms.assign(k + 1, 0.0);
  for (int m = 0; m <= k; ++m) {
    double n = 0.0;
    for (int r = 0; r < nr; ++r) n += kPi * grid.ringWeight[r] * amp(r, m) * amp(r, m);
    s.basisNorms[m] = n;
    const double exact = closed_form_norm(k, m);
    if (!(std::abs(n - exact) <= 1e-10 * exact))
      throw AccuracyError("grid too coarse for the sections of degree " + std::to_string(k));
    amp.col(m) /= std::sqrt(n);
  }
  s.amplitude = std::move(amp);
  return s;
}

QuantumSpace build_space(int k) { return build_space(k, quantum_grid(k)); }

SymbolField symbol(const SphereGrid& grid, const HamiltonianPath& path, double t) {
  SymbolField f;
  f.values.resize(grid.size());
  f.gradients.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f.values[i] = path.value(t, grid.nodes[i]);
    f.gradients[i] = path.gradient(t, grid.nodes[i]);
  }
  return f;
}

namespace {

// F(r, d + dmax) = (2 pi / nPhi) sum_j v(r, j) exp(i d phi_j), |d| <= dmax.
CMatrix ring_dft(const SphereGrid& g, const std::vector<cplx>& v, int dmax, Exec exec) {
  const int nr = g.nTheta, np = g.nPhi;
  CMatrix out(nr, 2 * dmax + 1);
  std::vector<cplx> twiddle(np);
  for (int j = 0; j < np; ++j) twiddle[j] = std::polar(1.0, g.azimuth(j));
  const double dphi = kTwoPi / np;
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (int r = 0; r < nr; ++r) {
    std::vector<cplx> up(v.begin() + static_cast<long>(r) * np, v.begin() + static_cast<long>(r + 1) * np);
    std::vector<cplx> down = up;
    for (int d = 0; d <= dmax; ++d) {
      cplx su = 0.0, sd = 0.0;
      for (int j = 0; j < np; ++j) {
        su += up[j];
        sd += down[j];
        up[j] *= twiddle[j];
        down[j] *= std::conj(twiddle[j]);
      }
      out(r, dmax + d) = su * dphi;
      out(r, dmax - d) = sd * dphi;
    }
  }
  return out;
}

// M(n, m) = sum_r (w_r / 2) a_m(r) a_n(r) [A(r, m - n) + m B(r, m - n)].
CMatrix assemble(const QuantumSpace& s, const CMatrix& a, const CMatrix* b, Exec exec) {
  const int k = s.k, nr = s.grid.nTheta;
  CMatrix m(k + 1, k + 1);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (int col = 0; col <= k; ++col) {
    for (int row = 0; row <= k; ++row) {
      const int d = col - row + k;
      cplx sum = 0.0;
      for (int r = 0; r < nr; ++r) {
        cplx fr = a(r, d);
        if (b) fr += static_cast<double>(col) * (*b)(r, d);
        sum += 0.5 * s.grid.ringWeight[r] * s.amplitude(r, col) * s.amplitude(r, row) * fr;
      }
      m(row, col) = sum;
    }
  }
  return m;
}

}  // namespace

QuantumOperator toeplitz(const QuantumSpace& space, const std::vector<double>& f, Exec exec) {
  if (f.size() != space.grid.size()) throw DomainError("symbol does not match the grid");
  const std::vector<cplx> v(f.begin(), f.end());
  const CMatrix a = ring_dft(space.grid, v, space.k, exec);
  return {assemble(space, a, nullptr, exec), OperatorKind::Toeplitz, space.k};
}

QuantumOperator toeplitz(const QuantumSpace& space, const ScalarField& f, Exec exec) {
  return toeplitz(space, f.values, exec);
}

QuantumOperator kostant_souriau(const QuantumSpace& space, const SymbolField& f, Exec exec) {
  const auto& g = space.grid;
  if (f.values.size() != g.size() || f.gradients.size() != g.size())
    throw DomainError("symbol does not match the grid");
  // K(f) s_m = (alpha + m beta) s_m in the north chart; alpha, beta come from
  // the Chern connection of h = (1 + |z|^2)^-k and X = 2 x cross grad f.
  const double k = space.k;
  std::vector<cplx> alpha(g.size()), beta(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3& x = g.nodes[i];
    const Vec3 xv = 2.0 * x.cross(f.gradients[i]);
    const double rho2 = x(0) * x(0) + x(1) * x(1);
    const double dphi = (x(0) * xv(1) - x(1) * xv(0)) / rho2;
    const double x3dot = xv(2);
    alpha[i] = cplx(f.values[i] - 0.5 * (1.0 - x(2)) * dphi, -x3dot / (2.0 * (1.0 + x(2))));
    beta[i] = cplx(dphi, x3dot / rho2) / k;
  }
  const CMatrix a = ring_dft(g, alpha, space.k, exec);
  const CMatrix b = ring_dft(g, beta, space.k, exec);
  return {assemble(space, a, &b, exec), OperatorKind::KostantSouriau, space.k};
}

double lambda_prime(double integral_rho, double volume) { return 0.5 * integral_rho / volume; }

double riemann_roch_dimension(int k, double integral_rho, double volume) {
  return k * volume / kTwoPi + integral_rho / (4.0 * kPi);
}

double trace_expansion_check(const QuantumSpace& space, const SymbolField& f,
                             const ScalarField& curvature) {
  const auto& g = space.grid;
  const double k = space.k;
  const double tr = kostant_souriau(space, f).matrix.trace().real();
  const ScalarField fs{f.values};
  const double intf = integrate(g, fs);
  const ScalarField fbar = normalize(g, fs);
  double intfs = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) intfs += fbar.values[i] * curvature.values[i] * g.weights[i];
  const double lp = lambda_prime();
  return tr - (k / kTwoPi) * ((1.0 + lp / k) * intf + intfs / (2.0 * k));
}

}  // namespace preq
