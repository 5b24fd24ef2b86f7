#include "preq/sphere.hpp"

#include <cmath>

namespace preq {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw DomainError("Gauss-Legendre order must be positive");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int l = 2; l <= n; ++l) {
        const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Ascending order: node i and its mirror n - 1 - i.
    nodes[n - 1 - i] = x;
    nodes[i] = -x;
    weights[i] = weights[n - 1 - i] = w;
  }
}

SphereGrid make_grid(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw DomainError("grid resolution must be positive");
  SphereGrid g;
  g.nTheta = n_theta;
  g.nPhi = n_phi;
  gauss_legendre(n_theta, g.ringX3, g.ringWeight);
  g.nodes.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  g.weights.reserve(g.nodes.capacity());
  for (int r = 0; r < n_theta; ++r) {
    const double z = g.ringX3[r];
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = g.azimuth(j);
      g.nodes.emplace_back(s * std::cos(phi), s * std::sin(phi), z);
      g.weights.push_back(0.5 * g.ringWeight[r] * kTwoPi / n_phi);
    }
  }
  return g;
}

double integrate(const SphereGrid& grid, const ScalarField& f) {
  if (f.values.size() != grid.size()) throw DomainError("field does not match the grid");
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) sum += f.values[i] * grid.weights[i];
  return sum;
}

double integrate(const SphereGrid& grid, const std::function<double(const Vec3&)>& f) {
  return integrate(grid, sample(grid, f));
}

ScalarField normalize(const SphereGrid& grid, const ScalarField& f) {
  const double mean = integrate(grid, f) / kTwoPi;
  ScalarField out = f;
  for (double& v : out.values) v -= mean;
  return out;
}

ScalarField sample(const SphereGrid& grid, const std::function<double(const Vec3&)>& f) {
  ScalarField out;
  out.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] = f(grid.nodes[i]);
  return out;
}

Mat3 HamiltonianPath::hessian(double t, const Vec3& x) const {
  const double h = 1e-5;
  Mat3 out;
  for (int c = 0; c < 3; ++c) {
    Vec3 e = Vec3::Zero();
    e(c) = h;
    out.col(c) = (gradient(t, x + e) - gradient(t, x - e)) / (2.0 * h);
  }
  return 0.5 * (out + out.transpose());
}

double HamiltonianPath::mean(double t) const {
  static const SphereGrid grid = make_grid(32, 64);
  return integrate(grid, [&](const Vec3& x) { return value(t, x); }) / kTwoPi;
}

ScalarField HamiltonianPath::sample(const SphereGrid& grid, double t) const {
  return preq::sample(grid, [&](const Vec3& x) { return value(t, x); });
}

std::vector<ScalarField> HamiltonianPath::sample_many(const SphereGrid& grid,
                                                      const std::vector<double>& times) const {
  std::vector<ScalarField> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(sample(grid, t));
  return out;
}

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

double profile_at(const PolynomialTerm& term, double t) {
  return term.profile ? term.profile(t) : 1.0;
}

// Mean of x1^a x2^b x3^c over the round sphere.
double monomial_mean(int a, int b, int c) {
  if (a % 2 || b % 2 || c % 2) return 0.0;
  const double ga = std::lgamma(0.5 * (a + 1)), gb = std::lgamma(0.5 * (b + 1));
  const double gc = std::lgamma(0.5 * (c + 1)), gs = std::lgamma(0.5 * (a + b + c + 3));
  return 2.0 * std::exp(ga + gb + gc - gs) / (4.0 * kPi);
}

}  // namespace

PolynomialPath::PolynomialPath(std::vector<PolynomialTerm> terms, std::string name, bool autonomous)
    : terms_(std::move(terms)), name_(std::move(name)), autonomous_(autonomous) {
  for (const auto& term : terms_)
    if (term.e1 < 0 || term.e2 < 0 || term.e3 < 0) throw DomainError("negative exponent");
}

double PolynomialPath::value(double t, const Vec3& x) const {
  double v = 0.0;
  for (const auto& m : terms_)
    v += m.coeff * profile_at(m, t) * ipow(x(0), m.e1) * ipow(x(1), m.e2) * ipow(x(2), m.e3);
  return v;
}

Vec3 PolynomialPath::gradient(double t, const Vec3& x) const {
  Vec3 g = Vec3::Zero();
  for (const auto& m : terms_) {
    const double c = m.coeff * profile_at(m, t);
    const int e[3] = {m.e1, m.e2, m.e3};
    for (int d = 0; d < 3; ++d) {
      if (e[d] == 0) continue;
      double term = c * e[d];
      for (int q = 0; q < 3; ++q) term *= ipow(x(q), q == d ? e[q] - 1 : e[q]);
      g(d) += term;
    }
  }
  return g;
}

Mat3 PolynomialPath::hessian(double t, const Vec3& x) const {
  Mat3 h = Mat3::Zero();
  for (const auto& m : terms_) {
    const double c = m.coeff * profile_at(m, t);
    const int e[3] = {m.e1, m.e2, m.e3};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        int f[3] = {e[0], e[1], e[2]};
        double term = c * f[a];
        f[a] -= 1;
        term *= f[b];
        f[b] -= 1;
        if (term == 0.0) continue;
        for (int q = 0; q < 3; ++q) term *= ipow(x(q), f[q]);
        h(a, b) += term;
      }
  }
  return h;
}

bool PolynomialPath::affine() const {
  for (const auto& m : terms_)
    if (m.e1 + m.e2 + m.e3 > 1) return false;
  return true;
}

double PolynomialPath::mean(double t) const {
  double v = 0.0;
  for (const auto& m : terms_) v += m.coeff * profile_at(m, t) * monomial_mean(m.e1, m.e2, m.e3);
  return v;
}

double ReparametrizedPath::value(double t, const Vec3& x) const {
  return 2.0 * t * base_->value(t * t, x);
}

Vec3 ReparametrizedPath::gradient(double t, const Vec3& x) const {
  return 2.0 * t * base_->gradient(t * t, x);
}

Mat3 ReparametrizedPath::hessian(double t, const Vec3& x) const {
  return 2.0 * t * base_->hessian(t * t, x);
}

std::vector<ScalarField> NormalizedPath::sample_many(const SphereGrid& grid,
                                                     const std::vector<double>& times) const {
  auto out = base_->sample_many(grid, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double m = base_->mean(times[i]);
    for (double& v : out[i].values) v -= m;
  }
  return out;
}

void time_rule(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  gauss_legendre(n, nodes, weights);
  for (int i = 0; i < n; ++i) {
    nodes[i] = 0.5 * (nodes[i] + 1.0);
    weights[i] *= 0.5;
  }
}

double calabi(const SphereGrid& grid, const HamiltonianPath& path, int time_nodes) {
  std::vector<double> t, w;
  time_rule(time_nodes, t, w);
  const auto samples = path.sample_many(grid, t);
  double sum = 0.0;
  for (int i = 0; i < time_nodes; ++i) sum += w[i] * integrate(grid, samples[i]);
  return sum;
}

}  // namespace preq
