#include "preq/lincx.hpp"

#include <cmath>

#include "preq/chebyshev.hpp"

namespace preq::lincx {

namespace {

const Mat2& omega0() {
  static const Mat2 w = (Mat2() << 0.0, 1.0, -1.0, 0.0).finished();
  return w;
}

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

LinearComplexStructure::LinearComplexStructure(const Mat2& j, double tol) {
  if (!j.allFinite()) throw DomainError("complex structure has non-finite entries");
  if (max_abs(j * j + Mat2::Identity()) > tol)
    throw DomainError("matrix does not square to -Id");
  // A traceless 2x2 matrix with determinant 1 squares to -Id exactly. Every
  // such matrix preserves w0, so compatibility reduces to positivity of the
  // metric w0(X, jX), i.e. j(1, 0) > 0.
  Mat2 m = j - 0.5 * j.trace() * Mat2::Identity();
  const double det = m.determinant();
  if (!(det > 0.0)) throw DomainError("complex structure has non-positive determinant");
  m /= std::sqrt(det);
  if (!(m(1, 0) > 0.0)) throw DomainError("complex structure is not compatible with w0");
  j_ = m;
}

LinearComplexStructure LinearComplexStructure::standard() {
  return LinearComplexStructure((Mat2() << 0.0, -1.0, 1.0, 0.0).finished());
}

LinearComplexStructure LinearComplexStructure::from_upper_half_plane(cplx tau) {
  const double x = tau.real(), y = tau.imag();
  if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
    throw DomainError("point is not in the upper half-plane");
  Mat2 j;
  j << -x / y, -(x * x + y * y) / y, 1.0 / y, x / y;
  return LinearComplexStructure(j);
}

cplx LinearComplexStructure::upper_half_plane() const {
  // g = w0 j has g11 = j21 and g12 = -j11.
  const double c = j_(1, 0);
  return {-j_(0, 0) / c, 1.0 / c};
}

Mat2 LinearComplexStructure::metric() const { return omega0() * j_; }

SiegelTangent::SiegelTangent(const Mat2& a, const LinearComplexStructure& base, double tol)
    : a_(a), base_(base) {
  const Mat2& j = base.matrix();
  const double scale = 1.0 + max_abs(a);
  if (!a.allFinite()) throw DomainError("tangent has non-finite entries");
  if (max_abs(j * a + a * j) > tol * scale) throw DomainError("tangent does not anticommute with j");
  if (max_abs(a.transpose() * omega0() * j + j.transpose() * omega0() * a) > tol * scale)
    throw DomainError("tangent is not w0-compatible");
}

namespace {

void require_same_base(const SiegelTangent& a, const SiegelTangent& b) {
  if (max_abs(a.base().matrix() - b.base().matrix()) > 1e-10)
    throw DomainError("tangent vectors live at different base points");
}

}  // namespace

double sigma_form(const SiegelTangent& a, const SiegelTangent& b) {
  require_same_base(a, b);
  return 0.25 * (a.base().matrix() * a.matrix() * b.matrix()).trace();
}

double tangent_metric(const SiegelTangent& a, const SiegelTangent& b) {
  require_same_base(a, b);
  const Mat2& j = a.base().matrix();
  return 0.25 * (j * a.matrix() * j * b.matrix()).trace();
}

LinearComplexStructure geodesic(const LinearComplexStructure& j0, const LinearComplexStructure& j1,
                                double t) {
  // A = -j0 j1 has det 1 and trace >= 2. Write A = cosh(s) Id + sinh(s) N with
  // N^2 = Id, then A^t = cosh(ts) Id + sinh(ts) N.
  const Mat2 a = -j0.matrix() * j1.matrix();
  const double c = std::max(1.0, 0.5 * a.trace());
  const Mat2 offset = a - c * Mat2::Identity();
  const double sh = std::sqrt(std::max(0.0, -offset.determinant()));
  const double s = std::asinh(sh);
  double ratio;  // sinh(ts) / sinh(s)
  if (s < 1e-6)
    ratio = t * (1.0 + (t * t - 1.0) * s * s / 6.0);
  else
    ratio = std::sinh(t * s) / sh;
  const Mat2 at = std::cosh(t * s) * Mat2::Identity() + ratio * offset;
  return LinearComplexStructure(j0.matrix() * at);
}

double sigma_area_constant() {
  static const double value = [] {
    // Tangents d j / dx and d j / dy at tau = i, by fourth-order central differences.
    auto jm = [](double x, double y) {
      return LinearComplexStructure::from_upper_half_plane({x, y}).matrix();
    };
    const double h = 1e-3;
    const Mat2 ax = (8.0 * (jm(h, 1) - jm(-h, 1)) - (jm(2 * h, 1) - jm(-2 * h, 1))) / (12.0 * h);
    const Mat2 ay =
        (8.0 * (jm(0, 1 + h) - jm(0, 1 - h)) - (jm(0, 1 + 2 * h) - jm(0, 1 - 2 * h))) / (12.0 * h);
    const auto base = LinearComplexStructure::standard();
    return sigma_form(SiegelTangent(ax, base, 1e-6), SiegelTangent(ay, base, 1e-6));
  }();
  return value;
}

double geodesic_primitive(cplx p, cplx q) {
  // Along the circle centred at the real point c the integral of dx / y is
  // minus the change in the polar angle around c. For huge |c| (nearly
  // vertical geodesics) use the equivalent ratio with s = 1 / c.
  const double num = std::norm(q) - std::norm(p);
  const double den = 2.0 * (q.real() - p.real());
  double dalpha;
  if (num == 0.0 && den == 0.0) {
    dalpha = 0.0;  // same point, or mirror points with no arc between them
  } else if (std::abs(num) <= std::abs(den)) {
    const double c = num / den;
    dalpha = std::arg((q - c) * std::conj(p - c));
  } else {
    const double s = den / num;
    dalpha = std::arg((q * s - 1.0) * std::conj(p * s - 1.0));
  }
  return -dalpha;
}

double loop_area(const SiegelLoop& loop) {
  const auto& v = loop.samples;
  if (v.empty()) return 0.0;
  if (max_abs(v.front().matrix() - v.back().matrix()) > 1e-10)
    throw DomainError("loop is not closed");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    sum += geodesic_primitive(v[i].upper_half_plane(), v[i + 1].upper_half_plane());
  const double area = sigma_area_constant() * sum;
  return loop.reversed ? -area : area;
}

double smooth_arc_primitive(std::span<const LinearComplexStructure> samples) {
  const int n = static_cast<int>(samples.size()) - 1;
  if (n < 1) return 0.0;
  Eigen::VectorXd x(n + 1), y(n + 1);
  for (int i = 0; i <= n; ++i) {
    const cplx tau = samples[i].upper_half_plane();
    x(i) = tau.real();
    y(i) = tau.imag();
  }
  const Eigen::VectorXd dx = cheb::differentiation_matrix(n) * x;
  const auto w = cheb::clenshaw_curtis_weights(n);
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) sum += w[i] * dx(i) / y(i);
  return sigma_area_constant() * sum;
}

}  // namespace preq::lincx
