#pragma once

// Linear complex structures of the symplectic plane (R^2, w0), w0(X,Y) = X1 Y2 - X2 Y1.
//
// The space of w0-compatible structures is a copy of the hyperbolic plane. We
// identify j with the point tau = x + iy of the upper half-plane through its
// induced metric g = w0(., j .), which reads (1/y) [[1, x], [x, x^2 + y^2]].

#include <span>
#include <vector>

#include "preq/common.hpp"

namespace preq::lincx {

/// A 2x2 real matrix with j^2 = -Id that is compatible with w0.
///
/// The constructor accepts inputs that are compatible up to `tol` and
/// re-normalises them so that j^2 = -Id holds to rounding.
class LinearComplexStructure {
 public:
  explicit LinearComplexStructure(const Mat2& j, double tol = 1e-8);

  static LinearComplexStructure standard();
  static LinearComplexStructure from_upper_half_plane(cplx tau);

  const Mat2& matrix() const { return j_; }
  cplx upper_half_plane() const;
  /// Gram matrix of g = w0(., j .).
  Mat2 metric() const;

 private:
  Mat2 j_;
};

/// Tangent vector a at a base point j: ja + aj = 0 and
/// w0(a., j.) + w0(j., a.) = 0.
class SiegelTangent {
 public:
  SiegelTangent(const Mat2& a, const LinearComplexStructure& base, double tol = 1e-8);

  const Mat2& matrix() const { return a_; }
  const LinearComplexStructure& base() const { return base_; }

 private:
  Mat2 a_;
  LinearComplexStructure base_;
};

/// Closed polygon of structures; consecutive samples are joined by geodesics.
struct SiegelLoop {
  std::vector<LinearComplexStructure> samples;  // last sample repeats the first
  bool reversed = false;
};

/// sigma_j(a, b) = tr(j a b) / 4.
double sigma_form(const SiegelTangent& a, const SiegelTangent& b);

/// Riemannian metric sigma_j(a, j b) associated with sigma and a -> ja.
double tangent_metric(const SiegelTangent& a, const SiegelTangent& b);

/// Point at parameter t of the geodesic from j0 to j1, j_t = j0 (-j0 j1)^t.
LinearComplexStructure geodesic(const LinearComplexStructure& j0, const LinearComplexStructure& j1,
                                double t);

/// Ratio between sigma and the hyperbolic area form dx ^ dy / y^2. Evaluated
/// once from sigma_form at the standard structure and cached.
double sigma_area_constant();

/// Line integral of dx / y along the hyperbolic geodesic from p to q.
double geodesic_primitive(cplx p, cplx q);

/// Integral of sigma over any disc bounded by the loop.
double loop_area(const SiegelLoop& loop);

/// Integral of the primitive c_sigma dx / y along a smooth arc sampled at the
/// Chebyshev-Lobatto nodes of [0, 1] (see chebyshev.hpp). The arc is not
/// closed; callers close it with `geodesic_primitive`.
double smooth_arc_primitive(std::span<const LinearComplexStructure> chebyshev_samples);

}  // namespace preq::lincx
