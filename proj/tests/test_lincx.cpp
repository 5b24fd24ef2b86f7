#include <doctest.h>

#include <cmath>

#include "preq/chebyshev.hpp"
#include "preq/lincx.hpp"

using namespace preq;
using namespace preq::lincx;

namespace {

// Hyperbolic distance in the upper half-plane.
double hyp_dist(cplx p, cplx q) {
  return std::acosh(1.0 + std::norm(p - q) / (2.0 * p.imag() * q.imag()));
}

// Area of a geodesic triangle from its side lengths (hyperbolic law of cosines).
double hyp_triangle_area(cplx p, cplx q, cplx r) {
  const double a = hyp_dist(q, r), b = hyp_dist(p, r), c = hyp_dist(p, q);
  auto angle = [](double opp, double s1, double s2) {
    return std::acos((std::cosh(s1) * std::cosh(s2) - std::cosh(opp)) / (std::sinh(s1) * std::sinh(s2)));
  };
  return kPi - angle(a, b, c) - angle(b, a, c) - angle(c, a, b);
}

SiegelLoop polygon(std::initializer_list<cplx> pts) {
  SiegelLoop loop;
  for (cplx p : pts) loop.samples.push_back(LinearComplexStructure::from_upper_half_plane(p));
  loop.samples.push_back(loop.samples.front());
  return loop;
}

}  // namespace

TEST_CASE("structures square to minus one and round-trip through the half-plane") {
  for (cplx tau : {cplx(0, 1), cplx(0.3, 2.5), cplx(-4, 0.01), cplx(12, 7)}) {
    const auto j = LinearComplexStructure::from_upper_half_plane(tau);
    CHECK((j.matrix() * j.matrix() + Mat2::Identity()).norm() < 1e-12);
    CHECK(std::abs(j.upper_half_plane() - tau) < 1e-12 * (1 + std::abs(tau)));
    const double x = tau.real(), y = tau.imag();
    Mat2 g;
    g << 1.0 / y, x / y, x / y, (x * x + y * y) / y;
    CHECK((j.metric() - g).norm() < 1e-10 * (1 + g.norm()));
  }
  CHECK(LinearComplexStructure::standard().upper_half_plane() == cplx(0, 1));
}

TEST_CASE("invalid structures are rejected") {
  Mat2 notj;
  notj << 1, 0, 0, 1;
  CHECK_THROWS_AS(LinearComplexStructure{notj}, DomainError);
  CHECK_THROWS_AS(LinearComplexStructure{-LinearComplexStructure::standard().matrix()}, DomainError);
  CHECK_THROWS_AS(LinearComplexStructure::from_upper_half_plane({0.0, -1.0}), DomainError);
}

TEST_CASE("tangent vectors") {
  const auto j = LinearComplexStructure::standard();
  Mat2 a;
  a << 1, 0, 0, -1;
  Mat2 b;
  b << 0, 1, 1, 0;
  CHECK_NOTHROW(SiegelTangent(a, j));
  Mat2 bad;
  bad << 1, 0, 0, 1;
  CHECK_THROWS_AS(SiegelTangent(bad, j), DomainError);
  // sigma is antisymmetric and the metric is symmetric positive.
  const SiegelTangent ta(a, j), tb(b, j);
  CHECK(sigma_form(ta, tb) == doctest::Approx(-sigma_form(tb, ta)));
  CHECK(tangent_metric(ta, ta) > 0.0);
  CHECK(tangent_metric(ta, tb) == doctest::Approx(tangent_metric(tb, ta)));
}

TEST_CASE("sigma is half the hyperbolic area form") {
  // d j / dx = diag(-1, 1) and d j / dy = [[0, -1], [-1, 0]] at tau = i, so
  // tr(J0 a b) / 4 = 1 / 2.
  CHECK(sigma_area_constant() == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("geodesics") {
  const auto j0 = LinearComplexStructure::from_upper_half_plane({0.2, 0.7});
  const auto j1 = LinearComplexStructure::from_upper_half_plane({-1.5, 3.0});
  CHECK((geodesic(j0, j1, 0.0).matrix() - j0.matrix()).norm() < 1e-12);
  CHECK((geodesic(j0, j1, 1.0).matrix() - j1.matrix()).norm() < 1e-10);
  const double total = hyp_dist(j0.upper_half_plane(), j1.upper_half_plane());
  for (double t : {0.1, 0.35, 0.5, 0.9}) {
    const auto jt = geodesic(j0, j1, t);
    // constant speed
    CHECK(hyp_dist(j0.upper_half_plane(), jt.upper_half_plane()) == doctest::Approx(t * total).epsilon(1e-9));
    // symmetric
    CHECK((jt.matrix() - geodesic(j1, j0, 1.0 - t).matrix()).norm() < 1e-10);
    // stays compatible
    CHECK((jt.matrix() * jt.matrix() + Mat2::Identity()).norm() < 1e-12);
  }
  CHECK((geodesic(j0, j0, 0.4).matrix() - j0.matrix()).norm() < 1e-12);
}

TEST_CASE("geodesic triangle areas match the angle defect") {
  const cplx p(0, 1), q(0, 2), r(1, 1);
  const double area = hyp_triangle_area(p, q, r);
  // i -> 2i -> 1 + i runs clockwise.
  CHECK(loop_area(polygon({p, q, r})) == doctest::Approx(-0.5 * area).epsilon(1e-12));
  CHECK(loop_area(polygon({p, r, q})) == doctest::Approx(0.5 * area).epsilon(1e-12));
  SiegelLoop rev = polygon({p, r, q});
  rev.reversed = true;
  CHECK(loop_area(rev) == doctest::Approx(-0.5 * area).epsilon(1e-12));

  // Orientation follows the cyclic order of the vertices.
  const cplx s(-2, 0.5), t(3, 4);
  const double orient = (t - s).real() * (p - s).imag() - (t - s).imag() * (p - s).real();
  CHECK(loop_area(polygon({s, t, p})) ==
        doctest::Approx(0.5 * hyp_triangle_area(s, t, p) * (orient > 0 ? 1 : -1)).epsilon(1e-12));
}

TEST_CASE("loop areas are additive") {
  const cplx a(-1, 1), b(1, 0.5), c(2, 3), d(-0.5, 4);
  const double quad = loop_area(polygon({a, b, c, d}));
  CHECK(quad == doctest::Approx(loop_area(polygon({a, b, c})) + loop_area(polygon({a, c, d}))).epsilon(1e-12));
  // Degenerate loops enclose nothing.
  CHECK(std::abs(loop_area(polygon({a, b, a}))) < 1e-14);
  CHECK(std::abs(loop_area(polygon({a}))) < 1e-14);
  SiegelLoop open = polygon({a, b});
  open.samples.pop_back();
  CHECK_THROWS_AS(loop_area(open), DomainError);
}

TEST_CASE("geodesic primitive edge cases") {
  CHECK(geodesic_primitive({0.3, 1.0}, {0.3, 1.0}) == 0.0);
  CHECK(std::abs(geodesic_primitive({0.3, 1.0}, {0.3, 5.0})) < 1e-15);  // vertical line: dx = 0
  // Nearly vertical geodesic: huge centre, still finite and small.
  CHECK(std::abs(geodesic_primitive({0.3, 1.0}, {0.3 + 1e-9, 5.0})) < 1e-8);
}

TEST_CASE("smooth arc primitive integrates dx / y") {
  const int n = 24;
  const auto t = cheb::lobatto_nodes(n);
  std::vector<LinearComplexStructure> line, curve;
  for (double s : t) {
    line.push_back(LinearComplexStructure::from_upper_half_plane({s, 2.0}));
    curve.push_back(LinearComplexStructure::from_upper_half_plane({s, 1.0 + s * s}));
  }
  CHECK(smooth_arc_primitive(line) == doctest::Approx(0.5 * 0.5).epsilon(1e-12));
  CHECK(smooth_arc_primitive(curve) == doctest::Approx(0.5 * kPi / 4.0).epsilon(1e-10));
}

TEST_CASE("closing a smooth arc by a geodesic gives the enclosed area") {
  // Horocycle y = 1 from -1 to 1, closed by the geodesic back; compared with a
  // fine polygon along the same horocycle.
  const int n = 32;
  const auto t = cheb::lobatto_nodes(n);
  std::vector<LinearComplexStructure> arc;
  for (double s : t) arc.push_back(LinearComplexStructure::from_upper_half_plane({2 * s - 1, 1.0}));
  const double smooth = smooth_arc_primitive(arc) + 0.5 * geodesic_primitive(arc.back().upper_half_plane(),
                                                                             arc.front().upper_half_plane());
  SiegelLoop poly;
  for (int i = 0; i <= 4000; ++i)
    poly.samples.push_back(LinearComplexStructure::from_upper_half_plane({-1.0 + 2.0 * i / 4000, 1.0}));
  poly.samples.push_back(poly.samples.front());
  CHECK(smooth == doctest::Approx(loop_area(poly)).epsilon(1e-6));
}
