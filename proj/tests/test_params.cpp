// SPDX-License-Identifier: MIT
//
// Parameter-tuple layer: validation, coefficient reduction, named tuple
// factories, and the derived covariance geometry.

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "test_support.hpp"

using namespace nsqpwd;
using testsup::thrown_kind;
using testsup::tuple_a;
using testsup::tuple_b;

TEST_CASE("validation accepts the reference tuples") {
  REQUIRE_NOTHROW(validate(tuple_a()));
  REQUIRE_NOTHROW(validate(tuple_b()));
}

TEST_CASE("validation rejects an asymmetric coupling matrix") {
  ParamTuple o = tuple_a();
  o.B = {{{2.0, 1.0}, {0.0, 4.0}}};
  auto kind = thrown_kind([&] { validate(o); });
  REQUIRE(kind.has_value());
  REQUIRE(*kind == errc::asymmetric_b);
}

TEST_CASE("validation rejects a singular coupling matrix") {
  ParamTuple o = tuple_a();
  o.B = {{{1.0, 2.0}, {2.0, 4.0}}};
  auto kind = thrown_kind([&] { validate(o); });
  REQUIRE(kind.has_value());
  REQUIRE(*kind == errc::singular_b);
}

TEST_CASE("coefficient reduction of the first reference tuple") {
  PhaseCoeffs pc = derive_coeffs(tuple_a());
  // frequency side from A (symmetrized off-diagonal) and D (column sums)
  REQUIRE(pc.k[0] == 1.0);
  REQUIRE(pc.k[1] == 0.0);
  REQUIRE(pc.k[2] == 1.0);
  REQUIRE(pc.k[3] == 4.0);
  REQUIRE(pc.k[4] == 6.0);
  // time side from C and E; the antisymmetric part of C cancels exactly
  REQUIRE(pc.m[0] == 1.0);
  REQUIRE(pc.m[1] == 0.0);
  REQUIRE(pc.m[2] == 1.0);
  REQUIRE(pc.m[3] == 4.0);
  REQUIRE(pc.m[4] == 6.0);
}

TEST_CASE("coefficient reduction of the second reference tuple") {
  PhaseCoeffs pc = derive_coeffs(tuple_b());
  REQUIRE(pc.k[0] == 1.0);
  REQUIRE(pc.k[1] == 0.0);
  REQUIRE(pc.k[2] == 1.0);
  REQUIRE(pc.k[3] == 4.0);
  REQUIRE(pc.k[4] == 12.0);
  REQUIRE(pc.m[0] == 1.0);
  REQUIRE(pc.m[1] == 0.0);
  REQUIRE(pc.m[2] == 1.0);
  REQUIRE(pc.m[3] == 4.0);
  REQUIRE(pc.m[4] == 12.0);
}

TEST_CASE("phase polynomial obeys the quadratic shift identity") {
  // phi(p + q) = phi(p) + phi(q) + p' Gamma q with Gamma the Hessian
  ChirpVec c;
  c[0] = 0.7;
  c[1] = -1.3;
  c[2] = 0.4;
  c[3] = 2.1;
  c[4] = -0.6;
  Point2 p{0.8, -1.7}, q{-0.35, 2.4};
  double lhs = c.phase(p + q);
  double rhs = c.phase(p) + c.phase(q) + dot(p, c.quad_matrix().apply(q));
  REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("classical tuple is the identity coupling with no chirps") {
  ParamTuple o = make_classical();
  REQUIRE(o.B.m[0][0] == 1.0);
  REQUIRE(o.B.m[0][1] == 0.0);
  REQUIRE(o.B.m[1][1] == 1.0);
  PhaseCoeffs pc = derive_coeffs(o);
  REQUIRE(pc.k.is_zero());
  REQUIRE(pc.m.is_zero());
}

TEST_CASE("gyrator tuple at the quarter turn") {
  ParamTuple o = make_gyrator(M_PI / 4.0);
  REQUIRE(o.B.m[0][1] == Catch::Approx(-std::sqrt(2.0)).epsilon(1e-15));
  REQUIRE(o.B.m[1][0] == Catch::Approx(-std::sqrt(2.0)).epsilon(1e-15));
  REQUIRE(o.B.m[0][0] == 0.0);
  REQUIRE(o.B.m[1][1] == 0.0);
  REQUIRE(o.A.m[0][1] == Catch::Approx(0.5).epsilon(1e-15));
  REQUIRE(o.C.m[0][1] == Catch::Approx(0.5).epsilon(1e-15));
  REQUIRE_NOTHROW(validate(o));
  REQUIRE(o.B.det() == Catch::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("gyrator rejects angles with vanishing sine") {
  auto kind = thrown_kind([] { make_gyrator(0.0); });
  REQUIRE(kind.has_value());
  REQUIRE(*kind == errc::degenerate_angle);
  kind = thrown_kind([] { make_gyrator(M_PI + 1e-12); });
  REQUIRE(kind.has_value());
  REQUIRE(*kind == errc::degenerate_angle);
}

TEST_CASE("fractional tuple with two distinct angles") {
  ParamTuple o = make_fractional(M_PI / 3.0, M_PI / 6.0);
  REQUIRE(o.B.m[0][0] == Catch::Approx(-1.1547005383792517).epsilon(1e-15));
  REQUIRE(o.B.m[1][1] == Catch::Approx(-2.0).epsilon(1e-15));
  REQUIRE(o.B.m[0][1] == 0.0);
  REQUIRE(o.A.m[0][0] == Catch::Approx(0.2886751345948129).epsilon(1e-14));
  REQUIRE(o.A.m[1][1] == Catch::Approx(0.8660254037844386).epsilon(1e-14));
  REQUIRE_NOTHROW(validate(o));

  auto kind = thrown_kind([] { make_fractional(M_PI / 3.0, 0.0); });
  REQUIRE(kind.has_value());
  REQUIRE(*kind == errc::degenerate_angle);
}

TEST_CASE("conjugation partner swaps the two phase sides") {
  ParamTuple o = tuple_b();
  ParamTuple p = conjugation_partner(o);
  PhaseCoeffs a = derive_coeffs(o), b = derive_coeffs(p);
  for (int i = 0; i < 5; ++i) {
    REQUIRE(a.k[i] == b.m[i]);
    REQUIRE(a.m[i] == b.k[i]);
  }
  REQUIRE(p.B.m[0][1] == o.B.m[0][1]);
}

TEST_CASE("shift geometry of the first reference tuple") {
  ShiftGeometry g = shift_geometry(tuple_a());
  // btilde is B over its determinant (det B = 7)
  REQUIRE(g.btilde.m[0][0] == Catch::Approx(2.0 / 7.0).epsilon(1e-15));
  REQUIRE(g.btilde.m[0][1] == Catch::Approx(1.0 / 7.0).epsilon(1e-15));
  REQUIRE(g.btilde.m[1][1] == Catch::Approx(4.0 / 7.0).epsilon(1e-15));
  // the adjugate assembly of btilde inverts B exactly
  Mat2 prod = assemble_inverse(g.btilde) * tuple_a().B;
  REQUIRE(prod.m[0][0] == Catch::Approx(1.0).epsilon(1e-14));
  REQUIRE(prod.m[0][1] == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(prod.m[1][0] == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(prod.m[1][1] == Catch::Approx(1.0).epsilon(1e-14));
  // frequency displacement map P = B^{-1} (Gamma_k + Gamma_m)/2
  REQUIRE(g.P.m[0][0] == Catch::Approx(8.0 / 7.0).epsilon(1e-14));
  REQUIRE(g.P.m[0][1] == Catch::Approx(-2.0 / 7.0).epsilon(1e-14));
  REQUIRE(g.P.m[1][0] == Catch::Approx(-2.0 / 7.0).epsilon(1e-14));
  REQUIRE(g.P.m[1][1] == Catch::Approx(4.0 / 7.0).epsilon(1e-14));
  // with k = m the cross-phase matrix and linear difference vanish
  REQUIRE(g.Q.m[0][0] == 0.0);
  REQUIRE(g.Q.m[0][1] == 0.0);
  REQUIRE(g.Q.m[1][1] == 0.0);
  REQUIRE(g.lambda_vec.x1 == 0.0);
  REQUIRE(g.lambda_vec.x2 == 0.0);
}

TEST_CASE("interval grids use cell midpoints") {
  Grid2D g = grid_from_interval(-8.0, 8.0, 128, -8.0, 8.0, 128);
  REQUIRE(g.step1 == Catch::Approx(0.125).epsilon(1e-15));
  REQUIRE(g.start1 == Catch::Approx(-7.9375).epsilon(1e-15));
  REQUIRE(g.x1(127) == Catch::Approx(7.9375).epsilon(1e-15));
  // symmetric interval: nodes come in exact +/- pairs
  REQUIRE(g.x1(0) == Catch::Approx(-g.x1(127)).epsilon(1e-15));
  REQUIRE(g.idx(3, 5) == 3 * 128 + 5);
}

TEST_CASE("centered-node grids contain the origin and close under differences") {
  Grid2D g = grid_centered_nodes(16, 0.25, 16, 0.25);
  bool has_origin = false;
  for (std::int64_t i = 0; i < g.n1; ++i)
    if (g.x1(i) == 0.0) has_origin = true;
  REQUIRE(has_origin);
  REQUIRE(g.x1(0) == Catch::Approx(-2.0).epsilon(1e-15));
  REQUIRE(g.x1(15) == Catch::Approx(1.75).epsilon(1e-15));
}

TEST_CASE("grid validation flags empty or degenerate grids") {
  Grid2D g;
  auto kind = thrown_kind([&] { validate_grid(g); });
  REQUIRE(kind.has_value());
  REQUIRE(*kind == errc::empty_grid);
  kind = thrown_kind([] { grid_from_interval(1.0, 1.0, 4, 0.0, 1.0, 4); });
  REQUIRE(kind.has_value());
  REQUIRE(*kind == errc::empty_grid);
}

TEST_CASE("field energy and inner product agree on a shared grid") {
  Grid2D g = grid_from_interval(-2.0, 2.0, 16, -2.0, 2.0, 16);
  ComplexField f = make_field(g, [](double a, double b) {
    return cplx(a * b, a - b);
  });
  REQUIRE(field_energy(f) == Catch::Approx(field_inner(f, f).real()).epsilon(1e-13));
  ComplexField h = make_field(g, [](double a, double b) {
    return cplx(std::cos(a), std::sin(b));
  });
  cplx ip = field_inner(f, h);
  cplx pi = field_inner(h, f);
  REQUIRE(ip.real() == Catch::Approx(pi.real()).epsilon(1e-13));
  REQUIRE(ip.imag() == Catch::Approx(-pi.imag()).epsilon(1e-13));
}
