// SPDX-License-Identifier: MIT
//
// Forward/inverse transform: quadrature definition, linearity, agreement
// with direct summation, classical reduction, and round-trip convergence.

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace nsqpwd;
using testsup::thrown_kind;
using testsup::tuple_a;
using testsup::unit_gaussian;

namespace {

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.values.size(); ++n)
    m = std::max(m, std::abs(a.values[n] - b.values[n]));
  return m;
}

}  // namespace

TEST_CASE("forward of the zero field is zero") {
  Grid2D xg = grid_from_interval(-2.0, 2.0, 8, -2.0, 2.0, 8);
  Grid2D wg = grid_from_interval(-3.0, 3.0, 6, -3.0, 3.0, 6);
  ComplexField f;
  f.grid = xg;
  f.values.assign(64, cplx(0.0, 0.0));
  ComplexField F = forward(f, tuple_a(), wg);
  for (const cplx& v : F.values) REQUIRE(v == cplx(0.0, 0.0));
}

TEST_CASE("forward of a single sample is the weighted kernel") {
  Grid2D xg = grid_from_interval(-2.0, 2.0, 8, -2.0, 2.0, 8);
  Grid2D wg = grid_from_interval(-3.0, 3.0, 6, -3.0, 3.0, 6);
  ComplexField f;
  f.grid = xg;
  f.values.assign(64, cplx(0.0, 0.0));
  const std::int64_t i0 = 5, j0 = 2;
  const cplx v(0.8, -1.1);
  f.values[static_cast<std::size_t>(xg.idx(i0, j0))] = v;
  ComplexField F = forward(f, tuple_a(), wg);
  KernelView kv = make_kernel_view(tuple_a());
  double cell = xg.step1 * xg.step2;
  Point2 xj = xg.node(i0, j0);
  for (std::int64_t a = 0; a < wg.n1; ++a)
    for (std::int64_t b = 0; b < wg.n2; ++b) {
      cplx want = v * cell * kernel_eval(kv, xj, wg.node(a, b));
      REQUIRE(std::abs(F.at(a, b) - want) <= 1e-14);
    }
}

TEST_CASE("forward and inverse are linear in the field") {
  Grid2D xg = grid_from_interval(-3.0, 3.0, 12, -3.0, 3.0, 12);
  Grid2D wg = grid_from_interval(-4.0, 4.0, 10, -4.0, 4.0, 10);
  ComplexField f = make_field(xg, [](double a, double b) {
    return cplx(std::exp(-0.4 * (a * a + b * b)), 0.1 * a - 0.2 * b);
  });
  ComplexField g = make_field(xg, [](double a, double b) {
    return cplx(std::sin(a + 0.3), std::cos(b - 0.7)) * std::exp(-0.3 * (a * a + b * b));
  });
  const cplx alpha(2.0, 3.0), beta(-0.5, 1.25);
  ComplexField s;
  s.grid = xg;
  s.values.resize(f.values.size());
  for (std::size_t n = 0; n < s.values.size(); ++n)
    s.values[n] = alpha * f.values[n] + beta * g.values[n];

  ComplexField Fs = forward(s, tuple_a(), wg);
  ComplexField Ff = forward(f, tuple_a(), wg);
  ComplexField Fg = forward(g, tuple_a(), wg);
  for (std::size_t n = 0; n < Fs.values.size(); ++n)
    REQUIRE(std::abs(Fs.values[n] - (alpha * Ff.values[n] + beta * Fg.values[n])) <= 1e-12);

  ComplexField If = inverse(Ff, tuple_a(), xg);
  ComplexField Is = inverse(Fs, tuple_a(), xg);
  ComplexField Ig = inverse(Fg, tuple_a(), xg);
  for (std::size_t n = 0; n < Is.values.size(); ++n)
    REQUIRE(std::abs(Is.values[n] - (alpha * If.values[n] + beta * Ig.values[n])) <= 1e-12);
}

TEST_CASE("forward matches direct kernel summation on the Gaussian") {
  const std::int64_t n = 128;
  Grid2D xg = grid_from_interval(-8.0, 8.0, n, -8.0, 8.0, n);
  Grid2D wg = grid_from_interval(-12.0, 12.0, n, -12.0, 12.0, n);
  ComplexField f = unit_gaussian(8.0, n);
  ComplexField F = forward(f, tuple_a(), wg);

  KernelView kv = make_kernel_view(tuple_a());
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> pick(0, n - 1);
  double cell = xg.step1 * xg.step2;
  for (int t = 0; t < 60; ++t) {
    std::int64_t a = pick(rng), b = pick(rng);
    Point2 w = wg.node(a, b);
    cplx acc(0.0, 0.0);
    for (std::int64_t i = 0; i < n; ++i)
      for (std::int64_t j = 0; j < n; ++j)
        acc += f.at(i, j) * kernel_eval(kv, xg.node(i, j), w);
    REQUIRE(std::abs(acc * cell - F.at(a, b)) <= 1e-10);
  }

  // near-unitary output norm, pinned against an independent summation run
  double nF = 0.0;
  for (const cplx& v : F.values) nF += std::norm(v);
  nF = std::sqrt(nF * wg.step1 * wg.step2);
  REQUIRE(nF == Catch::Approx(1.003800421131509).margin(1e-9));
}

TEST_CASE("classical tuple reduces the transform to a plain Fourier sum") {
  Grid2D xg = grid_from_interval(-4.0, 4.0, 24, -4.0, 4.0, 24);
  Grid2D wg = grid_from_interval(-3.0, 3.0, 9, -3.0, 3.0, 9);
  ComplexField f = make_field(xg, [](double a, double b) {
    return cplx(std::exp(-0.5 * (a * a + b * b)), 0.2 * a * b);
  });
  ComplexField F = forward(f, make_classical(), wg);
  const cplx scale(0.0, 1.0 / (2.0 * M_PI));
  double cell = xg.step1 * xg.step2;
  for (std::int64_t a = 0; a < wg.n1; ++a)
    for (std::int64_t b = 0; b < wg.n2; ++b) {
      Point2 w = wg.node(a, b);
      cplx acc(0.0, 0.0);
      for (std::int64_t i = 0; i < xg.n1; ++i)
        for (std::int64_t j = 0; j < xg.n2; ++j) {
          Point2 t = xg.node(i, j);
          acc += f.at(i, j) * std::polar(1.0, dot(t, w));
        }
      REQUIRE(std::abs(F.at(a, b) - scale * acc * cell) <= 1e-12);
    }
}

TEST_CASE("round trip recovers the Gaussian on converged grids") {
  const std::int64_t n = 192;
  Grid2D xg = grid_from_interval(-8.0, 8.0, n, -8.0, 8.0, n);
  Grid2D wg = grid_from_interval(-12.0, 12.0, n, -12.0, 12.0, n);
  ComplexField f = unit_gaussian(8.0, n);
  ComplexField r = inverse(forward(f, tuple_a(), wg), tuple_a(), xg);
  REQUIRE(max_abs_diff(r, f) < 1e-3);
  // measured headroom: the converged error is at the 1e-9 level
  REQUIRE(max_abs_diff(r, f) < 1e-8);
}

TEST_CASE("round-trip error falls at least quadratically under refinement") {
  Grid2D wg = grid_from_interval(-12.0, 12.0, 192, -12.0, 12.0, 192);
  double err[3];
  int k = 0;
  for (std::int64_t n : {48, 96, 192}) {
    Grid2D xg = grid_from_interval(-8.0, 8.0, n, -8.0, 8.0, n);
    ComplexField f = unit_gaussian(8.0, n);
    ComplexField r = inverse(forward(f, tuple_a(), wg), tuple_a(), xg);
    // compare against the analytic signal at the refined grid's own nodes
    double m = 0.0;
    for (std::int64_t i = 0; i < n; ++i)
      for (std::int64_t j = 0; j < n; ++j) {
        Point2 t = xg.node(i, j);
        m = std::max(m, std::abs(r.at(i, j) - f.analytic(t.x1, t.x2)));
      }
    err[k++] = m;
  }
  REQUIRE(err[1] * 4.0 <= err[0]);
  REQUIRE(err[2] * 4.0 <= err[1]);
}

TEST_CASE("transform rejects an invalid tuple or empty grid") {
  Grid2D xg = grid_from_interval(-1.0, 1.0, 4, -1.0, 1.0, 4);
  ComplexField f;
  f.grid = xg;
  f.values.assign(16, cplx(1.0, 0.0));
  ParamTuple bad = tuple_a();
  bad.B = {{{1.0, 2.0}, {2.0, 4.0}}};
  auto kind = thrown_kind([&] { forward(f, bad, xg); });
  REQUIRE(kind.has_value());
  REQUIRE(*kind == errc::singular_b);
  Grid2D none;
  kind = thrown_kind([&] { forward(f, tuple_a(), none); });
  REQUIRE(kind.has_value());
  REQUIRE(*kind == errc::empty_grid);
}
