// SPDX-License-Identifier: MIT
//
// Kernel layer: amplitude branch, chirp factors, and agreement of the
// factorized evaluation with the literal matrix-form phase.

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace nsqpwd;
using testsup::thrown_kind;
using testsup::tuple_a;
using testsup::tuple_b;

namespace {

/// Literal kernel: Lambda * exp{i(w'Aw + w'Bx + x'Cx + 1'Dw + 1'Ex)}.
cplx literal_kernel(const ParamTuple& o, Point2 x, Point2 w) {
  double phase = dot(w, o.A.apply(w)) + dot(w, o.B.apply(x)) + dot(x, o.C.apply(x)) +
                 dot({1.0, 1.0}, o.D.apply(w)) + dot({1.0, 1.0}, o.E.apply(x));
  return kernel_prefactor(o.B) * std::polar(1.0, phase);
}

}  // namespace

TEST_CASE("kernel amplitude for a positive determinant is purely imaginary") {
  cplx v = kernel_eval(tuple_a(), {0.0, 0.0}, {0.0, 0.0});
  // at the origin every phase term vanishes, leaving i sqrt(7) / (2 pi)
  REQUIRE(v.real() == Catch::Approx(0.0).margin(1e-16));
  REQUIRE(v.imag() == Catch::Approx(0.4210843993477924).epsilon(1e-15));
}

TEST_CASE("kernel amplitude principal branch for a negative determinant") {
  Mat2 b{{{0.0, -1.0}, {-1.0, 0.0}}};  // det = -1
  cplx lam = kernel_prefactor(b);
  REQUIRE(lam.real() == Catch::Approx(-0.15915494309189535).epsilon(1e-15));
  REQUIRE(lam.imag() == Catch::Approx(0.0).margin(1e-16));
}

TEST_CASE("chirp factor is a unit-modulus phase") {
  ChirpVec c;
  c[3] = 5.0;  // phi(p) = 5 p1
  cplx v = chirp_eval(c, {1.0, 0.0});
  REQUIRE(v.real() == Catch::Approx(0.283662185463226).epsilon(1e-14));
  REQUIRE(v.imag() == Catch::Approx(-0.9589242746631385).epsilon(1e-14));
  REQUIRE(std::abs(chirp_eval(c, {-3.7, 12.9})) == Catch::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("factorized kernel equals the literal matrix-form kernel") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const ParamTuple& o : {tuple_a(), tuple_b(), make_gyrator(1.1)}) {
    KernelView kv = make_kernel_view(o);
    for (int t = 0; t < 50; ++t) {
      Point2 x{u(rng), u(rng)}, w{u(rng), u(rng)};
      cplx a = kernel_eval(kv, x, w);
      cplx b = literal_kernel(o, x, w);
      REQUIRE(std::abs(a - b) <= 1e-12 * std::abs(b));
    }
  }
}

TEST_CASE("tuple overload matches the prebuilt view") {
  Point2 x{0.3, -1.2}, w{2.0, 0.7};
  cplx a = kernel_eval(tuple_b(), x, w);
  cplx b = kernel_eval(make_kernel_view(tuple_b()), x, w);
  REQUIRE(a == b);
}

TEST_CASE("kernel view construction validates the tuple") {
  ParamTuple o = tuple_a();
  o.B = {{{1.0, 2.0}, {2.0, 4.0}}};
  auto kind = thrown_kind([&] { make_kernel_view(o); });
  REQUIRE(kind.has_value());
  REQUIRE(*kind == errc::singular_b);
}

TEST_CASE("kernel modulus is constant over phase space") {
  KernelView kv = make_kernel_view(tuple_a());
  double ref = std::abs(kv.prefactor);
  REQUIRE(ref == Catch::Approx(std::sqrt(7.0) / (2.0 * M_PI)).epsilon(1e-15));
  for (Point2 x : {Point2{0.0, 0.0}, Point2{1.5, -2.5}, Point2{-4.0, 4.0}})
    for (Point2 w : {Point2{0.25, 0.5}, Point2{-3.0, 1.0}})
      REQUIRE(std::abs(kernel_eval(kv, x, w)) == Catch::Approx(ref).epsilon(1e-14));
}
