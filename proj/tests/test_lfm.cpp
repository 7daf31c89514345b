// Chirp-signal model: evaluation, synthesis, closed-form predictions,
// peak detection, and the noise generator.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <limits>

#include <nsqpwd/nsqpwd.hpp>

#include "test_support.hpp"

using Catch::Approx;
using namespace nsqpwd;
using testsup::bi_spec;
using testsup::mono_spec;
using testsup::thrown_kind;
using testsup::tri_spec;
using testsup::tuple_a;

TEST_CASE("component sums evaluate to the frozen origin values") {
  // At the origin every phase vanishes, so the value is the kappa sum.
  CHECK(lfm_eval(bi_spec(), 0.0, 0.0) == cplx(5.0, 0.0));
  CHECK(lfm_eval(tri_spec(), 0.0, 0.0) == cplx(17.0, 0.0));

  SignalSpec one{10.0, {LfmComponent{{2.0, 0.0}, 0.3, 0.2, 0.1, 0.5}}};
  double x1 = 1.25, x2 = -0.75;
  cplx want = 2.0 * std::polar(1.0, 0.3 * x1 + 0.2 * x1 * x1 + 0.1 * x2 + 0.5 * x2 * x2);
  CHECK(std::abs(lfm_eval(one, x1, x2) - want) < 1e-15);
}

TEST_CASE("synthesis clips to the support square and keeps the smooth generator") {
  SignalSpec spec = mono_spec(4.0);
  Grid2D g = grid_from_interval(-4.0, 4.0, 32, -4.0, 4.0, 32);
  ComplexField f = synthesize(spec, g);

  // Inside the square the samples match the unclipped sum.
  Point2 in = g.node(16, 16);
  CHECK(std::abs(f.at(16, 16) - lfm_eval(spec, in.x1, in.x2)) < 1e-15);

  // Outside they are exactly zero, while the attached generator is not.
  Point2 out = g.node(0, 0);
  REQUIRE(std::abs(out.x1) > 0.5 * spec.T);
  CHECK(f.at(0, 0) == cplx(0.0, 0.0));
  CHECK(std::abs(f.analytic(out.x1, out.x2)) == Approx(1.0).margin(1e-12));

  // A grid that does not cover the support is rejected.
  Grid2D small = grid_from_interval(-1.0, 1.0, 8, -1.0, 1.0, 8);
  CHECK(thrown_kind([&] { synthesize(spec, small); }) == errc::grid_too_small);
  SignalSpec bad = spec;
  bad.T = 0.0;
  CHECK(thrown_kind([&] { synthesize(bad, g); }) == errc::grid_too_small);
}

TEST_CASE("auto-term closed form peaks at the predicted frequency") {
  SignalSpec spec = mono_spec(40.0);
  const LfmComponent& c = spec.components[0];
  ParamTuple omega = tuple_a();

  Point2 x{0.40, 0.10};
  Point2 ws = predicted_peak(c, omega, x);
  CHECK(ws.x1 == Approx(-2.0914285714285716).margin(1e-9));
  CHECK(ws.x2 == Approx(-1.0771428571428572).margin(1e-9));

  // Peak height |kappa|^2 T^2 |det B| / (2 pi)^2.
  double top = 1600.0 * 7.0 / (4.0 * M_PI * M_PI);
  CHECK(top == Approx(283.699).epsilon(1e-5));
  CHECK(predict_mono(c, omega, spec.T, x, ws) == Approx(top).epsilon(1e-12));

  // First sinc null: shift w so that the first residual picks up 2 pi / T.
  Point2 dw = omega.B.inverse().apply({2.0 * M_PI / spec.T, 0.0});
  Point2 wnull{ws.x1 + dw.x1, ws.x2 + dw.x2};
  CHECK(std::abs(predict_mono(c, omega, spec.T, x, wnull)) < 1e-10);

  // The other two fixture time points.
  Point2 wb = predicted_peak(c, omega, {0.60, 0.30});
  CHECK(wb.x1 == Approx(-2.28).margin(1e-9));
  CHECK(wb.x2 == Approx(-1.18).margin(1e-9));
  Point2 wc = predicted_peak(c, omega, {0.40, 0.50});
  CHECK(wc.x1 == Approx(-1.92).margin(1e-9));
  CHECK(wc.x2 == Approx(-1.42).margin(1e-9));
}

TEST_CASE("multicomponent closed form is consistent and guards its domain") {
  ParamTuple omega = tuple_a();
  SignalSpec spec = bi_spec(40.0);
  Point2 x{0.60, 0.10};

  // One component reduces to the auto term.
  SignalSpec solo{spec.T, {spec.components[0]}};
  Point2 w = predicted_peak(spec.components[0], omega, x);
  cplx v1 = predict_multi(solo, omega, x, w);
  CHECK(v1.imag() == Approx(0.0).margin(1e-12));
  CHECK(v1.real() ==
        Approx(predict_mono(spec.components[0], omega, spec.T, x, w)).epsilon(1e-12));

  // Ordered cross terms come in conjugate pairs, so the full sum stays real.
  cplx full = predict_multi(spec, omega, x, w);
  CHECK(std::abs(full.imag()) < 1e-9 * std::max(1.0, std::abs(full)));

  // Unequal chirp rates break the shared-lag cancellation and are rejected.
  SignalSpec skew = spec;
  skew.components[1].beta = 0.06;
  CHECK(thrown_kind([&] { predict_multi(skew, omega, x, w); }) ==
        errc::chirp_rate_mismatch);

  // The closed forms require matching kernel phase coefficients.
  ParamTuple mixed = omega;
  mixed.C = Mat2{{{0.5, -13.0 / 14.0}, {13.0 / 14.0, 0.5}}};
  CHECK(thrown_kind([&] { predict_mono(spec.components[0], mixed, spec.T, x, w); }) ==
        errc::coeff_mismatch);
}

TEST_CASE("peak detection ranks local maxima and flags empty input") {
  WignerSlice s;
  s.x = {0.0, 0.0};
  s.wgrid = grid_from_interval(-1.0, 1.0, 8, -1.0, 1.0, 8);
  s.values.assign(64, cplx(0.0, 0.0));
  s.values[static_cast<std::size_t>(s.wgrid.idx(2, 3))] = cplx(0.0, -5.0);
  s.values[static_cast<std::size_t>(s.wgrid.idx(2, 4))] = cplx(4.0, 0.0);  // shoulder
  s.values[static_cast<std::size_t>(s.wgrid.idx(6, 6))] = cplx(3.0, 0.0);

  std::vector<Peak> peaks = detect_peaks(s, 2);
  REQUIRE(peaks.size() == 2);
  CHECK(peaks[0].i1 == 2);
  CHECK(peaks[0].i2 == 3);
  CHECK(peaks[0].magnitude == Approx(5.0));
  CHECK(peaks[0].w.x1 == Approx(s.wgrid.x1(2)));
  CHECK(peaks[0].w.x2 == Approx(s.wgrid.x2(3)));
  CHECK(peaks[1].i1 == 6);
  CHECK(peaks[1].i2 == 6);
  CHECK(peaks[1].magnitude == Approx(3.0));

  // Equal magnitudes fall back to row-major order.
  WignerSlice t = s;
  t.values.assign(64, cplx(0.0, 0.0));
  t.values[static_cast<std::size_t>(t.wgrid.idx(5, 5))] = cplx(4.0, 0.0);
  t.values[static_cast<std::size_t>(t.wgrid.idx(1, 1))] = cplx(0.0, 4.0);
  std::vector<Peak> tie = detect_peaks(t, 2);
  REQUIRE(tie.size() == 2);
  CHECK(tie[0].i1 == 1);
  CHECK(tie[1].i1 == 5);

  WignerSlice empty;
  CHECK(thrown_kind([&] { detect_peaks(empty, 3); }) == errc::empty_slice);
  CHECK(thrown_kind([&] { detect_peaks(s, 0); }) == errc::empty_slice);
}

TEST_CASE("noise injection is seeded, calibrated, and honest about smoothness") {
  ComplexField f = testsup::unit_gaussian(6.0, 64);

  ComplexField g1 = add_awgn(f, 10.0, 77);
  ComplexField g2 = add_awgn(f, 10.0, 77);
  ComplexField g3 = add_awgn(f, 10.0, 78);
  REQUIRE(g1.values.size() == f.values.size());
  CHECK(g1.values == g2.values);  // bit-identical for a repeated seed
  CHECK(g1.values != g3.values);

  // Measured SNR of the injected noise sits near the request.
  double ps = 0.0, pn = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    ps += std::norm(f.values[i]);
    pn += std::norm(g1.values[i] - f.values[i]);
  }
  double snr_db = 10.0 * std::log10(ps / pn);
  CHECK(snr_db == Approx(10.0).margin(0.5));

  // The noisy field no longer follows the smooth generator.
  CHECK(f.analytic);
  CHECK_FALSE(g1.analytic);
  ComplexField same = add_awgn(f, std::numeric_limits<double>::infinity(), 5);
  CHECK(same.values == f.values);
  CHECK(static_cast<bool>(same.analytic));

  ComplexField zero;
  zero.grid = f.grid;
  zero.values.assign(f.values.size(), cplx(0.0, 0.0));
  CHECK(thrown_kind([&] { add_awgn(zero, 10.0, 1); }) == errc::zero_signal);
}
