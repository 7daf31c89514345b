// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "kernel.hpp"
#include "phased_sum.hpp"

namespace nsqpwd {

/// How the lag integral of the distribution is discretized.
///
/// * support_clipped: the lag set is every +/- pair of stored samples around
///   the evaluation center; f outside its grid is treated as zero.  Works for
///   any tabulated field, including noisy data.
/// * fixed_range: lags run over a closed square [-T/2, T/2]^2 on a midpoint
///   lattice, and the signal is read from its analytic generator — the
///   convention the closed-form chirp predictions are derived under.
struct EvalMode {
  enum class Kind { support_clipped, fixed_range };
  Kind kind = Kind::support_clipped;
  double range = 0.0;         ///< full side length T of the lag square
  std::int64_t samples = 512; ///< lag samples per axis (fixed_range)

  static EvalMode clipped() { return EvalMode{}; }
  static EvalMode fixed(double T, std::int64_t samples = 512) {
    EvalMode m;
    m.kind = Kind::fixed_range;
    m.range = T;
    m.samples = samples;
    return m;
  }
};

namespace detail {

/// Tabulated lag cross-correlation
///   h(xi) = f(x + xi/2) C_m(x + xi/2) conj(g(x - xi/2) C_k(x - xi/2))
/// stored in a PhasedSum2D keyed by the lag coordinates, plus the quadrature
/// cell area.
struct CrossTable {
  PhasedSum2D engine;
  double weight = 0.0;
};

/// Nearest integer with an absolute/relative alignment check; `what` names
/// the quantity in the error message.
inline std::int64_t aligned_index(double q, const char* what) {
  double qr = std::nearbyint(q);
  if (std::abs(q - qr) > 1e-9 * std::max(1.0, std::abs(q)))
    raise(errc::off_grid_center, std::string(what) + " must sit on the half-step lattice");
  return static_cast<std::int64_t>(qr);
}

inline CrossTable build_cross_table(const ComplexField& f, const ComplexField& g,
                                    const PhaseCoeffs& pc, Point2 x, const EvalMode& mode) {
  CrossTable tab;
  if (mode.kind == EvalMode::Kind::support_clipped) {
    validate_grid(f.grid);
    if (!f.grid.same_as(g.grid))
      raise(errc::grid_mismatch, "cross-correlation needs both fields on one grid");
    const Grid2D& gr = f.grid;
    // The center must lie on the half-step lattice so that +/- lag pairs hit
    // stored nodes exactly.
    std::int64_t q1 = aligned_index(2.0 * (x.x1 - gr.start1) / gr.step1, "center coordinate 1");
    std::int64_t q2 = aligned_index(2.0 * (x.x2 - gr.start2) / gr.step2, "center coordinate 2");
    std::int64_t lo1 = std::max<std::int64_t>(0, q1 - (gr.n1 - 1));
    std::int64_t hi1 = std::min<std::int64_t>(gr.n1 - 1, q1);
    std::int64_t lo2 = std::max<std::int64_t>(0, q2 - (gr.n2 - 1));
    std::int64_t hi2 = std::min<std::int64_t>(gr.n2 - 1, q2);
    if (lo1 > hi1 || lo2 > hi2) return tab;  // center outside support: empty sum
    std::int64_t c1 = hi1 - lo1 + 1, c2 = hi2 - lo2 + 1;
    tab.engine.resize(c1, c2);
    for (std::int64_t a = 0; a < c1; ++a)
      tab.engine.t1[static_cast<std::size_t>(a)] =
          static_cast<double>(2 * (lo1 + a) - q1) * gr.step1;
    for (std::int64_t b = 0; b < c2; ++b)
      tab.engine.t2[static_cast<std::size_t>(b)] =
          static_cast<double>(2 * (lo2 + b) - q2) * gr.step2;
    for (std::int64_t a = 0; a < c1; ++a) {
      std::int64_t j1 = lo1 + a, p1 = q1 - j1;
      double tp1 = gr.x1(j1), tm1 = gr.x1(p1);
      for (std::int64_t b = 0; b < c2; ++b) {
        std::int64_t j2 = lo2 + b, p2 = q2 - j2;
        double tp2 = gr.x2(j2), tm2 = gr.x2(p2);
        double phase = pc.m.phase({tp1, tp2}) - pc.k.phase({tm1, tm2});
        cplx v = f.at(j1, j2) * std::conj(g.at(p1, p2)) * std::polar(1.0, phase);
        std::size_t n = static_cast<std::size_t>(a * c2 + b);
        tab.engine.vr[n] = v.real();
        tab.engine.vi[n] = v.imag();
      }
    }
    tab.weight = 4.0 * gr.step1 * gr.step2;  // lag cell area: lag step = 2 * grid step
    return tab;
  }

  // fixed_range
  if (!f.analytic || !g.analytic)
    raise(errc::analytic_extension_unavailable,
          "fixed-range evaluation needs closed-form signal generators");
  if (!(mode.range > 0.0) || mode.samples <= 0)
    raise(errc::empty_grid, "fixed-range mode needs a positive range and sample count");
  std::int64_t M = mode.samples;
  double dxi = mode.range / static_cast<double>(M);
  tab.engine.resize(M, M);
  for (std::int64_t a = 0; a < M; ++a) {
    double xi = -0.5 * mode.range + (static_cast<double>(a) + 0.5) * dxi;
    tab.engine.t1[static_cast<std::size_t>(a)] = xi;
    tab.engine.t2[static_cast<std::size_t>(a)] = xi;
  }
  for (std::int64_t a = 0; a < M; ++a) {
    double xi1 = tab.engine.t1[static_cast<std::size_t>(a)];
    double xp1 = x.x1 + 0.5 * xi1, xm1 = x.x1 - 0.5 * xi1;
    for (std::int64_t b = 0; b < M; ++b) {
      double xi2 = tab.engine.t2[static_cast<std::size_t>(b)];
      double xp2 = x.x2 + 0.5 * xi2, xm2 = x.x2 - 0.5 * xi2;
      double phase = pc.m.phase({xp1, xp2}) - pc.k.phase({xm1, xm2});
      cplx v = f.analytic(xp1, xp2) * std::conj(g.analytic(xm1, xm2)) *
               std::polar(1.0, phase);
      std::size_t n = static_cast<std::size_t>(a * M + b);
      tab.engine.vr[n] = v.real();
      tab.engine.vi[n] = v.imag();
    }
  }
  tab.weight = dxi * dxi;
  return tab;
}

/// One prepared evaluation center: kernel data plus the lag table.  eval(w)
/// is cheap, so a slice reuses one of these across its whole frequency grid.
struct WdEvaluator {
  KernelView kv;
  ChirpVec km;  // k - m: frequency chirp of the distribution
  CrossTable table;
  double pref = 0.0;  // |det B| / (2 pi)^2

  cplx eval(Point2 w) {
    Point2 u = kv.B.apply(w);
    cplx s = table.engine.sum(u.x1, u.x2);
    return pref * chirp_eval(km, w) * s * table.weight;
  }
};

inline WdEvaluator make_wd_evaluator(const ComplexField& f, const ComplexField& g,
                                     const ParamTuple& omega, Point2 x,
                                     const EvalMode& mode) {
  WdEvaluator ev;
  ev.kv = make_kernel_view(omega);
  ev.km = ev.kv.coeffs.k - ev.kv.coeffs.m;
  ev.table = build_cross_table(f, g, ev.kv.coeffs, x, mode);
  double twopi_sq = 4.0 * M_PI * M_PI;
  ev.pref = std::abs(ev.kv.B.det()) / twopi_sq;
  return ev;
}

}  // namespace detail

/// Distribution value at one (time, frequency) point:
///   W(x, w) = |det B|/(2 pi)^2 * C_{k-m}(w)
///             * sum_xi f_m(x + xi/2) conj(f_k(x - xi/2)) e^{i w'B xi} * dxi^2
/// where f_m = f * C_m and f_k = f * C_k.
inline cplx wd_point(const ComplexField& f, const ParamTuple& omega, Point2 x, Point2 w,
                     const EvalMode& mode = EvalMode::clipped()) {
  detail::WdEvaluator ev = detail::make_wd_evaluator(f, f, omega, x, mode);
  return ev.eval(w);
}

/// Cross version: f on the advanced lag, g on the retarded lag.
inline cplx cross_wd(const ComplexField& f, const ComplexField& g, const ParamTuple& omega,
                     Point2 x, Point2 w, const EvalMode& mode = EvalMode::clipped()) {
  detail::WdEvaluator ev = detail::make_wd_evaluator(f, g, omega, x, mode);
  return ev.eval(w);
}

/// Frequency slice at a fixed time point: the lag table is built once and
/// swept over the frequency grid.
struct WignerSlice {
  Point2 x;
  Grid2D wgrid;
  std::vector<cplx> values;  ///< row-major over wgrid
};

inline WignerSlice wd_slice(const ComplexField& f, const ParamTuple& omega, Point2 x,
                            const Grid2D& wgrid, const EvalMode& mode = EvalMode::clipped()) {
  validate_grid(wgrid);
  detail::WdEvaluator ev = detail::make_wd_evaluator(f, f, omega, x, mode);
  WignerSlice s;
  s.x = x;
  s.wgrid = wgrid;
  s.values.resize(static_cast<std::size_t>(wgrid.size()));
  for (std::int64_t i = 0; i < wgrid.n1; ++i)
    for (std::int64_t j = 0; j < wgrid.n2; ++j)
      s.values[static_cast<std::size_t>(wgrid.idx(i, j))] = ev.eval(wgrid.node(i, j));
  return s;
}

/// Textbook cross-correlation form with no chirps and unit prefactor:
///   sum_xi f(x + xi/2) conj(f(x - xi/2)) e^{-i w'xi} * dxi^2.
/// With the tuple from make_classical(), (2 pi)^2 * wd_point(f, ., x, w)
/// equals classical_wd(f, x, -w) exactly on the same lattice.
inline cplx classical_wd(const ComplexField& f, Point2 x, Point2 w,
                         const EvalMode& mode = EvalMode::clipped()) {
  PhaseCoeffs none;
  detail::CrossTable tab = detail::build_cross_table(f, f, none, x, mode);
  return tab.engine.sum(-w.x1, -w.x2) * tab.weight;
}

/// Time marginal: sum of W(x, w) * dx^2 over the sampling grid of f.  In the
/// continuum this factorizes into the product of the forward transform under
/// omega and the conjugated transform under the swapped partner tuple; on a
/// lattice the pairing only covers half the lag parities, so agreement is
/// approximate.
inline cplx marginal_time(const ComplexField& f, const ParamTuple& omega, Point2 w,
                          const EvalMode& mode = EvalMode::clipped()) {
  validate_grid(f.grid);
  KernelView kv = make_kernel_view(omega);
  ChirpVec km = kv.coeffs.k - kv.coeffs.m;
  double pref = std::abs(kv.B.det()) / (4.0 * M_PI * M_PI);
  cplx acc(0.0, 0.0);
  for (std::int64_t i = 0; i < f.grid.n1; ++i) {
    for (std::int64_t j = 0; j < f.grid.n2; ++j) {
      detail::CrossTable tab =
          detail::build_cross_table(f, f, kv.coeffs, f.grid.node(i, j), mode);
      Point2 u = kv.B.apply(w);
      acc += tab.engine.sum(u.x1, u.x2) * tab.weight;
    }
  }
  return acc * pref * chirp_eval(km, w) * (f.grid.step1 * f.grid.step2);
}

namespace detail {

/// Closed form of sum_{j=0}^{n-1} exp(i (start + j step) v) * step — the
/// discrete frequency-window response used by the frequency marginal.
inline cplx window_response(double v, double start, double step, std::int64_t n) {
  double th = 0.5 * step * v;
  double s = std::sin(th);
  double ratio;
  if (std::abs(s) < 1e-14) {
    // th at a multiple of pi: ratio degenerates to n * cos(n th) / cos(th)
    ratio = static_cast<double>(n) * std::cos(static_cast<double>(n) * th) / std::cos(th);
  } else {
    ratio = std::sin(static_cast<double>(n) * th) / s;
  }
  double mid = start + 0.5 * static_cast<double>(n - 1) * step;
  return std::polar(ratio * step, mid * v);
}

}  // namespace detail

/// Frequency marginal at a time point:
///   C_{k-m}(x) * sum_w C_{m-k}(w) * W(x, w) * dw^2  over wgrid.
/// The counter-chirp cancels the distribution's frequency chirp exactly, so
/// the double sum collapses to one pass over the lag table with closed-form
/// per-axis window responses; the result equals the literal double sum up to
/// roundoff.  The outer time chirp undoes the phase the lag table leaves at
/// zero lag when the two kernel sides differ.  Recovers |f(x)|^2 on a
/// suitable frequency window.
inline double marginal_freq(const ComplexField& f, const ParamTuple& omega, Point2 x,
                            const Grid2D& wgrid, const EvalMode& mode = EvalMode::clipped()) {
  validate_grid(wgrid);
  KernelView kv = make_kernel_view(omega);
  detail::CrossTable tab = detail::build_cross_table(f, f, kv.coeffs, x, mode);
  double pref = std::abs(kv.B.det()) / (4.0 * M_PI * M_PI);
  const detail::PhasedSum2D& e = tab.engine;
  if (e.empty()) return 0.0;
  cplx acc(0.0, 0.0);
  for (std::int64_t a = 0; a < e.c1; ++a) {
    double xi1 = e.t1[static_cast<std::size_t>(a)];
    for (std::int64_t b = 0; b < e.c2; ++b) {
      double xi2 = e.t2[static_cast<std::size_t>(b)];
      // Coefficient of w_i in w'B xi is row i of B applied to xi.
      double v1 = kv.B.m[0][0] * xi1 + kv.B.m[0][1] * xi2;
      double v2 = kv.B.m[1][0] * xi1 + kv.B.m[1][1] * xi2;
      cplx d1 = detail::window_response(v1, wgrid.start1, wgrid.step1, wgrid.n1);
      cplx d2 = detail::window_response(v2, wgrid.start2, wgrid.step2, wgrid.n2);
      std::size_t n = static_cast<std::size_t>(a * e.c2 + b);
      acc += cplx(e.vr[n], e.vi[n]) * d1 * d2;
    }
  }
  ChirpVec km = kv.coeffs.k - kv.coeffs.m;
  return (acc * chirp_eval(km, x) * pref * tab.weight).real();
}

/// Short-time transform sum_t f(t) win(t - x) e^{-i w't} * dt^2 with both
/// fields on one grid; x must be a whole number of grid steps so the shifted
/// window lands on nodes.  Window samples outside the grid count as zero.
inline cplx stft(const ComplexField& f, const ComplexField& win, Point2 x, Point2 w) {
  validate_grid(f.grid);
  if (!f.grid.same_as(win.grid))
    raise(errc::grid_mismatch, "short-time transform needs one common grid");
  std::int64_t s1 = detail::aligned_index(x.x1 / f.grid.step1, "window shift 1");
  std::int64_t s2 = detail::aligned_index(x.x2 / f.grid.step2, "window shift 2");
  cplx acc(0.0, 0.0);
  for (std::int64_t i = 0; i < f.grid.n1; ++i) {
    std::int64_t ii = i - s1;
    if (ii < 0 || ii >= f.grid.n1) continue;
    double t1 = f.grid.x1(i);
    for (std::int64_t j = 0; j < f.grid.n2; ++j) {
      std::int64_t jj = j - s2;
      if (jj < 0 || jj >= f.grid.n2) continue;
      double t2 = f.grid.x2(j);
      acc += f.at(i, j) * win.at(ii, jj) * std::polar(1.0, -(w.x1 * t1 + w.x2 * t2));
    }
  }
  return acc * (f.grid.step1 * f.grid.step2);
}

/// Window that ties the distribution to a short-time transform.  For the
/// anchor point x_p and window frequency w_p it tabulates
///   g(t) = conj(f(-t) C_k(-t)) * C_m(t) * exp(i t' (2 Gamma_m x_p))
///          * exp(i (B w_p)' t)
/// on f's grid; f(-t) is read from stored samples (zero when -t is not a
/// node, which does not happen on origin-symmetric grids).
inline ComplexField assoc_window(const ComplexField& f, const ParamTuple& omega, Point2 x_p,
                                 Point2 w_p) {
  validate_grid(f.grid);
  KernelView kv = make_kernel_view(omega);
  Point2 anchor = kv.coeffs.m.quad_matrix().apply(x_p);  // Gamma_m * x_p
  Point2 bw = kv.B.apply(w_p);
  const Grid2D& gr = f.grid;
  ComplexField out;
  out.grid = gr;
  out.values.assign(static_cast<std::size_t>(gr.size()), cplx(0.0, 0.0));
  for (std::int64_t i = 0; i < gr.n1; ++i) {
    double t1 = gr.x1(i);
    double qi = (-t1 - gr.start1) / gr.step1;
    double qir = std::nearbyint(qi);
    bool ok1 = std::abs(qi - qir) <= 1e-9 * std::max(1.0, std::abs(qi)) && qir >= 0.0 &&
               qir < static_cast<double>(gr.n1);
    for (std::int64_t j = 0; j < gr.n2; ++j) {
      double t2 = gr.x2(j);
      double qj = (-t2 - gr.start2) / gr.step2;
      double qjr = std::nearbyint(qj);
      bool ok2 = std::abs(qj - qjr) <= 1e-9 * std::max(1.0, std::abs(qj)) && qjr >= 0.0 &&
                 qjr < static_cast<double>(gr.n2);
      if (!ok1 || !ok2) continue;
      cplx fneg = f.at(static_cast<std::int64_t>(qir), static_cast<std::int64_t>(qjr));
      Point2 t{t1, t2};
      double phase = -kv.coeffs.k.phase({-t1, -t2}) + kv.coeffs.m.phase(t) +
                     2.0 * dot(t, anchor) + dot(bw, t);
      out.values[static_cast<std::size_t>(gr.idx(i, j))] =
          std::conj(fneg) * std::polar(1.0, phase);
    }
  }
  return out;
}

}  // namespace nsqpwd
