// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "wigner.hpp"

namespace nsqpwd {

/// Unnormalized sinc; the series branch keeps full precision through z = 0.
inline double sinc(double z) {
  if (std::abs(z) < 1e-4) {
    double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

/// One linear-frequency-modulated component
///   kappa * exp{ i (alpha x1 + beta x1^2 + mu x2 + lambda x2^2) }.
struct LfmComponent {
  cplx kappa{1.0, 0.0};
  double alpha = 0.0;   ///< linear phase, axis 1
  double beta = 0.0;    ///< chirp rate, axis 1
  double mu = 0.0;      ///< linear phase, axis 2
  double lambda = 0.0;  ///< chirp rate, axis 2
};

/// Multicomponent chirp supported on the square [-T/2, T/2]^2.
struct SignalSpec {
  double T = 0.0;
  std::vector<LfmComponent> components;
};

/// Closed-form component sum with no support clipping.
inline cplx lfm_eval(const SignalSpec& spec, double x1, double x2) {
  cplx acc(0.0, 0.0);
  for (const LfmComponent& c : spec.components) {
    double ph = c.alpha * x1 + c.beta * x1 * x1 + c.mu * x2 + c.lambda * x2 * x2;
    acc += c.kappa * std::polar(1.0, ph);
  }
  return acc;
}

/// Tabulate the signal on a grid, zero outside its support square; the
/// attached analytic generator is the unclipped component sum (which is what
/// fixed-range evaluation integrates).  The grid must cover the support.
inline ComplexField synthesize(const SignalSpec& spec, const Grid2D& grid) {
  validate_grid(grid);
  if (!(spec.T > 0.0)) raise(errc::grid_too_small, "signal support length must be positive");
  double half = 0.5 * spec.T;
  double tol = 1e-9 * std::max(1.0, half);
  double lo1 = grid.start1 - 0.5 * grid.step1, hi1 = grid.x1(grid.n1 - 1) + 0.5 * grid.step1;
  double lo2 = grid.start2 - 0.5 * grid.step2, hi2 = grid.x2(grid.n2 - 1) + 0.5 * grid.step2;
  if (lo1 > -half + tol || hi1 < half - tol || lo2 > -half + tol || hi2 < half - tol)
    raise(errc::grid_too_small, "grid does not cover the signal support square");
  ComplexField f;
  f.grid = grid;
  f.values.resize(static_cast<std::size_t>(grid.size()));
  for (std::int64_t i = 0; i < grid.n1; ++i) {
    double t1 = grid.x1(i);
    bool in1 = std::abs(t1) <= half + tol;
    for (std::int64_t j = 0; j < grid.n2; ++j) {
      double t2 = grid.x2(j);
      f.values[static_cast<std::size_t>(grid.idx(i, j))] =
          (in1 && std::abs(t2) <= half + tol) ? lfm_eval(spec, t1, t2) : cplx(0.0, 0.0);
    }
  }
  SignalSpec copy = spec;
  f.analytic = [copy](double a, double b) { return lfm_eval(copy, a, b); };
  return f;
}

/// Complex white Gaussian noise at the requested per-sample SNR.  The
/// generator is a fixed Box-Muller construction over mt19937_64 draws, so a
/// seed reproduces bit-identical noise on every platform.  +inf dB returns
/// the input unchanged; the analytic generator is dropped because the
/// samples no longer follow it.
inline ComplexField add_awgn(const ComplexField& f, double snr_db, std::uint64_t seed) {
  validate_grid(f.grid);
  double power = 0.0;
  for (const cplx& v : f.values) power += std::norm(v);
  power /= static_cast<double>(f.values.size());
  if (power == 0.0) raise(errc::zero_signal, "cannot scale noise against an all-zero signal");
  ComplexField out;
  out.grid = f.grid;
  out.values = f.values;
  if (std::isinf(snr_db) && snr_db > 0.0) {
    out.analytic = f.analytic;
    return out;
  }
  double sigma2 = power / std::pow(10.0, snr_db / 10.0);
  double scale = std::sqrt(0.5 * sigma2);
  std::mt19937_64 rng(seed);
  auto unit = [&rng]() {
    // 53-bit mantissa draw in [0, 1)
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  const double two_pi = 2.0 * M_PI;
  for (cplx& v : out.values) {
    double u1 = 1.0 - unit();  // (0, 1]: keeps the log finite
    double u2 = unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    v += cplx(scale * r * std::cos(two_pi * u2), scale * r * std::sin(two_pi * u2));
  }
  return out;
}

namespace detail {

/// Sinc arguments of a component pair's distribution term at (x, w):
/// the stationary-phase residuals along each axis.
inline void pair_args(const PhaseCoeffs& pc, const Mat2& B, const LfmComponent& cn,
                      const LfmComponent& cm, Point2 x, Point2 w, double& a1, double& a2) {
  const ChirpVec& m = pc.m;
  a1 = m[3] + m[1] * x.x2 + 0.5 * (cn.alpha + cm.alpha) + 2.0 * x.x1 * (m[0] + cn.beta) +
       B.m[0][0] * w.x1 + B.m[0][1] * w.x2;
  a2 = m[4] + m[1] * x.x1 + 0.5 * (cn.mu + cm.mu) + 2.0 * x.x2 * (m[2] + cn.lambda) +
       B.m[1][0] * w.x1 + B.m[1][1] * w.x2;
}

/// The closed forms require the frequency-side and time-side kernel phases to
/// coincide (k = m); otherwise the rank-one sinc structure is lost.
inline PhaseCoeffs matched_coeffs(const ParamTuple& omega) {
  validate(omega);
  PhaseCoeffs pc = derive_coeffs(omega);
  for (int i = 0; i < 5; ++i)
    if (std::abs(pc.k[i] - pc.m[i]) > 1e-12)
      raise(errc::coeff_mismatch,
            "closed-form predictions need matching kernel phase coefficients");
  return pc;
}

}  // namespace detail

/// Closed-form auto-term of one component:
///   |kappa|^2 T^2 |det B| / (2 pi)^2 * sinc(T a1 / 2) * sinc(T a2 / 2).
inline double predict_mono(const LfmComponent& comp, const ParamTuple& omega, double T,
                           Point2 x, Point2 w) {
  PhaseCoeffs pc = detail::matched_coeffs(omega);
  double a1 = 0.0, a2 = 0.0;
  detail::pair_args(pc, omega.B, comp, comp, x, w, a1, a2);
  double pref = std::norm(comp.kappa) * T * T * std::abs(omega.B.det()) /
                (4.0 * M_PI * M_PI);
  return pref * sinc(0.5 * T * a1) * sinc(0.5 * T * a2);
}

/// Frequency at which the component's auto-term peaks for a given time point:
/// the solution of B w = -r where r collects the residual phase slopes.
inline Point2 predicted_peak(const LfmComponent& comp, const ParamTuple& omega, Point2 x) {
  PhaseCoeffs pc = detail::matched_coeffs(omega);
  const ChirpVec& m = pc.m;
  double r1 = m[3] + m[1] * x.x2 + comp.alpha + 2.0 * x.x1 * (m[0] + comp.beta);
  double r2 = m[4] + m[1] * x.x1 + comp.mu + 2.0 * x.x2 * (m[2] + comp.lambda);
  return omega.B.inverse().apply({-r1, -r2});
}

/// Closed-form value of the full multicomponent distribution at (x, w): all
/// auto terms plus every ordered cross term.  Cross terms require all
/// components to share their chirp rates.
inline cplx predict_multi(const SignalSpec& spec, const ParamTuple& omega, Point2 x,
                          Point2 w) {
  PhaseCoeffs pc = detail::matched_coeffs(omega);
  std::size_t n = spec.components.size();
  if (n == 0) return {0.0, 0.0};
  if (n > 1) {
    for (const LfmComponent& c : spec.components) {
      if (std::abs(c.beta - spec.components[0].beta) > 1e-12 ||
          std::abs(c.lambda - spec.components[0].lambda) > 1e-12)
        raise(errc::chirp_rate_mismatch,
              "cross terms need one shared chirp rate per axis");
    }
  }
  double pref = spec.T * spec.T * std::abs(omega.B.det()) / (4.0 * M_PI * M_PI);
  cplx acc(0.0, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const LfmComponent& cn = spec.components[a];
      const LfmComponent& cm = spec.components[b];
      double a1 = 0.0, a2 = 0.0;
      detail::pair_args(pc, omega.B, cn, cm, x, w, a1, a2);
      double s = sinc(0.5 * spec.T * a1) * sinc(0.5 * spec.T * a2);
      double xphase = (cn.alpha - cm.alpha) * x.x1 + (cn.mu - cm.mu) * x.x2;
      acc += cn.kappa * std::conj(cm.kappa) * std::polar(s * pref, xphase);
    }
  }
  return acc;
}

/// Local maximum of |slice| with its grid position.
struct Peak {
  std::int64_t i1 = 0, i2 = 0;
  Point2 w;
  double magnitude = 0.0;
};

/// The `count` largest non-strict 8-neighbor local maxima of |values|,
/// sorted by magnitude (descending) with row-major index as the tiebreak.
inline std::vector<Peak> detect_peaks(const WignerSlice& slice, std::size_t count) {
  if (slice.values.empty() || count < 1)
    raise(errc::empty_slice, "peak search needs data and a positive count");
  const Grid2D& g = slice.wgrid;
  std::vector<Peak> found;
  for (std::int64_t i = 0; i < g.n1; ++i) {
    for (std::int64_t j = 0; j < g.n2; ++j) {
      double v = std::abs(slice.values[static_cast<std::size_t>(g.idx(i, j))]);
      bool is_max = true;
      for (std::int64_t di = -1; di <= 1 && is_max; ++di) {
        for (std::int64_t dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          std::int64_t ii = i + di, jj = j + dj;
          if (ii < 0 || ii >= g.n1 || jj < 0 || jj >= g.n2) continue;
          if (std::abs(slice.values[static_cast<std::size_t>(g.idx(ii, jj))]) > v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) found.push_back(Peak{i, j, g.node(i, j), v});
    }
  }
  std::stable_sort(found.begin(), found.end(), [&g](const Peak& a, const Peak& b) {
    if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
    return g.idx(a.i1, a.i2) < g.idx(b.i1, b.i2);
  });
  if (found.size() > count) found.resize(count);
  return found;
}

}  // namespace nsqpwd
