// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "geometry.hpp"

namespace nsqpwd::detail {

/// Rank-2 oscillatory summation engine:
///   sum(u) = sum_{a,b} v[a*c2+b] * exp(i*(u1*t1[a] + u2*t2[b]))
/// evaluated with split real/imag storage and per-axis phase tables so the
/// inner loop is four fused multiply-adds per term.  Summation order is
/// fixed: ascending b inside ascending a (row-major).
struct PhasedSum2D {
  std::int64_t c1 = 0, c2 = 0;
  std::vector<double> vr, vi;  ///< term values, row-major c1 x c2
  std::vector<double> t1, t2;  ///< axis coordinates multiplying u1 / u2

  void resize(std::int64_t n1, std::int64_t n2) {
    c1 = n1;
    c2 = n2;
    vr.assign(static_cast<std::size_t>(n1 * n2), 0.0);
    vi.assign(static_cast<std::size_t>(n1 * n2), 0.0);
    t1.assign(static_cast<std::size_t>(n1), 0.0);
    t2.assign(static_cast<std::size_t>(n2), 0.0);
    p1r_.assign(static_cast<std::size_t>(n1), 0.0);
    p1i_.assign(static_cast<std::size_t>(n1), 0.0);
    p2r_.assign(static_cast<std::size_t>(n2), 0.0);
    p2i_.assign(static_cast<std::size_t>(n2), 0.0);
  }

  bool empty() const { return c1 == 0 || c2 == 0; }

  /// Evaluate the phased sum at (u1, u2).
  cplx sum(double u1, double u2) {
    if (empty()) return {0.0, 0.0};
    for (std::int64_t a = 0; a < c1; ++a) {
      double ph = u1 * t1[static_cast<std::size_t>(a)];
      p1r_[static_cast<std::size_t>(a)] = std::cos(ph);
      p1i_[static_cast<std::size_t>(a)] = std::sin(ph);
    }
    for (std::int64_t b = 0; b < c2; ++b) {
      double ph = u2 * t2[static_cast<std::size_t>(b)];
      p2r_[static_cast<std::size_t>(b)] = std::cos(ph);
      p2i_[static_cast<std::size_t>(b)] = std::sin(ph);
    }
    double accr = 0.0, acci = 0.0;
    const double* ar = p2r_.data();
    const double* ai = p2i_.data();
    for (std::int64_t a = 0; a < c1; ++a) {
      const double* rowr = vr.data() + a * c2;
      const double* rowi = vi.data() + a * c2;
      double sr = 0.0, si = 0.0;
      for (std::int64_t b = 0; b < c2; ++b) {
        double hr = rowr[b], hi = rowi[b];
        sr += hr * ar[b] - hi * ai[b];
        si += hr * ai[b] + hi * ar[b];
      }
      double cr = p1r_[static_cast<std::size_t>(a)], ci = p1i_[static_cast<std::size_t>(a)];
      accr += cr * sr - ci * si;
      acci += cr * si + ci * sr;
    }
    return {accr, acci};
  }

  /// Evaluate the phased sum on a product lattice of frequencies:
  /// out[r * u2.size() + s] = sum(u1[r], u2[s]).  Shares the partial sums
  /// over axis 2 across all u1 values, which is what makes dense sweeps
  /// affordable; identical results to calling sum() pointwise up to
  /// floating-point regrouping.
  void sum_grid(const std::vector<double>& u1, const std::vector<double>& u2,
                std::vector<cplx>& out) {
    std::size_t nu1 = u1.size(), nu2 = u2.size();
    out.assign(nu1 * nu2, cplx(0.0, 0.0));
    if (empty() || out.empty()) return;
    std::size_t sc1 = static_cast<std::size_t>(c1), sc2 = static_cast<std::size_t>(c2);
    // phase tables: axis 2 per (s, b), axis 1 per (r, a)
    q2r_.assign(nu2 * sc2, 0.0);
    q2i_.assign(nu2 * sc2, 0.0);
    for (std::size_t s = 0; s < nu2; ++s)
      for (std::size_t b = 0; b < sc2; ++b) {
        double ph = u2[s] * t2[b];
        q2r_[s * sc2 + b] = std::cos(ph);
        q2i_[s * sc2 + b] = std::sin(ph);
      }
    q1r_.assign(nu1 * sc1, 0.0);
    q1i_.assign(nu1 * sc1, 0.0);
    for (std::size_t r = 0; r < nu1; ++r)
      for (std::size_t a = 0; a < sc1; ++a) {
        double ph = u1[r] * t1[a];
        q1r_[r * sc1 + a] = std::cos(ph);
        q1i_[r * sc1 + a] = std::sin(ph);
      }
    // stage 1: G[a][s] = sum_b v[a,b] e^{i u2[s] t2[b]}
    gr_.assign(sc1 * nu2, 0.0);
    gi_.assign(sc1 * nu2, 0.0);
    for (std::size_t a = 0; a < sc1; ++a) {
      const double* rowr = vr.data() + a * sc2;
      const double* rowi = vi.data() + a * sc2;
      for (std::size_t s = 0; s < nu2; ++s) {
        const double* pr = q2r_.data() + s * sc2;
        const double* pi = q2i_.data() + s * sc2;
        double sr = 0.0, si = 0.0;
        for (std::size_t b = 0; b < sc2; ++b) {
          sr += rowr[b] * pr[b] - rowi[b] * pi[b];
          si += rowr[b] * pi[b] + rowi[b] * pr[b];
        }
        gr_[a * nu2 + s] = sr;
        gi_[a * nu2 + s] = si;
      }
    }
    // stage 2: out[r][s] = sum_a e^{i u1[r] t1[a]} G[a][s]
    or_.assign(nu1 * nu2, 0.0);
    oi_.assign(nu1 * nu2, 0.0);
    for (std::size_t r = 0; r < nu1; ++r) {
      double* outr = or_.data() + r * nu2;
      double* outi = oi_.data() + r * nu2;
      for (std::size_t a = 0; a < sc1; ++a) {
        double er = q1r_[r * sc1 + a], ei = q1i_[r * sc1 + a];
        const double* grow = gr_.data() + a * nu2;
        const double* girow = gi_.data() + a * nu2;
        for (std::size_t s = 0; s < nu2; ++s) {
          outr[s] += er * grow[s] - ei * girow[s];
          outi[s] += er * girow[s] + ei * grow[s];
        }
      }
    }
    for (std::size_t n = 0; n < nu1 * nu2; ++n) out[n] = cplx(or_[n], oi_[n]);
  }

 private:
  std::vector<double> p1r_, p1i_, p2r_, p2i_;        // per-axis phase scratch (sum)
  std::vector<double> q1r_, q1i_, q2r_, q2i_;        // phase tables (sum_grid)
  std::vector<double> gr_, gi_, or_, oi_;            // stage buffers (sum_grid)
};

}  // namespace nsqpwd::detail
