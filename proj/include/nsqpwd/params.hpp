// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cmath>

#include "geometry.hpp"

namespace nsqpwd {

/// Parameter tuple of the transform: five real 2x2 matrices.  A and C shape
/// the quadratic phase in frequency and time, B couples the two domains
/// (symmetric, nonsingular), D and E add linear phase.
struct ParamTuple {
  Mat2 A, B, C, D, E;
};

/// Validation tolerances, scaled by the size of B.
inline constexpr double kSymTolScale = 1e-12;
inline constexpr double kDetTolScale = 1e-12;
inline constexpr double kAngleTol = 1e-9;

/// Checks the structural requirements on the coupling matrix B: symmetry and
/// a determinant away from zero.  A, C, D, E are unconstrained.
inline void validate(const ParamTuple& omega) {
  const Mat2& B = omega.B;
  double bn = B.inf_norm();
  double sym_tol = kSymTolScale * std::max(1.0, bn);
  if (std::abs(B.m[0][1] - B.m[1][0]) > sym_tol)
    raise(errc::asymmetric_b, "coupling matrix B must be symmetric");
  double det_tol = kDetTolScale * std::max(1.0, bn * bn);
  if (std::abs(B.det()) <= det_tol)
    raise(errc::singular_b, "coupling matrix B must be nonsingular");
}

/// Coefficients of a quadratic phase polynomial
///   phi(p) = c1*p1^2 + c2*p1*p2 + c3*p2^2 + c4*p1 + c5*p2.
struct ChirpVec {
  std::array<double, 5> c = {0.0, 0.0, 0.0, 0.0, 0.0};

  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

  /// Phase value phi(p).
  double phase(Point2 p) const {
    return c[0] * p.x1 * p.x1 + c[1] * p.x1 * p.x2 + c[2] * p.x2 * p.x2 + c[3] * p.x1 +
           c[4] * p.x2;
  }

  /// Hessian of the quadratic part: [[2c1, c2], [c2, 2c3]].
  Mat2 quad_matrix() const { return {{{2.0 * c[0], c[1]}, {c[1], 2.0 * c[2]}}}; }

  /// Gradient of the linear part: (c4, c5).
  Point2 linear_part() const { return {c[3], c[4]}; }

  bool is_zero(double tol = 0.0) const {
    for (double v : c)
      if (std::abs(v) > tol) return false;
    return true;
  }
};

inline ChirpVec operator-(const ChirpVec& a, const ChirpVec& b) {
  ChirpVec r;
  for (int i = 0; i < 5; ++i) r[i] = a[i] - b[i];
  return r;
}

/// The two phase polynomials of the kernel: `k` collects the pure-frequency
/// terms (from A and D), `m` the pure-time terms (from C and E).
struct PhaseCoeffs {
  ChirpVec k;  ///< frequency side: (a11, a12+a21, a22, d11+d21, d12+d22)
  ChirpVec m;  ///< time side:      (c11, c12+c21, c22, e11+e21, e12+e22)
};

/// Reduce the matrix tuple to the five coefficients each side of the kernel
/// phase actually depends on.  Off-diagonal and row-summed entries collapse
/// because w'Aw and 1'Dw only see the symmetric/column-summed parts.
inline PhaseCoeffs derive_coeffs(const ParamTuple& o) {
  PhaseCoeffs pc;
  pc.k[0] = o.A.m[0][0];
  pc.k[1] = o.A.m[0][1] + o.A.m[1][0];
  pc.k[2] = o.A.m[1][1];
  pc.k[3] = o.D.m[0][0] + o.D.m[1][0];
  pc.k[4] = o.D.m[0][1] + o.D.m[1][1];
  pc.m[0] = o.C.m[0][0];
  pc.m[1] = o.C.m[0][1] + o.C.m[1][0];
  pc.m[2] = o.C.m[1][1];
  pc.m[3] = o.E.m[0][0] + o.E.m[1][0];
  pc.m[4] = o.E.m[0][1] + o.E.m[1][1];
  return pc;
}

/// Parameter tuple whose transform reduces to the plain 2-D Fourier-type
/// integral: A = C = D = E = 0, B = I.
inline ParamTuple make_classical() {
  ParamTuple o;
  o.B = Mat2::identity();
  return o;
}

/// Gyrator-style tuple for rotation angle theta: cross-coupled quadratic
/// phase, anti-diagonal B.  Throws degenerate_angle when sin(theta) ~ 0.
inline ParamTuple make_gyrator(double theta) {
  double s = std::sin(theta);
  if (std::abs(s) <= kAngleTol)
    raise(errc::degenerate_angle, "gyrator angle has |sin| below tolerance");
  double cot_half = std::cos(theta) / s * 0.5;
  double csc = 1.0 / s;
  ParamTuple o;
  o.A = {{{0.0, cot_half}, {cot_half, 0.0}}};
  o.C = o.A;
  o.B = {{{0.0, -csc}, {-csc, 0.0}}};
  return o;
}

/// Two-angle fractional-rotation tuple: separable quadratic phase, diagonal
/// B.  Throws degenerate_angle when either sin(theta_i) ~ 0.
inline ParamTuple make_fractional(double theta1, double theta2) {
  double s1 = std::sin(theta1), s2 = std::sin(theta2);
  if (std::abs(s1) <= kAngleTol || std::abs(s2) <= kAngleTol)
    raise(errc::degenerate_angle, "fractional angle has |sin| below tolerance");
  ParamTuple o;
  o.A = Mat2::diag(0.5 * std::cos(theta1) / s1, 0.5 * std::cos(theta2) / s2);
  o.C = o.A;
  o.B = Mat2::diag(-1.0 / s1, -1.0 / s2);
  return o;
}

/// Partner tuple {C, B, A, E, D}: swapping the frequency-side and time-side
/// phases conjugates the distribution.
inline ParamTuple conjugation_partner(const ParamTuple& o) {
  return ParamTuple{o.C, o.B, o.A, o.E, o.D};
}

/// Derived geometry used by the covariance identities.
struct ShiftGeometry {
  Mat2 btilde;       ///< B scaled by 1/det(B); assemble_inverse(btilde) * B = I
  Mat2 P;            ///< frequency displacement map: a time shift x0 shifts frequency by -P*x0
  Mat2 Q;            ///< quad_matrix(k) - quad_matrix(m): cross-phase of the shift factor
  Point2 lambda_vec; ///< linear-part difference (k4 - m4, k5 - m5)
};

/// Adjugate-style assembly [[t22, -t12], [-t12, t11]]; applied to btilde it
/// reconstructs B^{-1} exactly.
inline Mat2 assemble_inverse(const Mat2& t) {
  return {{{t.m[1][1], -t.m[0][1]}, {-t.m[1][0], t.m[0][0]}}};
}

/// Computes the covariance geometry of a validated tuple.
inline ShiftGeometry shift_geometry(const ParamTuple& o) {
  validate(o);
  PhaseCoeffs pc = derive_coeffs(o);
  ShiftGeometry g;
  g.btilde = o.B.scaled(1.0 / o.B.det());
  Mat2 binv = o.B.inverse();
  Mat2 gsum = pc.k.quad_matrix() + pc.m.quad_matrix();
  g.P = binv * gsum.scaled(0.5);
  g.Q = pc.k.quad_matrix() + pc.m.quad_matrix().negated();
  Point2 lk = pc.k.linear_part(), lm = pc.m.linear_part();
  g.lambda_vec = {lk.x1 - lm.x1, lk.x2 - lm.x2};
  return g;
}

}  // namespace nsqpwd
