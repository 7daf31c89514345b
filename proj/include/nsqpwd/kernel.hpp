// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <complex>

#include "params.hpp"

namespace nsqpwd {

/// Unit-modulus chirp exp(i * phi(p)) for the phase polynomial c.
inline cplx chirp_eval(const ChirpVec& c, Point2 p) { return std::polar(1.0, c.phase(p)); }

/// Kernel amplitude i * sqrt(det B) / (2*pi), principal square root.  For
/// det B > 0 this is purely imaginary; for det B < 0 (e.g. the right-angle
/// gyrator) the principal branch makes it a negative real number.
inline cplx kernel_prefactor(const Mat2& B) {
  cplx root = std::sqrt(cplx(B.det(), 0.0));
  return cplx(0.0, 1.0) * root / (2.0 * M_PI);
}

/// Parameter tuple digested for evaluation: phase coefficients plus the
/// coupling matrix and amplitude.  Build once, evaluate many times.
struct KernelView {
  PhaseCoeffs coeffs;
  Mat2 B;
  cplx prefactor;
};

inline KernelView make_kernel_view(const ParamTuple& o) {
  validate(o);
  return KernelView{derive_coeffs(o), o.B, kernel_prefactor(o.B)};
}

/// Kernel value at (time x, frequency w):
///   prefactor * exp{ i [ phi_k(w) + phi_m(x) + x' B w ] }.
inline cplx kernel_eval(const KernelView& kv, Point2 x, Point2 w) {
  double phase = kv.coeffs.k.phase(w) + kv.coeffs.m.phase(x) + dot(x, kv.B.apply(w));
  return kv.prefactor * std::polar(1.0, phase);
}

inline cplx kernel_eval(const ParamTuple& o, Point2 x, Point2 w) {
  return kernel_eval(make_kernel_view(o), x, w);
}

}  // namespace nsqpwd
