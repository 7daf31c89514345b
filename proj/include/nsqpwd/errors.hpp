// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace nsqpwd {

/// Failure categories raised by the library.  Every throw site uses
/// nsqpwd::error so callers can branch on kind() rather than parse text.
enum class errc {
  singular_b,                      ///< det B below the conditioning floor
  asymmetric_b,                    ///< B not symmetric within tolerance
  degenerate_angle,                ///< rotation angle with |sin| too small
  empty_grid,                      ///< grid with zero samples on an axis
  off_grid_center,                 ///< evaluation point not node/half-node aligned
  analytic_extension_unavailable,  ///< fixed-range mode needs a closed-form signal
  grid_mismatch,                   ///< two fields expected on the identical grid
  zero_signal,                     ///< operation undefined for an all-zero field
  coeff_mismatch,                  ///< closed forms need matching phase coefficients
  chirp_rate_mismatch,             ///< cross terms need equal quadratic chirp rates
  empty_slice,                     ///< peak search over no data / zero count
  grid_too_small,                  ///< grid does not cover the signal support
  parse_error,                     ///< malformed configuration or file content
  io_error                         ///< filesystem read/write failure
};

/// Stable identifier string for an error kind (used in CLI diagnostics).
inline const char* errc_name(errc k) noexcept {
  switch (k) {
    case errc::singular_b: return "SingularB";
    case errc::asymmetric_b: return "AsymmetricB";
    case errc::degenerate_angle: return "DegenerateAngle";
    case errc::empty_grid: return "EmptyGrid";
    case errc::off_grid_center: return "OffGridCenter";
    case errc::analytic_extension_unavailable: return "AnalyticExtensionUnavailable";
    case errc::grid_mismatch: return "GridMismatch";
    case errc::zero_signal: return "ZeroSignal";
    case errc::coeff_mismatch: return "CoeffMismatch";
    case errc::chirp_rate_mismatch: return "ChirpRateMismatch";
    case errc::empty_slice: return "EmptySlice";
    case errc::grid_too_small: return "GridTooSmall";
    case errc::parse_error: return "ParseError";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

/// Library exception: a kind plus a human-readable message.
class error : public std::runtime_error {
 public:
  error(errc kind, const std::string& msg)
      : std::runtime_error(std::string(errc_name(kind)) + ": " + msg), kind_(kind) {}

  errc kind() const noexcept { return kind_; }

 private:
  errc kind_;
};

/// Throw an nsqpwd::error; single spelling for all throw sites.
[[noreturn]] inline void raise(errc kind, const std::string& msg) {
  throw error(kind, msg);
}

}  // namespace nsqpwd
