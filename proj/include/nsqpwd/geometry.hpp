// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace nsqpwd {

using cplx = std::complex<double>;

/// Point in the plane (time/space or frequency, depending on context).
struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x1, s * p.x2}; }
inline double dot(Point2 a, Point2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }

/// Dense 2x2 real matrix, row-major.
struct Mat2 {
  double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

  static Mat2 zero() { return {}; }
  static Mat2 identity() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }
  static Mat2 diag(double d1, double d2) { return {{{d1, 0.0}, {0.0, d2}}}; }

  double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

  /// Max absolute row sum.
  double inf_norm() const {
    double r0 = std::abs(m[0][0]) + std::abs(m[0][1]);
    double r1 = std::abs(m[1][0]) + std::abs(m[1][1]);
    return r0 > r1 ? r0 : r1;
  }

  Mat2 inverse() const {
    double d = det();
    if (d == 0.0) raise(errc::singular_b, "2x2 matrix is exactly singular");
    return {{{m[1][1] / d, -m[0][1] / d}, {-m[1][0] / d, m[0][0] / d}}};
  }

  Point2 apply(Point2 p) const {
    return {m[0][0] * p.x1 + m[0][1] * p.x2, m[1][0] * p.x1 + m[1][1] * p.x2};
  }

  Mat2 scaled(double s) const {
    return {{{s * m[0][0], s * m[0][1]}, {s * m[1][0], s * m[1][1]}}};
  }

  Mat2 negated() const { return scaled(-1.0); }
};

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
  return r;
}

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
  return r;
}

/// Uniform rectangular sampling lattice.  node(i, j) =
/// (start1 + i*step1, start2 + j*step2); values are stored row-major with
/// axis 1 as the slow index: flat index = i*n2 + j.
struct Grid2D {
  std::int64_t n1 = 0, n2 = 0;
  double start1 = 0.0, start2 = 0.0;
  double step1 = 0.0, step2 = 0.0;

  std::int64_t size() const { return n1 * n2; }
  double x1(std::int64_t i) const { return start1 + static_cast<double>(i) * step1; }
  double x2(std::int64_t j) const { return start2 + static_cast<double>(j) * step2; }
  std::int64_t idx(std::int64_t i, std::int64_t j) const { return i * n2 + j; }
  Point2 node(std::int64_t i, std::int64_t j) const { return {x1(i), x2(j)}; }

  bool same_as(const Grid2D& o, double tol = 1e-12) const {
    return n1 == o.n1 && n2 == o.n2 && std::abs(start1 - o.start1) <= tol &&
           std::abs(start2 - o.start2) <= tol && std::abs(step1 - o.step1) <= tol &&
           std::abs(step2 - o.step2) <= tol;
  }
};

/// Throws empty_grid unless the grid has at least one node per axis and
/// positive steps.
inline void validate_grid(const Grid2D& g) {
  if (g.n1 <= 0 || g.n2 <= 0) raise(errc::empty_grid, "grid has no samples on an axis");
  if (!(g.step1 > 0.0) || !(g.step2 > 0.0))
    raise(errc::empty_grid, "grid steps must be positive");
}

/// Midpoint lattice over [lo1, hi1] x [lo2, hi2]: n cells per axis, nodes at
/// cell centers.  Symmetric intervals give a lattice symmetric about the
/// origin with no node at 0 (even n), which keeps +/- pairs exact.
inline Grid2D grid_from_interval(double lo1, double hi1, std::int64_t n1, double lo2,
                                 double hi2, std::int64_t n2) {
  if (n1 <= 0 || n2 <= 0) raise(errc::empty_grid, "grid needs at least one cell per axis");
  if (!(hi1 > lo1) || !(hi2 > lo2)) raise(errc::empty_grid, "grid interval is empty");
  Grid2D g;
  g.n1 = n1;
  g.n2 = n2;
  g.step1 = (hi1 - lo1) / static_cast<double>(n1);
  g.step2 = (hi2 - lo2) / static_cast<double>(n2);
  g.start1 = lo1 + 0.5 * g.step1;
  g.start2 = lo2 + 0.5 * g.step2;
  return g;
}

/// Node-aligned lattice that contains the origin as a node: nodes
/// -(n/2)*step ... (n - 1 - n/2)*step per axis.  Differences of nodes are
/// again nodes, which discrete convolution requires.
inline Grid2D grid_centered_nodes(std::int64_t n1, double step1, std::int64_t n2,
                                  double step2) {
  if (n1 <= 0 || n2 <= 0) raise(errc::empty_grid, "grid needs at least one node per axis");
  Grid2D g;
  g.n1 = n1;
  g.n2 = n2;
  g.step1 = step1;
  g.step2 = step2;
  g.start1 = -static_cast<double>(n1 / 2) * step1;
  g.start2 = -static_cast<double>(n2 / 2) * step2;
  return g;
}

/// Sampled complex signal on a Grid2D.  `analytic`, when present, is the
/// closed-form generator the samples came from; fixed-range evaluation modes
/// use it to reach points between and beyond the lattice.  It is never
/// serialized.
struct ComplexField {
  Grid2D grid;
  std::vector<cplx> values;
  std::function<cplx(double, double)> analytic;

  cplx at(std::int64_t i, std::int64_t j) const { return values[grid.idx(i, j)]; }
};

/// Tabulate fn over the grid (row-major) and keep it as the analytic
/// extension.
template <class F>
ComplexField make_field(const Grid2D& grid, F&& fn, bool keep_analytic = true) {
  validate_grid(grid);
  ComplexField f;
  f.grid = grid;
  f.values.resize(static_cast<std::size_t>(grid.size()));
  for (std::int64_t i = 0; i < grid.n1; ++i) {
    double t1 = grid.x1(i);
    for (std::int64_t j = 0; j < grid.n2; ++j) {
      f.values[static_cast<std::size_t>(grid.idx(i, j))] = fn(t1, grid.x2(j));
    }
  }
  if (keep_analytic) f.analytic = std::function<cplx(double, double)>(std::forward<F>(fn));
  return f;
}

/// Sum of |v|^2 * cell area — the discrete squared L2 norm.
inline double field_energy(const ComplexField& f) {
  double acc = 0.0;
  for (const cplx& v : f.values) acc += std::norm(v);
  return acc * f.grid.step1 * f.grid.step2;
}

/// Discrete inner product <f, g> = sum f * conj(g) * cell area.
inline cplx field_inner(const ComplexField& f, const ComplexField& g) {
  if (!f.grid.same_as(g.grid)) raise(errc::grid_mismatch, "inner product needs one common grid");
  cplx acc(0.0, 0.0);
  for (std::size_t n = 0; n < f.values.size(); ++n) acc += f.values[n] * std::conj(g.values[n]);
  return acc * (f.grid.step1 * f.grid.step2);
}

}  // namespace nsqpwd
