// SPDX-License-Identifier: MIT
#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "wigner.hpp"

namespace nsqpwd {

namespace detail {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<char>((v >> s) & 0xffu));
}

inline void put_f64(std::string& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int s = 0; s < 64; s += 8) out.push_back(static_cast<char>((bits >> s) & 0xffu));
}

inline std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int b = 3; b >= 0; --b) v = (v << 8) | p[b];
  return v;
}

inline double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | p[b];
  return std::bit_cast<double>(v);
}

inline constexpr char kMagic[5] = {'N', 'S', 'Q', 'W', '1'};

}  // namespace detail

/// Writes a sampled complex layer as CSV: header omega1,omega2,re,im,abs,
/// one row per grid node in row-major order, shortest round-trip numerals.
inline void write_slice_csv(const std::string& path, const Grid2D& grid,
                            const std::vector<cplx>& values) {
  validate_grid(grid);
  if (values.size() != static_cast<std::size_t>(grid.size()))
    raise(errc::grid_mismatch, "value count does not match the grid");
  std::ofstream os(path, std::ios::binary);
  if (!os) raise(errc::io_error, "cannot open for writing: " + path);
  os << "omega1,omega2,re,im,abs\n";
  for (std::int64_t i = 0; i < grid.n1; ++i)
    for (std::int64_t j = 0; j < grid.n2; ++j) {
      const cplx& v = values[static_cast<std::size_t>(grid.idx(i, j))];
      os << detail::format_double(grid.x1(i)) << ',' << detail::format_double(grid.x2(j))
         << ',' << detail::format_double(v.real()) << ',' << detail::format_double(v.imag())
         << ',' << detail::format_double(std::abs(v)) << '\n';
    }
  if (!os.flush()) raise(errc::io_error, "write failed: " + path);
}

inline void write_slice_csv(const std::string& path, const WignerSlice& slice) {
  write_slice_csv(path, slice.wgrid, slice.values);
}

/// Writes the binary layer format: magic "NSQW1", little-endian u32 n1 and
/// n2, f64 start1, step1, start2, step2, then n1*n2 (re, im) f64 pairs in
/// row-major order.  Byte-exact round trip with read_grid_values_bin.
inline void write_grid_values_bin(const std::string& path, const Grid2D& grid,
                                  const std::vector<cplx>& values) {
  validate_grid(grid);
  if (values.size() != static_cast<std::size_t>(grid.size()))
    raise(errc::grid_mismatch, "value count does not match the grid");
  std::string buf;
  buf.reserve(45 + values.size() * 16);
  buf.append(detail::kMagic, sizeof(detail::kMagic));
  detail::put_u32(buf, static_cast<std::uint32_t>(grid.n1));
  detail::put_u32(buf, static_cast<std::uint32_t>(grid.n2));
  detail::put_f64(buf, grid.start1);
  detail::put_f64(buf, grid.step1);
  detail::put_f64(buf, grid.start2);
  detail::put_f64(buf, grid.step2);
  for (const cplx& v : values) {
    detail::put_f64(buf, v.real());
    detail::put_f64(buf, v.imag());
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) raise(errc::io_error, "cannot open for writing: " + path);
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os.flush()) raise(errc::io_error, "write failed: " + path);
}

/// Reads the binary layer format written by write_grid_values_bin.
inline std::pair<Grid2D, std::vector<cplx>> read_grid_values_bin(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) raise(errc::io_error, "cannot open for reading: " + path);
  std::string buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (is.bad()) raise(errc::io_error, "read failed: " + path);
  if (buf.size() < 45 || std::memcmp(buf.data(), detail::kMagic, sizeof(detail::kMagic)) != 0)
    raise(errc::parse_error, "not a binary layer file: " + path);
  const unsigned char* p = reinterpret_cast<const unsigned char*>(buf.data()) + 5;
  Grid2D grid;
  grid.n1 = detail::get_u32(p);
  grid.n2 = detail::get_u32(p + 4);
  grid.start1 = detail::get_f64(p + 8);
  grid.step1 = detail::get_f64(p + 16);
  grid.start2 = detail::get_f64(p + 24);
  grid.step2 = detail::get_f64(p + 32);
  p += 40;
  if (grid.n1 <= 0 || grid.n2 <= 0)
    raise(errc::parse_error, "corrupt header (empty grid): " + path);
  std::size_t count = static_cast<std::size_t>(grid.size());
  if (buf.size() != 45 + count * 16)
    raise(errc::parse_error, "truncated or oversized payload: " + path);
  std::vector<cplx> values(count);
  for (std::size_t n = 0; n < count; ++n) {
    values[n] = cplx(detail::get_f64(p), detail::get_f64(p + 8));
    p += 16;
  }
  return {grid, std::move(values)};
}

inline void write_slice_bin(const std::string& path, const WignerSlice& slice) {
  write_grid_values_bin(path, slice.wgrid, slice.values);
}

/// Reads a layer back as a slice; the time-slice center is not part of the
/// format and comes back zeroed.
inline WignerSlice read_slice_bin(const std::string& path) {
  auto [grid, values] = read_grid_values_bin(path);
  WignerSlice s;
  s.x = {0.0, 0.0};
  s.wgrid = grid;
  s.values = std::move(values);
  return s;
}

inline void write_field_bin(const std::string& path, const ComplexField& f) {
  write_grid_values_bin(path, f.grid, f.values);
}

/// Reads a sampled signal; no closed-form generator is attached.
inline ComplexField read_field_bin(const std::string& path) {
  auto [grid, values] = read_grid_values_bin(path);
  ComplexField f;
  f.grid = grid;
  f.values = std::move(values);
  return f;
}

/// Writes |values| as a gnuplot nonuniform matrix: first row holds n2 and
/// the omega2 coordinates; each following row holds omega1(i) and the n2
/// magnitudes.  Plot with: splot 'file' nonuniform matrix with pm3d.
inline void write_gnuplot_matrix(const std::string& path, const Grid2D& grid,
                                 const std::vector<cplx>& values) {
  validate_grid(grid);
  if (values.size() != static_cast<std::size_t>(grid.size()))
    raise(errc::grid_mismatch, "value count does not match the grid");
  std::ofstream os(path, std::ios::binary);
  if (!os) raise(errc::io_error, "cannot open for writing: " + path);
  os << grid.n2;
  for (std::int64_t j = 0; j < grid.n2; ++j) os << ' ' << detail::format_double(grid.x2(j));
  os << '\n';
  for (std::int64_t i = 0; i < grid.n1; ++i) {
    os << detail::format_double(grid.x1(i));
    for (std::int64_t j = 0; j < grid.n2; ++j)
      os << ' '
         << detail::format_double(std::abs(values[static_cast<std::size_t>(grid.idx(i, j))]));
    os << '\n';
  }
  if (!os.flush()) raise(errc::io_error, "write failed: " + path);
}

inline void write_gnuplot_matrix(const std::string& path, const WignerSlice& slice) {
  write_gnuplot_matrix(path, slice.wgrid, slice.values);
}

}  // namespace nsqpwd
