#pragma once
// Nearest-node Taylor expansion off a stored table of F_j(z0):
//   F_m(z0 + eps) = sum_n (-eps)^n / n! F_{m+n}(z0),
// with the Laurent series (converging factor form) outside the grid.

#include <zlib.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "oracle.hpp"
#include "result.hpp"
#include "series.hpp"
#include "xprec.hpp"

namespace fmg {

struct GridSpec {
  double s = 3.0;
  int k_min = -11, k_max = 6;
  int l_max = 12;
  int J_max = 30;
};

struct TaylorGrid {
  double s = 3.0;
  int k_min = 0, k_max = 0, l_max = 0, J_max = 0;
  int digits = 25;                 // significant digits per stored component
  std::vector<XComplex> values;    // [node][j], nodes ordered by k then l

  int nk() const { return k_max - k_min + 1; }
  int nl() const { return l_max + 1; }
  size_t node_index(int k, int l) const { return static_cast<size_t>((k - k_min) * nl() + l); }
  const XComplex& at(int k, int l, int j) const {
    return values[node_index(k, l) * static_cast<size_t>(J_max + 1) + static_cast<size_t>(j)];
  }
  cplx node(int k, int l) const { return {k * s, l * s}; }
};

inline constexpr int kGridDigits = 25;

namespace detail {

inline XReal round_digits(const XReal& x, int digits) { return parse_xreal(to_string(x, digits)); }

// Largest relative residual of 2z F_j = (2j-1) F_{j-1} - e^{-z} over j.
inline double node_residual(const TaylorGrid& g, int k, int l) {
  const XComplex z(g.node(k, l));
  const XComplex ez = x_exp(-z);
  double worst = 0.0;
  for (int j = 1; j <= g.J_max; ++j) {
    XComplex a = XReal(2.0) * z * g.at(k, l, j);
    XComplex b = XReal(2.0 * j - 1.0) * g.at(k, l, j - 1);
    XComplex res = a - b + ez;
    double scale = absd(a) + absd(b) + absd(ez);
    worst = std::max(worst, absd(res) / scale);
  }
  return worst;
}

inline void check_spec(const GridSpec& sp) {
  if (!(sp.s > 0.0) || !std::isfinite(sp.s)) throw domain_error("build_grid: stride must be > 0");
  if (sp.k_max < sp.k_min || sp.l_max < 0) throw domain_error("build_grid: empty node range");
  if (sp.J_max < 0 || sp.J_max > 64) throw domain_error("build_grid: need 0 <= J_max <= 64");
  const double nodes = (static_cast<double>(sp.k_max) - sp.k_min + 1.0) * (sp.l_max + 1.0);
  if (nodes > 1e6) throw domain_error("build_grid: more than 1e6 nodes");
}

}  // namespace detail

// Every F_j(z0) from the oracle, rounded to the stored precision. Nodes
// whose reference is not trusted to 20 digits abort the build.
inline TaylorGrid build_grid(const GridSpec& sp) {
  detail::check_spec(sp);
  TaylorGrid g;
  g.s = sp.s;
  g.k_min = sp.k_min;
  g.k_max = sp.k_max;
  g.l_max = sp.l_max;
  g.J_max = sp.J_max;
  g.digits = kGridDigits;
  g.values.reserve(static_cast<size_t>(g.nk() * g.nl() * (g.J_max + 1)));
  std::string bad;
  for (int k = g.k_min; k <= g.k_max; ++k)
    for (int l = 0; l <= g.l_max; ++l) {
      bool ok = true;
      for (int j = 0; j <= g.J_max; ++j) {
        OracleValue v = oracle_eval_ext(j, g.node(k, l));
        if (!(v.rel_error <= 1e-20)) ok = false;
        g.values.emplace_back(detail::round_digits(v.value.re, g.digits), detail::round_digits(v.value.im, g.digits));
      }
      if (!ok) bad += " (" + std::to_string(k) + "," + std::to_string(l) + ")";
    }
  if (!bad.empty()) throw numeric_error("build_grid: reference below 20 digits at nodes" + bad);
  return g;
}

// ---------------------------------------------------------------- file format

namespace detail {

inline std::string grid_body(const TaylorGrid& g) {
  std::string out = "FMGRID/1\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g %d %d %d %d %d\n", g.s, g.k_min, g.k_max, g.l_max, g.J_max, g.digits);
  out += buf;
  for (int k = g.k_min; k <= g.k_max; ++k)
    for (int l = 0; l <= g.l_max; ++l) {
      out += std::to_string(k) + " " + std::to_string(l);
      for (int j = 0; j <= g.J_max; ++j) {
        const XComplex& v = g.at(k, l, j);
        out += ' ';
        out += to_string(v.re, g.digits);
        out += ' ';
        out += to_string(v.im, g.digits);
      }
      out += '\n';
    }
  return out;
}

inline unsigned long crc_of(const std::string& s) {
  uLong c = crc32(0L, Z_NULL, 0);
  return crc32(c, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size()));
}

}  // namespace detail

inline void save_grid(const TaylorGrid& g, const std::string& path) {
  std::string body = detail::grid_body(g);
  char buf[32];
  std::snprintf(buf, sizeof buf, "CRC32 %08lx\n", detail::crc_of(body));
  body += buf;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("save_grid: cannot open " + path);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw io_error("save_grid: write failed for " + path);
}

inline TaylorGrid parse_grid(const std::string& text) {
  if (text.empty()) throw format_error("grid: empty file");
  if (text.back() != '\n') throw format_error("grid: truncated file");
  const size_t crc_pos = text.rfind("\nCRC32 ", text.size() - 2);
  if (crc_pos == std::string::npos) throw format_error("grid: missing checksum line");
  const std::string body = text.substr(0, crc_pos + 1);
  const std::string crc_line = text.substr(crc_pos + 1);
  unsigned long stored = 0;
  char tail = 0;
  if (std::sscanf(crc_line.c_str(), "CRC32 %lx%c", &stored, &tail) != 2 || tail != '\n')
    throw format_error("grid: malformed checksum line");
  if (stored != detail::crc_of(body)) throw format_error("grid: checksum mismatch");

  std::istringstream in(body);
  std::string line;
  std::getline(in, line);
  if (line != "FMGRID/1") throw format_error("grid: unknown magic '" + line + "'");
  TaylorGrid g;
  if (!std::getline(in, line)) throw format_error("grid: missing header");
  {
    std::istringstream h(line);
    if (!(h >> g.s >> g.k_min >> g.k_max >> g.l_max >> g.J_max >> g.digits)) throw format_error("grid: bad header");
    std::string extra;
    if (h >> extra) throw format_error("grid: bad header");
  }
  if (!(g.s > 0.0) || g.k_max < g.k_min || g.l_max < 0 || g.J_max < 0 || g.J_max > 64 || g.digits < 1 || g.digits > 32)
    throw format_error("grid: header values out of range");
  const double nodes = (static_cast<double>(g.k_max) - g.k_min + 1.0) * (g.l_max + 1.0);
  if (nodes > 1e6) throw format_error("grid: header values out of range");
  g.values.reserve(static_cast<size_t>(nodes) * static_cast<size_t>(g.J_max + 1));
  for (int k = g.k_min; k <= g.k_max; ++k)
    for (int l = 0; l <= g.l_max; ++l) {
      if (!std::getline(in, line)) throw format_error("grid: truncated node list");
      std::istringstream row(line);
      int kk = 0, ll = 0;
      if (!(row >> kk >> ll) || kk != k || ll != l) throw format_error("grid: node order mismatch");
      for (int j = 0; j <= g.J_max; ++j) {
        std::string re, im;
        if (!(row >> re >> im)) throw format_error("grid: short node line");
        g.values.emplace_back(parse_xreal(re), parse_xreal(im));
      }
      std::string extra;
      if (row >> extra) throw format_error("grid: long node line");
    }
  if (std::getline(in, line)) throw format_error("grid: trailing data");
  for (int k = g.k_min; k <= g.k_max; ++k)
    for (int l = 0; l <= g.l_max; ++l)
      if (!(detail::node_residual(g, k, l) <= 1e-18))
        throw format_error("grid: recurrence check failed at node (" + std::to_string(k) + "," + std::to_string(l) + ")");
  return g;
}

inline TaylorGrid load_grid(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("load_grid: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_grid(ss.str());
}

// ---------------------------------------------------------------- evaluation

namespace detail {

// Nearest node; ties go to the smaller l, then the smaller k.
inline void nearest_node(const TaylorGrid& g, cplx z, int& k, int& l) {
  k = static_cast<int>(std::ceil(z.real() / g.s - 0.5));
  l = static_cast<int>(std::ceil(z.imag() / g.s - 0.5));
  k = std::clamp(k, g.k_min, g.k_max);
  l = std::clamp(l, 0, g.l_max);
}

inline bool inside_grid(const TaylorGrid& g, cplx z) {
  const double h = 0.5 * g.s;
  return z.real() >= g.k_min * g.s - h && z.real() <= g.k_max * g.s + h && z.imag() <= g.l_max * g.s + h;
}

struct GridSum {
  XComplex value;
  SeriesResult meta;
};

// z in the closed upper half plane.
inline GridSum grid_sum_upper(int m, cplx z, double target_d, const TaylorGrid& g) {
  GridSum out;
  if (!inside_grid(g, z)) {
    if (z == 0.0) throw domain_error("gridtaylor: z == 0 outside the grid");
    const int N = static_cast<int>(std::floor(std::abs(z) + m + 0.5));
    out.meta = laurent_cf(m, z, N);
    out.meta.flags |= kFlagFallback;
    out.value = XComplex(out.meta.value);
    return out;
  }
  int k = 0, l = 0;
  nearest_node(g, z, k, l);
  const XComplex z0(g.node(k, l));
  const XComplex meps = z0 - XComplex(z);
  const double tol = std::pow(10.0, -target_d - 1.0);
  XComplex sum = g.at(k, l, m), p(1.0);
  double abs_sum = absd(sum), last = 0.0;
  int n = 1;
  bool reached = false;
  for (;; ++n) {
    const int j = m + n;
    if (j > g.J_max + 1) break;
    XComplex f;
    if (j <= g.J_max) {
      f = g.at(k, l, j);
    } else if (l == 0 && k == 0) {
      f = XComplex(XReal(1.0) / XReal(2.0 * j + 1.0));
    } else {
      // one step past the table, only to bound the next term
      f = (XReal(2.0 * j - 1.0) * g.at(k, l, j - 1) - x_exp(-z0)) / (XReal(2.0) * z0);
    }
    p = p * meps / XReal(static_cast<double>(n));
    const XComplex t = p * f;
    const double at = absd(t);
    if (at <= tol * absd(sum)) {
      if (j <= g.J_max) sum += t;
      last = at;
      reached = true;
      break;
    }
    if (j > g.J_max) {
      last = at;
      break;
    }
    sum += t;
    abs_sum += at;
  }
  out.value = sum;
  out.meta.value = sum.to_complex();
  const double stored = std::pow(10.0, 1.0 - g.digits) * abs_sum;
  if (reached) {
    // powers 0..n-1 carry the sum; the term at power n is below the target
    out.meta.terms_used = n;
    out.meta.error_estimate = rel_estimate(2.0 * last + stored, out.meta.value);
  } else {
    out.meta.terms_used = g.J_max - m + 1;
    out.meta.flags |= kFlagUnreachable | kFlagTruncated;
    out.meta.error_estimate = rel_estimate(2.0 * last + stored, out.meta.value);
  }
  return out;
}

inline GridSum grid_sum(int m, cplx z, double target_d, const TaylorGrid& g) {
  if (m < 0 || m > g.J_max) throw domain_error("gridtaylor: need 0 <= m <= J_max");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw domain_error("gridtaylor: non-finite z");
  if (!lower_half(z)) return grid_sum_upper(m, z, target_d, g);
  GridSum r = grid_sum_upper(m, std::conj(z), target_d, g);
  r.value = conj(r.value);
  r.meta.value = std::conj(r.meta.value);
  return r;
}

}  // namespace detail

inline SeriesResult eval(int m, cplx z, double target_d, const TaylorGrid& grid) {
  return detail::grid_sum(m, z, target_d, grid).meta;
}

// Same sum kept in double-double, for targets beyond binary64.
inline XComplex eval_x(int m, cplx z, double target_d, const TaylorGrid& grid, SeriesResult* meta = nullptr) {
  detail::GridSum r = detail::grid_sum(m, z, target_d, grid);
  if (meta) *meta = r.meta;
  return r.value;
}

// Number of Taylor terms eval accumulates (F_m(z0) counts as one); throws
// range_error when a needed F_j lies beyond J_max.
inline int terms_needed(int m, cplx z, double target_d, const TaylorGrid& grid) {
  SeriesResult r = eval(m, z, target_d, grid);
  if (r.flags & kFlagUnreachable)
    throw range_error("terms_needed: target unreachable within J_max = " + std::to_string(grid.J_max));
  return r.terms_used;
}

}  // namespace fmg
