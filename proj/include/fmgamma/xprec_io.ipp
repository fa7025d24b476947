// Decimal conversion for XReal. Included from xprec.hpp.
#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace fmg {

namespace detail {

// 10^k in double-double, k in [-400, 400]. Exact for |k| <= 22 in one
// double; beyond that the product rounding stays near 1e-32 relative.
inline XReal pow10x(int k) {
  if (k < 0) return XReal(1.0) / pow10x(-k);
  XReal r(1.0), b(10.0);
  while (k) {
    if (k & 1) r *= b;
    b = sqr(b);
    k >>= 1;
  }
  return r;
}

inline XReal from_i128(__int128 v) {
  double h = static_cast<double>(v);
  __int128 rest = v - static_cast<__int128>(h);
  return XReal::renorm(h, static_cast<double>(rest));
}

}  // namespace detail

inline std::string to_string(const XReal& x, int digits) {
  if (digits < 1 || digits > 32) throw domain_error("to_string: digits out of range");
  if (!std::isfinite(x.hi)) throw range_error("to_string: non-finite");
  bool neg = signbit(x);
  XReal a = abs(x);
  char buf[64];
  if (a.hi == 0.0) {
    std::string s = neg ? "-0." : "0.";
    s.append(static_cast<size_t>(digits - 1), '0');
    s += "e+00";
    return s;
  }
  int e10 = static_cast<int>(std::floor(std::log10(a.hi)));
  __int128 mant = 0;
  for (int pass = 0; pass < 3; ++pass) {
    XReal y = a * detail::pow10x(digits - 1 - e10);
    XReal fl = floor(y);
    XReal frac = y - fl;
    mant = static_cast<__int128>(fl.hi) + static_cast<__int128>(fl.lo);
    if (frac.hi > 0.5 || (frac.hi == 0.5 && (mant & 1))) ++mant;
    __int128 lo = 1, hi = 1;
    for (int i = 0; i < digits - 1; ++i) lo *= 10;
    hi = lo * 10;
    if (mant >= hi) { ++e10; continue; }
    if (mant < lo) { --e10; continue; }
    break;
  }
  // mant now has exactly `digits` decimal digits
  char dig[40];
  int n = 0;
  __int128 m = mant;
  while (m > 0) {
    dig[n++] = static_cast<char>('0' + static_cast<int>(m % 10));
    m /= 10;
  }
  std::string s;
  if (neg) s += '-';
  s += dig[n - 1];
  s += '.';
  for (int i = n - 2; i >= 0; --i) s += dig[i];
  std::snprintf(buf, sizeof buf, "e%c%02d", e10 < 0 ? '-' : '+', std::abs(e10));
  s += buf;
  return s;
}

inline XReal parse_xreal(const std::string& str) {
  size_t i = 0, n = str.size();
  while (i < n && std::isspace(static_cast<unsigned char>(str[i]))) ++i;
  bool neg = false;
  if (i < n && (str[i] == '+' || str[i] == '-')) neg = str[i++] == '-';
  __int128 mant = 0;
  int ndig = 0, scale = 0;
  bool any = false, dot = false;
  for (; i < n; ++i) {
    char c = str[i];
    if (c == '.' && !dot) { dot = true; continue; }
    if (!std::isdigit(static_cast<unsigned char>(c))) break;
    any = true;
    if (ndig < 36) {
      mant = mant * 10 + (c - '0');
      if (mant) ++ndig;
      if (dot) --scale;
    } else if (!dot) {
      ++scale;
    }
  }
  if (!any) throw format_error("parse_xreal: no digits in '" + str + "'");
  if (i < n && (str[i] == 'e' || str[i] == 'E')) {
    ++i;
    char* end = nullptr;
    long ex = std::strtol(str.c_str() + i, &end, 10);
    if (end == str.c_str() + i) throw format_error("parse_xreal: bad exponent in '" + str + "'");
    if (ex > 100000 || ex < -100000) throw format_error("parse_xreal: exponent out of range");
    scale += static_cast<int>(ex);
    i = static_cast<size_t>(end - str.c_str());
  }
  while (i < n && std::isspace(static_cast<unsigned char>(str[i]))) ++i;
  if (i != n) throw format_error("parse_xreal: trailing characters in '" + str + "'");
  XReal v = detail::from_i128(mant);
  if (scale > 0) v = v * detail::pow10x(scale);
  if (scale < 0) v = v / detail::pow10x(-scale);
  return neg ? -v : v;
}

}  // namespace fmg
