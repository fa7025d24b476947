#pragma once
// Double-double real and complex arithmetic.
//
// A value is the unevaluated sum hi + lo with |lo| <= ulp(hi)/2, giving
// about 106 bits (31-32 decimal digits). The error-free transforms follow
// Dekker/Knuth; multiplication relies on a hardware fma.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "errors.hpp"

namespace fmg {

namespace detail {

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

inline void fast_two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  e = b - (s - a);
}

inline void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

}  // namespace detail

struct XReal {
  double hi = 0.0;
  double lo = 0.0;

  constexpr XReal() = default;
  constexpr XReal(double h) : hi(h), lo(0.0) {}
  constexpr XReal(double h, double l) : hi(h), lo(l) {}
  XReal(int v) : hi(v), lo(0.0) {}
  XReal(long v) : XReal(static_cast<long long>(v)) {}
  XReal(long long v) {
    hi = static_cast<double>(v);
    lo = static_cast<double>(v - static_cast<long long>(hi));
  }

  static XReal renorm(double h, double l) {
    XReal r;
    detail::fast_two_sum(h, l, r.hi, r.lo);
    return r;
  }

  explicit operator double() const { return hi + lo; }
  double to_double() const { return hi + lo; }
};

inline XReal operator-(const XReal& a) { return {-a.hi, -a.lo}; }

inline XReal operator+(const XReal& a, const XReal& b) {
  double s, e, t, f;
  detail::two_sum(a.hi, b.hi, s, e);
  detail::two_sum(a.lo, b.lo, t, f);
  e += t;
  detail::fast_two_sum(s, e, s, e);
  e += f;
  return XReal::renorm(s, e);
}

inline XReal operator-(const XReal& a, const XReal& b) { return a + (-b); }

inline XReal operator*(const XReal& a, const XReal& b) {
  double p, e;
  detail::two_prod(a.hi, b.hi, p, e);
  e += a.hi * b.lo + a.lo * b.hi;
  return XReal::renorm(p, e);
}

inline XReal operator*(const XReal& a, double b) {
  double p, e;
  detail::two_prod(a.hi, b, p, e);
  e += a.lo * b;
  return XReal::renorm(p, e);
}
inline XReal operator*(double a, const XReal& b) { return b * a; }

inline XReal operator/(const XReal& a, const XReal& b) {
  if (b.hi == 0.0) throw domain_error("xprec: division by zero");
  double q1 = a.hi / b.hi;
  XReal r = a - b * q1;
  double q2 = r.hi / b.hi;
  r = r - b * q2;
  double q3 = r.hi / b.hi;
  XReal q = XReal::renorm(q1, q2);
  return q + XReal(q3);
}

inline XReal& operator+=(XReal& a, const XReal& b) { return a = a + b; }
inline XReal& operator-=(XReal& a, const XReal& b) { return a = a - b; }
inline XReal& operator*=(XReal& a, const XReal& b) { return a = a * b; }
inline XReal& operator/=(XReal& a, const XReal& b) { return a = a / b; }

inline bool operator==(const XReal& a, const XReal& b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator<(const XReal& a, const XReal& b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const XReal& a, const XReal& b) { return b < a; }
inline bool operator<=(const XReal& a, const XReal& b) { return !(b < a); }
inline bool operator>=(const XReal& a, const XReal& b) { return !(a < b); }

inline XReal abs(const XReal& a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }
inline bool signbit(const XReal& a) { return std::signbit(a.hi); }

inline XReal sqr(const XReal& a) {
  double p, e;
  detail::two_prod(a.hi, a.hi, p, e);
  e += 2.0 * a.hi * a.lo;
  return XReal::renorm(p, e);
}

inline XReal ldexp(const XReal& a, int k) { return {std::ldexp(a.hi, k), std::ldexp(a.lo, k)}; }

inline XReal floor(const XReal& a) {
  double h = std::floor(a.hi);
  if (h != a.hi) return XReal(h);
  return XReal::renorm(h, std::floor(a.lo));
}

inline XReal nearbyint(const XReal& a) {
  double h = std::nearbyint(a.hi);
  if (h == a.hi) return XReal::renorm(h, std::nearbyint(a.lo));
  if (std::fabs(h - a.hi) == 0.5) {
    // tie on hi alone; lo decides
    if (a.lo > 0.0 && h < a.hi) h += 1.0;
    if (a.lo < 0.0 && h > a.hi) h -= 1.0;
  }
  return XReal(h);
}

inline XReal sqrt(const XReal& a) {
  if (a.hi < 0.0) throw domain_error("xprec: sqrt of negative");
  if (a.hi == 0.0) return XReal(0.0);
  double x = 1.0 / std::sqrt(a.hi);
  double ax = a.hi * x;
  XReal r = a - sqr(XReal(ax));
  return XReal(ax) + XReal(r.hi * (x * 0.5));
}

namespace xconst {
inline const XReal pi{3.141592653589793116e+00, 1.224646799147353207e-16};
inline const XReal two_pi{6.283185307179586232e+00, 2.449293598294706414e-16};
inline const XReal half_pi{1.570796326794896558e+00, 6.123233995736766036e-17};
inline const XReal ln2{6.931471805599452862e-01, 2.319046813846299558e-17};
inline const XReal e{2.718281828459045091e+00, 1.445646891729250158e-16};
inline const XReal sqrt_pi{1.772453850905516e+00, -7.666586499825799e-17};
}  // namespace xconst

inline XReal exp(const XReal& a) {
  if (a.hi > 709.0) throw range_error("xprec: exp overflow");
  if (a.hi < -745.0) return XReal(0.0);
  if (a.hi == 0.0) return XReal(1.0);
  double k = std::nearbyint(a.hi / xconst::ln2.hi);
  XReal r = a - xconst::ln2 * k;
  r = ldexp(r, -10);
  // exp(r) - 1 by Taylor, |r| < 3.4e-4
  XReal term = r, s = r;
  for (int n = 2; n < 12; ++n) {
    term = term * r / XReal(n);
    s += term;
    if (std::fabs(term.hi) < 1e-36) break;
  }
  for (int i = 0; i < 10; ++i) s = ldexp(s, 1) + sqr(s);
  s += XReal(1.0);
  return ldexp(s, static_cast<int>(k));
}

inline XReal log(const XReal& a) {
  if (a.hi <= 0.0) throw domain_error("xprec: log of non-positive");
  XReal x(std::log(a.hi));
  // one Newton step on exp(x) = a doubles the 53-bit start
  x = x + a * exp(-x) - XReal(1.0);
  return x;
}

namespace detail {

// sin and cos by Taylor series for |r| <= pi/4.
inline void sincos_reduced(const XReal& r, XReal& s, XReal& c) {
  XReal r2 = sqr(r);
  XReal ts = r, tc = XReal(1.0);
  s = ts;
  c = tc;
  for (int n = 1; n < 20; ++n) {
    ts = -ts * r2 / XReal(static_cast<double>((2 * n) * (2 * n + 1)));
    tc = -tc * r2 / XReal(static_cast<double>((2 * n - 1) * (2 * n)));
    s += ts;
    c += tc;
    if (std::fabs(ts.hi) < 1e-34 && std::fabs(tc.hi) < 1e-34) break;
  }
}

}  // namespace detail

inline void sincos(const XReal& a, XReal& s, XReal& c) {
  if (!std::isfinite(a.hi) || std::fabs(a.hi) > 1e15) throw range_error("xprec: sincos argument too large");
  XReal k2 = nearbyint(a / xconst::two_pi);
  XReal r = a - xconst::two_pi * k2;
  double q = std::nearbyint(r.hi / xconst::half_pi.hi);
  r = r - xconst::half_pi * q;
  XReal sr, cr;
  detail::sincos_reduced(r, sr, cr);
  int iq = static_cast<int>(q) & 3;
  switch (iq) {
    case 0: s = sr; c = cr; break;
    case 1: s = cr; c = -sr; break;
    case 2: s = -sr; c = -cr; break;
    default: s = -cr; c = sr; break;
  }
}

inline XReal sin(const XReal& a) { XReal s, c; sincos(a, s, c); return s; }
inline XReal cos(const XReal& a) { XReal s, c; sincos(a, s, c); return c; }

inline XReal atan2(const XReal& y, const XReal& x) {
  if (x.hi == 0.0 && y.hi == 0.0) return XReal(std::atan2(y.hi, x.hi));
  XReal th(std::atan2(y.hi, x.hi));
  XReal r = sqrt(sqr(x) + sqr(y));
  XReal xx = x / r, yy = y / r;
  XReal s, c;
  sincos(th, s, c);
  if (std::fabs(xx.hi) > std::fabs(yy.hi))
    th = th + (yy - s) / c;
  else
    th = th - (xx - c) / s;
  return th;
}

// Integer power by binary exponentiation.
inline XReal pow(XReal b, int n) {
  if (n < 0) return XReal(1.0) / pow(b, -n);
  XReal r(1.0);
  while (n) {
    if (n & 1) r *= b;
    b = sqr(b);
    n >>= 1;
  }
  return r;
}

struct XComplex {
  XReal re, im;
  XComplex() = default;
  XComplex(const XReal& r) : re(r), im(0.0) {}
  XComplex(double r) : re(r), im(0.0) {}
  XComplex(const XReal& r, const XReal& i) : re(r), im(i) {}
  XComplex(std::complex<double> c) : re(c.real()), im(c.imag()) {}
  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
};

inline XComplex from_double(std::complex<double> c) { return XComplex(c); }
inline std::complex<double> to_double(const XComplex& x) { return x.to_complex(); }

inline XComplex conj(const XComplex& a) { return {a.re, -a.im}; }
inline XComplex operator-(const XComplex& a) { return {-a.re, -a.im}; }
inline XComplex operator+(const XComplex& a, const XComplex& b) { return {a.re + b.re, a.im + b.im}; }
inline XComplex operator-(const XComplex& a, const XComplex& b) { return {a.re - b.re, a.im - b.im}; }
inline XComplex operator*(const XComplex& a, const XComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline XComplex operator*(const XComplex& a, const XReal& b) { return {a.re * b, a.im * b}; }
inline XComplex operator*(const XReal& b, const XComplex& a) { return {a.re * b, a.im * b}; }
inline XComplex operator/(const XComplex& a, const XReal& b) { return {a.re / b, a.im / b}; }

// Smith's algorithm: scale by the larger component of b.
inline XComplex operator/(const XComplex& a, const XComplex& b) {
  if (b.re.hi == 0.0 && b.im.hi == 0.0) throw domain_error("xprec: complex division by zero");
  if (std::fabs(b.re.hi) >= std::fabs(b.im.hi)) {
    XReal r = b.im / b.re;
    XReal d = b.re + b.im * r;
    return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
  }
  XReal r = b.re / b.im;
  XReal d = b.re * r + b.im;
  return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
}

inline XComplex& operator+=(XComplex& a, const XComplex& b) { return a = a + b; }
inline XComplex& operator-=(XComplex& a, const XComplex& b) { return a = a - b; }
inline XComplex& operator*=(XComplex& a, const XComplex& b) { return a = a * b; }
inline XComplex& operator/=(XComplex& a, const XComplex& b) { return a = a / b; }

inline bool operator==(const XComplex& a, const XComplex& b) { return a.re == b.re && a.im == b.im; }

enum class XOp { add, sub, mul, div };

inline XComplex x_arith(XOp kind, const XComplex& a, const XComplex& b) {
  switch (kind) {
    case XOp::add: return a + b;
    case XOp::sub: return a - b;
    case XOp::mul: return a * b;
    default: return a / b;
  }
}

inline XReal norm(const XComplex& a) { return sqr(a.re) + sqr(a.im); }

inline XReal abs(const XComplex& a) {
  double s = std::max(std::fabs(a.re.hi), std::fabs(a.im.hi));
  if (s == 0.0) return XReal(0.0);
  // power-of-two scaling keeps the squares in range
  int e = std::ilogb(s);
  XReal r = ldexp(a.re, -e), i = ldexp(a.im, -e);
  return ldexp(sqrt(sqr(r) + sqr(i)), e);
}

inline double absd(const XComplex& a) { return std::hypot(a.re.to_double(), a.im.to_double()); }

inline XComplex x_exp(const XComplex& z) {
  if (z.re.hi > 700.0) throw range_error("xprec: exp overflow");
  if (z.im.hi == 0.0 && z.im.lo == 0.0) return {exp(z.re), z.im};
  XReal m = exp(z.re), s, c;
  sincos(z.im, s, c);
  return {m * c, m * s};
}

// Principal root; Re >= 0 and the sign of Im follows Im z (so -x+0i -> +i).
inline XComplex x_sqrt(const XComplex& z) {
  if (z.re.hi == 0.0 && z.im.hi == 0.0) return {XReal(0.0), z.im};
  XReal r = abs(z);
  if (!signbit(z.re)) {
    XReal t = sqrt(ldexp(r + z.re, -1));
    return {t, z.im / ldexp(t, 1)};
  }
  XReal t = sqrt(ldexp(r - z.re, -1));
  XReal re = abs(z.im) / ldexp(t, 1);
  return {re, signbit(z.im) ? -t : t};
}

// Principal logarithm, Im in (-pi, pi]; -x-0i gives -pi.
inline XComplex x_log(const XComplex& z) {
  return {log(abs(z)), atan2(z.im, z.re)};
}

// Principal power z^a for real a.
inline XComplex x_pow(const XComplex& z, const XReal& a) {
  if (z.re.hi == 0.0 && z.im.hi == 0.0) {
    if (a.hi > 0.0) return XComplex(0.0);
    throw domain_error("xprec: zero to non-positive power");
  }
  XComplex l = x_log(z);
  return x_exp(l * a);
}

inline XComplex x_pow(XComplex b, int n) {
  if (n < 0) return XComplex(1.0) / x_pow(b, -n);
  XComplex r(1.0);
  while (n) {
    if (n & 1) r *= b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

}  // namespace fmg

// to_string(x, digits): scientific notation, e.g. "-1.2345e-05".
// parse_xreal(s): inverse of to_string, any plain decimal literal.
#include "xprec_io.ipp"
