#pragma once
// Helpers shared by the unit tests and the acceptance runner.
//
// quad_x is a brute-force reference: Gauss-Legendre on [0,1] in
// double-double, applied straight to the defining integral. It shares no
// code path with the library oracle (series and continued fractions), so
// agreement between the two is meaningful.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "fmgamma.hpp"

namespace fmtest {

using fmg::cplx;
using fmg::XComplex;
using fmg::XReal;

struct XRule {
  std::vector<XReal> t, w;  // on [0, 1]
};

// P_n(x) and P_n'(x) by the three-term recurrence.
inline void legendre_x(int n, const XReal& x, XReal& p, XReal& dp) {
  XReal p0(1.0), p1 = x;
  for (int k = 2; k <= n; ++k) {
    XReal p2 = (XReal(2 * k - 1) * x * p1 - XReal(k - 1) * p0) / XReal(k);
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = XReal(n) * (x * p1 - p0) / (x * x - XReal(1.0));
}

inline const XRule& gauss_legendre_x(int n) {
  static std::vector<XRule> cache(512);
  XRule& r = cache.at(static_cast<size_t>(n));
  if (!r.t.empty()) return r;
  r.t.resize(static_cast<size_t>(n));
  r.w.resize(static_cast<size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    XReal x(std::cos(M_PI * (i + 0.75) / (n + 0.5)));
    XReal p, dp;
    for (int it = 0; it < 8; ++it) {
      legendre_x(n, x, p, dp);
      x = x - p / dp;
    }
    legendre_x(n, x, p, dp);
    const XReal w = XReal(2.0) / ((XReal(1.0) - x * x) * dp * dp);
    // map [-1,1] -> [0,1]
    const size_t a = static_cast<size_t>(i), b = static_cast<size_t>(n - 1 - i);
    r.t[a] = (XReal(1.0) - x) * XReal(0.5);
    r.t[b] = (XReal(1.0) + x) * XReal(0.5);
    r.w[a] = r.w[b] = w * XReal(0.5);
  }
  return r;
}

// int_0^1 t^p e^{-z t^2} dt with an n-point rule.
inline XComplex quad_x(int p, const XComplex& z, int n = 200) {
  const XRule& r = gauss_legendre_x(n);
  XComplex s(0.0);
  for (size_t i = 0; i < r.t.size(); ++i) {
    const XReal t2 = r.t[i] * r.t[i];
    s += x_exp(-(z * t2)) * (r.w[i] * fmg::pow(r.t[i], p));
  }
  return s;
}

// Relative agreement in decimal digits between two extended values, capped at 32.
inline double agree_x(const XComplex& a, const XComplex& b) {
  const double den = fmg::abs(b).to_double();
  const double num = fmg::abs(a - b).to_double();
  if (num == 0.0) return 32.0;
  return std::min(32.0, -std::log10(num / den));
}

inline double digits(cplx approx, int m, cplx z) { return fmg::digits_of(approx, fmg::oracle_eval(m, z)); }

// Local maxima of a sampled curve, as abscissae.
inline std::vector<double> local_maxima(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> out;
  for (size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) out.push_back(x[i]);
  return out;
}

inline double nearest(const std::vector<double>& xs, double x0) {
  double best = 1e300;
  for (double x : xs)
    if (std::fabs(x - x0) < std::fabs(best - x0)) best = x;
  return best;
}

inline std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

inline double median(std::vector<double> v) {
  v = sorted(std::move(v));
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace fmtest
