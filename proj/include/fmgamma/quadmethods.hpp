#pragma once
// Evaluators that work on the integral itself: local Taylor expansions over
// subintervals, a Fourier expansion of the algebraic kernel, Gauss-Jacobi
// quadrature and cubic Hermite splines.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "errors.hpp"
#include "result.hpp"
#include "xprec.hpp"

namespace fmg {

// N subintervals of [0,1] with half-width delta = 1/(2N) and centers
// (2l-1) delta, l = 1..N.
struct SubintervalConfig {
  int N = 20;
  double delta() const { return 0.5 / N; }
  double center(int l) const { return (2.0 * l - 1.0) * delta(); }
};

namespace detail {

inline void check_cfg(const SubintervalConfig& cfg, const char* who) {
  if (cfg.N < 1) throw domain_error(std::string(who) + ": N < 1");
}

// Coefficients of the even Hermite polynomials in powers of x^2:
// H_n(x) = sum_j h[n/2][j] x^{2j}, n = 0, 2, ..., 32.
inline const std::array<std::array<double, 17>, 17>& even_hermite_coeffs() {
  static const auto table = [] {
    std::array<std::array<double, 17>, 17> h{};
    // H_{k+1} = 2x H_k - 2k H_{k-1} on full coefficient vectors
    std::vector<double> prev(34, 0.0), cur(34, 0.0), next(34, 0.0);
    prev[0] = 1.0;             // H_0
    cur[1] = 2.0;              // H_1
    h[0][0] = 1.0;
    for (int k = 1; k < 32; ++k) {
      std::fill(next.begin(), next.end(), 0.0);
      for (int i = 0; i < 33; ++i) {
        next[i + 1] += 2.0 * cur[i];
        next[i] -= 2.0 * k * prev[i];
      }
      prev.swap(cur);
      cur.swap(next);
      if ((k + 1) % 2 == 0)
        for (int j = 0; j <= (k + 1) / 2; ++j) h[(k + 1) / 2][j] = cur[2 * j];
    }
    return h;
  }();
  return table;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace detail

// z^{n/2} H_n(sqrt(z) t) for even n, as a polynomial in zt2 = z t^2.
// Needs z as well: every monomial carries z^{n/2} in front of (z t^2)^j.
inline cplx even_scaled_hermite(int n, cplx z, cplx zt2) {
  if (n < 0 || n > 32 || n % 2) throw domain_error("even_scaled_hermite: n must be even in [0, 32]");
  const auto& h = detail::even_hermite_coeffs()[static_cast<size_t>(n / 2)];
  cplx p = 0.0;
  for (int j = n / 2; j >= 0; --j) p = p * zt2 + h[static_cast<size_t>(j)];
  cplx zp = 1.0;
  for (int j = 0; j < n / 2; ++j) zp *= z;
  return zp * p;
}

// F_0 by Taylor expansion of exp(-z t^2) about each subinterval center,
// keeping even orders up to n_max.
inline SeriesResult hermite_local_taylor(cplx z, const SubintervalConfig& cfg, int n_max) {
  detail::check_cfg(cfg, "hermite_local_taylor");
  if (n_max < 0 || n_max > 30 || n_max % 2) throw domain_error("hermite_local_taylor: n_max must be even in [0, 30]");
  return detail::reflect(z, [&](cplx z) {
    const double d = cfg.delta();
    // Delta^n / (n+1)!; the overall 2 Delta becomes a division by N
    std::vector<double> coef;
    for (int n = 0; n <= n_max + 2; n += 2) coef.push_back(std::pow(d, n) / detail::factorial(n + 1));
    cplx sum = 0.0;
    double abs_sum = 0.0, next = 0.0;
    for (int l = 1; l <= cfg.N; ++l) {
      const double t = cfg.center(l);
      const cplx zt2 = z * (t * t);
      const cplx e = std::exp(-zt2);
      cplx inner = 0.0;
      double abs_inner = 0.0;
      for (int n = 0; n <= n_max; n += 2) {
        cplx term = coef[static_cast<size_t>(n / 2)] * even_scaled_hermite(n, z, zt2);
        inner += term;
        abs_inner += std::abs(term);
      }
      double ae = std::abs(e);
      sum += e * inner;
      abs_sum += ae * abs_inner;
      next += ae * coef.back() * std::abs(even_scaled_hermite(n_max + 2, z, zt2));
    }
    SeriesResult r;
    r.value = sum / static_cast<double>(cfg.N);
    r.terms_used = cfg.N * (n_max / 2 + 1);
    double abs_err = (2.0 * next + 4.0 * kEps * abs_sum * (n_max / 2 + 2)) / cfg.N;
    r.error_estimate = detail::rel_estimate(abs_err, r.value);
    return r;
  });
}

// The same truncated sum in double-double, so that its truncation error can
// be seen below the binary64 rounding level.
inline XComplex hermite_local_taylor_x(cplx z, const SubintervalConfig& cfg, int n_max) {
  detail::check_cfg(cfg, "hermite_local_taylor_x");
  if (n_max < 0 || n_max > 16 || n_max % 2) throw domain_error("hermite_local_taylor_x: n_max must be even in [0, 16]");
  const XComplex zx(z);
  const XReal d = XReal(1.0) / XReal(2.0 * cfg.N);
  std::vector<XReal> coef;
  XReal dp(1.0), fact(1.0);
  for (int n = 0; n <= n_max; n += 2) {
    if (n > 0) {
      dp = dp * d * d;
      fact = fact * XReal(static_cast<double>(n)) * XReal(n + 1.0);
    }
    coef.push_back(dp / fact);
  }
  XComplex sum(0.0);
  for (int l = 1; l <= cfg.N; ++l) {
    const XReal t = XReal(2.0 * l - 1.0) * d;
    const XComplex zt2 = zx * (t * t);
    XComplex inner(0.0), zp(1.0);
    for (int n = 0; n <= n_max; n += 2) {
      const auto& h = detail::even_hermite_coeffs()[static_cast<size_t>(n / 2)];
      XComplex p(0.0);
      for (int j = n / 2; j >= 0; --j) p = p * zt2 + XComplex(h[static_cast<size_t>(j)]);
      inner += coef[static_cast<size_t>(n / 2)] * zp * p;
      zp = zp * zx;
    }
    sum += x_exp(-zt2) * inner;
  }
  return sum / XReal(static_cast<double>(cfg.N));
}

namespace detail {

// int_{-1}^{1} v^k exp(-x v) dv / Delta-free brackets of the algebraic
// Taylor sum, for k = 0, 1, 2:
//   B0 = e^{-x} - e^{x}
//   B1 = e^{-x}(1+x) - e^{x}(1-x)
//   B2 = e^{-x}(x^2/2+x+1) - e^{x}(x^2/2-x+1)
// Series near x = 0, where the exponential forms cancel.
inline void algebraic_brackets(cplx x, cplx& b0, cplx& b1, cplx& b2) {
  if (std::abs(x) >= 0.5) {
    cplx ep = std::exp(x), em = std::exp(-x);
    b0 = em - ep;
    b1 = em * (1.0 + x) - ep * (1.0 - x);
    b2 = em * (0.5 * x * x + x + 1.0) - ep * (0.5 * x * x - x + 1.0);
    return;
  }
  // x^{2j+1}/(2j+1)! with coefficients -2, 4j, -2j(2j-1)
  cplx x2 = x * x, p = x;
  b0 = b1 = b2 = 0.0;
  for (int j = 0; j < 30; ++j) {
    if (j > 0) p *= x2 / ((2.0 * j) * (2.0 * j + 1.0));
    b0 += -2.0 * p;
    b1 += (4.0 * j) * p;
    b2 += (-2.0 * j * (2.0 * j - 1.0)) * p;
    if (std::abs(p) < 1e-18 * std::abs(x)) break;
  }
}

// Second-order Riemann sum; with n_patch >= 0 the l = 1 subinterval is
// replaced by the exponential series of int_0^{2 Delta}.
inline cplx algebraic_sum(int m, cplx z, int N, int n_patch, double* abs_sum) {
  const double d = 0.5 / N;
  const double c1 = m - 0.5, c2 = (m - 0.5) * (m - 1.5);
  cplx b0, b1, b2;
  algebraic_brackets(z * d, b0, b1, b2);
  cplx sum = 0.0;
  double as = 0.0;
  for (int l = n_patch >= 0 ? 2 : 1; l <= N; ++l) {
    const double u = (2.0 * l - 1.0) * d;
    const cplx zu = z * u;
    cplx br = b0 + c1 / zu * b1 + c2 / (zu * zu) * b2;
    cplx term = std::exp(-zu) * std::pow(u, m - 0.5) * br;
    sum += term;
    as += std::abs(term);
  }
  sum *= -1.0 / (2.0 * z);
  as /= 2.0 * std::abs(z);
  if (n_patch >= 0) {
    cplx x = -2.0 * z * d, p = 1.0, s = 0.0;
    for (int n = 0; n <= n_patch; ++n) {
      if (n > 0) p *= x / static_cast<double>(n);
      s += p / (m + 0.5 + n);
    }
    cplx patch = 0.5 * std::pow(2.0 * d, m + 0.5) * s;
    sum += patch;
    as += std::abs(patch);
  }
  if (abs_sum) *abs_sum = as;
  return sum;
}

inline SeriesResult algebraic_common(int m, cplx z, const SubintervalConfig& cfg, int n_patch) {
  return reflect(z, [&](cplx z) {
    double as = 0.0;
    SeriesResult r;
    r.value = algebraic_sum(m, z, cfg.N, n_patch, &as);
    r.terms_used = cfg.N;
    double diff = 1e300;
    if (cfg.N >= 2) diff = std::abs(r.value - algebraic_sum(m, z, cfg.N / 2, n_patch, nullptr));
    // unpatched, the first subinterval error goes like Delta^{m+1/2}; halving
    // N then changes it by only (2^{m+1/2} - 1) times itself
    if (n_patch < 0) diff *= std::max(1.0, 1.0 / (std::pow(2.0, m + 0.5) - 1.0));
    r.error_estimate = rel_estimate(diff + 8.0 * kEps * as, r.value);
    return r;
  });
}

}  // namespace detail

// Second-order Taylor expansion of u^{m-1/2} about the subinterval centers,
// integrated against exp(-z u) in closed form.
inline SeriesResult algebraic_taylor(int m, cplx z, const SubintervalConfig& cfg) {
  detail::check_cfg(cfg, "algebraic_taylor");
  if (m < 0) throw domain_error("algebraic_taylor: m < 0");
  if (z == 0.0) throw domain_error("algebraic_taylor: z == 0");
  return detail::algebraic_common(m, z, cfg, -1);
}

// As algebraic_taylor, with the first subinterval [0, 2 Delta] done by the
// power series of the exponential up to (-2 z Delta)^{n_patch}.
inline SeriesResult algebraic_taylor_patched(int m, cplx z, const SubintervalConfig& cfg, int n_patch) {
  detail::check_cfg(cfg, "algebraic_taylor_patched");
  if (m < 0) throw domain_error("algebraic_taylor_patched: m < 0");
  if (n_patch < 0 || n_patch > 8) throw domain_error("algebraic_taylor_patched: n_patch must be in [0, 8]");
  if (z == 0.0) throw domain_error("algebraic_taylor_patched: z == 0");
  return detail::algebraic_common(m, z, cfg, n_patch);
}

// Cosine coefficients of the 4-periodic carrier of u^{m-1/2}.
struct FourierTable {
  int m = 0;
  int N = 0;
  std::vector<double> c;        // c[i] belongs to l = 2i + 1
  double max_deviation = 0.0;   // of the truncated cosine sum on [0,1]
};

namespace detail {

// Carrier: u^{m-1/2} on [0,1], 2 - (2-u)^{m-1/2} on [1,2], even about 0
// and about 2, period 4.
inline double fourier_carrier(int m, double u) {
  u = std::fmod(u, 4.0);
  if (u < 0.0) u += 4.0;
  if (u > 2.0) u = 4.0 - u;
  const double e = m - 0.5;
  return u <= 1.0 ? std::pow(u, e) : 2.0 - std::pow(2.0 - u, e);
}

inline double fourier_reconstruct(const FourierTable& t, double u) {
  double s = 1.0;
  for (size_t i = 0; i < t.c.size(); ++i) s += t.c[i] * std::cos((2.0 * i + 1.0) * u * M_PI / 2.0);
  return s;
}

// (1 - e^{-w}) / w
inline cplx phi1(cplx w) {
  if (std::abs(w) < 0.5) {
    cplx p = 1.0, s = 0.0;
    for (int n = 0; n < 30; ++n) {
      if (n > 0) p *= -w / static_cast<double>(n + 1);
      s += p;
      if (std::abs(p) < 1e-18) break;
    }
    return s;
  }
  return (1.0 - std::exp(-w)) / w;
}

// int_0^1 cos(l pi u / 2) exp(-z u) du for odd l. The rational form has a
// removable 0/0 at 2z = +-i l pi, where the two exponential halves are used.
inline cplx cos_moment(int l, cplx z, cplx ez) {
  const double lp = l * M_PI;
  const cplx i(0.0, 1.0);
  if (std::min(std::abs(2.0 * z - i * lp), std::abs(2.0 * z + i * lp)) < 1.0)
    return 0.5 * (phi1(z - i * (lp / 2.0)) + phi1(z + i * (lp / 2.0)));
  const double sg = ((l / 2) % 2) ? -1.0 : 1.0;
  return 2.0 * (2.0 * z + sg * lp * ez) / (4.0 * z * z + lp * lp);
}

}  // namespace detail

// Discrete cosine transform of the carrier on N points; odd l <= N/2 kept.
inline FourierTable fourier_table(int m, int N) {
  if (m < 0) throw domain_error("fourier_table: m < 0");
  if (N < 64 || N > 4096 || (N & (N - 1))) throw domain_error("fourier_table: N must be a power of two in [64, 4096]");
  FourierTable t;
  t.m = m;
  t.N = N;
  for (int j = 1; j <= N / 2; j += 2) {
    double s = (j % 2) ? -1.0 : 1.0;
    for (int k = 1; k <= N / 2 - 1; ++k) s += detail::fourier_carrier(m, 4.0 * k / N) * std::cos(2.0 * M_PI * j * k / N);
    t.c.push_back(4.0 / N * s);
  }
  double dev = 0.0;
  const int pts = 4000;
  for (int i = 0; i <= pts; ++i) {
    double u = static_cast<double>(i) / pts;
    if (m == 0 && i == 0) { dev = INFINITY; continue; }
    dev = std::max(dev, std::fabs(detail::fourier_reconstruct(t, u) - std::pow(u, m - 0.5)));
  }
  t.max_deviation = dev;
  return t;
}

// Maximum of |1 + sum c_l cos(l pi u/2) - u^{m-1/2}| over `points` + 1
// equidistant u in [0,1] (u = 0 skipped for m = 0).
inline double fourier_max_deviation(const FourierTable& t, int points) {
  if (points < 1) throw domain_error("fourier_max_deviation: points < 1");
  double dev = 0.0;
  for (int i = t.m == 0 ? 1 : 0; i <= points; ++i) {
    double u = static_cast<double>(i) / points;
    dev = std::max(dev, std::fabs(detail::fourier_reconstruct(t, u) - std::pow(u, t.m - 0.5)));
  }
  return dev;
}

// F_m = 1/2 int_0^1 u^{m-1/2} exp(-z u) du with the kernel replaced by its
// cosine expansion. The error bound is max_deviation * int |e^{-zu}| / 2.
inline SeriesResult fourier_eval(int m, cplx z, const FourierTable& table) {
  if (table.m != m) throw domain_error("fourier_eval: table built for another m");
  if (z == 0.0) {
    SeriesResult r;
    r.value = 1.0 / (2.0 * m + 1.0);
    r.error_estimate = kEps;
    if (m == 0) r.flags |= kFlagSingularCarrier;
    return r;
  }
  return detail::reflect(z, [&](cplx z) {
    const cplx ez = std::exp(-z);
    cplx s = detail::phi1(z);
    double as = std::abs(s);
    for (size_t i = 0; i < table.c.size(); ++i) {
      cplx t = table.c[i] * detail::cos_moment(2 * static_cast<int>(i) + 1, z, ez);
      s += t;
      as += std::abs(t);
    }
    SeriesResult r;
    r.value = 0.5 * s;
    r.terms_used = static_cast<int>(table.c.size()) + 1;
    const double x = z.real();
    const double int_abs = std::fabs(x) < 1e-8 ? 1.0 : -std::expm1(-x) / x;
    r.error_estimate = detail::rel_estimate(0.5 * table.max_deviation * int_abs + 4.0 * kEps * as, r.value);
    if (m == 0) r.flags |= kFlagSingularCarrier;
    return r;
  });
}

enum class QuadKind { GaussJacobi, GaussLegendre };

// n-point rule for int_0^1 x^k f(x) dx ~ sum w_i f(x_i).
struct QuadRule {
  QuadKind kind = QuadKind::GaussJacobi;
  int k = 0;
  int n = 0;
  std::vector<double> x, w;
  std::vector<XReal> x_x, w_x;     // same rule in double-double
  std::vector<double> x_c, w_c;    // the (n-1)-point rule, for error estimates
};

namespace detail {

// P_d^{(alpha,0)}(y) and P_{d-1} by the three-term recurrence.
template <class T>
void jacobi_pair(int d, int alpha, const T& y, T& pd, T& pd1) {
  T p0(1.0), p1 = (T(alpha + 2.0) * y + T(static_cast<double>(alpha))) / T(2.0);
  if (d == 0) { pd = p0; pd1 = T(0.0); return; }
  for (int n = 2; n <= d; ++n) {
    const double a = alpha;
    double c0 = 2.0 * n * (n + a) * (2.0 * n + a - 2.0);
    double c1 = 2.0 * n + a - 1.0;
    double c2 = (2.0 * n + a) * (2.0 * n + a - 2.0);
    double c3 = 2.0 * (n + a - 1.0) * (n - 1.0) * (2.0 * n + a);
    T p2 = (T(c1) * (T(c2) * y + T(a * a)) * p1 - T(c3) * p0) / T(c0);
    p0 = p1;
    p1 = p2;
  }
  pd = p1;
  pd1 = p0;
}

inline double jacobi_value(int d, int alpha, double y) {
  double pd, pd1;
  jacobi_pair(d, alpha, y, pd, pd1);
  return pd;
}

// Roots of P_d in y, ascending, for d = 1..n; interlacing brackets come from
// the roots of P_{d-1}.
inline std::vector<std::vector<double>> jacobi_root_ladder(int n, int alpha) {
  std::vector<std::vector<double>> roots(static_cast<size_t>(n + 1));
  for (int d = 1; d <= n; ++d) {
    const auto& prev = roots[static_cast<size_t>(d - 1)];
    std::vector<double> edges{-1.0};
    edges.insert(edges.end(), prev.begin(), prev.end());
    edges.push_back(1.0);
    auto& cur = roots[static_cast<size_t>(d)];
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
      double lo = edges[i], hi = edges[i + 1];
      double flo = jacobi_value(d, alpha, lo), fhi = jacobi_value(d, alpha, hi);
      if (flo == 0.0) { cur.push_back(lo); continue; }
      if (fhi == 0.0) { cur.push_back(hi); continue; }
      if ((flo < 0.0) == (fhi < 0.0)) throw numeric_error("gauss_jacobi_rule: root bracketing failed");
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = jacobi_value(d, alpha, mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((fm < 0.0) == (flo < 0.0)) { lo = mid; flo = fm; } else { hi = mid; }
      }
      cur.push_back(0.5 * (lo + hi));
    }
  }
  return roots;
}

// Newton polish in double-double with
// (2n+a)(1-y^2) P_n' = n (a - (2n+a) y) P_n + 2n(n+a) P_{n-1}.
inline XReal jacobi_newton(int n, int alpha, double y0) {
  XReal y(y0);
  for (int it = 0; it < 4; ++it) {
    XReal pn, pn1;
    jacobi_pair(n, alpha, y, pn, pn1);
    const double a = alpha;
    XReal num = XReal(static_cast<double>(n)) * (XReal(a) - XReal(2.0 * n + a) * y) * pn + XReal(2.0 * n * (n + a)) * pn1;
    XReal den = XReal(2.0 * n + a) * (XReal(1.0) - y * y);
    XReal dp = num / den;
    if (dp.hi == 0.0) break;
    y = y - pn / dp;
  }
  return y;
}

template <class T>
T christoffel_inverse(int n, int alpha, const T& y) {
  T p0(1.0), p1 = (T(alpha + 2.0) * y + T(static_cast<double>(alpha))) / T(2.0);
  T s = T(alpha + 1.0) * p0 * p0;
  for (int j = 1; j < n; ++j) {
    s = s + T(alpha + 2.0 * j + 1.0) * p1 * p1;
    const int m = j + 1;
    const double a = alpha;
    double c0 = 2.0 * m * (m + a) * (2.0 * m + a - 2.0);
    double c1 = 2.0 * m + a - 1.0;
    double c2 = (2.0 * m + a) * (2.0 * m + a - 2.0);
    double c3 = 2.0 * (m + a - 1.0) * (m - 1.0) * (2.0 * m + a);
    T p2 = (T(c1) * (T(c2) * y + T(a * a)) * p1 - T(c3) * p0) / T(c0);
    p0 = p1;
    p1 = p2;
  }
  return s;
}

}  // namespace detail

// Gauss-Jacobi rule with abscissae at the zeros of P_n^{(k,0)}(1-2t) and
// 1/w_i = sum_{j<n} (k+2j+1) P_j(1-2t_i)^2.
inline QuadRule gauss_jacobi_rule(int n, int k) {
  if (n < 1 || n > 64) throw domain_error("gauss_jacobi_rule: need 1 <= n <= 64");
  if (k < 0 || k > 16) throw domain_error("gauss_jacobi_rule: need 0 <= k <= 16");
  QuadRule r;
  r.kind = k == 0 ? QuadKind::GaussLegendre : QuadKind::GaussJacobi;
  r.k = k;
  r.n = n;
  auto ladder = detail::jacobi_root_ladder(n, k);
  // descending y is ascending t
  const auto& ys = ladder[static_cast<size_t>(n)];
  for (auto it = ys.rbegin(); it != ys.rend(); ++it) {
    XReal y = detail::jacobi_newton(n, k, *it);
    XReal t = (XReal(1.0) - y) / XReal(2.0);
    XReal w = XReal(1.0) / detail::christoffel_inverse(n, k, y);
    r.x_x.push_back(t);
    r.w_x.push_back(w);
    r.x.push_back(t.to_double());
    r.w.push_back(w.to_double());
  }
  if (n >= 2) {
    const auto& yc = ladder[static_cast<size_t>(n - 1)];
    for (auto it = yc.rbegin(); it != yc.rend(); ++it) {
      r.x_c.push_back((1.0 - *it) / 2.0);
      r.w_c.push_back(1.0 / detail::christoffel_inverse(n - 1, k, *it));
    }
  }
  return r;
}

// F_m ~ sum w_i exp(-z x_i^2) with a rule for the weight x^{2m}.
inline SeriesResult gauss_jacobi_eval(int m, cplx z, const QuadRule& rule) {
  if (rule.k != 2 * m) throw domain_error("gauss_jacobi_eval: rule weight exponent != 2m");
  return detail::reflect(z, [&](cplx z) {
    cplx s = 0.0;
    double as = 0.0;
    for (size_t i = 0; i < rule.x.size(); ++i) {
      cplx t = rule.w[i] * std::exp(-z * (rule.x[i] * rule.x[i]));
      s += t;
      as += std::abs(t);
    }
    double diff = 1e300;
    if (!rule.x_c.empty()) {
      cplx sc = 0.0;
      for (size_t i = 0; i < rule.x_c.size(); ++i) sc += rule.w_c[i] * std::exp(-z * (rule.x_c[i] * rule.x_c[i]));
      diff = std::abs(s - sc);
    }
    SeriesResult r;
    r.value = s;
    r.terms_used = rule.n;
    r.error_estimate = detail::rel_estimate(diff + 4.0 * kEps * as * (1.0 + std::abs(z)), s);
    return r;
  });
}

namespace detail {

inline cplx spline_sum(int m, cplx z, int N, double* abs_sum) {
  cplx s = 0.0;
  double as = 0.0;
  for (int j = 0; j < N; ++j) {
    const double a = static_cast<double>(j) / N, b = static_cast<double>(j + 1) / N, h = b - a;
    const cplx ea = std::exp(-z * (a * a)), eb = std::exp(-z * (b * b));
    if (m == 0) {
      cplx t = h / 6.0 * ((3.0 + z * b * h) * eb + (3.0 - z * a * h) * ea);
      s += t;
      as += std::abs(t) + h * (std::abs(eb) + std::abs(ea));
    } else {
      const double a2 = a * a, b2 = b * b;
      cplx cb = 2.0 * z * b2 * b2 - z * b2 * a2 + 8.0 * b2 + 5.0 * b * a - z * b * a2 * a + 2.0 * a2;
      cplx ca = 2.0 * z * a2 * a2 - z * b2 * a2 + 8.0 * a2 + 5.0 * b * a - z * b2 * b * a + 2.0 * b2;
      cplx t = h / 30.0 * (cb * eb + ca * ea);
      s += t;
      as += std::abs(t) + h / 30.0 * (std::abs(cb * eb) + std::abs(ca * ea));
    }
  }
  if (abs_sum) *abs_sum = as;
  return s;
}

}  // namespace detail

// Closed forms of the integral over piecewise cubic Hermite interpolants of
// exp(-z t^2) on knots j/N; only m = 0 and m = 1 have them.
inline SeriesResult spline_eval(int m, cplx z, int N) {
  if (m != 0 && m != 1) throw domain_error("spline_eval: only m = 0 and m = 1 are supported");
  if (N < 1) throw domain_error("spline_eval: N < 1");
  if (z == 0.0) {
    SeriesResult r;
    r.value = 1.0 / (2.0 * m + 1.0);
    r.terms_used = N + 1;
    r.error_estimate = kEps;
    return r;
  }
  return detail::reflect(z, [&](cplx z) {
    SeriesResult r;
    double as = 0.0;
    r.value = detail::spline_sum(m, z, N, &as);
    r.terms_used = N + 1;
    double diff = N >= 2 ? std::abs(r.value - detail::spline_sum(m, z, N / 2, nullptr)) : 1e300;
    double round = 8.0 * kEps * as;
    r.error_estimate = detail::rel_estimate(diff + round, r.value);
    return r;
  });
}

// int_a^b x^p f(x) dx for the cubic matching f and f' at both ends.
inline cplx moment_integral(int p, double a, double b, cplx fa, cplx fb, cplx da, cplx db) {
  if (!(a < b)) throw domain_error("moment_integral: need a < b");
  const double h = b - a;
  switch (p) {
    case 0:
      return h * (fa + fb) / 2.0 - h * h / 12.0 * (db - da);
    case 1:
      return h / 60.0 *
             (a * a * (2.0 * db - 3.0 * da) + a * (b * db + 9.0 * fb + 21.0 * fa + b * da) + 2.0 * b * b * da +
              21.0 * b * fb + 9.0 * b * fa - 3.0 * b * b * db);
    case 2:
      return h / 60.0 *
             (a * a * a * (db - 2.0 * da) + a * a * (b * db + 4.0 * fb + 16.0 * fa) +
              a * b * (b * da + 10.0 * fb + 10.0 * fa) + b * b * (4.0 * fa - 2.0 * b * db + 16.0 * fb + b * da));
    default:
      throw domain_error("moment_integral: p must be 0, 1 or 2");
  }
}

}  // namespace fmg
