#pragma once
// F_m through other special functions: Gautschi's rational Faddeeva
// approximation on Gauss-Hermite nodes, modified spherical Bessel functions,
// and Dijkstra's continued fraction for 1F1(a;b;z)/1F1(a;b+1;z).

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "errors.hpp"
#include "result.hpp"
#include "series.hpp"
#include "xprec.hpp"

namespace fmg {

inline constexpr double kSqrtPi = 1.7724538509055160273;

// ---------------------------------------------------------------- Hermite

struct HermiteRule {
  int n = 0;
  std::vector<double> t;       // ascending
  std::vector<double> lambda;
  std::vector<XReal> t_x, lambda_x;
  std::vector<double> t_c, lambda_c;  // the n-1 point rule, for error estimates
};

template <class T>
T hermite_value(int n, const T& x) {
  T h0(1.0), h1 = x * 2.0;
  if (n == 0) return h0;
  for (int k = 1; k < n; ++k) {
    T h2 = x * h1 * 2.0 - h0 * (2.0 * k);
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

// H_n/H_n' from the terminating continued fraction
//   rho_1 = 2x, rho_k = 2x - 2(k-1)/rho_{k-1},  H_n'/H_n = 2n/rho_n.
// Falls back to the direct ratio when a partial denominator vanishes.
template <class T>
T hermite_ratio(int n, const T& x) {
  T rho = x * 2.0;
  for (int k = 2; k <= n; ++k) {
    if (rho == T(0.0)) return hermite_value(n, x) / (hermite_value(n - 1, x) * (2.0 * n));
    rho = x * 2.0 - T(2.0 * (k - 1)) / rho;
  }
  return rho / T(2.0 * n);
}

namespace detail {

inline std::vector<std::vector<double>> hermite_root_ladder(int n) {
  std::vector<std::vector<double>> roots(static_cast<size_t>(n + 1));
  for (int d = 1; d <= n; ++d) {
    const double bound = std::sqrt(2.0 * d + 1.0) + 1.0;
    const auto& prev = roots[static_cast<size_t>(d - 1)];
    std::vector<double> edges{-bound};
    edges.insert(edges.end(), prev.begin(), prev.end());
    edges.push_back(bound);
    auto& cur = roots[static_cast<size_t>(d)];
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
      double lo = edges[i], hi = edges[i + 1];
      double flo = hermite_value(d, lo), fhi = hermite_value(d, hi);
      if (flo == 0.0) { cur.push_back(lo); continue; }
      if (fhi == 0.0) { cur.push_back(hi); continue; }
      if ((flo < 0.0) == (fhi < 0.0)) throw numeric_error("hermite_rule: root bracketing failed");
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = hermite_value(d, mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((fm < 0.0) == (flo < 0.0)) { lo = mid; flo = fm; } else { hi = mid; }
      }
      cur.push_back(0.5 * (lo + hi));
    }
  }
  return roots;
}

// Hofsommer's third order step x <- x - r (1 + x r), r = H_n/H_n'.
inline XReal hofsommer_polish(int n, double seed) {
  XReal x(seed);
  for (int it = 0; it < 50; ++it) {
    XReal r = hermite_ratio(n, x);
    XReal dx = r * (XReal(1.0) + x * r);
    x -= dx;
    if (std::fabs(dx.to_double()) <= 1e-17 * std::fabs(x.to_double()) + 1e-300) return x;
  }
  throw numeric_error("hermite_rule: no convergence for n = " + std::to_string(n));
}

// lambda = 2^{n-1} n! sqrt(pi) / (n^2 H_{n-1}(t)^2)
inline XReal hermite_weight(int n, const XReal& t) {
  XReal c = xconst::sqrt_pi;
  for (int k = 1; k <= n; ++k) c *= XReal(2.0 * k);
  c = c / XReal(2.0 * n * n);
  return c / sqr(hermite_value(n - 1, t));
}

}  // namespace detail

inline HermiteRule hermite_rule(int n) {
  if (n < 1 || n > 64) throw domain_error("hermite_rule: need 1 <= n <= 64");
  HermiteRule r;
  r.n = n;
  auto ladder = detail::hermite_root_ladder(n);
  for (double seed : ladder[static_cast<size_t>(n)]) {
    XReal t = detail::hofsommer_polish(n, seed);
    XReal w = detail::hermite_weight(n, t);
    r.t_x.push_back(t);
    r.lambda_x.push_back(w);
    r.t.push_back(t.to_double());
    r.lambda.push_back(w.to_double());
  }
  if (n >= 2) {
    for (double seed : ladder[static_cast<size_t>(n - 1)]) {
      XReal t = detail::hofsommer_polish(n - 1, seed);
      r.t_c.push_back(t.to_double());
      r.lambda_c.push_back(detail::hermite_weight(n - 1, t).to_double());
    }
  }
  return r;
}

namespace detail {

// w(zeta) ~ (i/pi) sum lambda_k / (zeta - t_k), nodes folded in +-t pairs.
inline cplx faddeeva_sum(cplx zeta, const std::vector<double>& t, const std::vector<double>& lambda) {
  const cplx z2 = zeta * zeta;
  cplx acc = 0.0, centre = 0.0;
  for (size_t k = 0; k < t.size(); ++k) {
    if (t[k] < 0.0) continue;
    if (t[k] == 0.0) {
      centre = lambda[k] / zeta;
      continue;
    }
    cplx den = z2 - t[k] * t[k];
    if (den == 0.0) throw domain_error("faddeeva: argument on a pole");
    acc += lambda[k] / den;
  }
  return cplx(0.0, 1.0 / M_PI) * (2.0 * zeta * acc + centre);
}

}  // namespace detail

inline cplx faddeeva(cplx zeta, const HermiteRule& rule) {
  if (!(zeta.imag() > 0.0)) throw domain_error("faddeeva: needs Im argument > 0");
  return detail::faddeeva_sum(zeta, rule.t, rule.lambda);
}

// F_0(z) = (1/2) sqrt(pi/z) [1 - e^{-z} w(i sqrt z)]. With flip_root the
// other square root is used; its argument lies in the lower half plane and
// is mapped back by w(-zeta) = 2 e^{-zeta^2} - w(zeta).
inline SeriesResult f0_via_faddeeva(cplx z, const HermiteRule& rule, bool flip_root = false) {
  if (z == 0.0) throw domain_error("f0_via_faddeeva: z == 0, use F_0(0) = 1");
  return detail::reflect(z, [&](cplx z) {
    const cplx s = std::sqrt(z);
    const cplx zeta(-s.imag(), s.real());
    if (!(zeta.imag() > 0.0)) throw domain_error("f0_via_faddeeva: z on the negative real axis");
    const cplx ez = std::exp(-z);
    auto eval = [&](const std::vector<double>& t, const std::vector<double>& lam) {
      const cplx w = detail::faddeeva_sum(zeta, t, lam);
      if (!flip_root) return 0.5 * kSqrtPi / s * (1.0 - ez * w);
      const cplx w_flip = 2.0 * std::exp(z) - w;  // w(-zeta)
      return 0.5 * kSqrtPi / (-s) * (1.0 - ez * w_flip);
    };
    SeriesResult r;
    r.value = eval(rule.t, rule.lambda);
    r.terms_used = rule.n;
    double diff = 1e300;
    if (!rule.t_c.empty()) diff = std::abs(r.value - eval(rule.t_c, rule.lambda_c));
    const cplx w = detail::faddeeva_sum(zeta, rule.t, rule.lambda);
    const double round = 0.5 * kSqrtPi / std::abs(s) * kEps * (1.0 + rule.n * std::abs(ez * w));
    r.error_estimate = detail::rel_estimate(diff + 4.0 * round, r.value);
    return r;
  });
}

// ---------------------------------------------------------------- Bessel

// T_n(z) = e^z z^n (z^{-1} d/dz)^n (sinh z / z) = e^z i_n(z), written with
// A = e^{2z} as
//   T_n = [A sum_k (-1)^k a_k z^{-k} + (-1)^{n+1} sum_k a_k z^{-k}] / (2z),
//   a_k = (n+k)! / (2^k k! (n-k)!).
struct BesselTermTable {
  static constexpr int kMaxN = 7;

  static double coeff(int n, int k) {
    double c = 1.0;
    for (int j = 1; j <= k; ++j) c *= static_cast<double>((n + j) * (n - j + 1)) / (2.0 * j);
    return c;
  }

  // abs_sum (optional) receives |A| sum + sum of the term magnitudes / |2z|
  static cplx term(int n, cplx z, double* abs_sum = nullptr) {
    if (n < 0 || n > kMaxN) throw domain_error("BesselTermTable: need 0 <= n <= 7");
    const cplx A = std::exp(2.0 * z), iz = 1.0 / z;
    cplx s1 = 0.0, s2 = 0.0, p = 1.0;
    double as = 0.0;
    for (int k = 0; k <= n; ++k, p *= iz) {
      const double a = coeff(n, k);
      s1 += (k % 2 ? -a : a) * p;
      s2 += a * p;
      as += a * std::abs(p);
    }
    const cplx inv2z = 0.5 * iz;
    if (abs_sum) *abs_sum = (std::abs(A) + 1.0) * as * std::abs(inv2z);
    return (A * s1 + (n % 2 ? 1.0 : -1.0) * s2) * inv2z;
  }
};

namespace detail {

// e^zeta i_k(zeta), k = 0..n_max, by Miller's downward recurrence
// i_{k-1} = i_{k+1} + (2k+1)/zeta i_k, normalised to i_0 = sinh zeta / zeta.
inline std::vector<cplx> bessel_terms_miller(int n_max, cplx zeta) {
  const int n_start = n_max + 8 + static_cast<int>(std::ceil(2.0 * std::abs(zeta)));
  std::vector<cplx> v(static_cast<size_t>(n_start + 2), 0.0);
  v[static_cast<size_t>(n_start)] = 1e-300;
  for (int k = n_start; k >= 1; --k) {
    v[static_cast<size_t>(k - 1)] = v[static_cast<size_t>(k + 1)] + (2.0 * k + 1.0) / zeta * v[static_cast<size_t>(k)];
    if (std::abs(v[static_cast<size_t>(k - 1)]) > 1e250)
      for (auto& x : v) x *= 1e-250;
  }
  // sinh(zeta)/zeta by its Taylor series (|zeta| < 1/2 here)
  cplx i0 = 0.0, t = 1.0;
  const cplx z2 = zeta * zeta;
  for (int j = 1; j < 30; ++j) {
    i0 += t;
    t *= z2 / static_cast<double>((2 * j) * (2 * j + 1));
  }
  const cplx scale = std::exp(zeta) * i0 / v[0];
  std::vector<cplx> out(static_cast<size_t>(n_max + 1));
  for (int k = 0; k <= n_max; ++k) out[static_cast<size_t>(k)] = v[static_cast<size_t>(k)] * scale;
  return out;
}

inline double bessel_coeff(double a, int n) {
  // (2n+1) (1-a)_n / (1+a)_n
  double c = 2.0 * n + 1.0;
  for (int j = 0; j < n; ++j) c *= (1.0 - a + j) / (1.0 + a + j);
  return c;
}

// Rigorous bound on the dropped terms, from
// |e^zeta i_n(zeta)| <= e^{Re zeta + |Re zeta|} |zeta|^n / (2n+1)!!.
inline double bessel_tail_bound(double a, int n_max, cplx zeta) {
  const double az = std::abs(zeta);
  const double pre = std::exp(zeta.real() + std::fabs(zeta.real()));
  double g = 1.0;  // |zeta|^n/(2n+1)!!
  for (int n = 1; n <= n_max; ++n) g *= az / (2.0 * n + 1.0);
  double sum = 0.0;
  for (int n = n_max + 1; n < 4000; ++n) {
    g *= az / (2.0 * n + 1.0);
    const double t = std::fabs(bessel_coeff(a, n)) * g;
    sum += t;
    if (az < 0.5 * n && t <= 1e-20 * sum) break;
  }
  return pre * sum;
}

}  // namespace detail

// F_m(z) = 1F1(a;a+1;-z)/(2a) with
//   1F1(a;a+1;2zeta) = sum_n (-1)^n (2n+1) (1-a)_n/(1+a)_n T_n(zeta),  zeta = -z/2.
inline SeriesResult bessel_series(int m, cplx z, int n_max) {
  if (m < 0) throw domain_error("bessel_series: m < 0");
  if (n_max < 0 || n_max > BesselTermTable::kMaxN) throw domain_error("bessel_series: need 0 <= n_max <= 7");
  if (z == 0.0) throw domain_error("bessel_series: z == 0");
  return detail::reflect(z, [&](cplx z) {
    const double a = m + 0.5;
    const cplx zeta = -0.5 * z;
    const bool small = std::abs(z) < 1.0;
    std::vector<cplx> T;
    std::vector<double> Tabs;
    if (small) {
      T = detail::bessel_terms_miller(n_max, zeta);
      for (const auto& x : T) Tabs.push_back(std::abs(x));
    } else {
      for (int n = 0; n <= n_max; ++n) {
        double as = 0.0;
        T.push_back(BesselTermTable::term(n, zeta, &as));
        Tabs.push_back(as);
      }
    }
    cplx s = 0.0;
    double round = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      const double c = (n % 2 ? -1.0 : 1.0) * detail::bessel_coeff(a, n);
      s += c * T[static_cast<size_t>(n)];
      round += std::fabs(c) * Tabs[static_cast<size_t>(n)] * (n + 4.0);
    }
    SeriesResult r;
    r.value = s / (2.0 * a);
    r.terms_used = n_max + 1;
    if (!small && std::abs(zeta) < n_max) r.flags |= kFlagCancellation;
    const double tail = detail::bessel_tail_bound(a, n_max, zeta);
    r.error_estimate = detail::rel_estimate((tail + 4.0 * kEps * round) / (2.0 * a), r.value);
    return r;
  });
}

// ---------------------------------------------------------------- Dijkstra

// K(a,b,z) = 1/(b+z - z(b+1-a)/(b+1+z - z(b+2-a)/(... - z(b+N-a)/(b+N))))
// by backward accumulation. The closing denominator carries no z unless
// close_with_z is set (the plain cut of the infinite fraction).
template <class C>
C dijkstra_K_t(double a, double b, const C& z, int N, bool close_with_z = false) {
  if (N < 1) throw domain_error("dijkstra_K: N < 1");
  C t = C(b + N);
  if (close_with_z) t = t + z;
  for (int k = N; k >= 1; --k) {
    if (t == C(0.0)) throw numeric_error("dijkstra_K: zero denominator at depth " + std::to_string(k));
    t = C(b + k - 1) + z - z * C(b + k - a) / t;
  }
  if (t == C(0.0)) throw numeric_error("dijkstra_K: zero denominator at depth 0");
  return C(1.0) / t;
}

inline cplx dijkstra_K(double a, double b, cplx z, int N, bool close_with_z = false) {
  return dijkstra_K_t<cplx>(a, b, z, N, close_with_z);
}

namespace detail {

// Same recurrence, also carrying a first-order bound on the relative
// rounding error of the result (in units of eps).
inline cplx dijkstra_K_rounding(double a, double b, cplx z, int N, bool close_with_z, double& rel_eps) {
  cplx t = b + N;
  if (close_with_z) t += z;
  double e = close_with_z ? 1.0 : 0.0;
  for (int k = N; k >= 1; --k) {
    if (t == 0.0) throw numeric_error("dijkstra_K: zero denominator at depth " + std::to_string(k));
    const cplx q = z * (b + k - a) / t;
    const cplx tn = (b + k - 1) + z - q;
    if (tn == 0.0) throw numeric_error("dijkstra_K: zero denominator at depth " + std::to_string(k - 1));
    const double s = std::abs(tn);
    e = (4.0 * (std::abs(b + k - 1) + std::abs(z) + 2.0 * std::abs(q)) + e * std::abs(q)) / s;
    t = tn;
  }
  rel_eps = e + 1.0;
  return 1.0 / t;
}

}  // namespace detail

namespace detail {

inline cplx dijkstra_fm(int m, cplx z, int N, bool close_with_z, double* rel_eps = nullptr) {
  const double a = m + 0.5;
  double e = 0.0;
  const cplx K = dijkstra_K_rounding(a, a, -z, N, close_with_z, e);
  if (rel_eps) *rel_eps = e + 4.0;
  return 0.5 * std::exp(-z) * K;
}

inline cplx dijkstra_pos_fm(int m, cplx z, int N, double* rel_eps = nullptr) {
  const double a = m + 0.5;
  double e = 0.0;
  const cplx K = dijkstra_K_rounding(1.0, a, z, N, false, e);
  const cplx d = 1.0 - z * K;
  if (d == 0.0) throw numeric_error("f_via_dijkstra_pos: 1 - zK == 0");
  if (rel_eps) *rel_eps = e * (1.0 + std::abs(z * K) / std::abs(d)) + 8.0;
  return std::exp(-z) * K / (2.0 * d);
}

// For x = Re z > 0:  |F_m(z) - Gamma(a)/(2 z^a)| = |Gamma(a,z)| / (2|z|^a)
// <= e^{-x} I / 2,  I = int_0^inf e^{-xs} (1+s)^{a-1} ds <= 1/x (a <= 1) or
// 1/(x-a+1) (a > 1, x > a-1). A value outside that ball is wrong by at least
// the excess. This catches the plateau the fraction sits on for Re z > 0
// before it picks up the Gamma(a)/(2z^a) part, where successive approximants
// agree to many digits and are all wrong.
inline double dijkstra_excess(int m, cplx z, cplx v) {
  const double a = m + 0.5, x = z.real();
  if (!(x > 0.0) || (a > 1.0 && !(x > a - 1.0))) return 0.0;
  const double I = a <= 1.0 ? 1.0 / x : 1.0 / (x - a + 1.0);
  const cplx D = gamma_half(m) * inv_pow_half(z, m) / 2.0;
  return std::max(0.0, std::abs(v - D) - 0.5 * std::exp(-x) * I - 8.0 * kEps * std::abs(D));
}

// f(n, rel_eps*) evaluates the n-th approximant.
template <class Fn>
SeriesResult dijkstra_result(int m, cplx z, int N, Fn&& f) {
  SeriesResult r;
  double rel_eps = 0.0;
  r.value = f(N, &rel_eps);
  r.terms_used = N;
  // Geometric tail |d_N| / (1 - rho), rho = |d_N / d_{N-1}|; a stalled
  // fraction (rho near 1) has near-equal approximants that are both wrong.
  double tail = std::abs(r.value);
  if (N >= 3) {
    const cplx v1 = f(N - 1, nullptr);
    const double d1 = std::abs(r.value - v1), d2 = std::abs(v1 - f(N - 2, nullptr));
    const double rho = d2 > 0.0 ? d1 / d2 : (d1 > 0.0 ? 1.0 : 0.0);
    tail = std::min(rho < 1.0 ? d1 / (1.0 - rho) : tail, tail + d1);
  } else if (N == 2) {
    tail = std::abs(r.value - f(1, nullptr));
  }
  tail = std::max(tail, dijkstra_excess(m, z, r.value));
  r.error_estimate = detail::rel_estimate(tail + rel_eps * kEps * std::abs(r.value), r.value);
  return r;
}

}  // namespace detail

// F_m(z) = e^{-z} K(a, a, -z) / 2
inline SeriesResult f_via_dijkstra(int m, cplx z, int N, bool close_with_z = false) {
  if (m < 0) throw domain_error("f_via_dijkstra: m < 0");
  if (N < 1) throw domain_error("f_via_dijkstra: N < 1");
  return detail::reflect(z, [&](cplx z) {
    return detail::dijkstra_result(
        m, z, N, [&](int n, double* e) { return detail::dijkstra_fm(m, z, n, close_with_z, e); });
  });
}

// Same fraction in double-double.
inline XComplex f_via_dijkstra_x(int m, cplx z, int N, bool close_with_z = false) {
  if (m < 0) throw domain_error("f_via_dijkstra_x: m < 0");
  const bool low = detail::lower_half(z);
  const XComplex zx(low ? std::conj(z) : z);
  const double a = m + 0.5;
  XComplex v = x_exp(-zx) * dijkstra_K_t<XComplex>(a, a, -zx, N, close_with_z) * XReal(0.5);
  return low ? conj(v) : v;
}

// Through K(1,a,z): zK(1,a,z) = 1 - e^{-z}/((2m-1) F_{m-1}), stepped up one
// index by the recurrence 2z F_m = (2m-1) F_{m-1} - e^{-z}, which folds into
//   F_m = e^{-z} K / (2 (1 - zK)).
inline SeriesResult f_via_dijkstra_pos(int m, cplx z, int N) {
  if (m < 1) throw domain_error("f_via_dijkstra_pos: m < 1");
  if (N < 1) throw domain_error("f_via_dijkstra_pos: N < 1");
  return detail::reflect(z, [&](cplx z) {
    SeriesResult r = detail::dijkstra_result(m, z, N, [&](int n, double* e) { return detail::dijkstra_pos_fm(m, z, n, e); });
    r.flags |= kFlagInterpretation;
    return r;
  });
}

}  // namespace fmg
