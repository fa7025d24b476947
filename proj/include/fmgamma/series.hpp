#pragma once
// Pure-series evaluators of F_m(z) in binary64.

#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"
#include "result.hpp"
#include "xprec.hpp"

namespace fmg {

inline double pochhammer(double b, int n) {
  if (n < 0) throw domain_error("pochhammer: n < 0");
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= b + k;
  return r;
}

// Gamma(m + 1/2).
inline double gamma_half(int m) {
  double g = 1.7724538509055160273;
  for (int k = 0; k < m; ++k) g *= k + 0.5;
  return g;
}

// 1 / (z^m sqrt(z)), principal root.
inline cplx inv_pow_half(cplx z, int m) {
  cplx p = 1.0;
  for (int k = 0; k < m; ++k) p *= z;
  return 1.0 / (p * std::sqrt(z));
}

namespace detail {

// Sum of |t_k| for k >= k0 of the power series of F_m, starting from
// |t_{k0}|. The ratio |t_{k+1}/t_k| is below |z|/(k+1), so this bounds the
// omitted tail.
inline double power_tail_bound(double az, int m, int k0, double t0) {
  double t = t0, s = 0.0;
  for (int k = k0; k < k0 + 4000; ++k) {
    s += t;
    double r = az / (k + 1.0) * (2.0 * m + 2.0 * k + 1.0) / (2.0 * m + 2.0 * k + 3.0);
    t *= r;
    if (r < 0.5 && t < 1e-20 * s) {
      s += t * r / (1.0 - r);
      break;
    }
  }
  return s;
}

// sum_{k>=k0} x^k / k! given x^{k0}/k0!.
inline double exp_tail(double x, int k0, double t0) {
  double t = t0, s = 0.0;
  for (int k = k0; k < k0 + 4000; ++k) {
    s += t;
    double r = x / (k + 1.0);
    t *= r;
    if (r < 0.5 && t < 1e-20 * s) {
      s += t * r / (1.0 - r);
      break;
    }
  }
  return s;
}

}  // namespace detail

// Kummer power series sum_n (-z)^n / (n! (2m+2n+1)).
inline SeriesResult power_series(int m, cplx z, double tol, int n_cap) {
  if (n_cap < 1) throw domain_error("power_series: n_cap < 1");
  if (!(tol >= 0.0)) throw domain_error("power_series: tol < 0");
  if (z == 0.0) {
    SeriesResult r;
    r.value = 1.0 / (2.0 * m + 1.0);
    r.terms_used = 1;
    r.error_estimate = kEps;
    return r;
  }
  return detail::reflect(z, [&](cplx z) {
    SeriesResult r;
    cplx p = 1.0, sum = 0.0;
    double abs_sum = 0.0;
    int n = 0;
    for (; n < n_cap; ++n) {
      if (n > 0) p *= -z / static_cast<double>(n);
      cplx t = p / (2.0 * m + 2.0 * n + 1.0);
      sum += t;
      abs_sum += std::abs(t);
      if (std::abs(t) <= tol * std::abs(sum)) { ++n; break; }
    }
    r.value = sum;
    r.terms_used = n;
    if (n >= n_cap && tol > 0.0) r.flags |= kFlagTruncated;
    double az = std::abs(z);
    double next = std::abs(p) * az / n / (2.0 * m + 2.0 * n + 1.0);
    double tail = detail::power_tail_bound(az, m, n, next);
    double round = kEps * abs_sum * (1.0 + std::sqrt(static_cast<double>(n)));
    r.error_estimate = detail::rel_estimate(tail + round, sum);
    return r;
  });
}

struct AitkenResult {
  cplx value{};
  bool degenerate = false;
};

// Second-order Shanks (Aitken delta-squared) of three partial sums.
inline AitkenResult aitken(cplx s0, cplx s1, cplx s2) {
  cplx d2 = s2 - 2.0 * s1 + s0;
  if (std::abs(d2) <= 4.0 * kEps * (std::abs(s0) + 2.0 * std::abs(s1) + std::abs(s2)))
    return {s2, true};
  cplx d1 = s2 - s1;
  return {s2 - d1 * d1 / d2, false};
}

// Large-|z| series, truncated at n = floor(|z| + a):
//   F = Gamma(a)/(2 z^a) + exp(-z)/2 * sum_n (1-a)_n / (-z)^{n+1},
// F being the integral with t^{2a-1}. Any a > 0 is accepted; for a positive
// integer the sum stops by itself after a terms.
inline SeriesResult laurent_a(double a, cplx z) {
  if (z == 0.0) throw domain_error("laurent: z == 0");
  if (!(a > 0.0)) throw domain_error("laurent: a <= 0");
  const double twice = 2.0 * a;
  const bool half = twice == std::nearbyint(twice) && std::fmod(twice, 2.0) == 1.0;
  const int m = half ? static_cast<int>(a - 0.5) : 0;
  return detail::reflect(z, [&](cplx z) {
    const int N = static_cast<int>(std::floor(std::abs(z) + a));
    cplx w = -z, c = 1.0, wp = 1.0 / w, sum = 0.0;
    double abs_sum = 0.0;
    int used = 0;
    for (int n = 0; n <= N && c != 0.0; ++n, ++used) {
      cplx t = c * wp;
      sum += t;
      abs_sum += std::abs(t);
      c *= (n + 1.0 - a);
      wp /= w;
    }
    cplx ez = std::exp(-z);
    cplx gam = half ? gamma_half(m) * inv_pow_half(z, m) / 2.0 : std::tgamma(a) * std::exp(-a * std::log(z)) / 2.0;
    SeriesResult r;
    r.value = gam + ez * sum / 2.0;
    r.terms_used = used;
    double omitted = std::abs(ez) * std::abs(c * wp) / 2.0;
    double round = kEps * (std::abs(gam) * (a + 2.0) + std::abs(ez) * abs_sum * (2.0 + std::abs(z)));
    r.error_estimate = detail::rel_estimate(2.0 * omitted + round, r.value);
    return r;
  });
}

inline SeriesResult laurent(int m, cplx z) {
  if (m < 0) throw domain_error("laurent: m < 0");
  return laurent_a(m + 0.5, z);
}

// Converging factor of the tail beyond N:
//   theta_N(w) = w/(w- q1/(1- e1/(w- q2/(1- ... e_N/w)))),
// q_k = N + k - a, e_k = k. Returns false if a denominator collapses.
inline bool converging_factor(cplx w, double a, int N, int depth, cplx& theta) {
  cplx t = w;
  for (int k = depth; k >= 1; --k) {
    if (t == 0.0) return false;
    t = 1.0 - static_cast<double>(k) / t;
    if (t == 0.0) return false;
    t = w - (N + k - a) / t;
  }
  if (std::abs(t) < 1e-300) return false;
  theta = w / t;
  return std::isfinite(theta.real()) && std::isfinite(theta.imag());
}

// Laurent series summed to N-1 with the converging factor on the tail.
inline SeriesResult laurent_cf(int m, cplx z, int N) {
  if (z == 0.0) throw domain_error("laurent_cf: z == 0");
  const double a = m + 0.5;
  if (N < 0 || N > static_cast<int>(std::floor(std::abs(z) + a)))
    throw domain_error("laurent_cf: N outside [0, floor(|z|+a)]");
  return detail::reflect(z, [&](cplx z) {
    cplx w = -z, c = 1.0, wp = 1.0 / w, sum = 0.0;
    double abs_sum = 0.0;
    for (int n = 0; n < N; ++n) {
      cplx t = c * wp;
      sum += t;
      abs_sum += std::abs(t);
      c *= (n + 1.0 - a);
      wp /= w;
    }
    cplx lead = c * wp;
    cplx th = 1.0, th_prev = 1.0;
    bool ok = converging_factor(w, a, N, N, th) && (N == 0 || converging_factor(w, a, N, N - 1, th_prev));
    if (!ok) {
      SeriesResult r = laurent(m, z);
      r.flags |= kFlagFallback | kFlagDegenerate;
      return r;
    }
    cplx ez = std::exp(-z);
    cplx gam = gamma_half(m) * inv_pow_half(z, m) / 2.0;
    SeriesResult r;
    r.value = gam + ez * (sum + lead * th) / 2.0;
    r.terms_used = N + 1;
    double delta = N == 0 ? std::abs(lead) : std::abs(lead) * std::abs(th - th_prev);
    double round = kEps * (std::abs(gam) * (m + 2.0) +
                           std::abs(ez) * (abs_sum + std::abs(lead * th) * (4.0 + N)) * (2.0 + std::abs(z)));
    r.error_estimate = detail::rel_estimate(std::abs(ez) * delta / 2.0 + round, r.value);
    return r;
  });
}

// Coefficient of (-z)^n in the series of F_m^2:
//   1/(2m+n+1) * sum_k 1/(k! (n-k)! (2m+2k+1)).
inline XReal square_series_coefficient_x(int m, int n) {
  XReal s(0.0), binom(1.0), fact(1.0);
  for (int k = 0; k <= n; ++k) {
    if (k > 0) binom = binom * XReal(n - k + 1.0) / XReal(k);
    s += binom / XReal(2.0 * m + 2.0 * k + 1.0);
  }
  for (int k = 2; k <= n; ++k) fact *= XReal(k);
  return s / fact / XReal(2.0 * m + n + 1.0);
}

// F_m^2 by its own power series, then the root nearer a cheap estimate.
inline SeriesResult square_series(int m, cplx z, int n_cap) {
  if (n_cap < 1) throw domain_error("square_series: n_cap < 1");
  return detail::reflect(z, [&](cplx z) {
    cplx p = 1.0, sq = 0.0;  // p = (-z)^n / n!
    double abs_sum = 0.0, binsum = 0.0;
    int n = 0;
    for (; n < n_cap; ++n) {
      if (n > 0) p *= -z / static_cast<double>(n);
      double b = 1.0;
      binsum = 0.0;
      for (int k = 0; k <= n; ++k) {
        if (k > 0) b *= (n - k + 1.0) / k;
        binsum += b / (2.0 * m + 2.0 * k + 1.0);
      }
      cplx t = p * binsum / (2.0 * m + n + 1.0);
      sq += t;
      abs_sum += std::abs(t);
    }
    // tail of sum (2|z|)^k/k! dominates the omitted coefficients
    double az = std::abs(z);
    double next = std::abs(p) * az / n * 2.0 * binsum / (2.0 * m + n + 1.0);
    double tail = detail::exp_tail(2.0 * az, n, next);
    cplx root = std::sqrt(sq);
    SeriesResult est = power_series(m, z, 0.0, 5);
    if (est.error_estimate > 0.25) est = power_series(m, z, 1e-3, 400);
    double d1 = std::abs(root - est.value), d2 = std::abs(-root - est.value);
    SeriesResult r;
    r.terms_used = n;
    if (std::abs(d1 - d2) <= 1e-12 * std::abs(root)) {
      r.flags |= kFlagBranchAmbiguous;
      r.value = root.real() >= 0.0 ? root : -root;
    } else {
      r.value = d1 <= d2 ? root : -root;
    }
    double rel_sq = detail::rel_estimate(tail + kEps * abs_sum * (1.0 + std::sqrt(static_cast<double>(n))), sq);
    r.error_estimate = std::max(kEps, 0.5 * rel_sq + kEps);
    // a wrong branch is a relative error of 2
    if (r.flags & kFlagBranchAmbiguous || std::min(d1, d2) > 0.5 * std::abs(root)) r.error_estimate = std::max(r.error_estimate, 2.0);
    return r;
  });
}

// int_0^1 t^k exp(-z t) dt.
inline cplx exp_moment(int k, cplx z, double* abs_err = nullptr) {
  double az = std::abs(z);
  if (az < 0.25 || az < k) {
    cplx p = 1.0, s = 0.0;
    double as = 0.0;
    for (int n = 0; n < 2000; ++n) {
      if (n > 0) p *= -z / static_cast<double>(n);
      cplx t = p / static_cast<double>(k + n + 1);
      s += t;
      as += std::abs(t);
      if (std::abs(t) <= 1e-18 * std::abs(s) && n > az) break;
    }
    if (abs_err) *abs_err = kEps * as * 4.0;
    return s;
  }
  cplx e = std::exp(-z);
  cplx I = (1.0 - e) / z;
  double err = kEps * (1.0 + std::abs(e)) / az * 2.0;
  for (int j = 1; j <= k; ++j) {
    I = (static_cast<double>(j) * I - e) / z;
    err = (j * err + kEps * (j * std::abs(I) + std::abs(e))) / az;
  }
  if (abs_err) *abs_err = err;
  return I;
}

// F_m = int_0^1 t^{2m} e^{-zt} dt - sum_{n>=1} (-z)^n / ((n-1)! (2m+n+1)(2m+2n+1)).
// n_cap counts the moment as the order-0 term, so n_cap terms cover the same
// powers of z as power_series with n_cap terms.
inline SeriesResult split_exp_series(int m, cplx z, int n_cap) {
  if (n_cap < 1) throw domain_error("split_exp_series: n_cap < 1");
  return detail::reflect(z, [&](cplx z) {
    double mom_err = 0.0;
    cplx mom = exp_moment(2 * m, z, &mom_err);
    cplx p = 1.0, corr = 0.0;  // p = (-z)^n / (n-1)!
    double abs_sum = 0.0;
    const int last = n_cap - 1;
    int n = 1;
    for (; n <= last; ++n) {
      p *= (n == 1) ? -z : -z / static_cast<double>(n - 1);
      cplx t = p / ((2.0 * m + n + 1.0) * (2.0 * m + 2.0 * n + 1.0));
      corr += t;
      abs_sum += std::abs(t);
    }
    SeriesResult r;
    r.value = mom - corr;
    r.terms_used = n_cap;
    double az = std::abs(z);
    // omitted orders k > last: |(-z)^k/(k-1)!| = |z| |z|^{k-1}/(k-1)!, and
    // |p| = |z|^last/(last-1)! (or 1 when nothing was summed)
    const double t0 = last >= 1 ? std::abs(p) / last : 1.0;  // |z|^last / last!
    double tail = az * detail::exp_tail(az, last, t0) / ((2.0 * m + last + 2.0) * (2.0 * m + 2.0 * last + 3.0));
    r.error_estimate = detail::rel_estimate(tail + mom_err + kEps * abs_sum * (1.0 + std::sqrt(static_cast<double>(n_cap))), r.value);
    return r;
  });
}

// omega-integrals I[m][n] = int_{-pi}^{pi} sin^{2m}(w/2) cos^n(w) cos(w/2) dw.
struct HalfArgTable {
  int m_max = 0, n_max = 0;
  std::vector<std::vector<XReal>> Ix;   // [m][n], extended
  std::vector<std::vector<double>> I;   // rounded copy used by the binary64 sum
  double at(int m, int n) const { return I[static_cast<size_t>(m)][static_cast<size_t>(n)]; }
};

inline HalfArgTable build_half_arg_table(int m_max, int n_max) {
  if (m_max < 0 || m_max > 16 || n_max < 0 || n_max > 128)
    throw domain_error("build_half_arg_table: need m_max <= 16, n_max <= 128");
  std::vector<XReal> row0(static_cast<size_t>(n_max + m_max + 1));
  row0[0] = XReal(4.0);
  for (int n = 1; n <= n_max + m_max; ++n) {
    XReal sgn(n % 2 ? -2.0 : 2.0);
    row0[static_cast<size_t>(n)] = (sgn + XReal(n) * row0[static_cast<size_t>(n - 1)]) / XReal(n + 0.5);
  }
  HalfArgTable t;
  t.m_max = m_max;
  t.n_max = n_max;
  t.Ix.assign(static_cast<size_t>(m_max + 1), std::vector<XReal>(static_cast<size_t>(n_max + 1)));
  t.I.assign(static_cast<size_t>(m_max + 1), std::vector<double>(static_cast<size_t>(n_max + 1)));
  for (int m = 0; m <= m_max; ++m) {
    for (int n = 0; n <= n_max; ++n) {
      XReal s(0.0), binom(1.0);
      for (int k = 0; k <= m; ++k) {
        if (k > 0) binom = binom * XReal(m - k + 1.0) / XReal(k);
        XReal term = binom * row0[static_cast<size_t>(k + n)];
        s = (k % 2) ? s - term : s + term;
      }
      s = ldexp(s, -m);
      t.Ix[static_cast<size_t>(m)][static_cast<size_t>(n)] = s;
      t.I[static_cast<size_t>(m)][static_cast<size_t>(n)] = s.to_double();
    }
  }
  return t;
}

// F_m = exp(-z/2)/4 * sum_{n < n_cap} (z/2)^n / n! * I[m][n].
inline SeriesResult half_arg_series(int m, cplx z, int n_cap, const HalfArgTable& table) {
  if (n_cap < 1) throw domain_error("half_arg_series: n_cap < 1");
  if (m > table.m_max || n_cap > table.n_max) throw domain_error("half_arg_series: table too small");
  return detail::reflect(z, [&](cplx z) {
    cplx h = z / 2.0, p = 1.0, sum = 0.0;
    double abs_sum = 0.0;
    for (int n = 0; n < n_cap; ++n) {
      if (n > 0) p *= h / static_cast<double>(n);
      cplx t = p * table.at(m, n);
      sum += t;
      abs_sum += std::abs(t);
    }
    cplx pre = std::exp(-h) / 4.0;
    SeriesResult r;
    r.value = pre * sum;
    r.terms_used = n_cap;
    double ah = std::abs(h);
    double next = std::abs(p) * ah / n_cap;
    double tail = std::abs(pre) * (4.0 / (2.0 * m + 1.0)) * detail::exp_tail(ah, n_cap, next);
    double round = std::abs(pre) * kEps * abs_sum * (2.0 + std::sqrt(static_cast<double>(n_cap))) +
                   kEps * std::abs(r.value) * (1.0 + ah);
    r.error_estimate = detail::rel_estimate(tail + round, r.value);
    return r;
  });
}

// Same sum carried in double-double, to separate the truncation error of
// the series from binary64 rounding.
inline XComplex half_arg_series_x(int m, cplx z, int n_cap, const HalfArgTable& table) {
  if (m > table.m_max || n_cap > table.n_max) throw domain_error("half_arg_series_x: table too small");
  bool lower = detail::lower_half(z);
  XComplex zz(lower ? std::conj(z) : z);
  XComplex h = zz / XReal(2.0), p(1.0), sum(0.0);
  for (int n = 0; n < n_cap; ++n) {
    if (n > 0) p = p * h / XReal(n);
    sum += p * table.Ix[static_cast<size_t>(m)][static_cast<size_t>(n)];
  }
  XComplex v = x_exp(-h) * sum / XReal(4.0);
  return lower ? conj(v) : v;
}

}  // namespace fmg
