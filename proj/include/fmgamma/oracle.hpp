#pragma once
// Reference values of F_m(z) = int_0^1 t^{2m} exp(-z t^2) dt in double-double,
// the digits-of-accuracy metric, and the index recurrence
//   2z F_m = (2m-1) F_{m-1} - exp(-z).

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "xprec.hpp"

namespace fmg {

using cplx = std::complex<double>;

inline constexpr double kOracleMaxAbsZ = 45.0;
inline constexpr int kOracleMaxM = 64;

struct EvalRequest {
  int m = 0;
  cplx z{};
  double a() const { return m + 0.5; }
};

struct AccuracyResult {
  double d = 0.0;
  cplx approx{};
  XComplex reference{};
  bool absolute = false;  // |reference| below the floor, absolute error used
};

enum class SeriesBranch { PowerSeries, Laurent };

struct OracleValue {
  XComplex value{};
  double rel_error = 0.0;  // estimated relative error of value
  SeriesBranch branch = SeriesBranch::PowerSeries;
};

namespace detail {

// Gamma(m + 1/2) = sqrt(pi) (2m-1)!! / 2^m
inline XReal gamma_half_x(int m) {
  XReal g = xconst::sqrt_pi;
  for (int k = 0; k < m; ++k) g = g * XReal(k + 0.5);
  return g;
}

inline bool is_lower(const cplx& z) { return std::signbit(z.imag()); }

struct XSum {
  XComplex value;
  int terms = 0;
  double max_term = 0.0;
  double last_term = 0.0;
};

// sum_n (-z)^n / (n! (2m+2n+1)), stopping once |term| <= tol |sum|.
inline XSum power_sum_x(int m, const XComplex& z, double tol, int cap) {
  XSum r;
  XComplex p(1.0);  // (-z)^n / n!
  XComplex mz = -z;
  for (int n = 0; n < cap; ++n) {
    if (n > 0) p = p * mz / XReal(n);
    XComplex t = p / XReal(2 * m + 2 * n + 1);
    r.value += t;
    r.terms = n + 1;
    double at = absd(t);
    r.max_term = std::max(r.max_term, at);
    r.last_term = at;
    if (at <= tol * absd(r.value)) break;
  }
  return r;
}

// 1 / (z^m sqrt(z)) with the principal root.
inline XComplex inv_pow_half_x(const XComplex& z, int m) {
  return XComplex(1.0) / (x_pow(z, m) * x_sqrt(z));
}

// Laurent part with the tail replaced by its converging factor, carried to
// convergence:  F = Gamma(a)/(2 z^a) + exp(-z)/2 * S(-z),
//   S(w) = sum_{n<N} c_n / w^{n+1} + c_N / w^{N+1} * theta_N(w),  c_n = (1-a)_n.
inline OracleValue laurent_cf_x(int m, const XComplex& z) {
  const double a = m + 0.5;
  const double az = absd(z);
  const int N = std::max(0, static_cast<int>(std::floor(az + a)));
  XComplex w = -z;
  XComplex sum(0.0), c(1.0), wp = XComplex(1.0) / w;  // c_n, 1/w^{n+1}
  double max_part = 0.0;
  for (int n = 0; n < N; ++n) {
    XComplex t = c * wp;
    sum += t;
    max_part = std::max(max_part, absd(t));
    c = c * XReal(n + 1.0 - a);
    wp = wp / w;
  }
  XComplex lead = c * wp;  // c_N / w^{N+1}
  auto theta = [&](int depth) {
    XComplex t = w;
    for (int k = depth; k >= 1; --k) {
      t = XComplex(1.0) - XComplex(XReal(static_cast<double>(k))) / t;
      t = w - XComplex(XReal(N + k - a)) / t;
    }
    return w / t;
  };
  XComplex th_prev = theta(16), th;
  double change = 1.0;
  int depth = 32;
  for (; depth <= 4096; depth *= 2) {
    th = theta(depth);
    change = absd(th - th_prev) / std::max(absd(th), 1e-300);
    th_prev = th;
    if (change < 1e-32) break;
  }
  XComplex tail = lead * th;
  XComplex s = sum + tail;
  XComplex ez = x_exp(-z);
  XComplex part_exp = ez * s / XReal(2.0);
  XComplex part_gam = gamma_half_x(m) * inv_pow_half_x(z, m) / XReal(2.0);
  XComplex f = part_gam + part_exp;
  double af = absd(f);
  double big = std::max({absd(part_gam), absd(ez) * std::max(max_part, absd(s)) / 2.0});
  OracleValue r;
  r.value = f;
  r.branch = SeriesBranch::Laurent;
  r.rel_error = (2e-31 * big + absd(ez) * absd(lead) * absd(th) * change / 2.0) / std::max(af, 1e-300);
  return r;
}

inline OracleValue oracle_eval_upper(int m, const XComplex& z) {
  OracleValue best;
  if (z.re.hi == 0.0 && z.im.hi == 0.0) {
    best.value = XComplex(XReal(1.0) / XReal(2 * m + 1));
    return best;
  }
  XSum ps = power_sum_x(m, z, 1e-32, 600);
  double as = std::max(absd(ps.value), 1e-300);
  best.value = ps.value;
  best.branch = SeriesBranch::PowerSeries;
  best.rel_error = (2e-31 * ps.max_term * std::sqrt(static_cast<double>(ps.terms)) + ps.last_term) / as;
  if (ps.terms >= 600) best.rel_error = std::max(best.rel_error, ps.last_term / as);
  if (best.rel_error <= 1e-26) return best;
  // on the positive w axis the continued fraction sits on its cut
  if (z.re.hi < 0.0 && std::fabs(z.im.hi) < 1e-3 * std::fabs(z.re.hi)) return best;
  OracleValue lc = laurent_cf_x(m, z);
  if (lc.rel_error < best.rel_error) best = lc;
  return best;
}

}  // namespace detail

// Best-effort reference value with its estimated relative error; never
// throws for finite input with m >= 0.
inline OracleValue oracle_eval_ext(int m, cplx z) {
  if (m < 0) throw domain_error("oracle: m < 0");
  if (detail::is_lower(z)) {
    OracleValue r = detail::oracle_eval_upper(m, XComplex(std::conj(z)));
    r.value = conj(r.value);
    return r;
  }
  return detail::oracle_eval_upper(m, XComplex(z));
}

// Reference F_m(z), trusted to >= 20 digits for |z| <= 45 and m <= 64.
inline XComplex oracle_eval(const EvalRequest& req) {
  if (std::abs(req.z) > kOracleMaxAbsZ || req.m > kOracleMaxM) {
    OracleValue v = oracle_eval_ext(req.m, req.z);
    throw oracle_domain_error("oracle: request outside |z| <= 45, m <= 64", v.value.to_complex(), v.rel_error);
  }
  return oracle_eval_ext(req.m, req.z).value;
}

inline XComplex oracle_eval(int m, cplx z) { return oracle_eval(EvalRequest{m, z}); }

// Power series or Laurent, by whether the Laurent floor (first omitted
// term at n = floor(|z|+a), relative to the partial sum) beats 10^-target.
inline SeriesBranch series_branch(cplx z, double a, double target_d) {
  double az = std::abs(z);
  if (az == 0.0) return SeriesBranch::PowerSeries;
  if (std::signbit(z.imag())) z = std::conj(z);
  const int N = static_cast<int>(std::floor(az + a));
  cplx w = -z, c = 1.0, wp = 1.0 / w, sum = 0.0;
  for (int n = 0; n <= N; ++n) {
    sum += c * wp;
    c *= (n + 1.0 - a);
    wp /= w;
  }
  cplx omitted = c * wp;
  // Gamma(a) z^-a / 2 relative to exp(-z)/2 in log space
  double lg = std::lgamma(a) - a * std::log(az);
  cplx ez = std::exp(-z);
  cplx gam = std::exp(std::complex<double>(lg, 0.0)) * std::exp(-a * std::complex<double>(0.0, std::arg(z)));
  cplx f = gam / 2.0 + ez * sum / 2.0;
  double floor_err = std::abs(ez) * std::abs(omitted) / 2.0 / std::abs(f);
  return floor_err < std::pow(10.0, -target_d) ? SeriesBranch::Laurent : SeriesBranch::PowerSeries;
}

// Terms used by the combined strategy at accuracy target_d.
inline int combined_terms(int m, cplx z, double target_d) {
  const double a = m + 0.5;
  if (series_branch(z, a, target_d) == SeriesBranch::Laurent)
    return static_cast<int>(std::floor(std::abs(z) + a)) + 1;
  return detail::power_sum_x(m, XComplex(z), std::pow(10.0, -target_d), 600).terms;
}

inline constexpr double kDigitsCap = 31.0;
inline constexpr double kRefFloor = 1e-250;

// Extended approximations (the oracle itself, double-double evaluators)
// are measured without first rounding them to binary64.
inline AccuracyResult accuracy_of(const XComplex& approx, const XComplex& reference) {
  AccuracyResult r;
  r.approx = approx.to_complex();
  r.reference = reference;
  XReal ref_abs = abs(reference);
  XReal err = abs(approx - reference);
  XReal rel;
  if (ref_abs.hi < kRefFloor) {
    r.absolute = true;
    rel = err;
  } else {
    rel = err / ref_abs;
  }
  if (rel.hi <= 0.0) {
    r.d = kDigitsCap;
  } else {
    r.d = std::min(kDigitsCap, -std::log10(rel.hi));
  }
  if (!std::isfinite(r.approx.real()) || !std::isfinite(r.approx.imag())) r.d = -kDigitsCap;
  return r;
}

inline AccuracyResult accuracy_of(cplx approx, const XComplex& reference) {
  return accuracy_of(XComplex(approx), reference);
}

inline double digits_of(cplx approx, const XComplex& reference) { return accuracy_of(approx, reference).d; }

struct RecurrenceStep {
  XComplex value;
  double cancellation = 0.0;  // decimal digits expected to be lost
};

// F_m from F_{m-1}.
inline RecurrenceStep recurrence_forward(int m, const XComplex& f_prev, const XComplex& z) {
  if (m < 1) throw domain_error("recurrence_forward: m < 1");
  if (z.re.hi == 0.0 && z.im.hi == 0.0) throw domain_error("recurrence_forward: z == 0");
  RecurrenceStep r;
  r.value = (XReal(2.0 * m - 1.0) * f_prev - x_exp(-z)) / (XReal(2.0) * z);
  double az = absd(z);
  int src = m - 1;
  r.cancellation = std::max(0.0, src == 0 ? -std::log10(2.0 * az) : -std::log10(az / src));
  return r;
}

// F_{m-1} from F_m.
inline RecurrenceStep recurrence_backward(int m, const XComplex& f_next, const XComplex& z) {
  if (m < 1) throw domain_error("recurrence_backward: m < 1");
  RecurrenceStep r;
  r.value = (XReal(2.0) * z * f_next + x_exp(-z)) / XReal(2.0 * m - 1.0);
  double az = absd(z);
  r.cancellation = az == 0.0 ? 0.0 : std::max(0.0, -std::log10((m - 0.5) / az));
  return r;
}

}  // namespace fmg
