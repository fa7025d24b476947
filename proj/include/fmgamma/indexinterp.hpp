#pragma once
// Closed form at half-integer index and polynomial interpolation across m.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "result.hpp"

namespace fmg {

namespace detail {

inline cplx half_integer_closed_upper(int a, cplx z, double* abs_err) {
  double fact = 1.0;
  for (int k = 2; k < a; ++k) fact *= k;
  cplx za = 1.0;
  for (int k = 0; k < a; ++k) za *= z;
  cplx lead = fact / (2.0 * za);
  cplx mz = -z, term = 1.0, bracket = 1.0;
  double abs_br = 1.0;
  for (int n = 1; n <= a - 1; ++n) {
    term *= static_cast<double>(n - a) / mz;
    bracket += term;
    abs_br += std::abs(term);
  }
  cplx ez = std::exp(-z) / (2.0 * z);
  if (abs_err) *abs_err = kEps * (std::abs(lead) * (a + 1.0) + std::abs(ez) * abs_br * (a + 2.0 + std::abs(z)));
  return lead - ez * bracket;
}

}  // namespace detail

// F at index m = a - 1/2 for a = 1, 2, ...:
//   (a-1)!/(2 z^a) - e^{-z}/(2z) [1 + sum_{n=1}^{a-1} (1-a)...(n-a)/(-z)^n].
inline cplx half_integer_closed(int a, cplx z, double* abs_err = nullptr) {
  if (a < 1) throw domain_error("half_integer_closed: a < 1");
  if (z == 0.0) throw domain_error("half_integer_closed: z == 0, use 1/(2a)");
  if (detail::lower_half(z)) return std::conj(detail::half_integer_closed_upper(a, std::conj(z), abs_err));
  return detail::half_integer_closed_upper(a, z, abs_err);
}

// Same closed form in double-double, for cross-checks at ~30 digits.
inline XComplex half_integer_closed_x(int a, const XComplex& z) {
  if (a < 1) throw domain_error("half_integer_closed_x: a < 1");
  if (z.re == XReal(0.0) && z.im == XReal(0.0)) throw domain_error("half_integer_closed_x: z == 0");
  XReal fact(1.0);
  for (int k = 2; k < a; ++k) fact = fact * static_cast<double>(k);
  const XComplex za = x_pow(z, a);
  const XComplex lead = XComplex(fact) / (za * XReal(2.0));
  const XComplex mz = -z;
  XComplex term(1.0), bracket(1.0);
  for (int n = 1; n <= a - 1; ++n) {
    term = term * XComplex(static_cast<double>(n - a)) / mz;
    bracket += term;
  }
  return lead - x_exp(mz) / (z * XReal(2.0)) * bracket;
}

struct IndexInterpSystem {
  int N = 0;
  std::vector<double> m_k;       // sample indexes k + 1/2
  Eigen::MatrixXcd matrix;       // row k: (1, m_k, m_k^2, ..., m_k^N)
  Eigen::VectorXcd rhs;
  Eigen::VectorXcd b;            // polynomial coefficients
};

struct Coupling {
  int m_v = 0;
  int m_u = 1;
};

namespace detail {

inline IndexInterpSystem build_interp_system(cplx z, int N, std::vector<double>* sample_err) {
  IndexInterpSystem s;
  s.N = N;
  s.matrix.resize(N + 1, N + 1);
  s.rhs.resize(N + 1);
  if (sample_err) sample_err->assign(static_cast<size_t>(N + 1), 0.0);
  for (int k = 0; k <= N; ++k) {
    double mk = k + 0.5;
    s.m_k.push_back(mk);
    double pw = 1.0;
    for (int j = 0; j <= N; ++j, pw *= mk) s.matrix(k, j) = pw;
    double e = 0.0;
    s.rhs(k) = half_integer_closed(k + 1, z, &e);
    if (sample_err) (*sample_err)[static_cast<size_t>(k)] = e;
  }
  return s;
}

inline void solve_system(IndexInterpSystem& s) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(s.matrix);
  s.b = lu.solve(s.rhs);
  double scale = s.rhs.norm();
  double resid = (s.matrix * s.b - s.rhs).norm();
  if (!std::isfinite(resid) || resid > 1e-6 * (scale + 1e-300))
    throw numeric_error("indexinterp: singular system");
}

inline cplx eval_poly(const Eigen::VectorXcd& b, double m) {
  cplx r = 0.0;
  for (int j = static_cast<int>(b.size()) - 1; j >= 0; --j) r = r * m + b(j);
  return r;
}

// Lagrange basis value l_k(m) on nodes x.
inline double lagrange_basis(const std::vector<double>& x, size_t k, double m) {
  double l = 1.0;
  for (size_t j = 0; j < x.size(); ++j)
    if (j != k) l *= (m - x[j]) / (x[k] - x[j]);
  return l;
}

inline SeriesResult interp_upper(int m, cplx z, int N) {
  std::vector<double> err;
  IndexInterpSystem s = build_interp_system(z, N, &err);
  solve_system(s);
  SeriesResult r;
  r.value = eval_poly(s.b, m);
  r.terms_used = N + 1;
  // rounding: samples propagated through the Lagrange basis
  double prop = 0.0;
  for (size_t k = 0; k < s.m_k.size(); ++k) prop += std::abs(lagrange_basis(s.m_k, k, m)) * (err[k] + kEps * std::abs(s.rhs(static_cast<Eigen::Index>(k))));
  // truncation: drop either end node and compare; the near end matters at
  // small m, where the dropped-far-node difference understates the error
  double trunc = 0.0;
  for (size_t drop : {size_t{0}, s.m_k.size() - 1}) {
    std::vector<double> xs;
    std::vector<cplx> ys;
    for (size_t k = 0; k < s.m_k.size(); ++k)
      if (k != drop) { xs.push_back(s.m_k[k]); ys.push_back(s.rhs(static_cast<Eigen::Index>(k))); }
    cplx lower = 0.0;
    for (size_t k = 0; k < xs.size(); ++k) lower += lagrange_basis(xs, k, m) * ys[k];
    trunc = std::max(trunc, std::abs(lower - r.value));
  }
  // the monomial solve is ill-conditioned; its gap to direct Lagrange
  // evaluation stands in for the solver's rounding
  cplx lag = 0.0;
  for (size_t k = 0; k < s.m_k.size(); ++k) lag += lagrange_basis(s.m_k, k, m) * s.rhs(static_cast<Eigen::Index>(k));
  r.error_estimate = rel_estimate(trunc + prop + std::abs(lag - r.value), r.value);
  return r;
}

}  // namespace detail

// Degree-N polynomial in m through F_{k+1/2}(z), k = 0..N, evaluated at m.
inline SeriesResult interp_eval(int m, cplx z, int N) {
  if (N < 1 || N > 10) throw domain_error("interp_eval: need 1 <= N <= 10");
  if (m < 1 || m > N) throw domain_error("interp_eval: need 1 <= m <= N");
  if (z == 0.0) throw domain_error("interp_eval: z == 0");
  return detail::reflect(z, [&](cplx z) { return detail::interp_upper(m, z, N); });
}

// As interp_eval, but the sample rows listed in `removals` are replaced by
// recurrence rows  sum_j [2z m_u^j - (2m_u - 1) m_v^j] b_j = -e^{-z}.
inline SeriesResult interp_recurrence_constrained(int m, cplx z, int N, const std::vector<Coupling>& couplings,
                                                  const std::vector<int>& removals) {
  if (couplings.size() != removals.size()) throw domain_error("interp_recurrence_constrained: |couplings| != |removals|");
  if (N < 1 || N > 10) throw domain_error("interp_recurrence_constrained: need 1 <= N <= 10");
  if (z == 0.0) throw domain_error("interp_recurrence_constrained: z == 0");
  for (int k : removals)
    if (k < 0 || k > N) throw domain_error("interp_recurrence_constrained: removal index out of range");
  return detail::reflect(z, [&](cplx z) {
    if (couplings.empty()) return detail::interp_upper(m, z, N);
    IndexInterpSystem s = detail::build_interp_system(z, N, nullptr);
    cplx ez = std::exp(-z);
    for (size_t i = 0; i < removals.size(); ++i) {
      double mu = couplings[i].m_u, mv = couplings[i].m_v;
      double pu = 1.0, pv = 1.0;
      for (int j = 0; j <= N; ++j, pu *= mu, pv *= mv) s.matrix(removals[i], j) = 2.0 * z * pu - (2.0 * mu - 1.0) * pv;
      s.rhs(removals[i]) = -ez;
    }
    detail::solve_system(s);
    SeriesResult plain = detail::interp_upper(m, z, N);
    SeriesResult r;
    r.value = detail::eval_poly(s.b, m);
    r.terms_used = N + 1;
    r.flags |= kFlagInterpretation;
    r.error_estimate = std::max(plain.error_estimate, detail::rel_estimate(std::abs(r.value - plain.value), r.value));
    return r;
  });
}

}  // namespace fmg
