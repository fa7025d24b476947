#pragma once
// Regenerates the printed tables and compares them with the embedded
// constants. Shared by `fmgamma tables` and the acceptance runner.

#include <cstdio>
#include <string>
#include <vector>

#include "printed_tables.hpp"
#include "quadmethods.hpp"
#include "salzer.hpp"
#include "series.hpp"
#include "survey.hpp"

namespace fmg {

struct TableCheck {
  std::string name;
  bool pass = true;
  int entries = 0;
  double worst = 99.0;  // worst agreement in digits, where that applies
  std::string text;     // one line per entry
};

inline const std::vector<std::string>& table_names() {
  static const std::vector<std::string> names = {"squared", "fourier", "grid-taylor", "salzer", "gauss-jacobi"};
  return names;
}

namespace detail {

inline void add_line(TableCheck& t, const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  t.text += buf;
  t.text += '\n';
}

}  // namespace detail

// Squared-series coefficients, m = 0 and 2, n <= 20: every printed digit.
inline TableCheck check_squared_table() {
  TableCheck t;
  t.name = "squared";
  for (const auto& row : printed::kSquaredCoeffs)
    for (int m : {0, 2}) {
      const char* s = m == 0 ? row.m0 : row.m2;
      const XReal v = square_series_coefficient_x(m, row.n);
      const bool ok = printed::matches_printed(v, s);
      t.pass = t.pass && ok;
      ++t.entries;
      detail::add_line(t, "m=%d n=%2d printed %-36s got %s %s", m, row.n, s, to_string(v, 27).c_str(), ok ? "ok" : "MISMATCH");
    }
  return t;
}

// Fourier reconstruction errors, within a factor of two of the printed ones.
inline TableCheck check_fourier_table() {
  TableCheck t;
  t.name = "fourier";
  for (int m = 1; m <= 3; ++m)
    for (size_t i = 0; i < printed::kFourierN.size(); ++i) {
      const double p = printed::kFourierMaxDeviation[static_cast<size_t>(m - 1)][i];
      const double got = fourier_table(m, printed::kFourierN[i]).max_deviation;
      const bool ok = got <= 2.0 * p && got >= 0.5 * p;
      t.pass = t.pass && ok;
      ++t.entries;
      detail::add_line(t, "m=%d N=%4d printed %.1e got %.3e %s", m, printed::kFourierN[i], p, got, ok ? "ok" : "MISMATCH");
    }
  return t;
}

// The embedded n = 16 inverse Laplace rule: conjugate pairs, and the rule
// inverting p^-k (k = 1..16) to 1/(k-1)!, which every printed digit feeds.
inline TableCheck check_salzer_table() {
  TableCheck t;
  t.name = "salzer";
  const SalzerRule& r = salzer_rule16();
  for (size_t i = 0; i + 1 < r.A_x.size(); i += 2) {
    const bool ok = r.inv_p_x[i + 1] == conj(r.inv_p_x[i]) && r.A_x[i + 1] == conj(r.A_x[i]) &&
                    r.inv_p_x[i].im.hi != 0.0 && r.A_x[i].im.hi != 0.0;
    t.pass = t.pass && ok;
    ++t.entries;
    detail::add_line(t, "pair %2zu/%2zu conjugate %s", i + 1, i + 2, ok ? "ok" : "MISMATCH");
  }
  for (int k = 1; k <= 16; ++k) {
    XComplex s(0.0);
    for (size_t i = 0; i < r.A_x.size(); ++i) s += r.A_x[i] * x_pow(r.inv_p_x[i], k);
    XReal f(1.0);
    for (int j = 2; j < k; ++j) f = f * XReal(static_cast<double>(j));
    const double err = absd(s * f - XComplex(1.0));
    const double d = err > 0.0 ? std::min(32.0, -std::log10(err)) : 32.0;
    const bool ok = d >= 20.0;
    t.pass = t.pass && ok;
    t.worst = std::min(t.worst, d);
    ++t.entries;
    detail::add_line(t, "p^-%-2d inverted to %.1f digits %s", k, d, ok ? "ok" : "MISMATCH");
  }
  return t;
}

// Gauss-Jacobi rules n = 20 for the weights x^2 and x^4, to min_digits.
inline TableCheck check_gauss_jacobi_tables(double min_digits = 24.0) {
  TableCheck t;
  t.name = "gauss-jacobi";
  for (int k : {2, 4}) {
    const QuadRule r = gauss_jacobi_rule(20, k);
    const auto& rows = k == 2 ? printed::kGaussJacobiK2 : printed::kGaussJacobiK4;
    for (const auto& row : rows) {
      const size_t i = static_cast<size_t>(row.i - 1);
      const double dx = printed::agreeing_digits(r.x_x[i], row.x), dw = printed::agreeing_digits(r.w_x[i], row.w);
      const bool ok = dx >= min_digits && dw >= min_digits;
      t.pass = t.pass && ok;
      t.worst = std::min({t.worst, dx, dw});
      t.entries += 2;
      detail::add_line(t, "k=%d i=%2d x %s (%.1f) w %s (%.1f) %s", k, row.i, to_string(r.x_x[i], 27).c_str(), dx,
                       to_string(r.w_x[i], 27).c_str(), dw, ok ? "ok" : "MISMATCH");
    }
  }
  return t;
}

// Maximum Taylor terms over the node rectangle plus the s/2 margin, sampled
// at 0.25 (cell corners included), within +-2 of the printed counts; the
// empty cell has to come out unreachable with J_max = 30.
inline TableCheck check_grid_taylor_table() {
  TableCheck t;
  t.name = "grid-taylor";
  for (double s : {3.0, 1.0}) {
    const GridSpec spec{s, static_cast<int>(std::ceil(-33.0 / s)), static_cast<int>(std::floor(18.0 / s)),
                        static_cast<int>(std::floor(36.0 / s)), 30};
    const TaylorGrid g = build_grid(spec);
    std::vector<printed::GridTaylorRow> rows(printed::kGridTaylorS1.begin(), printed::kGridTaylorS1.end());
    if (s == 3.0) rows.assign(printed::kGridTaylorS3.begin(), printed::kGridTaylorS3.end());
    for (const auto& row : rows)
      for (size_t i = 0; i < printed::kGridTaylorDigits.size(); ++i) {
        SurveyConfig c;
        c.method = "gridtaylor";
        c.m = row.m;
        c.target_d = printed::kGridTaylorDigits[i];
        c.re_min = spec.k_min * s - 0.5 * s;
        c.re_max = spec.k_max * s + 0.5 * s;
        c.im_min = 0.0;
        c.im_max = spec.l_max * s + 0.5 * s;
        c.step = 0.25;
        const AccuracyGrid a = run_terms_survey(c, &g);
        bool unreachable = false;
        for (const auto& r : a.records) unreachable = unreachable || (r.flags & kFlagUnreachable);
        const int got = max_terms(a), want = row.terms[i], d = printed::kGridTaylorDigits[i];
        const bool ok = want == 0 ? unreachable : (!unreachable && std::abs(got - want) <= 2);
        t.pass = t.pass && ok;
        ++t.entries;
        const std::string p = want ? std::to_string(want) : "-", g_s = unreachable ? "unreachable" : std::to_string(got);
        detail::add_line(t, "s=%g m=%d d=%d printed %s got %s %s", s, row.m, d, p.c_str(), g_s.c_str(), ok ? "ok" : "MISMATCH");
      }
  }
  return t;
}

inline TableCheck check_table(const std::string& name) {
  if (name == "grid-taylor") return check_grid_taylor_table();
  if (name == "squared") return check_squared_table();
  if (name == "fourier") return check_fourier_table();
  if (name == "salzer") return check_salzer_table();
  if (name == "gauss-jacobi") return check_gauss_jacobi_tables();
  throw usage_error("unknown table '" + name + "'");
}

}  // namespace fmg
