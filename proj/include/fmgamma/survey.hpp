#pragma once
// Method registry, accuracy/terms sweeps over rectangles of the z plane,
// CSV output and the cross-method report.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "gridtaylor.hpp"
#include "indexinterp.hpp"
#include "oracle.hpp"
#include "quadmethods.hpp"
#include "result.hpp"
#include "salzer.hpp"
#include "series.hpp"
#include "specfun.hpp"

namespace fmg {

using ParamMap = std::map<std::string, std::string>;

struct SurveyConfig {
  std::string method;
  ParamMap params;
  int m = 0;
  double re_min = -15.0, re_max = 15.0;
  double im_min = 0.0, im_max = 15.0;
  double step = 0.25;
  std::optional<double> target_d;
  std::string out;
};

struct GridRecord {
  double re = 0.0, im = 0.0, d = 0.0;
  int terms = 0;
  unsigned flags = 0;
  bool operator==(const GridRecord&) const = default;
};

struct AccuracyGrid {
  SurveyConfig config;
  int n_re = 0, n_im = 0;
  std::vector<GridRecord> records;  // im outer, re inner
};

// A method bound to its parameters and index m.
struct Method {
  std::string id;
  int m = 0;
  std::function<SeriesResult(cplx)> fn;
  std::function<int(cplx)> exp_count;
  std::function<XComplex(cplx)> fn_x;  // set when the method has an extended value

  // z == 0 falls back to the limit 1/(2m+1) where the method itself refuses it.
  SeriesResult operator()(cplx z) const {
    if (z == 0.0) {
      try {
        return fn(z);
      } catch (const domain_error&) {
        SeriesResult r;
        r.value = 1.0 / (2.0 * m + 1.0);
        r.terms_used = 0;
        r.error_estimate = kEps;
        r.flags = kFlagLimit;
        return r;
      }
    }
    return fn(z);
  }
};

struct MethodInfo {
  std::string id;
  std::vector<std::string> keys;
  int m_min = 0, m_max = 64;
  std::string summary;
};

inline const std::vector<MethodInfo>& method_catalog() {
  static const std::vector<MethodInfo> cat = {
      {"oracle", {}, 0, 64, "double-double reference"},
      {"power_series", {"n", "tol"}, 0, 64, "Kummer power series, n terms (or to tol)"},
      {"laurent", {}, 0, 64, "asymptotic series cut at floor(|z|+a)"},
      {"laurent_cf", {"N"}, 0, 64, "asymptotic series with converging factor"},
      {"combined", {}, 0, 64, "power series or asymptotic series by target digits"},
      {"square_series", {"n"}, 0, 64, "series of F_m^2"},
      {"split_exp", {"n"}, 0, 64, "split-off exponential"},
      {"half_arg", {"n"}, 0, 16, "half-argument series"},
      {"index_interp", {"N"}, 1, 10, "polynomial interpolation in the index"},
      {"hermite_local_taylor", {"N", "n_max"}, 0, 0, "local Taylor with Hermite polynomials"},
      {"algebraic_taylor", {"N", "patch"}, 0, 64, "Taylor with algebraic factor (patch > 0: patched)"},
      {"fourier", {"N"}, 0, 16, "Fourier expansion of the power factor"},
      {"gauss_jacobi", {"n"}, 0, 8, "Gauss-Jacobi quadrature"},
      {"spline", {"N"}, 0, 1, "cubic spline of the exponential"},
      {"salzer", {}, 0, 64, "Salzer inverse Laplace rule, n = 16"},
      {"faddeeva", {"n"}, 0, 0, "rational Faddeeva approximation"},
      {"bessel", {"n_max"}, 0, 64, "modified spherical Bessel expansion"},
      {"dijkstra", {"N"}, 0, 64, "continued fraction in 1F1(a;a;-z)"},
      {"dijkstra_pos", {"N"}, 1, 64, "continued fraction through K(1,a,z)"},
      {"gridtaylor", {}, 0, 30, "nearest-node Taylor off a stored grid"},
  };
  return cat;
}

namespace detail {

inline const MethodInfo& find_method(const std::string& id) {
  for (const auto& mi : method_catalog())
    if (mi.id == id) return mi;
  throw usage_error("unknown method '" + id + "'");
}

inline int param_int(const ParamMap& p, const std::string& key, int def) {
  auto it = p.find(key);
  if (it == p.end()) return def;
  int v = 0;
  const char* b = it->second.data();
  const char* e = b + it->second.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) throw usage_error("parameter " + key + "=" + it->second + " is not an integer");
  return v;
}

inline double param_double(const ParamMap& p, const std::string& key, double def) {
  auto it = p.find(key);
  if (it == p.end()) return def;
  char* end = nullptr;
  double v = std::strtod(it->second.c_str(), &end);
  if (it->second.empty() || *end != '\0' || !std::isfinite(v))
    throw usage_error("parameter " + key + "=" + it->second + " is not a number");
  return v;
}

}  // namespace detail

// Validates id, keys and m before anything is evaluated. `grid` is required
// for gridtaylor and must outlive the returned Method.
inline Method make_method(const std::string& id, const ParamMap& params, int m, std::optional<double> target_d,
                          const TaylorGrid* grid = nullptr) {
  const MethodInfo& info = detail::find_method(id);
  for (const auto& [k, v] : params)
    if (std::find(info.keys.begin(), info.keys.end(), k) == info.keys.end())
      throw usage_error("method " + id + " has no parameter '" + k + "'");
  if (m < info.m_min || m > info.m_max)
    throw usage_error("method " + id + " needs " + std::to_string(info.m_min) + " <= m <= " + std::to_string(info.m_max));
  Method M;
  M.id = id;
  M.m = m;
  auto fixed = [](int c) { return [c](cplx) { return c; }; };
  const double td = target_d.value_or(15.0);

  if (id == "oracle") {
    M.fn = [m](cplx z) {
      OracleValue v = oracle_eval_ext(m, z);
      SeriesResult r;
      r.value = v.value.to_complex();
      r.error_estimate = std::max(v.rel_error, kEps);
      return r;
    };
    M.fn_x = [m](cplx z) { return oracle_eval_ext(m, z).value; };
    M.exp_count = fixed(1);
  } else if (id == "power_series") {
    const int n = detail::param_int(params, "n", 600);
    const double tol = detail::param_double(params, "tol", params.count("n") && !target_d ? 0.0 : std::pow(10.0, -td));
    if (n < 1) throw usage_error("power_series: n >= 1");
    M.fn = [m, n, tol](cplx z) { return power_series(m, z, tol, n); };
    M.exp_count = fixed(0);
  } else if (id == "laurent") {
    M.fn = [m](cplx z) { return laurent(m, z); };
    M.exp_count = fixed(1);
  } else if (id == "laurent_cf") {
    const int N = detail::param_int(params, "N", -1);
    M.fn = [m, N](cplx z) {
      const int cap = static_cast<int>(std::floor(std::abs(z) + m + 0.5));
      return laurent_cf(m, z, N < 0 ? cap : std::min(N, cap));
    };
    M.exp_count = fixed(1);
  } else if (id == "combined") {
    M.fn = [m, td](cplx z) {
      if (series_branch(z, m + 0.5, td) == SeriesBranch::Laurent) return laurent(m, z);
      return power_series(m, z, std::pow(10.0, -td), 600);
    };
    M.exp_count = [m, td](cplx z) { return series_branch(z, m + 0.5, td) == SeriesBranch::Laurent ? 1 : 0; };
  } else if (id == "square_series") {
    const int n = detail::param_int(params, "n", 200);
    M.fn = [m, n](cplx z) { return square_series(m, z, n); };
    M.exp_count = fixed(0);
  } else if (id == "split_exp") {
    const int n = detail::param_int(params, "n", 60);
    M.fn = [m, n](cplx z) { return split_exp_series(m, z, n); };
    M.exp_count = fixed(1);
  } else if (id == "half_arg") {
    const int n = detail::param_int(params, "n", 30);
    auto table = std::make_shared<HalfArgTable>(build_half_arg_table(m, n));
    M.fn = [m, n, table](cplx z) { return half_arg_series(m, z, n, *table); };
    M.exp_count = fixed(1);
  } else if (id == "index_interp") {
    const int N = detail::param_int(params, "N", 10);
    if (m > N) throw usage_error("index_interp: needs m <= N");
    M.fn = [m, N](cplx z) { return interp_eval(m, z, N); };
    M.exp_count = fixed(N + 1);
  } else if (id == "hermite_local_taylor") {
    SubintervalConfig cfg;
    cfg.N = detail::param_int(params, "N", 20);
    const int n_max = detail::param_int(params, "n_max", 6);
    M.fn = [cfg, n_max](cplx z) { return hermite_local_taylor(z, cfg, n_max); };
    M.exp_count = fixed(cfg.N);
  } else if (id == "algebraic_taylor") {
    SubintervalConfig cfg;
    cfg.N = detail::param_int(params, "N", 20);
    const int patch = detail::param_int(params, "patch", 0);
    M.fn = [m, cfg, patch](cplx z) {
      return patch > 0 ? algebraic_taylor_patched(m, z, cfg, patch) : algebraic_taylor(m, z, cfg);
    };
    M.exp_count = fixed(cfg.N + 2);
  } else if (id == "fourier") {
    const int N = detail::param_int(params, "N", 512);
    auto table = std::make_shared<FourierTable>(fourier_table(m, N));
    M.fn = [m, table](cplx z) { return fourier_eval(m, z, *table); };
    M.exp_count = fixed(1);
  } else if (id == "gauss_jacobi") {
    const int n = detail::param_int(params, "n", 20);
    auto rule = std::make_shared<QuadRule>(gauss_jacobi_rule(n, 2 * m));
    M.fn = [m, rule](cplx z) { return gauss_jacobi_eval(m, z, *rule); };
    M.exp_count = fixed(n);
  } else if (id == "spline") {
    const int N = detail::param_int(params, "N", 20);
    M.fn = [m, N](cplx z) { return spline_eval(m, z, N); };
    M.exp_count = fixed(N + 1);
  } else if (id == "salzer") {
    const SalzerRule* rule = &salzer_rule16();
    M.fn = [m, rule](cplx z) { return salzer_fm(m, z, *rule); };
    M.exp_count = fixed(2 * rule->n);
  } else if (id == "faddeeva") {
    const int n = detail::param_int(params, "n", 32);
    auto rule = std::make_shared<HermiteRule>(hermite_rule(n));
    M.fn = [rule](cplx z) { return f0_via_faddeeva(z, *rule); };
    M.exp_count = fixed(1);
  } else if (id == "bessel") {
    const int n_max = detail::param_int(params, "n_max", 7);
    M.fn = [m, n_max](cplx z) { return bessel_series(m, z, n_max); };
    M.exp_count = fixed(1);
  } else if (id == "dijkstra") {
    const int N = detail::param_int(params, "N", 32);
    M.fn = [m, N](cplx z) { return f_via_dijkstra(m, z, N); };
    M.exp_count = fixed(1);
  } else if (id == "dijkstra_pos") {
    const int N = detail::param_int(params, "N", 32);
    M.fn = [m, N](cplx z) { return f_via_dijkstra_pos(m, z, N); };
    M.exp_count = fixed(1);
  } else if (id == "gridtaylor") {
    if (!grid) throw usage_error("gridtaylor: needs a grid (--grid-file)");
    if (m > grid->J_max) throw usage_error("gridtaylor: m beyond the grid's J_max");
    M.fn = [m, td, grid](cplx z) { return eval(m, z, td, *grid); };
    M.exp_count = [grid](cplx z) {
      if (std::signbit(z.imag())) z = std::conj(z);
      return detail::inside_grid(*grid, z) ? 0 : 1;
    };
  }
  return M;
}

// ---------------------------------------------------------------- surveys

namespace detail {

inline int axis_count(double lo, double hi, double step) {
  return static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

// The |z| <= 45 limit is the oracle's; term surveys never call it.
inline void check_config(const SurveyConfig& c, bool with_digits = true) {
  if (!(c.step > 0.0)) throw usage_error("survey: step must be > 0");
  if (!(c.re_min <= c.re_max) || !(c.im_min <= c.im_max)) throw usage_error("survey: empty domain");
  if (c.im_min < 0.0) throw domain_error("survey: im_min < 0 (the lower half plane follows by symmetry)");
  for (double re : {c.re_min, c.re_max})
    for (double im : {c.im_min, c.im_max})
      if (with_digits && std::abs(cplx(re, im)) > kOracleMaxAbsZ) throw domain_error("survey: domain leaves |z| <= 45");
  if (static_cast<double>(axis_count(c.re_min, c.re_max, c.step)) * axis_count(c.im_min, c.im_max, c.step) > 1e7)
    throw usage_error("survey: more than 1e7 points");
}

inline AccuracyGrid sweep(const SurveyConfig& cfg, const TaylorGrid* grid, bool with_digits) {
  check_config(cfg, with_digits);
  Method M = make_method(cfg.method, cfg.params, cfg.m, cfg.target_d, grid);
  AccuracyGrid g;
  g.config = cfg;
  g.n_re = axis_count(cfg.re_min, cfg.re_max, cfg.step);
  g.n_im = axis_count(cfg.im_min, cfg.im_max, cfg.step);
  g.records.reserve(static_cast<size_t>(g.n_re) * static_cast<size_t>(g.n_im));
  for (int j = 0; j < g.n_im; ++j)
    for (int i = 0; i < g.n_re; ++i) {
      GridRecord rec;
      rec.re = cfg.re_min + i * cfg.step;
      rec.im = cfg.im_min + j * cfg.step;
      const cplx z(rec.re, rec.im);
      try {
        SeriesResult r = M(z);
        rec.terms = r.terms_used;
        rec.flags = r.flags;
        if (with_digits) {
          const XComplex ref = oracle_eval(cfg.m, z);
          AccuracyResult a = M.fn_x ? accuracy_of(M.fn_x(z), ref) : accuracy_of(r.value, ref);
          rec.d = a.d;
          if (a.absolute) rec.flags |= kFlagAbsoluteMetric;
        }
      } catch (const domain_error&) {
        rec.flags |= kFlagMethodError;
      } catch (const numeric_error&) {
        rec.flags |= kFlagMethodError;
      }
      g.records.push_back(rec);
    }
  return g;
}

}  // namespace detail

inline AccuracyGrid run_accuracy_survey(const SurveyConfig& cfg, const TaylorGrid* grid = nullptr) {
  return detail::sweep(cfg, grid, true);
}

// Term counts only; the combined strategy reports the count of the
// extended-precision reference sum, which is free of rounding side effects.
inline AccuracyGrid run_terms_survey(const SurveyConfig& cfg, const TaylorGrid* grid = nullptr) {
  AccuracyGrid g = detail::sweep(cfg, grid, false);
  if (cfg.method == "combined") {
    const double td = cfg.target_d.value_or(15.0);
    for (auto& rec : g.records) rec.terms = combined_terms(cfg.m, cplx(rec.re, rec.im), td);
  }
  return g;
}

inline int max_terms(const AccuracyGrid& g) {
  int mx = 0;
  for (const auto& r : g.records) mx = std::max(mx, r.terms);
  return mx;
}

// ---------------------------------------------------------------- CSV

inline std::string csv_text(const AccuracyGrid& g) {
  std::string out = "re,im,d,terms,flags\n";
  char buf[160];
  for (const auto& r : g.records) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d,%u\n", r.re, r.im, r.d, r.terms, r.flags);
    out += buf;
  }
  return out;
}

inline void emit_csv(const AccuracyGrid& g, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("emit_csv: cannot open " + path);
  const std::string s = csv_text(g);
  f.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!f) throw io_error("emit_csv: write failed for " + path);
}

inline std::vector<GridRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "re,im,d,terms,flags") throw format_error("csv: bad header");
  std::vector<GridRecord> out;
  while (std::getline(in, line)) {
    GridRecord r;
    char tail = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%d,%u%c", &r.re, &r.im, &r.d, &r.terms, &r.flags, &tail) != 5)
      throw format_error("csv: bad row '" + line + "'");
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------- report

struct MethodSpec {
  std::string id;
  ParamMap params;
};

struct MethodSummary {
  std::string label;
  double min_d = 0.0, median_d = 0.0;
  int max_terms = 0;
  double exp_per_point = 0.0;
};

inline std::vector<MethodSummary> compare_summaries(const std::vector<MethodSpec>& methods, const SurveyConfig& base,
                                                    const TaylorGrid* grid = nullptr) {
  if (methods.size() < 2) throw usage_error("compare: needs at least two methods");
  std::vector<MethodSummary> out;
  for (const auto& ms : methods) {
    SurveyConfig cfg = base;
    cfg.method = ms.id;
    cfg.params = ms.params;
    AccuracyGrid g = run_accuracy_survey(cfg, grid);
    Method M = make_method(cfg.method, cfg.params, cfg.m, cfg.target_d, grid);
    MethodSummary s;
    s.label = ms.id;
    for (const auto& [k, v] : ms.params) s.label += " " + k + "=" + v;
    std::vector<double> d;
    long exps = 0;
    for (const auto& r : g.records) {
      d.push_back(r.d);
      s.max_terms = std::max(s.max_terms, r.terms);
      exps += M.exp_count(cplx(r.re, r.im));
    }
    std::sort(d.begin(), d.end());
    s.min_d = d.front();
    const size_t n = d.size();
    s.median_d = n % 2 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
    s.exp_per_point = static_cast<double>(exps) / static_cast<double>(n);
    out.push_back(s);
  }
  return out;
}

inline std::string compare_report(const std::vector<MethodSpec>& methods, const SurveyConfig& base,
                                  const TaylorGrid* grid = nullptr) {
  auto rows = compare_summaries(methods, base, grid);
  char buf[256];
  std::snprintf(buf, sizeof buf, "m=%d re=[%g,%g] im=[%g,%g] step=%g\n", base.m, base.re_min, base.re_max, base.im_min,
                base.im_max, base.step);
  std::string out = buf;
  std::snprintf(buf, sizeof buf, "%-40s %8s %8s %9s %8s\n", "method", "min_d", "median_d", "max_terms", "exp/pt");
  out += buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-40s %8.2f %8.2f %9d %8.2f\n", r.label.c_str(), r.min_d, r.median_d, r.max_terms,
                  r.exp_per_point);
    out += buf;
  }
  return out;
}

}  // namespace fmg
