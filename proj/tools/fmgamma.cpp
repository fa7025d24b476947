// fmgamma: accuracy and term-count surveys, method comparison, Taylor grid
// generation and table verification.
//
// Exit codes: 0 success, 1 table mismatch or numeric failure, 2 usage,
// 3 domain, 4 I/O or file format.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fmgamma/survey.hpp"
#include "fmgamma/table_check.hpp"

using namespace fmg;

namespace {

struct Options {
  std::vector<std::string> methods;
  int m = 0;
  double re_min = -15.0, re_max = 15.0, im_min = 0.0, im_max = 15.0, step = 0.25;
  std::optional<double> target_d;
  std::vector<std::string> params;
  std::string grid_file, out;
  // gridgen
  double stride = 3.0;
  int jmax = 30;
  std::optional<int> k_min, k_max, l_max;
  // tables
  std::string verify, print;
};

ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap p;
  for (const auto& s : items) {
    const size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw usage_error("--param expects key=val, got '" + s + "'");
    p[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return p;
}

// "id" or "id:key=val,key=val" for compare
MethodSpec parse_method_spec(const std::string& s) {
  MethodSpec ms;
  const size_t colon = s.find(':');
  ms.id = s.substr(0, colon);
  if (colon != std::string::npos) {
    std::vector<std::string> items;
    size_t from = colon + 1;
    while (from <= s.size()) {
      const size_t comma = std::min(s.find(',', from), s.size());
      if (comma > from) items.push_back(s.substr(from, comma - from));
      from = comma + 1;
    }
    ms.params = parse_params(items);
  }
  return ms;
}

SurveyConfig survey_config(const Options& o) {
  if (o.methods.size() != 1) throw usage_error("exactly one --method is needed");
  SurveyConfig c;
  c.method = o.methods[0];
  c.params = parse_params(o.params);
  c.m = o.m;
  c.re_min = o.re_min;
  c.re_max = o.re_max;
  c.im_min = o.im_min;
  c.im_max = o.im_max;
  c.step = o.step;
  c.target_d = o.target_d;
  c.out = o.out;
  return c;
}

std::optional<TaylorGrid> grid_for(const Options& o, const std::string& method) {
  if (o.grid_file.empty()) {
    if (method == "gridtaylor") throw usage_error("gridtaylor needs --grid-file");
    return std::nullopt;
  }
  return load_grid(o.grid_file);
}

void write_or_print(const AccuracyGrid& g, const std::string& out) {
  if (out.empty())
    std::cout << csv_text(g);
  else
    emit_csv(g, out);
}

int run_survey(const Options& o) {
  const SurveyConfig c = survey_config(o);
  const auto grid = grid_for(o, c.method);
  const AccuracyGrid g = run_accuracy_survey(c, grid ? &*grid : nullptr);
  write_or_print(g, o.out);
  if (!o.out.empty()) {
    std::vector<double> d;
    for (const auto& r : g.records) d.push_back(r.d);
    std::sort(d.begin(), d.end());
    std::printf("points=%zu min_d=%.2f median_d=%.2f\n", d.size(), d.front(), d[d.size() / 2]);
  }
  return 0;
}

int run_terms(const Options& o) {
  const SurveyConfig c = survey_config(o);
  const auto grid = grid_for(o, c.method);
  const AccuracyGrid g = run_terms_survey(c, grid ? &*grid : nullptr);
  if (!o.out.empty()) emit_csv(g, o.out);
  int unreachable = 0;
  for (const auto& r : g.records) unreachable += (r.flags & kFlagUnreachable) ? 1 : 0;
  std::printf("max_terms=%d\n", max_terms(g));
  if (unreachable) std::printf("unreachable_points=%d\n", unreachable);
  return 0;
}

int run_compare(const Options& o) {
  std::vector<MethodSpec> ms;
  for (const auto& s : o.methods) ms.push_back(parse_method_spec(s));
  if (!o.params.empty()) throw usage_error("compare takes parameters inside --method id:key=val,...");
  Options base_o = o;
  base_o.methods = {"-"};
  SurveyConfig base = survey_config(base_o);
  std::optional<TaylorGrid> grid;
  if (!o.grid_file.empty()) grid = load_grid(o.grid_file);
  for (const auto& m : ms)
    if (m.id == "gridtaylor" && !grid) throw usage_error("gridtaylor needs --grid-file");
  const std::string report = compare_report(ms, base, grid ? &*grid : nullptr);
  if (o.out.empty()) {
    std::cout << report;
  } else {
    std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
    if (!f || !(f << report)) throw io_error("compare: cannot write " + o.out);
  }
  return 0;
}

// Defaults cover the node rectangle Re [-33, 18], Im [0, 36] at the stride.
int run_gridgen(const Options& o) {
  if (o.out.empty()) throw usage_error("gridgen needs --out");
  if (!(o.stride > 0.0)) throw usage_error("--stride must be > 0");
  GridSpec sp;
  sp.s = o.stride;
  sp.k_min = o.k_min.value_or(static_cast<int>(std::ceil(-33.0 / o.stride - 1e-9)));
  sp.k_max = o.k_max.value_or(static_cast<int>(std::floor(18.0 / o.stride + 1e-9)));
  sp.l_max = o.l_max.value_or(static_cast<int>(std::floor(36.0 / o.stride + 1e-9)));
  sp.J_max = o.jmax;
  const TaylorGrid g = build_grid(sp);
  save_grid(g, o.out);
  std::printf("nodes=%d jmax=%d stride=%g\n", g.nk() * g.nl(), g.J_max, g.s);
  return 0;
}

int run_tables(const Options& o) {
  if (o.verify.empty() == o.print.empty()) throw usage_error("tables needs exactly one of --verify or --print");
  const std::string& which = o.verify.empty() ? o.print : o.verify;
  std::vector<std::string> names = which == "all" ? table_names() : std::vector<std::string>{which};
  bool ok = true;
  for (const auto& n : names) {
    const TableCheck t = check_table(n);
    if (!o.print.empty()) std::cout << t.text;
    std::printf("%s: %d entries, %s\n", t.name.c_str(), t.entries, t.pass ? "match" : "MISMATCH");
    if (!t.pass && !o.verify.empty()) std::cout << t.text;
    ok = ok && t.pass;
  }
  return ok || o.verify.empty() ? 0 : 1;
}

void add_domain(CLI::App* sc, Options& o) {
  sc->add_option("--method", o.methods, "method id (compare: repeat, id:key=val,...)")->required();
  sc->add_option("--m", o.m, "index m");
  sc->add_option("--re-min", o.re_min);
  sc->add_option("--re-max", o.re_max);
  sc->add_option("--im-min", o.im_min);
  sc->add_option("--im-max", o.im_max);
  sc->add_option("--step", o.step);
  sc->add_option("--target-digits", o.target_d);
  sc->add_option("--param", o.params, "key=val, repeatable");
  sc->add_option("--grid-file", o.grid_file, "grid from gridgen (gridtaylor)");
  sc->add_option("--out", o.out, "output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate and survey F_m(z) methods"};
  app.require_subcommand(1);
  Options o;
  CLI::App* survey = app.add_subcommand("survey", "digits against the oracle over a rectangle, as CSV");
  CLI::App* terms = app.add_subcommand("terms", "term counts over a rectangle");
  CLI::App* compare = app.add_subcommand("compare", "min/median digits, max terms and exponentials per point");
  CLI::App* gridgen = app.add_subcommand("gridgen", "build and save a Taylor grid");
  CLI::App* tables = app.add_subcommand("tables", "regenerate or verify the printed tables");
  add_domain(survey, o);
  add_domain(terms, o);
  add_domain(compare, o);
  gridgen->add_option("--stride", o.stride);
  gridgen->add_option("--jmax", o.jmax);
  gridgen->add_option("--k-min", o.k_min);
  gridgen->add_option("--k-max", o.k_max);
  gridgen->add_option("--l-max", o.l_max);
  gridgen->add_option("--out", o.out)->required();
  tables->add_option("--verify", o.verify, "table name or 'all'");
  tables->add_option("--print", o.print, "table name or 'all'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*survey) return run_survey(o);
    if (*terms) return run_terms(o);
    if (*compare) return run_compare(o);
    if (*gridgen) return run_gridgen(o);
    if (*tables) return run_tables(o);
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const range_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const io_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const format_error& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
