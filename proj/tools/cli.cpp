#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmaps/asymptotics.hpp"
#include "pmaps/enumerate.hpp"
#include "pmaps/equations.hpp"
#include "pmaps/json_io.hpp"
#include "pmaps/map_io.hpp"
#include "pmaps/pattern.hpp"
#include "pmaps/statistics.hpp"

namespace pmaps::cli {

namespace {

using nlohmann::json;

json tagged(json value, const char* kind, const char* source) {
  return {{"value", std::move(value)}, {"kind", kind}, {"source", source}};
}

std::string rational(const mpq_class& q) { return q.get_str(); }

json conventions() {
  return {{"occurrence_equivalence", "embeddings identified modulo exterior-preserving automorphisms of the pattern"},
          {"partial_boundary", "first i root-face steps visit i+1 distinct vertices"},
          {"deep_faces",
           "a deep 2-face is filled by a map with a simple boundary of length 2 other than the single edge; "
           "the 2-face contracted to one edge is a separate type; families group types by 2-face contraction"},
          {"two_connected", "at least 2 edges, loopless, no cut vertex"},
          {"factorial_moments", "[x^k] counts unordered k-sets of occurrences; k! [x^k] = sum of (X)_k"}};
}

struct Common {
  std::string cls = "all";
  int threads = 1;
  std::string cache;
  int limit = -1;
};

void add_common(CLI::App* sub, Common& c, bool with_class = true) {
  if (with_class)
    sub->add_option("--class", c.cls, "map class: all, bipartite or 2conn")
        ->check(CLI::IsMember({"all", "bipartite", "2conn"}));
  sub->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 256));
  sub->add_option("--cache", c.cache, std::string("cache directory (overrides $") + kCacheEnv + ")");
  sub->add_option("--limit", c.limit, "largest map size to enumerate for the chosen class");
}

EnumerationOptions enumeration_options(const Common& c) {
  EnumerationOptions o;
  o.threads = c.threads;
  o.cache_dir = c.cache;
  if (o.cache_dir.empty())
    if (const char* env = std::getenv(kCacheEnv)) o.cache_dir = env;
  if (c.limit >= 0) o.limits.all = o.limits.bipartite = o.limits.two_connected = c.limit;
  return o;
}

Pattern read_pattern(const std::string& path) {
  auto maps = read_map_file(path);
  if (maps.size() != 1) throw UsageError(path + ": expected exactly one pattern map");
  return Pattern::from_map(maps.front());
}

json pattern_json(const Pattern& p) {
  return {{"map", format_map(p.map)}, {"e", p.edges}, {"v", p.boundary_length}, {"r", p.rotations}};
}

std::vector<IntersectionType> pattern_types(const Pattern& p, MapClass cls, Enumerator& e) {
  return enumerate_intersection_types(p, cls, 2 * p.edges, e);
}

// enumerate ---------------------------------------------------------------

struct EnumerateCmd {
  Common common;
  int n = 0;
  std::string out;
  bool binary = false;
};

json run_enumerate(const EnumerateCmd& c) {
  Enumerator e(enumeration_options(c.common));
  const MapClass cls = parse_map_class(c.common.cls);
  const EnumerationRun& run = e.generate(c.n, cls);
  if (!c.out.empty()) {
    std::vector<RootedMap> maps;
    maps.reserve(run.size());
    for (std::size_t i = 0; i < run.size(); ++i) maps.push_back(run.map(i));
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + c.out);
    if (c.binary) {
      write_binary_maps(f, maps);
    } else {
      f << "# pmaps map text, version " << kFormatVersion << ", " << to_string(cls) << " n=" << c.n << "\n";
      for (const auto& m : maps) f << format_map(m) << "\n";
    }
  }
  return {{"n", c.n}, {"class", to_string(cls)}, {"count", tagged(run.total().get_str(), "exact", "enumeration")}};
}

// occurrences -------------------------------------------------------------

struct OccurrencesCmd {
  std::string pattern, host;
};

json run_occurrences(const OccurrencesCmd& c) {
  const Pattern p = read_pattern(c.pattern);
  json hosts = json::array();
  for (const auto& h : read_map_file(c.host)) {
    auto occ = find_occurrences(h, p);
    json list = json::array();
    for (const auto& o : occ) list.push_back({{"dart_image", o.dart_image}, {"interior_faces", o.interior_faces}});
    hosts.push_back({{"host", format_map(h)},
                     {"count", tagged(occ.size(), "exact", "pattern search")},
                     {"intersecting_pairs", tagged(count_intersecting_pairs(h, occ), "exact", "pattern search")},
                     {"occurrences", list}});
  }
  return {{"pattern", pattern_json(p)}, {"hosts", hosts}};
}

// itypes ------------------------------------------------------------------

struct ItypesCmd {
  Common common;
  std::string pattern, out;
  int max_edges = -1;
};

json run_itypes(const ItypesCmd& c) {
  const Pattern p = read_pattern(c.pattern);
  const MapClass cls = parse_map_class(c.common.cls);
  const int max_edges = c.max_edges < 0 ? 2 * p.edges : c.max_edges;
  Enumerator e(enumeration_options(c.common));
  auto types = enumerate_intersection_types(p, cls, max_edges, e);
  auto families = group_intersection_families(types);
  const json doc = types_to_json(p, cls, max_edges, types, families);
  if (!c.out.empty()) write_json_file(c.out, doc);
  return {{"pattern", pattern_json(p)},
          {"class", to_string(cls)},
          {"max_edges", max_edges},
          {"types", tagged(types.size(), "exact", "enumeration")},
          {"families", tagged(families.size(), "exact", "enumeration")}};
}

// solve -------------------------------------------------------------------

struct SolveCmd {
  Common common;
  std::string pattern, types, out;
  int nz = 10;
  int nx = -1;
};

json run_solve(const SolveCmd& c) {
  const MapClass cls = parse_map_class(c.common.cls);
  if (c.nz < 0) throw UsageError("--Nz must be non-negative");
  Series F;
  json info = {{"class", to_string(cls)}, {"Nz", c.nz}};
  if (c.pattern.empty()) {
    if (!c.types.empty()) throw UsageError("--types needs --pattern");
    const int nx = std::max(c.nx, 0);
    F = solve_tutte(cls, c.nz, nx);
    info["Nx"] = nx;
  } else {
    const Pattern p = read_pattern(c.pattern);
    const int nx = c.nx < 0 ? 2 : c.nx;
    PatternEquation eq;
    if (c.types.empty()) {
      Enumerator e(enumeration_options(c.common));
      eq = PatternEquation::build(p, pattern_types(p, cls, e), cls);
    } else {
      eq = PatternEquation::build(p, {}, cls);
      eq.types = types_from_json(read_json_file(c.types));
      eq.validate();
    }
    F = solve_pattern_equation(eq, c.nz, nx);
    info["Nx"] = nx;
    info["pattern"] = pattern_json(p);
    info["intersection_types"] = eq.types.size();
  }
  check_series_invariants(cls, F);
  const json doc = series_to_json(cls, F);
  if (!c.out.empty()) write_json_file(c.out, doc);
  json at1 = json::array();
  for (int n = 0; n <= c.nz; ++n) at1.push_back(F.at_u1(n, 0).get_str());
  info["counts_at_u1"] = tagged(at1, "exact", "series");
  return info;
}

// moments -----------------------------------------------------------------

struct MomentsCmd {
  std::string series, csv;
};

json growth_json(const GrowthEstimate& g) {
  json out = {{"rho0", tagged(g.rho0, "estimated", "ratio extrapolation")},
              {"rho0_residual", g.ratio.residual},
              {"alpha_free", tagged(g.alpha_free, "estimated", "ratio extrapolation")}};
  if (g.has_first) {
    out["rho1"] = tagged(g.rho1, "estimated", "slope of B_n/A_n");
    out["rho1_residual"] = g.slope.residual;
    out["c_log_deriv"] = tagged(g.c_log_deriv, "estimated", "intercept of B_n/A_n");
    out["c_log_deriv_residual"] = g.intercept.residual;
  }
  if (g.has_second) {
    out["rho2"] = tagged(g.rho2, "estimated", "slope of 2C_n/A_n - (B_n/A_n)^2");
    out["rho2_residual"] = g.curvature.residual;
    const MomentConstants m = moment_constants(g);
    out["c1"] = tagged(m.c1, "estimated", "moment constants");
    out["c2_squared"] = tagged(m.c2_sq, "estimated", "moment constants");
  }
  return out;
}

json run_moments(const MomentsCmd& c, std::ostream& err) {
  const SeriesFile s = series_from_json(read_json_file(c.series));
  const LabeledCoefficients L = s.labeled();
  json rows = json::array();
  std::ostringstream csv;
  csv << "n,mean,variance,ks_distance\n";
  for (int n = 0; n <= s.nz; ++n) {
    if (L.A[n] == 0) continue;
    mpq_class mean(L.B[n], L.A[n]), fm2(L.C2[n], L.A[n]);
    mean.canonicalize();
    fm2.canonicalize();
    const mpq_class var = fm2 + mean - mean * mean;
    json row = {{"n", n}, {"A", L.A[n].get_str()}};
    if (s.nx >= 1) {
      row["B"] = L.B[n].get_str();
      row["mean"] = tagged(rational(mean), "exact", "series");
    }
    if (s.nx >= 2) {
      row["C2"] = L.C2[n].get_str();
      row["variance"] = tagged(rational(var), "exact", "series");
    }
    rows.push_back(row);
    csv << n << "," << (s.nx >= 1 ? mean.get_d() : 0.0) << "," << (s.nx >= 2 ? var.get_d() : 0.0) << ",\n";
  }
  json out = {{"class", to_string(s.cls)}, {"Nz", s.nz}, {"Nx", s.nx}, {"rows", rows}};
  json warnings = json::array();
  if (s.nz + 1 >= 30) {
    const GrowthEstimate g = estimate_growth(L.A, s.nx >= 1 ? L.B : std::vector<mpz_class>{},
                                             s.nx >= 2 ? L.C2 : std::vector<mpz_class>{});
    out["growth"] = growth_json(g);
  } else {
    warnings.push_back("growth estimate skipped: fewer than 30 coefficients");
    err << "warning: growth estimate skipped: fewer than 30 coefficients\n";
  }
  out["warnings"] = warnings;
  if (!c.csv.empty()) {
    std::ofstream f(c.csv);
    if (!f) throw UsageError("cannot write " + c.csv);
    f << csv.str();
  }
  return out;
}

// clt ---------------------------------------------------------------------

struct CltCmd {
  Common common;
  std::string pattern, types, out, csv;
  int nmax = 7;
  int kmax = 3;
  int nz = 60;
};

json run_clt(const CltCmd& c, std::ostream& err) {
  const Pattern p = read_pattern(c.pattern);
  const MapClass cls = parse_map_class(c.common.cls);
  if (c.nmax < 0 || c.kmax < 0) throw UsageError("--nmax and --kmax must be non-negative");
  Enumerator e(enumeration_options(c.common));
  json warnings = json::array();

  json growth = nullptr;
  std::vector<mpz_class> seriesB;
  std::vector<mpz_class> seriesC2;
  if (c.nz > 0) {
    PatternEquation eq;
    if (c.types.empty()) {
      eq = PatternEquation::build(p, pattern_types(p, cls, e), cls);
    } else {
      eq = PatternEquation::build(p, {}, cls);
      eq.types = types_from_json(read_json_file(c.types));
      eq.validate();
    }
    const Series F = solve_pattern_equation(eq, c.nz, 2);
    const LabeledCoefficients L = labeled_coefficients(F);
    seriesB = L.B;
    seriesC2 = L.C2;
    if (c.nz + 1 >= 30)
      growth = growth_json(estimate_growth(L.A, L.B, L.C2));
    else
      warnings.push_back("growth estimate skipped: --Nz below 29");
  }

  std::vector<DistributionTable> dists;
  std::vector<LabeledConfigCounts> labeled;
  json rows = json::array();
  json ks = json::array();
  std::ostringstream csv;
  csv << "n,mean,variance,ks_distance\n";
  for (int n = 0; n <= c.nmax; ++n) {
    PatternStatistics st = pattern_statistics(e, n, cls, p, c.kmax);
    const DistributionTable& d = st.distribution;
    json hist = json::array();
    for (const auto& [x, cnt] : d.histogram) hist.push_back({x, cnt.get_str()});
    json fm = json::array();
    for (int k = 0; k <= c.kmax; ++k) fm.push_back(rational(d.factorial_moment(k)));
    json row = {{"n", n},
                {"maps", tagged(d.total.get_str(), "exact", "enumeration")},
                {"histogram", tagged(hist, "exact", "enumeration")},
                {"mean", tagged(rational(d.mean()), "exact", "enumeration")},
                {"variance", tagged(rational(d.variance()), "exact", "enumeration")},
                {"factorial_moments", tagged(fm, "exact", "enumeration")}};
    if (n < static_cast<int>(seriesB.size())) {
      row["series_B"] = tagged(seriesB[n].get_str(), "exact", "series");
      row["series_C2"] = tagged(seriesC2[n].get_str(), "exact", "series");
      row["B_matches"] = seriesB[n] == d.falling_factorial_sum(1);
      row["C2_matches"] = seriesC2[n] == d.falling_factorial_sum(2);
    }
    rows.push_back(row);
    double ksd = -1;
    if (d.variance() > 0) {
      ksd = ks_normality(d).distance;
      ks.push_back({{"n", n}, {"distance", tagged(ksd, "estimated", "exact law vs normal cdf")}});
    }
    csv << n << "," << d.mean().get_d() << "," << d.variance().get_d() << ",";
    if (ksd >= 0) csv << ksd;
    csv << "\n";
    dists.push_back(std::move(st.distribution));
    for (auto& l : st.labeled) labeled.push_back(l);
  }
  if (ks.empty()) {
    warnings.push_back("no non-degenerate distribution up to --nmax; KS section is empty");
    err << "warning: no non-degenerate distribution up to --nmax; KS section is empty\n";
  }

  json gw = json::array();
  for (const auto& r : gw_condition_check(dists, std::max(c.kmax, 1)))
    gw.push_back({{"n", r.n},
                  {"k", r.k},
                  {"degenerate", r.degenerate},
                  {"ratio", tagged(r.ratio, "estimated", "exact moments")},
                  {"ratio_k_squared", tagged(r.ratio_k_squared, "estimated", "exact moments")}});
  json sandwich = json::array();
  for (const auto& r : sandwich_check(labeled, dists))
    sandwich.push_back({{"n", r.n},
                        {"k", r.k},
                        {"m_circ_cross", tagged(r.m_circ_cross.get_str(), "exact", "enumeration")},
                        {"m_circ", tagged(r.m_circ.get_str(), "exact", "enumeration")},
                        {"right_side", tagged(r.right, "estimated", "enumeration")},
                        {"residual", tagged(r.residual, "estimated", "enumeration")},
                        {"left_holds", r.left_holds},
                        {"left_equal", r.left_equal}});

  if (!c.csv.empty()) {
    std::ofstream f(c.csv);
    if (!f) throw UsageError("cannot write " + c.csv);
    f << csv.str();
  }
  return {{"pattern", pattern_json(p)},
          {"class", to_string(cls)},
          {"nmax", c.nmax},
          {"kmax", c.kmax},
          {"Nz", c.nz},
          {"growth", growth},
          {"distributions", rows},
          {"ks", ks},
          {"gao_wormald", gw},
          {"sandwich", sandwich},
          {"warnings", warnings}};
}

// saddle-check ------------------------------------------------------------

struct SaddleCmd {
  double n = 1e6, k = 1e3;
  std::string f, g = "0";
  int digits = 50;
};

std::vector<double> parse_coeffs(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad coefficient '" + item + "' in \"" + s + "\"");
    }
  }
  if (out.empty()) throw UsageError("empty coefficient list");
  return out;
}

json run_saddle(const SaddleCmd& c) {
  const auto f = parse_coeffs(c.f);
  const auto g = parse_coeffs(c.g);
  if (f.size() < 2) throw UsageError("--f needs at least f(0) and f'(0)");
  SaddleInput in{c.n, c.k, f[0], f[1], f.size() > 2 ? 2 * f[2] : 0.0, g[0]};
  const double saddle = saddle_factorial_moment(in);
  const ContourResult oracle = contour_oracle(f, g, c.n, c.k, c.digits);
  const double contour = oracle.log_value + std::lgamma(c.k + 1) - 2.5 * std::log(c.n);
  const double ratio = c.k / std::sqrt(c.n);
  return {{"n", c.n},
          {"k", c.k},
          {"f", f},
          {"g", g},
          {"digits", c.digits},
          {"log_saddle", tagged(saddle, "estimated", "closed saddle formula")},
          {"log_contour", tagged(contour, "estimated", "trapezoidal contour integral")},
          {"contour_nodes", oracle.nodes},
          {"relative_difference", std::expm1(saddle - contour)},
          {"k_over_sqrt_n", ratio},
          {"outside_sqrt_regime", ratio < 0.1 || ratio > 10}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool timing) {
  CLI::App app{"Pattern occurrences in random planar maps", "pmaps"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  EnumerateCmd en;
  auto* s_en = app.add_subcommand("enumerate", "list all rooted maps of a class and size");
  s_en->add_option("--n", en.n, "number of edges")->required()->check(CLI::NonNegativeNumber);
  s_en->add_option("--out", en.out, "write the maps to this file");
  s_en->add_flag("--binary", en.binary, "binary map format instead of text");
  add_common(s_en, en.common);

  OccurrencesCmd oc;
  auto* s_oc = app.add_subcommand("occurrences", "find pattern occurrences in host maps");
  s_oc->add_option("--pattern", oc.pattern, "pattern map file")->required();
  s_oc->add_option("--host", oc.host, "host map file (one or more maps)")->required();

  ItypesCmd it;
  auto* s_it = app.add_subcommand("itypes", "enumerate intersection types of a pattern");
  s_it->add_option("--pattern", it.pattern, "pattern map file")->required();
  s_it->add_option("--max-edges", it.max_edges, "largest union size (default twice the pattern)");
  s_it->add_option("--out", it.out, "types.json output");
  add_common(s_it, it.common);

  SolveCmd so;
  auto* s_so = app.add_subcommand("solve", "solve the functional equation of a class");
  s_so->add_option("--pattern", so.pattern, "pattern map file");
  s_so->add_option("--types", so.types, "types.json from itypes (default: enumerate)");
  s_so->add_option("--Nz", so.nz, "highest power of z")->check(CLI::NonNegativeNumber);
  s_so->add_option("--Nx", so.nx, "highest power of x (default 2 with a pattern, else 0)");
  s_so->add_option("--out", so.out, "series.json output");
  add_common(s_so, so.common);

  MomentsCmd mo;
  auto* s_mo = app.add_subcommand("moments", "exact moments and growth constants from a series file");
  s_mo->add_option("--series", mo.series, "series.json")->required();
  s_mo->add_option("--csv", mo.csv, "CSV output (n, mean, variance, ks_distance)");

  CltCmd cl;
  auto* s_cl = app.add_subcommand("clt", "exact laws, normality and factorial-moment checks");
  s_cl->add_option("--pattern", cl.pattern, "pattern map file")->required();
  s_cl->add_option("--types", cl.types, "types.json from itypes (default: enumerate)");
  s_cl->add_option("--nmax", cl.nmax, "largest map size")->check(CLI::NonNegativeNumber);
  s_cl->add_option("--kmax", cl.kmax, "largest factorial moment order")->check(CLI::Range(0, 6));
  s_cl->add_option("--Nz", cl.nz, "series order for the growth constants (0 skips)")->check(CLI::NonNegativeNumber);
  s_cl->add_option("--out", cl.out, "report.json output");
  s_cl->add_option("--csv", cl.csv, "CSV output (n, mean, variance, ks_distance)");
  add_common(s_cl, cl.common);

  SaddleCmd sa;
  auto* s_sa = app.add_subcommand("saddle-check", "compare the saddle formula with a contour integral");
  s_sa->add_option("--n", sa.n, "n")->check(CLI::PositiveNumber);
  s_sa->add_option("--k", sa.k, "k")->check(CLI::NonNegativeNumber);
  s_sa->add_option("--f", sa.f, "Taylor coefficients of f = log rho, comma separated")->required();
  s_sa->add_option("--g", sa.g, "Taylor coefficients of g = log c, comma separated");
  s_sa->add_option("--digits", sa.digits, "working precision in decimal digits")->check(CLI::Range(10, 200));

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  json report = {{"format", "pmaps-report"}, {"version", kFormatVersion}, {"tool", kToolVersion}};
  std::string report_path;
  try {
    json results;
    if (s_en->parsed()) {
      report["command"] = "enumerate";
      report["config"] = {{"n", en.n}, {"class", en.common.cls}, {"out", en.out}, {"binary", en.binary}};
      results = run_enumerate(en);
    } else if (s_oc->parsed()) {
      report["command"] = "occurrences";
      report["config"] = {{"pattern", oc.pattern}, {"host", oc.host}};
      results = run_occurrences(oc);
    } else if (s_it->parsed()) {
      report["command"] = "itypes";
      report["config"] = {{"pattern", it.pattern}, {"class", it.common.cls}, {"max_edges", it.max_edges}, {"out", it.out}};
      results = run_itypes(it);
    } else if (s_so->parsed()) {
      report["command"] = "solve";
      report["config"] = {{"class", so.common.cls}, {"pattern", so.pattern}, {"types", so.types},
                          {"Nz", so.nz},            {"Nx", so.nx},           {"out", so.out}};
      results = run_solve(so);
    } else if (s_mo->parsed()) {
      report["command"] = "moments";
      report["config"] = {{"series", mo.series}, {"csv", mo.csv}};
      results = run_moments(mo, err);
    } else if (s_cl->parsed()) {
      report["command"] = "clt";
      report["config"] = {{"pattern", cl.pattern}, {"class", cl.common.cls}, {"nmax", cl.nmax}, {"kmax", cl.kmax},
                          {"Nz", cl.nz},           {"types", cl.types},     {"csv", cl.csv}};
      results = run_clt(cl, err);
      report_path = cl.out;
    } else if (s_sa->parsed()) {
      report["command"] = "saddle-check";
      report["config"] = {{"n", sa.n}, {"k", sa.k}, {"f", sa.f}, {"g", sa.g}, {"digits", sa.digits}};
      results = run_saddle(sa);
    }
    report["conventions"] = conventions();
    report["results"] = results;
    if (timing)
      report["timing_seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!report_path.empty()) write_json_file(report_path, report);
    out << report.dump(2) << "\n";
    return kOk;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const MapError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::bad_alloc&) {
    err << "resource limit: out of memory\n";
    return kResource;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace pmaps::cli
