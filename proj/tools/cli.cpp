#include "cli.hpp"

#include "nlpot/error.hpp"
#include "nlpot/riesz.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace nlpot::cli {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

std::string params_str(const Params& p) {
  std::string s;
  for (const auto& [k, v] : p) {
    if (!s.empty()) s += ";";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%g", k.c_str(), v);
    s += buf;
  }
  return s;
}

Params parse_params(const json& j) {
  Params p;
  if (j.is_null()) return p;
  if (!j.is_object()) throw InvalidInput("params must be an object of numbers");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw InvalidInput("param " + k + " must be a number");
    p[k] = v.get<double>();
  }
  return p;
}

Params default_params(const std::string& name) {
  for (const auto& ref : pair_catalog_defaults())
    if (ref.name == name) return ref.params;
  return {};
}

double get_num(const json& j, const char* key, double def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number()) throw InvalidInput(std::string("config key ") + key + " must be a number");
  return j.at(key).get<double>();
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
  if (!f) throw InvalidInput("cannot write " + dir + "/" + name);
  f << body;
}

json witness_json(const Witness& w) {
  json m = json::array();
  const auto& a = w.jet.A.matrix();
  for (int i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    m.push_back(row);
  }
  json p = json::array();
  for (int i = 0; i < w.jet.p.size(); ++i) p.push_back(w.jet.p[i]);
  return {{"note", w.note}, {"value", w.value}, {"r", w.jet.r}, {"p", p}, {"A", m}};
}

json report_json(const ProbeReport& r) {
  json j{{"probe", r.probe}, {"subject", r.subject}, {"pass", r.pass}, {"samples", r.samples}, {"seed", r.seed}};
  j["stats"] = r.stats;
  j["notes"] = r.notes;
  json w = json::array();
  for (const auto& x : r.witnesses) w.push_back(witness_json(x));
  j["witnesses"] = w;
  json cells = json::array();
  for (const auto& c : r.cells)
    cells.push_back({{"s", c.s}, {"lambda", c.lambda}, {"cap", c.cap}, {"min_increment", c.min_increment},
                     {"samples", c.samples}});
  j["cells"] = cells;
  return j;
}

}  // namespace

std::uint64_t config_hash(const json& config, std::uint64_t seed) {
  std::string s = config.dump() + "#seed=" + std::to_string(seed);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream f(path);
  if (!f) throw InvalidInput("cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    json j = json::parse(ss.str(), nullptr, true, true);
    if (!j.is_object()) throw InvalidInput("config must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("config parse error: ") + e.what());
  }
}

std::string resolve_out_dir(const std::string& flag, const json& config) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("NLPOT_OUT_DIR"); env && *env) return env;
  if (config.contains("out")) return config.at("out").get<std::string>();
  return "";
}

PlaneFunction plane_function(const json& desc, const OperatorPair* pair) {
  if (desc.is_number()) {
    double c = desc.get<double>();
    return [c](double, double) { return c; };
  }
  if (!desc.is_object() || !desc.contains("type")) throw InvalidInput("function desc needs a \"type\"");
  const std::string type = desc.at("type").get<std::string>();
  if (type == "constant") {
    double c = get_num(desc, "value", 0.0);
    return [c](double, double) { return c; };
  }
  if (type == "linear") {
    double a = get_num(desc, "a", 0.0), b = get_num(desc, "b", 0.0), c = get_num(desc, "c", 0.0);
    return [a, b, c](double x, double y) { return a + b * x + c * y; };
  }
  if (type == "quadratic") {
    double a11 = get_num(desc, "a11", 1.0), a12 = get_num(desc, "a12", 0.0), a22 = get_num(desc, "a22", 1.0);
    double b1 = get_num(desc, "b1", 0.0), b2 = get_num(desc, "b2", 0.0), c = get_num(desc, "c", 0.0);
    return [=](double x, double y) { return 0.5 * (a11 * x * x + 2 * a12 * x * y + a22 * y * y) + b1 * x + b2 * y + c; };
  }
  if (type == "log_radius") {
    double cx = get_num(desc, "cx", 0.0), cy = get_num(desc, "cy", 0.0);
    return [cx, cy](double x, double y) { return std::log(std::hypot(x - cx, y - cy)); };
  }
  if (type == "kernel") {
    double p = get_num(desc, "p", 2.0), eps = get_num(desc, "eps", 0.25);
    return [p, eps](double x, double y) {
      Vector v(2);
      v << x, y;
      return kernel_eps(p, eps, v);
    };
  }
  if (type == "kernel_image") {
    if (!pair) throw InvalidInput("kernel_image needs the solve pair");
    double p = get_num(desc, "p", 2.0), eps = get_num(desc, "eps", 0.25);
    OperatorPair op = *pair;
    return [op, p, eps](double x, double y) {
      Vector v(2);
      v << x, y;
      return op(kernel_hessian(p, eps, v).hessian);
    };
  }
  if (type == "ridge") {
    double x0 = get_num(desc, "x0", 0.0), slope = get_num(desc, "slope", 1.0);
    return [x0, slope](double x, double) { return slope * std::max(x - x0, 0.0); };
  }
  if (type == "radial_table") {
    auto r = desc.at("r").get<std::vector<double>>();
    auto v = desc.at("v").get<std::vector<double>>();
    if (r.size() != v.size() || r.size() < 2) throw InvalidInput("radial_table: r and v need equal length >= 2");
    for (std::size_t i = 1; i < r.size(); ++i)
      if (!(r[i] > r[i - 1])) throw InvalidInput("radial_table: r must increase");
    return [r, v](double x, double y) {
      double t = std::hypot(x, y);
      if (t <= r.front()) return v.front();
      if (t >= r.back()) return v.back();
      auto it = std::upper_bound(r.begin(), r.end(), t);
      std::size_t k = static_cast<std::size_t>(it - r.begin());
      double w = (t - r[k - 1]) / (r[k] - r[k - 1]);
      return (1 - w) * v[k - 1] + w * v[k];
    };
  }
  throw InvalidInput("unknown function type: " + type);
}

Domain parse_domain(const json& desc) {
  if (desc.is_null()) return Domain::rectangle(0, 1, 0, 1);
  const std::string type = desc.value("type", "rectangle");
  if (type == "rectangle")
    return Domain::rectangle(get_num(desc, "x0", 0.0), get_num(desc, "x1", 1.0), get_num(desc, "y0", 0.0),
                             get_num(desc, "y1", 1.0));
  if (type == "disk") return Domain::disk(get_num(desc, "cx", 0.0), get_num(desc, "cy", 0.0), get_num(desc, "r", 1.0));
  if (type == "annulus")
    return Domain::annulus(get_num(desc, "cx", 0.0), get_num(desc, "cy", 0.0), get_num(desc, "r_in", 0.5),
                           get_num(desc, "r_out", 1.0));
  throw InvalidInput("unknown domain type: " + type);
}

SolveConfig parse_solve_config(const json& cfg) {
  static const std::vector<std::string> known{
      "pair", "params", "domain", "grid", "directions", "psi", "boundary", "initial", "oracle", "oracle_tolerance",
      "mode", "theta", "omega", "tolerance", "max_iterations", "out", "trials", "perturb", "mismatch", "pgm"};
  for (const auto& [k, v] : cfg.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw InvalidInput("unknown config key: " + k);
  SolveConfig c;
  c.pair = cfg.value("pair", std::string("det"));
  c.params = cfg.contains("params") ? parse_params(cfg.at("params")) : Params{{"n", 2.0}};
  OperatorPair pair = make_operator_pair(c.pair, c.params);
  c.domain = parse_domain(cfg.contains("domain") ? cfg.at("domain") : json());
  c.grid = cfg.value("grid", 33);
  c.directions = cfg.value("directions", 16);
  if (cfg.contains("psi")) c.psi = plane_function(cfg.at("psi"), &pair);
  if (cfg.contains("boundary")) c.boundary = plane_function(cfg.at("boundary"), &pair);
  if (cfg.contains("initial")) c.initial = plane_function(cfg.at("initial"), &pair);
  const std::string mode = cfg.value("mode", std::string("gauss-seidel"));
  if (mode == "gauss-seidel") c.mode = SweepMode::GaussSeidel;
  else if (mode == "jacobi") c.mode = SweepMode::Jacobi;
  else throw InvalidInput("mode must be gauss-seidel or jacobi");
  c.theta = get_num(cfg, "theta", 1.0);
  c.omega = get_num(cfg, "omega", 0.0);
  c.tolerance = get_num(cfg, "tolerance", 1e-10);
  c.max_iterations = cfg.value("max_iterations", 20000);
  if (!(c.theta > 0.0 && c.theta <= 1.0)) throw InvalidInput("theta must lie in (0, 1]");
  return c;
}

// ---- catalog ------------------------------------------------------------------

int cmd_catalog(const RunContext&, std::ostream& out) {
  std::vector<std::string> rows;
  for (const auto& ref : pair_catalog_defaults()) {
    OperatorPair p = make_operator_pair(ref.name, ref.params);
    const auto& mono = p.F.monotonicity_cone_ref();
    std::ostringstream s;
    s << "pair," << ref.name << "," << params_str(ref.params) << "," << p.dim() << ","
      << (p.degree ? num(*p.degree) : "none") << "," << p.range.str() << "," << p.F.name() << ","
      << (mono ? mono->name : "none") << "," << (p.total ? 1 : 0) << "," << (p.expect.tame ? 1 : 0) << ","
      << (p.expect.topologically_tame ? 1 : 0) << "," << (p.expect.compatible ? 1 : 0);
    rows.push_back(s.str());
  }
  for (const auto& ref : subequation_catalog_defaults()) {
    Subequation f = make_subequation(ref.name, ref.params);
    const auto& fl = f.flags();
    const auto& mono = f.monotonicity_cone_ref();
    std::ostringstream s;
    s << "subequation," << ref.name << "," << params_str(ref.params) << "," << f.dim() << ",none,none,"
      << (fl.is_cone ? "cone" : "noncone") << (fl.convex ? "+convex" : "") << (fl.pure_second_order ? "" : "+gradient")
      << (fl.reduced ? "" : "+value") << "," << (mono ? mono->name : "none") << ",0,0,0,0";
    rows.push_back(s.str());
  }
  std::sort(rows.begin(), rows.end());
  out << "kind,name,params,n,degree,range,subequation,monotonicity_cone,total,expect_tame,expect_top_tame,"
         "expect_compatible\n";
  for (const auto& r : rows) out << r << "\n";
  return 0;
}

// ---- probe --------------------------------------------------------------------

int cmd_probe(const RunContext& ctx, std::ostream& out, std::ostream& err) {
  const json& cfg = ctx.config;
  const std::string name = cfg.value("pair", std::string("det"));
  Params params = cfg.contains("params") ? parse_params(cfg.at("params")) : default_params(name);
  OperatorPair pair = make_operator_pair(name, params);
  const std::size_t samples = cfg.value("samples", std::size_t(400));
  SampleOptions so{samples, ctx.seed, ctx.threads, 1.0};

  std::vector<std::string> suites;
  if (cfg.contains("suites")) suites = cfg.at("suites").get<std::vector<std::string>>();
  if (suites.empty()) {
    suites = {"ellipticity", "tameness", "top_tameness", "compatibility", "duality"};
    if (pair.degree) suites.push_back("homogeneity");
    if (pair.F.monotonicity_cone_ref() && pair.c0) suites.push_back("monotonicity");
  }
  static const std::vector<std::string> all{"ellipticity", "homogeneity", "tameness",   "top_tameness",
                                            "compatibility", "monotonicity", "duality", "lemma_3_23"};
  for (const auto& s : suites)
    if (std::find(all.begin(), all.end(), s) == all.end()) throw InvalidInput("unknown suite: " + s);

  out << "suite,expected_pass,observed_pass,status,witnesses,samples\n";
  bool ok = true;
  json reports = json::array();
  for (const auto& suite : suites) {
    ProbeReport r;
    bool expected = true;
    if (suite == "ellipticity") {
      r = ellipticity_check(pair, so);
    } else if (suite == "homogeneity") {
      r = homogeneity_check(pair, so);
    } else if (suite == "tameness") {
      TamenessOptions o;
      o.sample = {std::max<std::size_t>(samples / 4, 50), ctx.seed, ctx.threads, 1.0};
      r = tameness_probe(pair, o);
      expected = pair.expect.tame;
    } else if (suite == "top_tameness") {
      TopTameOptions o;
      o.sample = {samples, ctx.seed + 1, ctx.threads, 1.0};
      r = topological_tameness_probe(pair, o);
      expected = pair.expect.topologically_tame;
    } else if (suite == "compatibility") {
      CompatOptions o;
      o.sample = {samples, ctx.seed + 2, ctx.threads, 1.0};
      r = compatibility_probe(pair, o);
      expected = pair.expect.compatible;
    } else if (suite == "monotonicity") {
      double c0 = pair.c0.value_or(0.0);
      // level sets of a non-tame pair need only be P-monotone
      Subequation cone = pair.expect.tame ? pair.F.monotonicity_cone()
                                          : make_subequation("P", {{"n", double(pair.dim())}});
      std::vector<double> levels;
      for (double c : {c0, c0 + 0.5, c0 + 2.0})
        if (pair.range.contains(c)) levels.push_back(c);
      r = monotonicity_check(pair, cone, levels, so);
    } else if (suite == "duality") {
      r = duality_involution_check(pair.F, so);
    } else {
      double c = pair.c0.value_or(0.0) + 0.5;
      r = lemma_3_23_probe(pair, c, so);
    }
    bool status = r.pass == expected;
    ok = ok && status;
    out << suite << "," << expected << "," << r.pass << "," << (status ? "ok" : "unexpected") << ","
        << r.stats["witness_count"] << "," << r.samples << "\n";
    reports.push_back(report_json(r));
  }
  const std::string hash = hex(config_hash(cfg, ctx.seed));
  out << "# probe pair=" << name << " params=" << params_str(params) << " status=" << (ok ? "ok" : "unexpected")
      << " config_hash=" << hash << "\n";
  write_file(ctx.out_dir, "probe_" + hash + ".json",
             json{{"pair", name}, {"config_hash", hash}, {"reports", reports}}.dump(2) + "\n");
  (void)err;
  return ok ? 0 : 1;
}

// ---- riesz --------------------------------------------------------------------

int cmd_riesz(const RunContext& ctx, std::ostream& out, std::ostream& err) {
  const json& cfg = ctx.config;
  std::vector<double> eps = cfg.contains("eps") ? cfg.at("eps").get<std::vector<double>>()
                                                : std::vector<double>{1.0, 0.5, 0.25};
  if (eps.size() < 2) throw InvalidInput("riesz: need at least two eps values");
  std::vector<std::pair<std::string, Params>> pairs;
  if (cfg.contains("pairs")) {
    for (const auto& e : cfg.at("pairs")) pairs.emplace_back(e.at("pair").get<std::string>(), parse_params(e.value("params", json::object())));
  } else if (cfg.contains("pair")) {
    {
    const std::string name = cfg.at("pair").get<std::string>();
    pairs.emplace_back(name, cfg.contains("params") ? parse_params(cfg.at("params")) : default_params(name));
  }
  } else {
    pairs = {{"laplace", {{"n", 2}}},
             {"det", {{"n", 2}}},
             {"det", {{"n", 3}}},
             {"sigma_k", {{"n", 4}, {"k", 2}}},
             {"p_fold", {{"n", 3}, {"p", 2}}},
             {"f_delta", {{"n", 2}, {"delta", 0.5}}},
             {"pucci_minus", {{"n", 2}, {"lambda", 1.0}, {"Lambda", 2.0}}},
             {"garding_pucci_root", {{"n", 2}, {"lambda", 1.0}, {"Lambda", 2.0}}},
             {"det_C", {{"n0", 2}}}};
  }
  out << "pair,params,n,m,p,alpha,tabulated_alpha";
  for (std::size_t i = 0; i < eps.size(); ++i) {
    char buf[48];
    std::snprintf(buf, sizeof buf, ",c(%g)", eps[i]);
    out << buf;
  }
  out << ",mass_spread,slope_half,expected_half,slope_double,expected_double,status\n";
  bool ok = true;
  for (const auto& [name, params] : pairs) {
    OperatorPair pair = make_operator_pair(name, params);
    RieszProfile rp = riesz_profile(pair, eps);
    double lo = *std::min_element(rp.mass.begin(), rp.mass.end());
    double hi = *std::max_element(rp.mass.begin(), rp.mass.end());
    double spread = (hi - lo) / hi;
    auto close = [](double a, double b) { return std::abs(a - b) <= 0.05 * std::max(1.0, std::abs(b)); };
    bool good = spread <= 5e-3 && lo > 0.0 && close(rp.slope_half, rp.expected_half) &&
                close(rp.slope_double, rp.expected_double);
    ok = ok && good;
    out << name << "," << params_str(params) << "," << rp.n << "," << num(rp.m) << "," << num(rp.p) << ","
        << num(rp.alpha) << "," << (rp.tabulated_alpha ? num(*rp.tabulated_alpha) : "none");
    for (double c : rp.mass) out << "," << num(c);
    out << "," << num(spread) << "," << num(rp.slope_half) << "," << num(rp.expected_half) << ","
        << num(rp.slope_double) << "," << num(rp.expected_double) << "," << (good ? "ok" : "unexpected") << "\n";
    if (rp.tabulated_alpha && std::abs(*rp.tabulated_alpha - rp.alpha) > 1e-12 * std::max(1.0, rp.alpha))
      err << "note: " << name << " tabulated alpha " << num(*rp.tabulated_alpha) << " differs from n/(m p) = "
          << num(rp.alpha) << "; the computed value is used\n";
  }
  out << "# riesz status=" << (ok ? "ok" : "unexpected") << " config_hash=" << hex(config_hash(cfg, ctx.seed))
      << "\n";
  return ok ? 0 : 1;
}

// ---- solve / compare ----------------------------------------------------------

namespace {

GridField residual_field(const SolveConfig& c, const GridField& u) {
  Stencil s = build_stencil(u, c.directions);
  SchemeOperator op(make_operator_pair(c.pair, c.params), s.dirs);
  GridField r = u;
  std::fill(r.values.begin(), r.values.end(), 0.0);
  for (std::size_t k = 0; k < s.nodes.size(); ++k) {
    int node = s.nodes[k];
    r.values[node] = scheme_residual(op, s, u, k, c.psi(u.x(node % u.nx), u.y(node / u.nx)));
  }
  return r;
}

}  // namespace

int cmd_solve(const RunContext& ctx, std::ostream& out, std::ostream& err) {
  const json& cfg = ctx.config;
  SolveConfig c = parse_solve_config(cfg);
  c.threads = ctx.threads;
  Solution sol = solve(c);
  const auto& rep = sol.report;
  const std::string hash = hex(config_hash(cfg, ctx.seed));
  bool ok = rep.converged && rep.penalty_nodes == 0;
  std::ostringstream line;
  line << "solve pair=" << c.pair << " domain=\"" << c.domain.str() << "\" grid=" << c.grid
       << " directions=" << c.directions << " mode=" << rep.mode << " converged=" << rep.converged
       << " iterations=" << rep.iterations << " residual=" << num(rep.residual)
       << " penalty_nodes=" << rep.penalty_nodes;
  if (cfg.contains("oracle")) {
    OperatorPair pair = make_operator_pair(c.pair, c.params);
    PlaneFunction exact = plane_function(cfg.at("oracle"), &pair);
    double abs_err = sup_error(sol.u, exact), rel = relative_sup_error(sol.u, exact);
    line << " sup_error=" << num(abs_err) << " relative_error=" << num(rel);
    if (cfg.contains("oracle_tolerance")) {
      bool within = rel <= cfg.at("oracle_tolerance").get<double>();
      line << " oracle=" << (within ? "ok" : "exceeded");
      ok = ok && within;
    }
  }
  line << " config_hash=" << hash;
  out << line.str() << "\n";
  err << "wall_seconds=" << rep.seconds << "\n";
  if (!ctx.out_dir.empty()) {
    std::ostringstream csv, pgm, rpgm;
    write_csv(csv, sol.u);
    write_file(ctx.out_dir, "u.csv", csv.str());
    if (cfg.value("pgm", true)) {
      write_pgm(pgm, sol.u);
      write_pgm(rpgm, residual_field(c, sol.u));
      write_file(ctx.out_dir, "u.pgm", pgm.str());
      write_file(ctx.out_dir, "residual.pgm", rpgm.str());
    }
    json r{{"converged", rep.converged}, {"iterations", rep.iterations}, {"residual", rep.residual},
           {"last_update", rep.last_update}, {"omega", rep.omega}, {"mode", rep.mode},
           {"penalty_nodes", rep.penalty_nodes}, {"config_hash", hash}, {"summary", line.str()}};
    write_file(ctx.out_dir, "report.json", r.dump(2) + "\n");
  }
  return ok ? 0 : 1;
}

int cmd_compare(const RunContext& ctx, std::ostream& out, std::ostream& err) {
  const json& cfg = ctx.config;
  ComparisonConfig cc;
  cc.base = parse_solve_config(cfg);
  cc.base.threads = ctx.threads;
  cc.trials = cfg.value("trials", 100);
  cc.perturb = get_num(cfg, "perturb", 0.5);
  cc.mismatch = cfg.value("mismatch", true);
  cc.seed = ctx.seed;
  auto t0 = std::chrono::steady_clock::now();
  ComparisonBatch b = run_comparison_batch(cc);
  std::ostringstream csv;
  csv << "trial,boundary_max,interior_max,hypothesis,violated\n";
  for (std::size_t i = 0; i < b.verdicts.size(); ++i) {
    const auto& v = b.verdicts[i];
    csv << i << "," << num(v.boundary_max) << "," << num(v.interior_max) << "," << v.hypothesis << "," << v.violated
        << "\n";
  }
  out << csv.str();
  bool detected = !cc.mismatch || (b.mismatch && b.mismatch->violated);
  bool ok = b.violations == 0 && b.unconverged == 0 && detected;
  out << "# compare pair=" << cc.base.pair << " trials=" << b.trials << " violations=" << b.violations
      << " unconverged=" << b.unconverged << " mismatch_detected=" << (cc.mismatch ? (detected ? "1" : "0") : "skipped")
      << " status=" << (ok ? "ok" : "unexpected") << " config_hash=" << hex(config_hash(cfg, ctx.seed)) << "\n";
  err << "wall_seconds=" << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << "\n";
  write_file(ctx.out_dir, "compare.csv", csv.str());
  return ok ? 0 : 1;
}

// ---- entry point --------------------------------------------------------------

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"nlpot: operator pairs, fundamental solutions and a monotone planar solver"};
  app.require_subcommand(1);
  std::string config_path, out_flag, pair_name;
  std::uint64_t seed = 1;
  int threads = 1;
  std::vector<std::string> param_kv, suites;
  std::vector<double> eps;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config (comments allowed)")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "RNG seed");
    sub->add_option("--threads", threads, "worker threads; 1 is deterministic")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_flag, "output directory (overrides NLPOT_OUT_DIR)");
  };
  CLI::App* catalog = app.add_subcommand("catalog", "list operator pairs and subequations");
  common(catalog);
  CLI::App* probe = app.add_subcommand("probe", "run probe suites on one pair");
  common(probe);
  probe->add_option("--pair", pair_name, "pair name");
  probe->add_option("--param", param_kv, "parameter key=value (repeatable)");
  probe->add_option("--suites", suites, "suites to run")->delimiter(',');
  CLI::App* riesz = app.add_subcommand("riesz", "Riesz characteristic, alpha and delta masses as CSV");
  common(riesz);
  riesz->add_option("--pair", pair_name, "pair name");
  riesz->add_option("--param", param_kv, "parameter key=value (repeatable)");
  riesz->add_option("--eps", eps, "eps values")->delimiter(',');
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve f(D^2 u) = psi on a planar domain");
  common(solve_cmd);
  CLI::App* compare = app.add_subcommand("compare", "randomized comparison trials");
  common(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    RunContext ctx;
    ctx.config = load_config(config_path);
    ctx.seed = seed;
    ctx.threads = threads;
    if (!pair_name.empty()) ctx.config["pair"] = pair_name;
    if (!param_kv.empty()) {
      json p = ctx.config.value("params", json::object());
      for (const auto& kv : param_kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw InvalidInput("--param expects key=value, got " + kv);
        p[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      }
      ctx.config["params"] = p;
    }
    if (!suites.empty()) ctx.config["suites"] = suites;
    if (!eps.empty()) ctx.config["eps"] = eps;
    ctx.out_dir = resolve_out_dir(out_flag, ctx.config);
    ctx.config.erase("out");

    if (catalog->parsed()) return cmd_catalog(ctx, out);
    if (probe->parsed()) return cmd_probe(ctx, out, err);
    if (riesz->parsed()) return cmd_riesz(ctx, out, err);
    if (solve_cmd->parsed()) return cmd_solve(ctx, out, err);
    return cmd_compare(ctx, out, err);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nlpot::cli
