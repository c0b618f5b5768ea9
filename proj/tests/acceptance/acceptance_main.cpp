// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "nlpot/charts.hpp"
#include "nlpot/error.hpp"
#include "nlpot/garding.hpp"
#include "nlpot/ops.hpp"
#include "nlpot/riesz.hpp"
#include "nlpot/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace nlpot;

namespace {

constexpr double kPi = std::numbers::pi;

// collects failed sub-checks for one criterion
struct Check {
  std::vector<std::string> failures;
  std::ostringstream info;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  bool pass() const { return failures.empty(); }
};

Params defaults_of(const std::string& name) {
  for (const auto& r : pair_catalog_defaults())
    if (r.name == name) return r.params;
  throw InvalidInput("no catalog entry " + name);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

GridField negated(const GridField& u) {
  GridField v = u;
  for (double& x : v.values) x = -x;
  auto b = u.boundary;
  v.boundary = [b](double x, double y) { return -b(x, y); };
  return v;
}

Jet2 rand_jet(Rng& rng, int n) { return Jet2(normal(rng), random_vector(rng, n), random_symmetric(rng, n)); }

// ---- 1 ------------------------------------------------------------------------

void duality(Check& c) {
  SampleOptions so{10000, 101, 1, 1.0};
  for (const auto& ref : subequation_catalog_defaults()) {
    ProbeReport r = duality_involution_check(make_subequation(ref.name, ref.params), so);
    c.expect(r.pass, "involution " + ref.name);
    c.expect(r.samples >= so.samples / 2, "too few off-band samples for " + ref.name);
  }
  Rng rng = sample_rng(102, 0);
  int checked = 0;
  for (int n = 2; n <= 5; ++n)
    for (int k = 1; k <= n; ++k) {
      Subequation Lk = make_subequation("Lambda_k", {{"n", double(n)}, {"k", double(k)}});
      Subequation Lo = make_subequation("Lambda_k", {{"n", double(n)}, {"k", double(n - k + 1)}});
      for (int t = 0; t < 500; ++t) {
        SymMatrix a = random_symmetric(rng, n);
        bool near = false;
        for (double v : a.eigenvalues()) near = near || std::abs(v) < 1e-6;
        if (near) continue;
        ++checked;
        c.expect(dual_contains(Lk, Jet2(a)) == Lo.contains(a), "branch dual n=" + std::to_string(n));
      }
    }
  c.info << subequation_catalog_defaults().size() << " subequations x 1e4 jets, " << checked << " branch jets";
}

// ---- 2 ------------------------------------------------------------------------

void probes(Check& c) {
  TamenessOptions t;
  t.sample.samples = 200;
  for (std::string name :
       {"det_k", "sigma_k", "sigma_quotient", "p_fold", "f_delta", "pucci_minus", "garding_pucci"})
    c.expect(tameness_probe(make_operator_pair(name, defaults_of(name)), t).pass, "tameness " + name);

  double worst = 0.0;
  for (auto [sub, params] : std::vector<std::pair<std::string, Params>>{
           {"P", {{"n", 3}}}, {"Sigma_k", {{"n", 3}, {"k", 2}}}, {"P_pucci", {{"n", 3}, {"lambda", 1}, {"Lambda", 2}}}})
    for (double k : {1.0, 2.5}) {
      ProbeReport r = tameness_probe(canonical_operator(make_subequation(sub, params), k), t);
      c.expect(r.pass, "tameness canonical " + sub);
      for (const auto& cell : r.cells) worst = std::max(worst, std::abs(cell.min_increment - k * cell.lambda));
    }
  c.expect(worst <= 1e-9, "canonical increments off k lambda by " + fmt(worst));

  ProbeReport ll = tameness_probe(make_operator_pair("log_laplace", {{"n", 2}}), t);
  double at_cap = kInf;
  for (const auto& cell : ll.cells)
    if (cell.cap >= 1e6) at_cap = std::min(at_cap, cell.min_increment);
  c.expect(!ll.pass && at_cap < 1e-3, "log_laplace should fail tameness at cap 1e6");
  c.expect(!tameness_probe(make_operator_pair("ex_3_21", {{"n", 2}}), t).pass, "ex_3_21 should fail tameness");

  CompatOptions co;
  co.sample.samples = 300;
  int compat = 0;
  for (const auto& ref : pair_catalog_defaults()) {
    OperatorPair p = make_operator_pair(ref.name, ref.params);
    if (!p.expect.compatible) continue;
    ProbeReport r = compatibility_probe(p, co);
    c.expect(r.pass, "compatibility " + ref.name);
    // root-type operators move by their Holder modulus under round-off sized offsets
    if (p.c0)
      c.expect(std::abs(r.stats["c0"] - *p.c0) <= 1e-8 * (1 + std::abs(*p.c0)) + r.stats["modulus_max"],
               "c0 of " + ref.name);
    ++compat;
  }
  ProbeReport bad = compatibility_probe(make_operator_pair("ex_1_5", {}), co);
  c.expect(!bad.pass && !bad.witnesses.empty(), "ex_1_5 compatibility witness");
  c.info << "canonical |c - k lambda| max " << fmt(worst) << ", log_laplace min increment at cap " << fmt(at_cap)
         << ", " << compat << " compatible pairs";
}

// ---- 3 ------------------------------------------------------------------------

void garding(Check& c) {
  const std::vector<std::pair<std::string, Params>> polys{
      {"det", {{"n", 3}}},
      {"sigma_k", {{"n", 4}, {"k", 2}}},
      {"f_delta", {{"n", 3}, {"delta", 0.5}}},
      {"garding_pucci", {{"n", 2}, {"lambda", 1}, {"Lambda", 2}}},
      {"p_fold", {{"n", 4}, {"p", 2}}},
      {"det_squared", {{"n", 2}}}};
  SampleOptions so{500, 111, 1, 1.0};
  for (const auto& [name, params] : polys) c.expect(is_hyperbolic(make_garding(name, params), so).pass, "hyperbolic " + name);
  c.expect(!is_hyperbolic(make_garding("non_hyperbolic_quadratic", {}), so).pass, "non-hyperbolic quadratic accepted");

  Rng rng = sample_rng(112, 0);
  double shift_err = 0.0, prod_err = 0.0;
  for (const auto& [name, params] : polys) {
    GardingPolynomial f = make_garding(name, params);
    for (int t = 0; t < 100; ++t) {
      SymMatrix a = random_symmetric(rng, f.n, 2.0);
      double s = uniform(rng, -2.0, 2.0);
      auto e = garding_eigenvalues(f, a);
      auto es = garding_eigenvalues(f, a.shifted(s));
      for (std::size_t k = 0; k < e.size(); ++k)
        shift_err = std::max(shift_err, std::abs(es[k] - e[k] - s) / (1 + std::abs(e[k])));
      double prod = f.at_identity;
      for (double v : e) prod *= v;
      prod_err = std::max(prod_err, std::abs(prod - f(a)) / std::max(1.0, std::abs(f(a))));
    }
  }
  c.expect(shift_err <= 1e-8, "shift identity " + fmt(shift_err));
  c.expect(prod_err <= 1e-7, "product identity " + fmt(prod_err));

  int interlace_bad = 0;
  for (const auto& [name, params] : polys) {
    GardingPolynomial f = make_garding(name, params);
    GardingPolynomial fp = derivative_polynomial(f, 1);
    for (int t = 0; t < 1000; ++t) {
      SymMatrix b = random_symmetric(rng, f.n, 2.0);
      auto e = garding_eigenvalues(f, b);
      auto ep = garding_eigenvalues(fp, b);
      for (std::size_t k = 0; k < ep.size(); ++k)
        if (e[k] > ep[k] + 1e-6 || ep[k] > e[k + 1] + 1e-6) ++interlace_bad;
    }
  }
  c.expect(interlace_bad == 0, std::to_string(interlace_bad) + " interlacing failures");
  c.info << "shift err " << fmt(shift_err) << ", product err " << fmt(prod_err) << ", interlacing on 1e3 samples x "
         << polys.size();
}

// ---- 4 ------------------------------------------------------------------------

void riesz(Check& c) {
  auto p_of = [](const std::string& name, const Params& p) { return riesz_characteristic(make_subequation(name, p)); };
  auto near = [&](double got, double want, const std::string& what) {
    c.expect(std::abs(got - want) <= 1e-8, what + " p=" + fmt(got) + " want " + fmt(want));
  };
  near(p_of("P", {{"n", 3}}), 1.0, "P");
  for (int n = 2; n <= 5; ++n) near(p_of("Delta", {{"n", double(n)}}), n, "Delta");
  for (auto [n, k] : {std::pair{4, 2}, {6, 3}, {5, 2}}) near(p_of("Sigma_k", {{"n", double(n)}, {"k", double(k)}}), double(n) / k, "Sigma_k");
  near(p_of("P_C", {{"n0", 2}}), 2.0, "P_C");
  for (double ratio : {0.5, 0.25}) near(p_of("P_pucci", {{"n", 3}, {"lambda", ratio}, {"Lambda", 1}}), 1 + 2 * ratio, "P_pucci");

  // exponents from the oracle
  for (auto [name, params] : std::vector<std::pair<std::string, Params>>{
           {"det", {{"n", 3}}}, {"sigma_k", {{"n", 4}, {"k", 2}}}, {"sigma_k", {{"n", 3}, {"k", 3}}}}) {
    RieszProfile rp = riesz_profile(make_operator_pair(name, params), {1.0}, false);
    c.expect(std::abs(rp.alpha - 1.0) <= 1e-8, "alpha of " + name + " = " + fmt(rp.alpha));
  }
  for (auto [n0, p] : {std::pair{4, 2}, {5, 3}, {4, 4}}) {
    RieszProfile rp = riesz_profile(make_operator_pair("p_fold", {{"n", double(n0)}, {"p", double(p)}}), {1.0}, false);
    double want = 1.0 / std::round(std::tgamma(n0) / (std::tgamma(p) * std::tgamma(n0 - p + 1)));
    c.expect(std::abs(rp.alpha - want) <= 1e-8, "p_fold alpha " + fmt(rp.alpha));
  }
  for (int n0 = 2; n0 <= 4; ++n0) {
    double p = riesz_characteristic(make_subequation("Lag", {{"n0", double(n0)}}));
    double a = alpha_exponent(2 * n0, std::pow(2.0, n0), p);
    c.expect(std::abs(a - std::pow(0.5, n0 - 1)) <= 1e-8, "Lag alpha " + fmt(a));
  }

  OperatorPair lap = make_operator_pair("laplace", {{"n", 2}});
  double c2 = delta_mass(lap, 2.0, 1.0, 0.5).value;
  c.expect(std::abs(c2 - 2 * kPi) <= 1e-3, "Laplace mass " + fmt(c2));

  double spread = 0.0, slope_err = 0.0;
  for (auto [name, params] : std::vector<std::pair<std::string, Params>>{
           {"laplace", {{"n", 2}}}, {"det", {{"n", 2}}}, {"det", {{"n", 3}}}, {"sigma_k", {{"n", 4}, {"k", 2}}},
           {"p_fold", {{"n", 3}, {"p", 2}}}, {"det_C", {{"n0", 2}}}}) {
    RieszProfile rp = riesz_profile(make_operator_pair(name, params), {1.0, 0.5, 0.25});
    double lo = *std::min_element(rp.mass.begin(), rp.mass.end());
    double hi = *std::max_element(rp.mass.begin(), rp.mass.end());
    spread = std::max(spread, (hi - lo) / hi);
    slope_err = std::max({slope_err, std::abs(rp.slope_half - rp.expected_half) / std::max(1.0, std::abs(rp.expected_half)),
                          std::abs(rp.slope_double - rp.expected_double) / std::max(1.0, std::abs(rp.expected_double))});
  }
  c.expect(spread <= 5e-3, "mass spread " + fmt(spread));
  c.expect(slope_err <= 0.05, "wrong-alpha slope error " + fmt(slope_err));

  c.info << "Laplace mass " << fmt(c2) << ", spread " << fmt(spread) << ", slope err " << fmt(slope_err);
  for (std::string name : {"f_delta", "pucci_minus"}) {
    Params params = name == "f_delta" ? Params{{"n", 2}, {"delta", 0.5}} : Params{{"n", 2}, {"lambda", 1}, {"Lambda", 2}};
    RieszProfile rp = riesz_profile(make_operator_pair(name, params), {1.0}, false);
    if (rp.tabulated_alpha)
      c.info << "; " << name << " alpha " << fmt(rp.alpha) << " (tabulated " << fmt(*rp.tabulated_alpha) << ")";
  }
}

// ---- 5 ------------------------------------------------------------------------

void kernels(Check& c) {
  Rng rng = sample_rng(121, 0);
  const double h = 1e-3;
  const int off[4] = {-2, -1, 1, 2};
  const double w1[4] = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
  const double w2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    int n = 2 + t % 3;
    double p = uniform(rng, 1.0, 4.0), eps = uniform(rng, 0.3, 1.0);
    Vector x = random_vector(rng, n);
    auto K = [&](const Vector& y) { return kernel_eps(p, eps, y); };
    Matrix fd(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        if (i == j) {
          for (int a = -2; a <= 2; ++a) {
            Vector y = x;
            y[i] += a * h;
            v += w2[a + 2] * K(y);
          }
        } else {
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
              Vector y = x;
              y[i] += off[a] * h;
              y[j] += off[b] * h;
              v += w1[a] * w1[b] * K(y);
            }
        }
        fd(i, j) = v / (h * h);
      }
    SymMatrix H = kernel_hessian(p, eps, x).hessian;
    worst = std::max(worst, (fd - H.matrix()).norm() / H.frobenius());
  }
  c.expect(worst <= 1e-6, "Hessian vs finite differences " + fmt(worst));

  int mono_bad = 0;
  for (int t = 0; t < 1000; ++t) {
    double p = uniform(rng, 1.0, 4.0);
    Vector y = random_vector(rng, 2 + t % 3);
    double prev = kernel_eps(p, 1.0, y);
    for (double e : {0.5, 0.25, 0.125, 0.0625}) {
      double k = kernel_eps(p, e, y);
      if (k > prev + 1e-14) ++mono_bad;
      prev = k;
    }
    if (riesz_kernel(p, y) > prev + 1e-14) ++mono_bad;
  }
  c.expect(mono_bad == 0, std::to_string(mono_bad) + " monotonicity failures");

  int cones = 0;
  for (const auto& ref : subequation_catalog_defaults()) {
    Subequation F = make_subequation(ref.name, ref.params);
    if (!F.flags().is_cone || !F.flags().st_invariant || ref.name == "Lag") continue;
    double p = riesz_characteristic(F);
    if (!std::isfinite(p)) continue;
    ++cones;
    for (int t = 0; t < 20; ++t) {
      SymMatrix H = kernel_hessian(p, 1e-300, random_vector(rng, F.dim())).hessian;
      double s = H.norm();
      c.expect(F.contains(H.shifted(1e-6 * s)) && !F.contains(H.shifted(-1e-6 * s)), "D2K off the boundary of " + ref.name);
    }
  }
  c.info << "FD rel err " << fmt(worst) << ", " << cones << " cones on the boundary";
}

// ---- 6 ------------------------------------------------------------------------

struct SolverCase {
  std::string label;
  SolveConfig cfg;
  PlaneFunction exact;
  double tolerance;
};

bool verified(const Solution& sol, const SolveConfig& cfg) {
  Stencil s = build_stencil(sol.u, cfg.directions);
  SchemeOperator op(make_operator_pair(cfg.pair, cfg.params), s.dirs);
  return verify_subsolution(op, s, sol.u, cfg.psi).pass && verify_dual_subsolution(op, s, negated(sol.u), cfg.psi).pass;
}

PlaneFunction kernel_function(double p, double eps) {
  return [=](double x, double y) {
    Vector v(2);
    v << x, y;
    return kernel_eps(p, eps, v);
  };
}

Source kernel_source(const OperatorPair& pair, double p, double eps) {
  return [pair, p, eps](double x, double y) {
    Vector v(2);
    v << x, y;
    return pair(kernel_hessian(p, eps, v).hessian);
  };
}

void solver(Check& c) {
  std::vector<SolverCase> cases;
  {
    SolveConfig q;
    q.domain = Domain::rectangle(0, 1, 0, 1);
    q.psi = [](double, double) { return 0.9375; };
    q.boundary = [](double x, double y) { return 0.5 * (x * x + 0.5 * x * y + y * y); };
    q.initial = [](double, double) { return 0.0; };
    cases.push_back({"quadratic", q, q.boundary, 1e-6});
  }
  {
    SolveConfig a;
    a.pair = "laplace";
    a.domain = Domain::annulus(0, 0, 0.25, 1.0);
    a.psi = [](double, double) { return 0.0; };
    a.boundary = [](double x, double y) { return std::log(std::hypot(x, y)); };
    cases.push_back({"annulus", a, a.boundary, 0.05});
  }
  for (std::string name : {"laplace", "det"}) {
    SolveConfig k;
    k.pair = name;
    k.domain = Domain::disk(0, 0, 1.0);
    double p = name == "laplace" ? 2.0 : 1.0;
    k.psi = kernel_source(make_operator_pair(name, k.params), p, 0.25);
    k.boundary = kernel_function(p, 0.25);
    cases.push_back({"kernel_" + name, k, k.boundary, 0.05});
  }
  for (auto& sc : cases) {
    sc.cfg.directions = 16;
    sc.cfg.max_iterations = 100000;
    double prev = kInf;
    for (int grid : {33, 65}) {
      sc.cfg.grid = grid;
      Solution sol = solve(sc.cfg);
      c.expect(sol.report.converged, sc.label + " not converged at " + std::to_string(grid));
      c.expect(sol.report.penalty_nodes == 0, sc.label + " penalty nodes");
      c.expect(verified(sol, sc.cfg), sc.label + " verifier violations at " + std::to_string(grid));
      double err = sc.label == "quadratic" ? sup_error(sol.u, sc.exact) : relative_sup_error(sol.u, sc.exact);
      if (sc.label != "quadratic") c.expect(err < prev, sc.label + " no improvement under refinement");
      prev = err;
    }
    c.expect(prev <= sc.tolerance, sc.label + " error " + fmt(prev));
    c.info << sc.label << " " << fmt(prev) << "  ";
  }
}

// ---- 7 ------------------------------------------------------------------------

void comparison(Check& c) {
  int total = 0, violations = 0, mismatches = 0, families = 0;
  for (auto [name, params] : std::vector<std::pair<std::string, Params>>{
           {"det", {{"n", 2}}}, {"laplace", {{"n", 2}}}, {"pucci_minus", {{"n", 2}, {"lambda", 1}, {"Lambda", 2}}}}) {
    SolveConfig base;
    base.pair = name;
    base.params = params;
    base.domain = Domain::rectangle(0, 1, 0, 1);
    base.grid = 17;
    base.directions = 8;
    ComparisonConfig cc{base, 100, 0.5, 131, true, 1e-8};
    ComparisonBatch b = run_comparison_batch(cc);
    ++families;
    total += b.trials;
    violations += b.violations;
    c.expect(b.unconverged == 0, name + " unconverged trials");
    c.expect(b.violations == 0, name + " comparison violations");
    bool caught = b.mismatch && b.mismatch->violated;
    mismatches += caught;
    c.expect(caught, name + " mismatch not detected");
  }
  c.info << total << " trials, " << violations << " violations, " << mismatches << "/" << families
         << " mismatches detected";
}

// ---- 8 ------------------------------------------------------------------------

void sup_convolution_suite(Check& c) {
  GridField g = make_grid(Domain::rectangle(0, 1, 0, 1), 81);
  double worst = kInf;
  {
    GridField u = sample(g, [](double x, double y) { return -(x * x + y * y) + 0.3 * std::abs(x - 0.5); });
    for (double eps : {0.01, 0.05, 0.2}) {
      SupConvolution sc = sup_convolution(u, eps, 0.0, 2.0, 1);
      double m = min_second_difference(sc.v, sc.band);
      worst = std::min(worst, m + 2.0 / eps);
      c.expect(m >= -2.0 / eps - 1e-9, "semiconvexity at eps " + fmt(eps));
    }
  }
  // u solves Delta u = psi exactly with psi decreasing in x and u increasing in x, so the
  // sup-convolution reads u from where psi is smaller.  Laplace: c(lambda) = 2 lambda,
  // modulus of psi is L delta.
  const double L = 4.0, G = 4.0, M = 4.5;
  PlaneFunction u = [=](double x, double y) { return -L * x * x * x / 6 + 0.5 * (x * x + y * y) + G * x; };
  Source psi = [=](double x, double) { return 2.0 - L * x; };
  GridField ug = sample(g, u);
  ug.boundary = u;
  Stencil s = build_stencil(g, 8);
  SchemeOperator op(make_operator_pair("laplace", {{"n", 2}}), s.dirs);
  VerifyOptions full;
  full.full_only = true;
  c.expect(verify_subsolution(op, s, ug, psi, full).pass, "base function is not a subsolution");
  auto check = [&](double eps, double lambda) {
    SupConvolution sc = sup_convolution(ug, eps, lambda, M);
    VerifyOptions vo;
    vo.mask = sc.band;
    vo.full_only = true;
    int band = 0;
    for (bool b : sc.band) band += b;
    c.expect(band > 0 && !sc.noop, "empty band at eps " + fmt(eps));
    return std::pair{verify_subsolution(op, s, sc.v, psi, vo).pass, sc.delta};
  };
  auto [kept, d1] = check(0.005, 0.5);
  c.expect(2 * 0.5 >= L * d1, "preservation case violates c(lambda) >= modulus");
  c.expect(kept, "subsolution not preserved with c(lambda) >= modulus");
  auto [broken, d2] = check(0.01, 0.01);
  c.expect(!broken, "no violation when eps is too large");
  c.info << "min D2 + 2/eps " << fmt(worst) << ", preserved at delta " << fmt(d1) << ", violated at delta "
         << fmt(d2) << " with c(lambda) 0.02";
}

// ---- 9 ------------------------------------------------------------------------

void transport(Check& c) {
  Rng rng = sample_rng(141, 0);
  const std::vector<std::pair<std::string, Params>> subs{{"P", {{"n", 3}}},
                                                         {"Sigma_k", {{"n", 3}, {"k", 2}}},
                                                         {"Lambda_k", {{"n", 3}, {"k", 2}}},
                                                         {"P_pucci", {{"n", 3}, {"lambda", 1}, {"Lambda", 2}}}};
  int fibers = 0, bad = 0;
  SampleOptions so{30, 142, 1, 1.0};
  for (const auto& [name, params] : subs) {
    Subequation F = make_subequation(name, params);
    for (int f = 0; f < 250; ++f) {
      JetEquivalence phi = random_jet_equivalence(3, rng, 0.4, f % 2 == 1);
      so.seed = 142 + std::uint64_t(fibers);
      if (!positivity_negativity_probe(transported_fiber(F, phi, random_vector(rng, 3)), so).pass) ++bad;
      ++fibers;
    }
  }
  c.expect(bad == 0, std::to_string(bad) + " fibers fail (P)/(N)");

  int dual_checked = 0;
  for (const auto& [name, params] : subs) {
    Subequation F = make_subequation(name, params);
    for (int f = 0; f < 5; ++f) {
      JetEquivalence phi = random_jet_equivalence(3, rng, 0.4, true);
      Vector x = random_vector(rng, 3);
      Subequation fiber = transported_fiber(F, phi, x);
      for (int t = 0; t < 200; ++t) {
        Jet2 j = rand_jet(rng, 3);
        Jet2 probe = phi.linear(x, j) - phi.shift_at(x);
        if (std::abs(identity_ray_offset(F, -probe)) < 1e-6) continue;
        ++dual_checked;
        c.expect(transported_dual_membership(F, phi, x, j) == dual_contains(fiber, j), "affine dual rule " + name);
      }
    }
  }

  double herr = 0.0;
  Vector q(2);
  q << 0.8, 0.4;
  SmoothFunction half_r2 = [](const Vector& x) {
    Vector p(2);
    p << x[0], 0;
    return Jet2(0.5 * x[0] * x[0], p, SymMatrix(Matrix(Eigen::Vector2d(1, 0).asDiagonal())));
  };
  // polar: u = r^2 / 2 has Hess = g
  herr = std::max(herr, (riemannian_hessian(polar_metric(), half_r2, q).matrix() - polar_metric().g(q)).norm());
  // half plane: u = log y gives diag(-1/y^2, 0)
  SmoothFunction logy = [](const Vector& x) {
    Vector p(2);
    p << 0, 1 / x[1];
    return Jet2(std::log(x[1]), p, SymMatrix(Matrix(Eigen::Vector2d(0, -1 / (x[1] * x[1])).asDiagonal())));
  };
  Matrix want(2, 2);
  want << -1 / (q[1] * q[1]), 0, 0, 0;
  herr = std::max(herr, (riemannian_hessian(hyperbolic_metric(), logy, q).matrix() - want).norm());
  // sphere: u = cos theta has Hess = -cos(theta) g
  SmoothFunction ct = [](const Vector& x) {
    Vector p(2);
    p << -std::sin(x[0]), 0;
    return Jet2(std::cos(x[0]), p, SymMatrix(Matrix(Eigen::Vector2d(-std::cos(x[0]), 0).asDiagonal())));
  };
  herr = std::max(herr,
                  (riemannian_hessian(sphere_metric(), ct, q).matrix() + std::cos(q[0]) * sphere_metric().g(q)).norm());
  c.expect(herr <= 1e-8, "Riemannian Hessian error " + fmt(herr));
  c.info << fibers << " fibers, " << dual_checked << " dual-rule jets, Hessian err " << fmt(herr);
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria{{"duality", duality},   {"probes", probes},         {"garding", garding},
                                        {"riesz", riesz},       {"kernel", kernels},        {"solver", solver},
                                        {"comparison", comparison}, {"sup_convolution", sup_convolution_suite},
                                        {"transport", transport}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !c.pass();
    std::printf("%s %zu %s (%.1fs): %s\n", c.pass() ? "PASS" : "FAIL", i + 1, criteria[i].name, secs,
                c.info.str().c_str());
    for (std::size_t k = 0; k < c.failures.size() && k < 10; ++k) std::printf("    %s\n", c.failures[k].c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
