#include "nlpot/solver.hpp"

#include "nlpot/error.hpp"
#include "nlpot/parallel.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

namespace nlpot {

SchemeOperator::SchemeOperator(const OperatorPair& pair, std::vector<LatticeDirection> dirs)
    : pair_(pair), dirs_(std::move(dirs)) {
  if (pair.dim() != 2) throw InvalidInput("scheme: pair " + pair.name + " is not two-dimensional");
  c0_ = pair.c0.value_or(0.0);
  if (pair.spectral) {
    form_ = *pair.spectral;
  } else {
    // any O(2)-invariant pair: evaluate on the diagonal matrix of the eigenvalue pair
    OperatorPair p = pair;
    form_.f = [p](std::span<const double> e) { return p(SymMatrix::diagonal(e)); };
    form_.offset = [p](std::span<const double> e) {
      return identity_ray_offset(p.F, Jet2(SymMatrix::diagonal(e)));
    };
    form_.rule = FrameRule::Eigen;
  }
}

double SchemeOperator::frame_offset(double lo, double hi) const {
  const double e[2] = {lo, hi};
  return form_.offset(std::span<const double>(e, 2));
}

double SchemeOperator::frame_value(double lo, double hi) const {
  const double e[2] = {lo, hi};
  std::span<const double> s(e, 2);
  if (pair_.total) return form_.f(s);
  double off = form_.offset(s);
  return off >= 0.0 ? form_.f(s) : c0_ + off;
}

double SchemeOperator::value(const std::vector<double>& d) const {
  if (form_.rule == FrameRule::Eigen) {
    auto [lo, hi] = std::minmax_element(d.begin(), d.end());
    return frame_value(*lo, *hi);
  }
  double best = kInf;
  for (std::size_t v = 0; v < dirs_.size(); ++v) {
    const int w = dirs_[v].perp;
    if (w < static_cast<int>(v)) continue;
    best = std::min(best, frame_value(std::min(d[v], d[w]), std::max(d[v], d[w])));
  }
  return best;
}

double SchemeOperator::offset(const std::vector<double>& d) const {
  if (form_.rule == FrameRule::Eigen) {
    auto [lo, hi] = std::minmax_element(d.begin(), d.end());
    return frame_offset(*lo, *hi);
  }
  double best = kInf;
  for (std::size_t v = 0; v < dirs_.size(); ++v) {
    const int w = dirs_[v].perp;
    if (w < static_cast<int>(v)) continue;
    best = std::min(best, frame_offset(std::min(d[v], d[w]), std::max(d[v], d[w])));
  }
  return best;
}

std::vector<double> tabulate(const GridField& g, const Source& psi) {
  std::vector<double> out(g.size(), 0.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (g.kind[g.index(i, j)] != NodeKind::Exterior) out[g.index(i, j)] = psi(g.x(i), g.y(j));
  return out;
}

double scheme_residual(const SchemeOperator& op, const Stencil& s, const GridField& u, std::size_t k, double psi) {
  return op.value(directional_differences(s, u, k)) - psi;
}

namespace {

// the centre value w with value(b - a w) = psi; value is nonincreasing in w
double node_solve(const SchemeOperator& op, const NodeLinear& nl, double psi, double uc, double h) {
  std::vector<double> d(nl.a.size());
  auto R = [&](double w) {
    for (std::size_t v = 0; v < d.size(); ++v) d[v] = nl.b[v] - nl.a[v] * w;
    return op.value(d) - psi;
  };
  double r0 = R(uc);
  if (r0 == 0.0) return uc;
  double step = std::max(0.25 * h * h * std::min(std::abs(r0), 1.0), 1e-14 * (1.0 + std::abs(uc)));
  double lo = uc, hi = uc, rlo = r0, rhi = r0;
  int guard = 0;
  if (r0 > 0.0) {
    do {
      lo = hi;
      rlo = rhi;
      hi = uc + step;
      rhi = R(hi);
      step *= 2.0;
    } while (rhi > 0.0 && ++guard < 200);
  } else {
    do {
      hi = lo;
      rhi = rlo;
      lo = uc - step;
      rlo = R(lo);
      step *= 2.0;
    } while (rlo < 0.0 && ++guard < 200);
  }
  if (guard >= 200 || !std::isfinite(rlo) || !std::isfinite(rhi))
    throw NumericalFailure("node solve: could not bracket the scheme equation");
  if (rlo == 0.0) return lo;
  if (rhi == 0.0) return hi;
  boost::uintmax_t iters = 100;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * (1.0 + std::abs(a)); };
  auto [a, b] = boost::math::tools::toms748_solve(R, lo, hi, rlo, rhi, tol, iters);
  return 0.5 * (a + b);
}

void check_admissible(const OperatorPair& pair, const Stencil& s, const std::vector<double>& psi) {
  for (int node : s.nodes) {
    double v = psi[node];
    if (!std::isfinite(v) || !pair.range.in_closure(v, 1e-12))
      throw InvalidInput("psi = " + std::to_string(v) + " is outside the range " + pair.range.str() + " of " +
                         pair.name);
  }
}

}  // namespace

Solution solve(const SolveConfig& cfg) {
  GridField g = make_grid(cfg.domain, cfg.grid);
  GridField start = sample(g, cfg.initial ? *cfg.initial : cfg.boundary, false);
  for (std::size_t k = 0; k < start.size(); ++k)
    if (start.kind[k] == NodeKind::Boundary) {
      int i = static_cast<int>(k) % g.nx, j = static_cast<int>(k) / g.nx;
      start.values[k] = cfg.boundary(g.x(i), g.y(j));
    }
  start.boundary = cfg.boundary;
  return solve(cfg, build_stencil(start, cfg.directions), start);
}

Solution solve(const SolveConfig& cfg, const Stencil& s, const GridField& start) {
  auto t0 = std::chrono::steady_clock::now();
  OperatorPair pair = make_operator_pair(cfg.pair, cfg.params);
  SchemeOperator op(pair, s.dirs);
  std::vector<double> psi = tabulate(start, cfg.psi);
  check_admissible(pair, s, psi);

  Solution sol{start, {}};
  GridField& u = sol.u;
  SolveReport& rep = sol.report;
  const double h = u.h;
  double omega = cfg.omega > 0.0 ? cfg.omega : 2.0 / (1.0 + std::sin(std::numbers::pi / std::max(2, cfg.grid - 1)));
  if (cfg.mode == SweepMode::Jacobi) omega = cfg.theta;
  if (!(omega > 0.0 && omega < 2.0)) throw InvalidInput("solve: relaxation must lie in (0, 2)");
  rep.mode = cfg.mode == SweepMode::GaussSeidel ? "gauss-seidel" : "jacobi";

  auto residual = [&]() {
    auto r = parallel_map<double>(s.nodes.size(), cfg.threads, [&](std::size_t k) {
      return std::abs(scheme_residual(op, s, u, k, psi[s.nodes[k]]));
    });
    return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
  };

  double best = kInf;
  int rising = 0;
  std::vector<double> next(s.nodes.size());
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    double change = 0.0;
    if (cfg.mode == SweepMode::GaussSeidel) {
      NodeLinear nl;
      for (std::size_t k = 0; k < s.nodes.size(); ++k) {
        const int node = s.nodes[k];
        node_linear(s, u, k, nl);
        double w = node_solve(op, nl, psi[node], u.values[node], h);
        double du = omega * (w - u.values[node]);
        u.values[node] += du;
        change = std::max(change, std::abs(du));
      }
    } else {
      parallel_for(s.nodes.size(), cfg.threads, [&](std::size_t k) {
        NodeLinear nl;
        node_linear(s, u, k, nl);
        next[k] = node_solve(op, nl, psi[s.nodes[k]], u.values[s.nodes[k]], h);
      });
      for (std::size_t k = 0; k < s.nodes.size(); ++k) {
        double du = omega * (next[k] - u.values[s.nodes[k]]);
        u.values[s.nodes[k]] += du;
        change = std::max(change, std::abs(du));
      }
    }
    rep.iterations = it;
    rep.last_update = change;
    rep.residual = residual();
    if (rep.residual <= cfg.tolerance) {
      rep.converged = true;
      break;
    }
    // nonlinear over-relaxation can stall on nonsmooth schemes; back off toward plain sweeps
    if (rep.residual < best) {
      best = rep.residual;
      rising = 0;
    } else if (++rising >= 25 && cfg.mode == SweepMode::GaussSeidel && omega > 1.0) {
      omega = 1.0 + 0.5 * (omega - 1.0);
      rising = 0;
    }
  }
  rep.omega = omega;
  if (!pair.total) {
    for (std::size_t k = 0; k < s.nodes.size(); ++k) {
      auto d = directional_differences(s, u, k);
      double scale = 0.0;
      for (double x : d) scale = std::max(scale, std::abs(x));
      if (op.offset(d) < -1e-8 * (1.0 + scale)) ++rep.penalty_nodes;
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

namespace {

ProbeReport verify(const SchemeOperator& op, const Stencil& s, const GridField& u, const Source& psi,
                   const VerifyOptions& opt, bool dual) {
  ProbeReport rep;
  rep.probe = dual ? "verify_dual_subsolution" : "verify_subsolution";
  rep.subject = op.pair().name;
  rep.samples = s.nodes.size();
  const bool total = op.pair().total;
  double checked = 0.0, worst = 0.0;
  for (std::size_t k = 0; k < s.nodes.size(); ++k) {
    const int node = s.nodes[k];
    if (opt.full_only && !s.full[k]) continue;
    if (!opt.mask.empty() && !opt.mask[node]) continue;
    checked += 1.0;
    auto d = directional_differences(s, u, k);
    if (dual)
      for (double& x : d) x = -x;
    const int i = node % u.nx, j = node / u.nx;
    const double target = psi(u.x(i), u.y(j));
    const double val = op.value(d);
    const double off = total ? kInf : op.offset(d);
    SymMatrix e = SymMatrix::diagonal({*std::min_element(d.begin(), d.end()), *std::max_element(d.begin(), d.end())});
    if (!dual) {
      double gap = std::min(val - target + opt.tol, off + opt.margin);
      worst = std::min(worst, gap);
      if (gap < 0.0) rep.add_witness("stencil jet below psi or outside F", Jet2(e), val - target);
    } else {
      // -(jet of v) must avoid Int F_f(psi)
      bool in_interior = val > target + opt.tol && off > opt.margin;
      if (in_interior) {
        worst = std::min(worst, target + opt.tol - val);
        rep.add_witness("negated stencil jet inside Int F_f(psi)", Jet2(e), val - target);
      }
    }
  }
  rep.stats["checked"] = checked;
  rep.stats["worst_gap"] = worst;
  return rep;
}

}  // namespace

ProbeReport verify_subsolution(const SchemeOperator& op, const Stencil& s, const GridField& u, const Source& psi,
                               const VerifyOptions& opt) {
  return verify(op, s, u, psi, opt, false);
}

ProbeReport verify_dual_subsolution(const SchemeOperator& op, const Stencil& s, const GridField& v,
                                    const Source& psi, const VerifyOptions& opt) {
  return verify(op, s, v, psi, opt, true);
}

ComparisonVerdict comparison_check(const GridField& u, const GridField& v, double tol) {
  if (u.nx != v.nx || u.ny != v.ny) throw InvalidInput("comparison_check: grids differ");
  ComparisonVerdict out;
  out.boundary_max = -kInf;
  out.interior_max = -kInf;
  for (std::size_t k = 0; k < u.size(); ++k) {
    double w = u.values[k] + v.values[k];
    if (u.kind[k] == NodeKind::Boundary) out.boundary_max = std::max(out.boundary_max, w);
    if (u.kind[k] == NodeKind::Interior && w > out.interior_max) {
      out.interior_max = w;
      out.node = static_cast<int>(k);
    }
  }
  out.hypothesis = out.boundary_max <= tol;
  out.violated = out.hypothesis && out.interior_max > tol;
  return out;
}

double sup_error(const GridField& u, const PlaneFunction& exact) {
  double e = 0.0;
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i)
      if (u.kind[u.index(i, j)] == NodeKind::Interior) e = std::max(e, std::abs(u(i, j) - exact(u.x(i), u.y(j))));
  return e;
}

double relative_sup_error(const GridField& u, const PlaneFunction& exact) {
  double m = 0.0;
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i)
      if (u.kind[u.index(i, j)] == NodeKind::Interior) m = std::max(m, std::abs(exact(u.x(i), u.y(j))));
  return sup_error(u, exact) / std::max(m, 1e-300);
}

}  // namespace nlpot

namespace nlpot {

ComparisonBatch run_comparison_batch(const ComparisonConfig& cfg) {
  ComparisonBatch out;
  GridField g = make_grid(cfg.base.domain, cfg.base.grid);
  Stencil s = build_stencil(g, cfg.base.directions);
  auto run = [&](const Source& psi, const PlaneFunction& bdry) {
    SolveConfig c = cfg.base;
    c.psi = psi;
    c.boundary = bdry;
    GridField start = sample(g, bdry, true);
    Solution sol = solve(c, s, start);
    if (!sol.report.converged) ++out.unconverged;
    return sol.u;
  };
  auto random_quadratic = [](Rng& rng) {
    SymMatrix a = random_with_spectrum(rng, 2, 0.5, 2.0);
    Vector b = random_vector(rng, 2);
    Matrix m = a.matrix();
    return PlaneFunction([m, b](double x, double y) {
      return 0.5 * (m(0, 0) * x * x + 2 * m(0, 1) * x * y + m(1, 1) * y * y) + b[0] * x + b[1] * y;
    });
  };
  const Source psi = cfg.base.psi;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng = sample_rng(cfg.seed, static_cast<std::uint64_t>(t));
    const double up = uniform(rng, 0.0, cfg.perturb), down = uniform(rng, 0.0, cfg.perturb);
    PlaneFunction b1 = random_quadratic(rng), b2 = random_quadratic(rng);
    GridField u = run([psi, up](double x, double y) { return psi(x, y) + up; }, b1);
    GridField w = run([psi, down](double x, double y) { return psi(x, y) - down; }, b2);
    double shift = -kInf;
    for (std::size_t k = 0; k < u.size(); ++k)
      if (u.kind[k] == NodeKind::Boundary) shift = std::max(shift, u.values[k] - w.values[k]);
    GridField v = w;
    for (double& x : v.values) x = -x - shift;
    ComparisonVerdict verdict = comparison_check(u, v, cfg.tol);
    if (verdict.violated) ++out.violations;
    out.verdicts.push_back(verdict);
    ++out.trials;
  }
  if (cfg.mismatch) {
    Rng rng = sample_rng(cfg.seed, 1u << 20);
    PlaneFunction b = random_quadratic(rng);
    GridField u = run(psi, b);
    GridField w = run([psi, p = cfg.perturb](double x, double y) { return psi(x, y) + std::max(p, 0.1); }, b);
    GridField v = w;
    for (double& x : v.values) x = -x;
    out.mismatch = comparison_check(u, v, cfg.tol);
  }
  return out;
}

}  // namespace nlpot
