#include "nlpot/error.hpp"
#include "nlpot/ops.hpp"
#include "nlpot/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nlpot {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Jet2 member_at_scale(const Subequation& F, Rng& rng, double lo, double hi) {
  return sample_member(F, rng, log_uniform(rng, lo, hi));
}

}  // namespace

ProbeReport tameness_probe(const OperatorPair& pair, const TamenessOptions& opt) {
  ProbeReport rep;
  rep.probe = "tameness";
  rep.subject = pair.name;
  rep.seed = opt.sample.seed;
  const bool pure = pair.F.flags().pure_second_order && pair.F.flags().reduced;
  std::vector<double> sgrid = pure ? std::vector<double>{0.0} : opt.s_grid;
  std::vector<double> caps = opt.caps.empty() ? std::vector<double>{opt.sample.scale} : opt.caps;

  struct Cell {
    double s, lam, cap;
  };
  std::vector<Cell> cells;
  for (double s : sgrid)
    for (double l : opt.lambda_grid)
      for (double c : caps) cells.push_back({s, l, c});

  const std::size_t per = opt.sample.samples;
  struct Out {
    double inc = kInf;
    Jet2 j;
    bool skipped = false;
  };
  std::vector<Out> outs = parallel_map<Out>(cells.size() * per, opt.sample.threads, [&](std::size_t idx) {
    const Cell& c = cells[idx / per];
    Rng rng = sample_rng(opt.sample.seed, idx);
    Out o;
    Jet2 j = member_at_scale(pair.F, rng, c.cap / 10.0, c.cap);
    double r = c.s;
    SymMatrix P = SymMatrix::identity(pair.dim()) * c.lam;
    if (idx % 2 == 1) {
      r = c.s * (1.0 + uniform(rng, 0.0, 1.0));
      P = P + random_psd(rng, pair.dim(), c.lam);
    }
    Jet2 moved(j.r - r, j.p, j.A + P);
    double f0 = pair.f(j), f1 = pair.f(moved);
    if (!std::isfinite(f0) || !std::isfinite(f1)) {
      o.skipped = true;
      return o;
    }
    o.inc = f1 - f0;
    o.j = j;
    return o;
  });

  double skipped = 0.0;
  std::vector<std::size_t> argmin(cells.size(), 0);
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    CellStat st{cells[ci].s, cells[ci].lam, cells[ci].cap, kInf, 0};
    for (std::size_t k = 0; k < per; ++k) {
      const Out& o = outs[ci * per + k];
      if (o.skipped) {
        skipped += 1.0;
        continue;
      }
      ++st.samples;
      if (o.inc < st.min_increment) {
        st.min_increment = o.inc;
        argmin[ci] = ci * per + k;
      }
    }
    rep.samples += st.samples;
    rep.cells.push_back(st);
    if (st.samples > 0 && st.min_increment <= opt.abs_tol)
      rep.add_witness("increment <= 0 in cell s=" + fmt(st.s) + " lambda=" + fmt(st.lambda) + " cap=" + fmt(st.cap),
                      outs[argmin[ci]].j, st.min_increment);
  }
  // decay of the cell minimum as the sampler cap grows
  if (caps.size() > 1) {
    for (std::size_t ci = 0; ci < cells.size(); ci += caps.size()) {
      const CellStat& first = rep.cells[ci];
      const CellStat& last = rep.cells[ci + caps.size() - 1];
      if (first.samples == 0 || last.samples == 0) continue;
      if (first.min_increment > opt.abs_tol && last.min_increment < opt.decay_ratio * first.min_increment)
        rep.add_witness("cell minimum decays from " + fmt(first.min_increment) + " to " + fmt(last.min_increment) +
                            " (s=" + fmt(first.s) + ", lambda=" + fmt(first.lambda) + ")",
                        outs[argmin[ci + caps.size() - 1]].j, last.min_increment);
    }
  }
  rep.stats["skipped_nonfinite"] = skipped;
  return rep;
}

ProbeReport topological_tameness_probe(const OperatorPair& pair, const TopTameOptions& opt) {
  ProbeReport rep;
  rep.probe = "topological_tameness";
  rep.subject = pair.name;
  rep.seed = opt.sample.seed;
  const std::size_t per = opt.sample.samples;
  const std::size_t L = opt.lambda_grid.size();
  struct Out {
    double inc = 0.0, tol = 0.0;
    Jet2 j;
    bool skipped = false;
  };
  auto outs = parallel_map<Out>(per * L, opt.sample.threads, [&](std::size_t idx) {
    Rng rng = sample_rng(opt.sample.seed, idx);
    Out o;
    o.j = member_at_scale(pair.F, rng, 1e-2, opt.cap);
    double lam = opt.lambda_grid[idx % L];
    double f0 = pair.f(o.j), f1 = pair.f(o.j.shifted(lam));
    if (!std::isfinite(f0) || !std::isfinite(f1)) {
      o.skipped = true;
      return o;
    }
    o.inc = f1 - f0;
    o.tol = 8.0 * kEps * std::max({1.0, std::abs(f0), std::abs(f1)});
    return o;
  });
  double worst = kInf;
  for (auto& o : outs) {
    if (o.skipped) continue;
    ++rep.samples;
    worst = std::min(worst, o.inc);
    if (!(o.inc > o.tol)) rep.add_witness("f(A + lambda I) does not exceed f(A)", o.j, o.inc);
  }
  rep.stats["min_increment"] = worst;
  return rep;
}

ProbeReport compatibility_probe(const OperatorPair& pair, const CompatOptions& opt) {
  ProbeReport rep;
  rep.probe = "compatibility";
  rep.subject = pair.name;
  rep.seed = opt.sample.seed;
  {
    Rng rng = sample_rng(opt.sample.seed, ~0ULL);
    Jet2 probe = random_jet(rng, pair.dim(), 1.0,
                            JetShape{!pair.F.flags().reduced, !pair.F.flags().pure_second_order});
    if (identity_ray_offset(pair.F, probe) == kInf) {
      rep.notes.push_back("F has no boundary along the I-axis; compatibility is vacuous");
      return rep;
    }
  }
  const std::size_t N = opt.sample.samples;
  struct Out {
    Jet2 b;
    double fb = 0.0;
    Jet2 in;
    double fin = 0.0;
    double modulus = 0.0;
  };
  auto outs = parallel_map<Out>(N, opt.sample.threads, [&](std::size_t i) {
    Rng rng = sample_rng(opt.sample.seed, i);
    Out o;
    o.b = sample_boundary(pair.F, rng, opt.sample.scale);
    o.fb = pair.f(o.b);
    // root-type operators are only Holder at the boundary, so a round-off sized
    // offset of b moves f by much more than round-off
    o.modulus = std::abs(pair.f(o.b.shifted(1e-10 * (1.0 + o.b.norm()))) - o.fb);
    o.in = o.b.shifted(0.25 * opt.sample.scale * uniform(rng, 0.2, 1.0));
    o.fin = pair.f(o.in);
    return o;
  });
  std::vector<double> vals;
  for (auto& o : outs) vals.push_back(o.fb);
  std::vector<double> sorted = vals;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double c0 = sorted[sorted.size() / 2];
  double spread = 0.0, modulus = 0.0;
  for (auto& o : outs) {
    ++rep.samples;
    modulus = std::max(modulus, o.modulus);
    double tol = opt.tol * (1.0 + std::abs(c0)) + o.modulus;
    spread = std::max(spread, std::abs(o.fb - c0));
    if (std::abs(o.fb - c0) > tol)
      rep.add_witness("boundary value differs from c0", o.b, o.fb);
    else if (!(o.fin > c0 + tol))
      rep.add_witness("interior point on or below the boundary level", o.in, o.fin);
  }
  rep.stats["c0"] = c0;
  rep.stats["boundary_spread"] = spread;
  rep.stats["modulus_max"] = modulus;
  return rep;
}

ProbeReport ellipticity_check(const OperatorPair& pair, const SampleOptions& opt) {
  ProbeReport rep;
  rep.probe = "ellipticity";
  rep.subject = pair.name;
  rep.seed = opt.seed;
  struct Out {
    double inc = 0.0, tol = 0.0;
    Jet2 j;
    bool skipped = false;
  };
  auto outs = parallel_map<Out>(opt.samples, opt.threads, [&](std::size_t i) {
    Rng rng = sample_rng(opt.seed, i);
    Out o;
    o.j = sample_member(pair.F, rng, opt.scale);
    Jet2 moved(o.j.r, o.j.p, o.j.A + random_psd(rng, pair.dim(), opt.scale));
    double f0 = pair.f(o.j), f1 = pair.f(moved);
    if (!std::isfinite(f0) || !std::isfinite(f1)) {
      o.skipped = true;
      return o;
    }
    o.inc = f1 - f0;
    o.tol = 1e-10 * std::max({1.0, std::abs(f0), std::abs(f1)});
    return o;
  });
  for (auto& o : outs) {
    if (o.skipped) continue;
    ++rep.samples;
    if (o.inc < -o.tol) rep.add_witness("negative increment under P >= 0", o.j, o.inc);
  }
  return rep;
}

ProbeReport homogeneity_check(const OperatorPair& pair, const SampleOptions& opt, double tol) {
  if (!pair.degree) throw InvalidInput("homogeneity_check: " + pair.name + " has no homogeneity degree");
  ProbeReport rep;
  rep.probe = "homogeneity";
  rep.subject = pair.name;
  rep.seed = opt.seed;
  const double factor = std::pow(2.0, *pair.degree);
  struct Out {
    bool used = false, bad = false;
    Jet2 j;
    double ratio = 0.0;
  };
  auto outs = parallel_map<Out>(opt.samples, opt.threads, [&](std::size_t i) {
    Rng rng = sample_rng(opt.seed, i);
    Out o;
    o.j = sample_member(pair.F, rng, opt.scale);
    double f1 = pair.f(o.j);
    if (!std::isfinite(f1) || std::abs(f1) < 1e-6) return o;
    double f2 = pair.f(o.j * 2.0);
    o.used = true;
    o.ratio = f2 / f1;
    o.bad = std::abs(f2 - factor * f1) > tol * std::abs(factor * f1);
    return o;
  });
  for (auto& o : outs) {
    if (!o.used) continue;
    ++rep.samples;
    if (o.bad) rep.add_witness("f(2J)/f(J) != 2^m", o.j, o.ratio);
  }
  rep.stats["expected_ratio"] = factor;
  return rep;
}

ProbeReport monotonicity_check(const OperatorPair& pair, const Subequation& m, const std::vector<double>& levels,
                               const SampleOptions& opt) {
  ProbeReport rep;
  rep.probe = "monotonicity";
  rep.subject = pair.name + " + " + m.name();
  rep.seed = opt.seed;
  for (double c : levels) {
    SampleOptions o = opt;
    o.seed = splitmix64(opt.seed ^ static_cast<std::uint64_t>(std::llround(c * 1e6)));
    ProbeReport r = monotonicity_check(level_subequation(pair, c), m, o);
    rep.samples += r.samples;
    for (auto& w : r.witnesses) rep.add_witness("level " + fmt(c) + ": " + w.note, w.jet, w.value);
  }
  return rep;
}

ProbeReport duality_involution_check(const Subequation& F, const SampleOptions& opt, double band) {
  ProbeReport rep;
  rep.probe = "duality_involution";
  rep.subject = F.name();
  rep.seed = opt.seed;
  Subequation dd = dual(dual(F));
  JetShape shape{!F.flags().reduced, !F.flags().pure_second_order};
  struct Out {
    bool used = false, bad = false;
    Jet2 j;
  };
  auto outs = parallel_map<Out>(opt.samples, opt.threads, [&](std::size_t i) {
    Rng rng = sample_rng(opt.seed, i);
    Out o;
    Jet2 j = random_jet(rng, F.dim(), opt.scale, shape);
    double t = identity_ray_offset(F, j);
    if (i % 2 == 1 && std::isfinite(t)) {
      // place the sample near the boundary, just outside the band
      double off = std::pow(10.0, uniform(rng, -5.0, 0.0)) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
      j = j.shifted(-t + off);
      t = off;
    }
    if (std::isfinite(t) && std::abs(t) <= band * (1.0 + j.norm())) return o;
    o.used = true;
    o.j = j;
    o.bad = dd.contains(j) != F.contains(j);
    return o;
  });
  for (auto& o : outs) {
    if (!o.used) continue;
    ++rep.samples;
    if (o.bad) rep.add_witness("dual(dual(F)) disagrees with F", o.j);
  }
  rep.stats["filtered_in_band"] = static_cast<double>(opt.samples - rep.samples);
  return rep;
}

ProbeReport lemma_3_23_probe(const OperatorPair& pair, double c, const SampleOptions& opt, const TauOptions& tau_opt) {
  ProbeReport rep;
  rep.probe = "lemma_3_23";
  rep.subject = pair.name;
  rep.seed = opt.seed;
  Subequation Fc = level_subequation(pair, c);
  struct Out {
    bool inside = false, bad = false;
    Jet2 j;
    double tau = 0.0;
  };
  auto outs = parallel_map<Out>(opt.samples, opt.threads, [&](std::size_t i) {
    Rng rng = sample_rng(opt.seed, i);
    Out o;
    o.j = Jet2(random_symmetric(rng, pair.dim(), opt.scale));
    if (!asymptotic_interior_contains(Fc, o.j, 1e-3 * opt.scale)) return o;
    o.inside = true;
    o.tau = tau(pair, o.j.A, tau_opt);
    o.bad = !(o.tau > c);
    return o;
  });
  double inside = 0.0;
  for (auto& o : outs) {
    ++rep.samples;
    if (!o.inside) continue;
    inside += 1.0;
    if (o.bad) rep.add_witness("tau <= c inside the asymptotic interior", o.j, o.tau);
  }
  rep.stats["in_asymptotic_interior"] = inside;
  return rep;
}

}  // namespace nlpot
