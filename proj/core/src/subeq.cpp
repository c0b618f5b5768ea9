#include "nlpot/subeq.hpp"

#include "nlpot/error.hpp"
#include "nlpot/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nlpot {

Subequation::Subequation(std::string name, Params params, int n, Oracle member, SubeqFlags flags,
                         std::optional<CatalogRef> mono)
    : name_(std::move(name)),
      params_(std::move(params)),
      n_(n),
      member_(std::move(member)),
      flags_(flags),
      mono_(std::move(mono)) {
  if (n < 1) throw InvalidInput("subequation " + name_ + ": dimension must be >= 1");
}

double Subequation::param(const std::string& key) const {
  auto it = params_.find(key);
  if (it == params_.end()) throw InvalidInput("subequation " + name_ + ": missing parameter " + key);
  return it->second;
}

bool Subequation::contains(const Jet2& j) const {
  if (j.dim() != n_)
    throw InvalidInput("subequation " + name_ + ": jet dimension " + std::to_string(j.dim()) +
                       " does not match " + std::to_string(n_));
  return member_(j);
}

Subequation Subequation::monotonicity_cone() const {
  if (!mono_) throw InvalidInput("subequation " + name_ + " has no recorded monotonicity cone");
  return make_subequation(mono_->name, mono_->params);
}

double default_margin(const Jet2& j) { return 1e-7 * (j.norm() + 1.0); }

double identity_ray_offset(const Subequation& f, const Jet2& j, bool use_hint) {
  if (use_hint && f.offset_hint()) {
    double t = (*f.offset_hint())(j);
    if (!std::isfinite(t)) return t;
    // the closed form may land a rounding error outside; step back onto the member side
    double step = 1e-15 * (1.0 + std::abs(t) + j.norm());
    for (int i = 0; i < 60 && !f.contains(j.shifted(-t)); ++i) {
      t -= step;
      step *= 2.0;
    }
    return t;
  }
  auto in = [&](double t) { return f.contains(j.shifted(-t)); };
  const double scale = 1.0 + j.norm();
  double lo, hi;
  if (in(0.0)) {
    lo = 0.0;
    hi = scale;
    int k = 0;
    while (in(hi)) {
      lo = hi;
      hi *= 2.0;
      if (++k > 64) return kInf;
    }
  } else {
    hi = 0.0;
    lo = -scale;
    int k = 0;
    while (!in(lo)) {
      hi = lo;
      lo *= 2.0;
      if (++k > 64) return -kInf;
    }
  }
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (in(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

namespace {

Jet2 corner(const Jet2& j, double m) { return Jet2(j.r + m, j.p, j.A.shifted(-m)); }

}  // namespace

bool interior_contains(const Subequation& f, const Jet2& j, double margin) {
  if (!(margin > 0.0)) throw InvalidInput("interior_contains: margin must be positive");
  Jet2 c = corner(j, margin);
  if (!f.contains(c)) return false;
  if (f.flags().pure_second_order) return true;
  const int n = j.dim();
  // gradient perturbations: coordinate directions, the direction of p, and a few fixed
  // pseudo-random unit vectors
  std::vector<Vector> dirs;
  for (int i = 0; i < n; ++i) {
    dirs.push_back(Vector::Unit(n, i));
    dirs.push_back(-Vector::Unit(n, i));
  }
  double pn = j.p.norm();
  if (pn > 0) {
    dirs.push_back(j.p / pn);
    dirs.push_back(-j.p / pn);
  }
  for (int k = 0; k < 6; ++k) {
    Rng rng = sample_rng(0x5eedULL, static_cast<std::uint64_t>(k));
    dirs.push_back(random_unit_vector(rng, n));
  }
  for (const auto& d : dirs) {
    Jet2 q(c.r, c.p + margin * d, c.A);
    if (!f.contains(q)) return false;
  }
  return true;
}

bool interior_contains(const Subequation& f, const Jet2& j) {
  return interior_contains(f, j, default_margin(j));
}

bool dual_contains(const Subequation& f, const Jet2& j, double margin) {
  return !interior_contains(f, -j, margin);
}

bool dual_contains(const Subequation& f, const Jet2& j) { return !interior_contains(f, -j); }

Subequation dual(const Subequation& f) {
  Subequation base = f;
  Subequation d("dual(" + f.name() + ")", f.params(), f.dim(),
                [base](const Jet2& j) { return dual_contains(base, j); }, f.flags(),
                f.monotonicity_cone_ref());
  return d;
}

Subequation translate(const Subequation& g, const Jet2& j0) {
  if (j0.dim() != g.dim()) throw InvalidInput("translate: dimension mismatch");
  Subequation base = g;
  SubeqFlags fl = g.flags();
  fl.is_cone = false;
  fl.st_invariant = false;
  if (j0.p.size() && j0.p.norm() > 0) fl.pure_second_order = false;
  Subequation t("translate(" + g.name() + ")", g.params(), g.dim(),
                [base, j0](const Jet2& j) { return base.contains(j - j0); }, fl,
                g.monotonicity_cone_ref());
  if (g.offset_hint()) {
    auto h = *g.offset_hint();
    t.set_offset_hint([h, j0](const Jet2& j) { return h(j - j0); });
  }
  return t;
}

namespace {

JetShape shape_for(const Subequation& f) {
  JetShape s;
  s.with_r = !f.flags().reduced;
  s.with_p = !f.flags().pure_second_order;
  return s;
}

}  // namespace

Jet2 sample_boundary(const Subequation& f, Rng& rng, double scale) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    Jet2 j = random_jet(rng, f.dim(), scale, shape_for(f));
    double t = identity_ray_offset(f, j);
    if (std::isfinite(t)) return j.shifted(-t);
  }
  throw NumericalFailure("sample_boundary: " + f.name() + " has no boundary along the I-axis");
}

Jet2 sample_member(const Subequation& f, Rng& rng, double scale) {
  Jet2 j = random_jet(rng, f.dim(), scale, shape_for(f));
  double t = identity_ray_offset(f, j);
  if (t == kInf) return j;
  if (!std::isfinite(t)) throw NumericalFailure("sample_member: " + f.name() + " appears empty");
  Jet2 b = j.shifted(-t);
  double u = uniform(rng, 0.0, 1.0);
  if (u < 0.25) return b;
  Jet2 push(b.r, b.p, b.A + random_psd(rng, f.dim(), scale));
  if (u < 0.5) push.r -= uniform(rng, 0.0, scale) * (f.flags().reduced ? 0.0 : 1.0);
  return push;
}

ProbeReport monotonicity_check(const Subequation& f, const Subequation& m, const SampleOptions& opt) {
  if (!m.flags().is_cone) throw InvalidInput("monotonicity_check: M must be a cone");
  if (m.dim() != f.dim()) throw InvalidInput("monotonicity_check: dimension mismatch");
  ProbeReport rep;
  rep.probe = "monotonicity";
  rep.subject = f.name() + " + " + m.name();
  rep.samples = opt.samples;
  rep.seed = opt.seed;
  struct Out {
    bool bad = false;
    Jet2 j;
    double gap = 0.0;
  };
  auto outs = parallel_map<Out>(opt.samples, opt.threads, [&](std::size_t i) {
    Rng rng = sample_rng(opt.seed, i);
    Jet2 j = (i % 2 == 0) ? sample_boundary(f, rng, opt.scale) : sample_member(f, rng, opt.scale);
    Jet2 mj = (i % 3 == 0) ? sample_member(m, rng, opt.scale) : sample_boundary(m, rng, opt.scale);
    mj.r = 0.0;  // M lives in the reduced jet space
    Jet2 sum = j + mj;
    double slack = 1e-9 * (1.0 + j.norm() + mj.norm());
    Out o;
    if (!f.contains(Jet2(sum.r - slack, sum.p, sum.A.shifted(slack)))) {
      o.bad = true;
      o.j = sum;
      o.gap = identity_ray_offset(f, sum);
    }
    return o;
  });
  double violations = 0.0;
  for (auto& o : outs)
    if (o.bad) {
      violations += 1.0;
      rep.add_witness("J + m left F", o.j, o.gap);
    }
  rep.stats["violations"] = violations;
  return rep;
}

bool asymptotic_interior_contains(const Subequation& g, const Jet2& j, double margin,
                                  const AsymptoticOptions& opt) {
  if (!g.flags().reduced) throw InvalidInput("asymptotic_interior_contains: G must be reduced");
  if (!(margin > 0.0)) throw InvalidInput("asymptotic_interior_contains: margin must be positive");
  if (!(opt.t_max > 1.0) || opt.grid_points < 2) throw InvalidInput("asymptotic_interior_contains: bad grid");
  const double lmax = std::log(opt.t_max);
  for (int i = opt.grid_points / 2; i < opt.grid_points; ++i) {
    double t = std::exp(lmax * i / (opt.grid_points - 1));
    // t * (J + eta), |eta| <= margin, i.e. tJ in the t*margin interior
    if (!interior_contains(g, j * t, t * margin)) return false;
  }
  return true;
}

ProbeReport boundary_convexity_check(const DefiningFunction& rho, const Subequation& m,
                                     const std::vector<Vector>& boundary_points, double margin) {
  ProbeReport rep;
  rep.probe = "boundary_convexity";
  rep.subject = m.name();
  rep.samples = boundary_points.size();
  for (const auto& x : boundary_points) {
    Jet2 j = rho(x);
    if (j.p.norm() < 1e-12) throw InvalidInput("boundary_convexity_check: vanishing gradient of rho");
    Jet2 reduced(0.0, j.p, j.A);
    if (!interior_contains(m, reduced, margin)) rep.add_witness("reduced jet of rho not in Int M", reduced, j.r);
  }
  return rep;
}

}  // namespace nlpot
