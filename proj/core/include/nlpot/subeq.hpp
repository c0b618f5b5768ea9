#pragma once

// Subequations as membership oracles over 2-jets, their duals, and sampled probes of
// monotonicity, asymptotic interiors and boundary convexity.
//
// Interior/boundary decisions use a margin band.  For a set with positivity (P) and
// negativity (N) the worst perturbation of size m in the (r, A) slots is the corner
// (+m, 0, -mI), so interior_contains tests that corner, plus a handful of gradient
// perturbations when membership depends on p.

#include "nlpot/report.hpp"
#include "nlpot/sampling.hpp"
#include "nlpot/symjet.hpp"

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>

namespace nlpot {

using Params = std::map<std::string, double>;

struct SubeqFlags {
  bool is_cone = false;
  bool pure_second_order = true;  // depends on A only
  bool reduced = true;            // independent of r
  // Invariant under positive scalings composed with a group acting transitively on
  // unit vectors (O(n) for the real families, U(n0) / Sp(n0) for the complex and
  // quaternionic ones).  This is what the Riesz characteristic needs.
  bool st_invariant = false;
  bool convex = false;
};

struct CatalogRef {
  std::string name;
  Params params;
};

class Subequation {
 public:
  using Oracle = std::function<bool(const Jet2&)>;
  using Offset = std::function<double(const Jet2&)>;

  Subequation() = default;
  Subequation(std::string name, Params params, int n, Oracle member, SubeqFlags flags,
              std::optional<CatalogRef> mono = std::nullopt);

  const std::string& name() const { return name_; }
  const Params& params() const { return params_; }
  double param(const std::string& key) const;
  int dim() const { return n_; }
  const SubeqFlags& flags() const { return flags_; }

  bool contains(const Jet2& j) const;
  bool contains(const SymMatrix& a) const { return contains(Jet2(a)); }

  const std::optional<CatalogRef>& monotonicity_cone_ref() const { return mono_; }
  Subequation monotonicity_cone() const;  // resolves through make_subequation

  // Closed form of sup{t : J - tI in F}, if the family has one.  Only samplers use it.
  const std::optional<Offset>& offset_hint() const { return offset_; }
  Subequation& set_offset_hint(Offset o) {
    offset_ = std::move(o);
    return *this;
  }
  Subequation& set_monotonicity_cone(std::optional<CatalogRef> m) {
    mono_ = std::move(m);
    return *this;
  }

 private:
  std::string name_;
  Params params_;
  int n_ = 0;
  Oracle member_;
  SubeqFlags flags_;
  std::optional<CatalogRef> mono_;
  std::optional<Offset> offset_;
};

// Catalog: P, P_dual, Lambda_k{k}, Delta, Sigma_k{k}, P_p{p}, P_delta{delta},
// P_pucci{lambda,Lambda}, P_C{n0}, P_H{n0}, Lag{n0}, F_theta{theta}, Sym,
// P_minus_r, P_grad.  Every entry takes n (or n0 where noted).
Subequation make_subequation(const std::string& name, const Params& params);
std::vector<std::string> subequation_names();
// default parameter sets used by the catalog sweeps
std::vector<CatalogRef> subequation_catalog_defaults();

// min over Lagrangian planes W of tr(A|W), A on R^{2 n0} with the standard complex
// structure.  Sampled unitary frames plus coordinate descent over U(n0) generators, so
// the result is an upper estimate of the true minimum.
double lagrangian_min_trace(const SymMatrix& a);

// sup{t : lambda - t in S} for a membership test on ascending spectra; +-inf if unbracketed
double spectral_offset(const std::function<bool(std::span<const double>)>& member,
                       std::span<const double> eig);

double default_margin(const Jet2& j);

// sup{t : J - tI in F}; +inf / -inf when no bracket is found within 2^64 * (1 + |J|).
// With use_hint the family's closed form is used if it has one.
double identity_ray_offset(const Subequation& f, const Jet2& j, bool use_hint = true);

// J + eta in F for |eta| <= margin (corner plus gradient perturbations)
bool interior_contains(const Subequation& f, const Jet2& j, double margin);
bool interior_contains(const Subequation& f, const Jet2& j);

bool dual_contains(const Subequation& f, const Jet2& j, double margin);
bool dual_contains(const Subequation& f, const Jet2& j);
Subequation dual(const Subequation& f);

// J0 + G
Subequation translate(const Subequation& g, const Jet2& j0);

// A point of F (boundary + PSD push) and a boundary point, both from the I-ray offset.
Jet2 sample_member(const Subequation& f, Rng& rng, double scale);
Jet2 sample_boundary(const Subequation& f, Rng& rng, double scale);

// F + M subset F, sampled.  Violations are judged with a 1e-9 relative slack.
ProbeReport monotonicity_check(const Subequation& f, const Subequation& m, const SampleOptions& opt);

struct AsymptoticOptions {
  double t_max = 1e8;
  int grid_points = 60;
};
bool asymptotic_interior_contains(const Subequation& g, const Jet2& j, double margin,
                                  const AsymptoticOptions& opt = {});

// rho returns (rho(x), D rho(x), D^2 rho(x)); the reduced jet (D rho, D^2 rho) is tested
// against Int M.
using DefiningFunction = std::function<Jet2(const Vector&)>;
ProbeReport boundary_convexity_check(const DefiningFunction& rho, const Subequation& m,
                                     const std::vector<Vector>& boundary_points,
                                     double margin = 1e-9);

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace nlpot
