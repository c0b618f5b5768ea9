#pragma once

// Operator pairs (F, f), the operator catalog, canonical operators, and the probe suite
// (ellipticity, homogeneity, tameness, topological tameness, compatibility).

#include "nlpot/report.hpp"
#include "nlpot/subeq.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nlpot {

struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(double v, double slack = 0.0) const;
  // membership in the closure
  bool in_closure(double v, double slack = 0.0) const { return v >= lo - slack && v <= hi + slack; }
  std::string str() const;
};

// How a two-dimensional stencil recovers f from directional second differences.
enum class FrameRule {
  Concave,  // f(A) = min over orthonormal frames of f(diag of A in the frame)
  Eigen,    // f evaluated at (min_v D_vv, max_v D_vv)
};

// Spectral description of an O(n)-invariant pure second-order pair, used by the solver.
struct SpectralForm {
  std::function<double(std::span<const double>)> f;       // on ascending eigenvalues
  std::function<double(std::span<const double>)> offset;  // sup{t : lambda - t in F}
  FrameRule rule = FrameRule::Eigen;
};

struct Expectation {
  bool tame = true;
  bool topologically_tame = true;
  bool compatible = true;
};

struct OperatorPair {
  std::string name;
  Params params;
  Subequation F;
  std::function<double(const Jet2&)> f;
  std::optional<double> degree;
  Interval range;
  std::optional<double> c0;
  bool total = false;  // f is defined (and elliptic) off F as well
  std::optional<SpectralForm> spectral;
  Expectation expect;
  std::string note;

  int dim() const { return F.dim(); }
  double operator()(const Jet2& j) const { return f(j); }
  double operator()(const SymMatrix& a) const { return f(Jet2(a)); }
};

// Names: det, det_k, lambda_k, laplace, sigma_k, sigma_quotient, p_fold, f_delta,
// pucci_minus, garding_pucci, garding_pucci_root, special_lagrangian, log_laplace,
// ex_3_21, oscillator, ex_1_5, det_C, det_H, garding_branch, lag_canonical,
// min_eig_minus_value, constant_zero, canonical.
// "canonical:<Subequation>" builds canonical_operator with optional param "scale";
// "garding_branch:<poly>" takes the branch index "k".
OperatorPair make_operator_pair(const std::string& name, const Params& params);
std::vector<std::string> pair_names();
std::vector<CatalogRef> pair_catalog_defaults();

// f(A) = k sup{t : A - tI in F}, by bisection on F's membership oracle
OperatorPair canonical_operator(const Subequation& F, double k);

// f_bar = chi o f; chi must be strictly increasing on range(f)
OperatorPair tame_via_chi(const OperatorPair& pair, std::function<double(double)> chi,
                          const std::string& chi_name = "chi");

// {J in F : f(J) >= c} as a subequation
Subequation level_subequation(const OperatorPair& pair, double c);

// F_f(psi) and its dual
bool inhom_contains(const OperatorPair& pair, double psi, const Jet2& j);
bool inhom_dual_contains(const OperatorPair& pair, double psi, const Jet2& j);

// the piecewise non-tamable operator, in coordinates y = tr A, x = A - (y/n) I, |x| Frobenius
double ex_3_21_value(double xnorm, double y);
bool ex_3_21_levelset_identity(const SymMatrix& x, double y);

struct TauOptions {
  double t_min = 1.0;
  double t_max = 1e6;
  int points = 60;
  double cap = 1e12;
};
// liminf_{t -> inf} f(tA) estimated over the last decade of a geometric grid.
double tau(const OperatorPair& pair, const SymMatrix& a, const TauOptions& opt = {});

// ---- probes -----------------------------------------------------------------

struct TamenessOptions {
  SampleOptions sample{400, 1, 1, 1.0};  // samples per cell
  std::vector<double> s_grid{0.25, 1.0};
  std::vector<double> lambda_grid{0.25, 0.5, 1.0};
  std::vector<double> caps{1.0, 1e2, 1e4, 1e6};
  double abs_tol = 1e-12;
  double decay_ratio = 1e-3;  // fail if min at largest cap < ratio * min at smallest cap
};
ProbeReport tameness_probe(const OperatorPair& pair, const TamenessOptions& opt = {});

struct TopTameOptions {
  SampleOptions sample{1000, 2, 1, 1.0};
  std::vector<double> lambda_grid{1e-3, 1e-2, 1e-1, 1.0};
  double cap = 1e3;
};
ProbeReport topological_tameness_probe(const OperatorPair& pair, const TopTameOptions& opt = {});

struct CompatOptions {
  SampleOptions sample{500, 3, 1, 1.0};
  double tol = 1e-8;  // relative to 1 + |f| scale
};
ProbeReport compatibility_probe(const OperatorPair& pair, const CompatOptions& opt = {});

ProbeReport ellipticity_check(const OperatorPair& pair, const SampleOptions& opt);
ProbeReport homogeneity_check(const OperatorPair& pair, const SampleOptions& opt, double tol = 1e-9);

// F(c) + M subset F(c) for c on a grid of values of f
ProbeReport monotonicity_check(const OperatorPair& pair, const Subequation& m, const std::vector<double>& levels,
                               const SampleOptions& opt);

// dual(dual(F)) == F off a band of width `band` around the boundary
ProbeReport duality_involution_check(const Subequation& F, const SampleOptions& opt, double band = 1e-6);

// Int ->F_c subset cone{tau > c}
ProbeReport lemma_3_23_probe(const OperatorPair& pair, double c, const SampleOptions& opt,
                             const TauOptions& tau_opt = {});

}  // namespace nlpot
