#pragma once

// Jet-equivalences (r, p, A) -> (r, g p, h A h^T + L(p)) on a chart, their affine
// variants, and Riemannian Hessians of 2D metrics given in closed form.

#include "nlpot/ops.hpp"
#include "nlpot/report.hpp"
#include "nlpot/sampling.hpp"
#include "nlpot/subeq.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nlpot {

struct JetEquivalence {
  int n = 0;
  std::function<Matrix(const Vector&)> g;
  std::function<Matrix(const Vector&)> h;
  // L_x(p) = sum_i p_i L_x[i]
  std::function<std::vector<SymMatrix>(const Vector&)> L;
  std::optional<std::function<Jet2(const Vector&)>> shift;  // affine part J0(x)
  double lip_g = 0.0, lip_h = 0.0, lip_L = 0.0;

  Jet2 linear(const Vector& x, const Jet2& j) const;
  Jet2 apply(const Vector& x, const Jet2& j) const;    // linear + J0(x)
  Jet2 inverse(const Vector& x, const Jet2& j) const;  // apply^{-1}
  Jet2 shift_at(const Vector& x) const;
};

JetEquivalence identity_equivalence(int n);

// g = I + G sin<a,x>, h = I + H cos<b,x>, L_i = S_i sin<c_i,x>; perturbations have
// spectral norm <= strength < 1 so g, h stay invertible.  Lipschitz constants recorded.
JetEquivalence random_jet_equivalence(int n, Rng& rng, double strength = 0.4, bool affine = false);

// Phi_x(J) in F
bool transported_membership(const Subequation& F, const JetEquivalence& phi, const Vector& x, const Jet2& j);
// the fiber {J : Phi_x(J) in F} as a subequation
Subequation transported_fiber(const Subequation& F, const JetEquivalence& phi, const Vector& x);
// dual of the fiber through the affine rule: linear(J) - J0(x) in dual(F)
bool transported_dual_membership(const Subequation& F, const JetEquivalence& phi, const Vector& x, const Jet2& j);

// (P) and (N) sampled on a subequation: J in G => J + (0,0,P) in G and (r - s, p, A) in G
ProbeReport positivity_negativity_probe(const Subequation& g, const SampleOptions& opt);

// |h(x) A h(x)^T - h(y) A h(y)^T| <= C |A| |x - y| with C = 2 lip_h sup|h|, sampled near x
ProbeReport congruence_lipschitz_check(const JetEquivalence& phi, const std::vector<Vector>& points,
                                       const SampleOptions& opt);

// ---- 2D metrics ---------------------------------------------------------------

struct Metric2D {
  std::string name;
  std::function<Matrix(const Vector&)> g;                  // 2x2, positive definite
  std::function<std::array<Matrix, 2>(const Vector&)> dg;  // d g / d x_k

  // Gamma[k](i, j) = Gamma^k_{ij}
  std::array<Matrix, 2> christoffel(const Vector& x) const;
};

Metric2D euclidean_metric();
Metric2D polar_metric();       // (r, theta): dr^2 + r^2 dtheta^2
Metric2D hyperbolic_metric();  // (x, y), y > 0: (dx^2 + dy^2) / y^2
Metric2D sphere_metric();      // (theta, phi): dtheta^2 + sin^2(theta) dphi^2
Metric2D make_metric(const std::string& name);
std::vector<std::string> metric_names();

// u(x) -> (u, Du, D^2 u) at x
using SmoothFunction = std::function<Jet2(const Vector&)>;

// D^2 u - Gamma^k d_k u; throws InvalidInput for a degenerate metric
SymMatrix riemannian_hessian(const Metric2D& m, const SmoothFunction& u, const Vector& x);
// eigenvalues of Hess relative to the metric, g^{-1/2} H g^{-1/2}, ascending
Vector metric_eigenvalues(const Metric2D& m, const Vector& x, const SymMatrix& hess);

// g = I, h = g(x)^{-1/2}, L_x(p) = -h (Gamma^k p_k) h^T: sends the Euclidean 2-jet of u
// to the Riemannian Hessian in an orthonormal frame
JetEquivalence riemannian_equivalence(const Metric2D& m);

// det(Hess u + M_x) = psi: (P, det) transported by the affine equivalence with J0 = (0, 0, M_x)
struct VariablePair {
  OperatorPair euclid;
  JetEquivalence phi;

  bool contains(const Vector& x, const Jet2& j) const { return transported_membership(euclid.F, phi, x, j); }
  double value(const Vector& x, const Jet2& j) const { return euclid(phi.apply(x, j)); }
  Interval range() const { return euclid.range; }
};
using Section = std::function<SymMatrix(const Vector&)>;
VariablePair example_9_5_pair(const Section& m, const std::optional<Metric2D>& metric = std::nullopt);

}  // namespace nlpot
