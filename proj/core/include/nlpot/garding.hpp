#pragma once

// Gårding-hyperbolic polynomials, accessed only through an evaluator.  The restriction
// t -> f(A + tI) is recovered by interpolation at Chebyshev nodes and its roots come
// from a companion matrix; eigenvalues are the negated roots, ascending.

#include "nlpot/report.hpp"
#include "nlpot/subeq.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nlpot {

struct GardingPolynomial {
  std::string name;
  int n = 0;
  int degree = 0;
  std::function<double(const SymMatrix&)> eval;
  double at_identity = 1.0;  // f(I)

  double operator()(const SymMatrix& a) const { return eval(a); }
};

// det{n}, sigma_k{n,k}, f_delta{n,delta}, garding_pucci{n,lambda,Lambda}, p_fold{n,p},
// det_squared{n}, non_hyperbolic_quadratic{} (n = 2, A11^2 + A22^2)
GardingPolynomial make_garding(const std::string& name, const Params& params);
std::vector<std::string> garding_names();

// coefficients of t -> f(A + tI) in the monomial basis, lowest degree first
struct IdentityRestriction {
  std::vector<long double> coeffs;
  double interpolation_residual = 0.0;  // relative mismatch at off-node checkpoints
};
IdentityRestriction restrict_to_identity_line(const GardingPolynomial& f, const SymMatrix& a);

struct GardingSpectrum {
  std::vector<double> values;  // ascending
  bool hyperbolic = true;
  double max_imag = 0.0;       // largest |Im root| / (1 + |root|), normalized units
  bool near_multiple = false;  // clustered roots were merged
  double interpolation_residual = 0.0;
};
GardingSpectrum garding_spectrum(const GardingPolynomial& f, const SymMatrix& a, double tol = 1e-6);

// throws NumericalFailure when a root is not real at A
std::vector<double> garding_eigenvalues(const GardingPolynomial& f, const SymMatrix& a, double tol = 1e-6);

ProbeReport is_hyperbolic(const GardingPolynomial& f, const SampleOptions& opt, double tol = 1e-6);

bool branch_contains(const GardingPolynomial& f, int k, const SymMatrix& a);
Subequation garding_branch(const GardingPolynomial& f, int k);

// A -> d^j/dt^j f(A + tI) at t = 0
GardingPolynomial derivative_polynomial(const GardingPolynomial& f, int j);

}  // namespace nlpot
