#pragma once

// Riesz characteristic, radial kernels K and K_eps, and the approximate delta
// f^alpha(D^2 K_eps) with alpha = n/(m p).

#include "nlpot/ops.hpp"
#include "nlpot/subeq.hpp"

#include <optional>
#include <string>

namespace nlpot {

struct RieszOptions {
  double p_cap = 64.0;
  int iterations = 200;
};

// unique p with P_{x-perp} - (p-1) P_x on the boundary of F (x = e1); +inf if the
// ray stays in F up to p_cap.  Throws NumericalFailure if A(1) = P_{x-perp} is not in F.
double riesz_characteristic(const Subequation& F, const RieszOptions& opt = {});

// P_{x-perp} - (p-1) P_x
SymMatrix riesz_test_matrix(double p, const Vector& x);

double kernel_profile(double p, double t);  // k(t), k'(t) = t^{1-p}
double riesz_kernel(double p, const Vector& x);
double kernel_eps(double p, double eps, const Vector& x);

struct KernelDerivatives {
  Vector gradient;
  SymMatrix hessian;
};
KernelDerivatives kernel_hessian(double p, double eps, const Vector& x);

double alpha_exponent(int n, double m, double p);

// f^alpha(D^2 K_eps(r e1)); eps = 1 gives phi(r)
double phi_profile(const OperatorPair& pair, double p, double alpha, double r, double eps = 1.0);

struct MassOptions {
  double tolerance = 1e-10;
  int max_depth = 15;
  // integrate over |x| <= ball_radius * eps instead of R^n when > 0
  double ball_radius = 0.0;
};

struct MassResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool divergent = false;
  double tail_exponent = 0.0;  // d log(r^{n-1} phi) / d log r at large r
};

MassResult delta_mass(const OperatorPair& pair, double p, double alpha, double eps, const MassOptions& opt = {});

struct SlopeResult {
  double slope = 0.0;
  double expected = 0.0;  // n - alpha' m p
  bool used_ball = false;
  std::vector<double> masses;
};
// least-squares slope of log c(eps) against log eps
SlopeResult mass_slope(const OperatorPair& pair, double p, double alpha_prime, const std::vector<double>& eps_list);

struct RieszProfile {
  std::string pair;
  int n = 0;
  double m = 0.0;
  double p = 0.0;
  double alpha = 0.0;
  std::optional<double> tabulated_alpha;  // closed form usually quoted for the family
  std::vector<double> eps;
  std::vector<double> mass;
  double slope_half = 0.0, slope_double = 0.0;
  double expected_half = 0.0, expected_double = 0.0;
};

// the pair's homogeneity degree; throws InvalidInput if it has none
double riesz_degree(const OperatorPair& pair);
// keyed by pair name; "Lag" refers to the degree-2^{n0} Lagrangian operator
std::optional<double> tabulated_alpha(const std::string& pair_name, const Params& params);

RieszProfile riesz_profile(const OperatorPair& pair, const std::vector<double>& eps_list, bool with_mass = true);

}  // namespace nlpot
