#include "nlpot/riesz.hpp"

#include "nlpot/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace nlpot {

namespace {

void check_p(double p) {
  if (!std::isfinite(p)) throw InvalidInput("Riesz kernel: p must be finite");
  if (p < 1.0) throw InvalidInput("Riesz kernel: p >= 1");
}

double sphere_area(int n) { return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n); }

}  // namespace

SymMatrix riesz_test_matrix(double p, const Vector& x) {
  SymMatrix px = line_projector(x);
  return complement_projector(x) - px * (p - 1.0);
}

double riesz_characteristic(const Subequation& F, const RieszOptions& opt) {
  if (!F.flags().is_cone || !F.flags().st_invariant)
    throw InvalidInput("riesz_characteristic: " + F.name() + " is not an ST-invariant cone");
  const int n = F.dim();
  Vector e1 = Vector::Zero(n);
  e1[0] = 1.0;
  auto in = [&](double p) { return F.contains(riesz_test_matrix(p, e1)); };
  // A(1) = P_perp sits on the boundary of P; nudge it by rounding-scale to avoid a
  // spurious miss from a -1e-17 eigenvalue
  if (!F.contains(riesz_test_matrix(1.0, e1) + SymMatrix::identity(n) * 1e-12))
    throw NumericalFailure("riesz_characteristic: P_perp is not in " + F.name());
  if (in(opt.p_cap)) return kInf;
  double lo = 1.0, hi = opt.p_cap;
  for (int i = 0; i < opt.iterations && hi - lo > 4e-16 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (in(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double kernel_profile(double p, double t) {
  check_p(p);
  if (p < 2.0) return std::pow(t, 2.0 - p) / (2.0 - p);
  if (p == 2.0) return std::log(t);
  return -1.0 / ((p - 2.0) * std::pow(t, p - 2.0));
}

double riesz_kernel(double p, const Vector& x) {
  double r = x.norm();
  if (r == 0.0) throw InvalidInput("riesz_kernel: x = 0");
  return kernel_profile(p, r);
}

double kernel_eps(double p, double eps, const Vector& x) {
  if (!(eps > 0.0)) throw InvalidInput("kernel_eps: eps > 0");
  return kernel_profile(p, std::sqrt(x.squaredNorm() + eps * eps));
}

KernelDerivatives kernel_hessian(double p, double eps, const Vector& x) {
  check_p(p);
  const int n = static_cast<int>(x.size());
  const double s2 = x.squaredNorm() + eps * eps;
  if (!(s2 > 0.0)) throw InvalidInput("kernel_hessian: x = 0 needs eps > 0");
  const double pref = std::pow(s2, -0.5 * p);
  // P_perp - (p-1) P_x + (eps^2 p / s2) P_x = I - p (|x|^2 / s2) P_x = I - p x x^T / s2.
  // At x = 0 the P_x terms drop out and the Hessian is eps^{-p} I whatever P_x is.
  if (x.squaredNorm() == 0.0) return {Vector::Zero(n), SymMatrix::identity(n) * pref};
  Matrix h = Matrix::Identity(n, n) - (p / s2) * (x * x.transpose());
  return {pref * x, SymMatrix(pref * h)};
}

double alpha_exponent(int n, double m, double p) {
  if (!(m > 0.0) || !(p > 0.0)) throw InvalidInput("alpha_exponent: m, p > 0");
  return n / (m * p);
}

double phi_profile(const OperatorPair& pair, double p, double alpha, double r, double eps) {
  const int n = pair.dim();
  if (!std::isfinite(r)) return 0.0;
  Vector x = Vector::Zero(n);
  x[0] = r;
  double v = pair(kernel_hessian(p, eps, x).hessian);
  if (!(v > 0.0)) return 0.0;
  return alpha == 1.0 ? v : std::pow(v, alpha);
}

MassResult delta_mass(const OperatorPair& pair, double p, double alpha, double eps, const MassOptions& opt) {
  const int n = pair.dim();
  const double w = sphere_area(n);
  auto g = [&](double r) { return w * std::pow(r, n - 1) * phi_profile(pair, p, alpha, r, eps); };
  MassResult out;
  const double r1 = 1e4 * eps, r2 = 1e5 * eps;
  const double g1 = g(r1), g2 = g(r2);
  if (g1 > 0.0 && g2 > 0.0) out.tail_exponent = std::log(g2 / g1) / std::log(r2 / r1);
  else out.tail_exponent = -kInf;
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  if (opt.ball_radius > 0.0) {
    out.value = GK::integrate(g, 0.0, opt.ball_radius * eps, opt.max_depth, opt.tolerance, &out.error_estimate);
    return out;
  }
  // r^{n-1} phi ~ r^{tail}; tail >= -1 means the mass is infinite
  if (out.tail_exponent >= -1.05) {
    out.divergent = true;
    out.value = kInf;
    return out;
  }
  out.value = GK::integrate(g, 0.0, kInf, opt.max_depth, opt.tolerance, &out.error_estimate);
  return out;
}

SlopeResult mass_slope(const OperatorPair& pair, double p, double alpha_prime, const std::vector<double>& eps_list) {
  if (eps_list.size() < 2) throw InvalidInput("mass_slope: need at least two eps values");
  SlopeResult out;
  out.expected = pair.dim() - alpha_prime * riesz_degree(pair) * p;
  auto run = [&](const MassOptions& mo) {
    out.masses.clear();
    for (double e : eps_list) {
      MassResult m = delta_mass(pair, p, alpha_prime, e, mo);
      if (m.divergent) return false;
      out.masses.push_back(m.value);
    }
    return true;
  };
  // over R^n the mass can diverge (logarithmically for alpha/2 in the plane); the ball
  // |x| <= eps keeps the scaling law and stays finite
  if (!run({})) {
    out.used_ball = true;
    run({1e-10, 15, 1.0});
  }
  const size_t k = eps_list.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < k; ++i) {
    double lx = std::log(eps_list[i]), ly = std::log(out.masses[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  out.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return out;
}

double riesz_degree(const OperatorPair& pair) {
  if (!pair.degree) throw InvalidInput("riesz: pair " + pair.name + " has no degree");
  return *pair.degree;
}

std::optional<double> tabulated_alpha(const std::string& name, const Params& params) {
  auto get = [&](const char* k) {
    auto it = params.find(k);
    if (it == params.end()) throw InvalidInput(name + ": missing parameter " + k);
    return it->second;
  };
  if (name == "det" || name == "sigma_k" || name == "det_C" || name == "det_H") return 1.0;
  if (name == "p_fold") return 1.0 / static_cast<double>(binomial(int(get("n")) - 1, int(get("p")) - 1));
  if (name == "Lag") return std::ldexp(1.0, 1 - int(get("n0")));
  if (name == "f_delta") {
    double n = get("n"), d = get("delta");
    return (n + d) / (n * (1.0 + d));
  }
  if (name == "pucci_minus") return get("lambda") / get("Lambda") * (get("n") - 1.0) - 1.0;
  if (name == "garding_pucci_root") return get("n") / (get("lambda") / get("Lambda") * (get("n") - 1.0) + 1.0);
  return std::nullopt;
}

RieszProfile riesz_profile(const OperatorPair& pair, const std::vector<double>& eps_list, bool with_mass) {
  RieszProfile out;
  out.pair = pair.name;
  out.n = pair.dim();
  out.m = riesz_degree(pair);
  out.p = riesz_characteristic(pair.F);
  if (!std::isfinite(out.p)) throw NumericalFailure("riesz_profile: p = inf for " + pair.name);
  out.alpha = alpha_exponent(out.n, out.m, out.p);
  out.tabulated_alpha = tabulated_alpha(pair.name, pair.params);
  out.eps = eps_list;
  if (!with_mass) return out;
  for (double e : eps_list) {
    MassResult m = delta_mass(pair, out.p, out.alpha, e);
    if (m.divergent) throw NumericalFailure("riesz_profile: divergent mass for " + pair.name);
    out.mass.push_back(m.value);
  }
  SlopeResult half = mass_slope(pair, out.p, 0.5 * out.alpha, eps_list);
  SlopeResult twice = mass_slope(pair, out.p, 2.0 * out.alpha, eps_list);
  out.slope_half = half.slope;
  out.expected_half = half.expected;
  out.slope_double = twice.slope;
  out.expected_double = twice.expected;
  return out;
}

}  // namespace nlpot
