#include "nlpot/ops.hpp"

#include "nlpot/error.hpp"
#include "nlpot/garding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace nlpot {

bool Interval::contains(double v, double slack) const {
  bool lo_ok = lo_closed ? v >= lo - slack : v > lo - slack;
  bool hi_ok = hi_closed ? v <= hi + slack : v < hi + slack;
  return lo_ok && hi_ok;
}

std::string Interval::str() const {
  auto num = [](double x) {
    if (x == kInf) return std::string("inf");
    if (x == -kInf) return std::string("-inf");
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
  };
  return std::string(lo_closed ? "[" : "(") + num(lo) + ", " + num(hi) + (hi_closed ? "]" : ")");
}

namespace {

constexpr double kPi = std::numbers::pi;

int iparam(const Params& p, const std::string& key, const std::string& fam, std::optional<int> def = std::nullopt) {
  auto it = p.find(key);
  if (it == p.end()) {
    if (def) return *def;
    throw InvalidInput(fam + ": missing parameter " + key);
  }
  if (it->second != std::floor(it->second) || it->second < 1 || it->second > 64)
    throw InvalidInput(fam + ": " + key + " must be a positive integer");
  return static_cast<int>(it->second);
}

double rparam(const Params& p, const std::string& key, const std::string& fam, std::optional<double> def = std::nullopt) {
  auto it = p.find(key);
  if (it == p.end()) {
    if (def) return *def;
    throw InvalidInput(fam + ": missing parameter " + key);
  }
  if (!std::isfinite(it->second)) throw InvalidInput(fam + ": " + key + " must be finite");
  return it->second;
}

Interval nonneg() { return Interval{0.0, kInf, true, false}; }

using EigFn = std::function<double(std::span<const double>)>;

// Lifts a function of the ascending spectrum to jets.
std::function<double(const Jet2&)> on_spectrum(EigFn g) {
  return [g](const Jet2& j) { return g(j.A.eigenvalues()); };
}

double product(std::span<const double> v, std::size_t from = 0) {
  double p = 1.0;
  for (std::size_t i = from; i < v.size(); ++i) p *= v[i];
  return p;
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double pucci_value(std::span<const double> e, double lam, double Lam) {
  double v = 0.0;
  for (double x : e) v += x > 0 ? lam * x : Lam * x;
  return v;
}

EigFn membership_offset(const Subequation& F) {
  // spectral_offset over the family's own spectral membership (F must be O(n)-invariant)
  Subequation f = F;
  const int n = F.dim();
  return [f, n](std::span<const double> e) {
    auto mem = [&f, n](std::span<const double> x) {
      return f.contains(SymMatrix::diagonal(std::span<const double>(x.data(), static_cast<std::size_t>(n))));
    };
    return spectral_offset(mem, e);
  };
}

OperatorPair base(const std::string& name, const Params& params, Subequation F) {
  OperatorPair p;
  p.name = name;
  p.params = params;
  p.F = std::move(F);
  return p;
}

}  // namespace

OperatorPair make_operator_pair(const std::string& name, const Params& params) {
  auto n_of = [&] { return iparam(params, "n", name); };

  if (name.rfind("canonical:", 0) == 0) {
    std::string sub = name.substr(10);
    Params sp = params;
    double scale = rparam(params, "scale", name, 1.0);
    sp.erase("scale");
    OperatorPair p = canonical_operator(make_subequation(sub, sp), scale);
    p.params = params;
    return p;
  }
  if (name.rfind("garding_branch:", 0) == 0) {
    std::string poly = name.substr(15);
    Params gp = params;
    int k = iparam(params, "k", name);
    gp.erase("k");
    if (poly == "sigma_k") gp["k"] = rparam(params, "order", name);
    GardingPolynomial g = make_garding(poly, gp);
    if (k > g.degree) throw InvalidInput(name + ": branch index exceeds degree");
    OperatorPair p = base(name, params, garding_branch(g, k));
    p.f = [g, k](const Jet2& j) {
      auto ev = garding_eigenvalues(g, j.A);
      double v = 1.0;
      for (int i = k - 1; i < g.degree; ++i) v *= ev[i];
      return v;
    };
    p.degree = g.degree - k + 1;
    p.range = nonneg();
    p.c0 = 0.0;
    p.note = "product of the top Garding eigenvalues on the k-th branch";
    return p;
  }

  if (name == "det") {
    int n = n_of();
    OperatorPair p = base(name, params, make_subequation("P", {{"n", double(n)}}));
    p.f = [](const Jet2& j) { return j.A.matrix().determinant(); };
    p.degree = n;
    p.range = nonneg();
    p.c0 = 0.0;
    p.spectral = SpectralForm{[](std::span<const double> e) { return product(e); },
                              [](std::span<const double> e) { return e.front(); }, FrameRule::Concave};
    return p;
  }
  if (name == "det_k") {
    int n = n_of(), k = iparam(params, "k", name);
    if (k > n) throw InvalidInput("det_k: need k <= n");
    OperatorPair p = base(name, params, make_subequation("Lambda_k", {{"n", double(n)}, {"k", double(k)}}));
    EigFn g = [k](std::span<const double> e) { return product(e, k - 1); };
    p.f = on_spectrum(g);
    p.degree = n - k + 1;
    p.range = nonneg();
    p.c0 = 0.0;
    p.spectral = SpectralForm{g, [k](std::span<const double> e) { return e[k - 1]; }, FrameRule::Eigen};
    return p;
  }
  if (name == "lambda_k") {
    int n = n_of(), k = iparam(params, "k", name);
    if (k > n) throw InvalidInput("lambda_k: need k <= n");
    OperatorPair p = base(name, params, make_subequation("Lambda_k", {{"n", double(n)}, {"k", double(k)}}));
    EigFn g = [k](std::span<const double> e) { return e[k - 1]; };
    p.f = on_spectrum(g);
    p.degree = 1;
    p.range = nonneg();
    p.c0 = 0.0;
    p.total = true;
    p.spectral = SpectralForm{g, g, FrameRule::Eigen};
    return p;
  }
  if (name == "laplace") {
    int n = n_of();
    OperatorPair p = base(name, params, make_subequation("Delta", {{"n", double(n)}}));
    p.f = [](const Jet2& j) { return j.A.trace(); };
    p.degree = 1;
    p.range = nonneg();
    p.c0 = 0.0;
    p.total = true;
    p.spectral = SpectralForm{[](std::span<const double> e) { return sum(e); },
                              [n](std::span<const double> e) { return sum(e) / n; }, FrameRule::Concave};
    return p;
  }
  if (name == "sigma_k") {
    int n = n_of(), k = iparam(params, "k", name);
    if (k > n) throw InvalidInput("sigma_k: need k <= n");
    Subequation F = make_subequation("Sigma_k", {{"n", double(n)}, {"k", double(k)}});
    OperatorPair p = base(name, params, F);
    EigFn g = [k](std::span<const double> e) { return elementary_symmetric(e)[k]; };
    p.f = on_spectrum(g);
    p.degree = k;
    p.range = nonneg();
    p.c0 = 0.0;
    p.spectral = SpectralForm{g, membership_offset(F), FrameRule::Eigen};
    return p;
  }
  if (name == "sigma_quotient") {
    int n = n_of(), k = iparam(params, "k", name), l = iparam(params, "l", name);
    if (k > n) throw InvalidInput("sigma_quotient: need k <= n");
    if (l >= k) throw InvalidInput("sigma_quotient: need l < k");
    Subequation F = make_subequation("Sigma_k", {{"n", double(n)}, {"k", double(k)}});
    OperatorPair p = base(name, params, F);
    EigFn g = [k, l](std::span<const double> e) {
      auto s = elementary_symmetric(e);
      double scale = 1.0;
      for (double x : e) scale = std::max(scale, std::abs(x));
      if (std::abs(s[l]) <= 1e-300 * std::pow(scale, l)) {
        // on the part of the boundary where sigma_l vanishes, sigma_k vanishes faster
        if (std::abs(s[k]) <= 1e-14 * std::pow(scale, k)) return 0.0;
        return std::numeric_limits<double>::quiet_NaN();
      }
      return s[k] / s[l];
    };
    p.f = on_spectrum(g);
    p.degree = k - l;
    p.range = nonneg();
    p.c0 = 0.0;
    p.spectral = SpectralForm{g, membership_offset(F), FrameRule::Eigen};
    p.note = "0/0 on the sigma_l = 0 stratum of the boundary is extended by continuity to 0";
    return p;
  }
  if (name == "p_fold") {
    int n = n_of(), q = iparam(params, "p", name);
    if (q > n) throw InvalidInput("p_fold: need p <= n");
    OperatorPair p = base(name, params, make_subequation("P_p", {{"n", double(n)}, {"p", double(q)}}));
    p.f = [q](const Jet2& j) { return product(p_fold_sums(j.A, q)); };
    p.degree = static_cast<double>(binomial(n, q));
    p.range = nonneg();
    p.c0 = 0.0;
    return p;
  }
  if (name == "f_delta") {
    int n = n_of();
    double d = rparam(params, "delta", name);
    if (!(d > 0)) throw InvalidInput("f_delta: need delta > 0");
    OperatorPair p = base(name, params, make_subequation("P_delta", {{"n", double(n)}, {"delta", d}}));
    EigFn g = [d](std::span<const double> e) {
      double tr = sum(e), v = 1.0;
      for (double x : e) v *= x + d * tr;
      return v;
    };
    p.f = on_spectrum(g);
    p.degree = n;
    p.range = nonneg();
    p.c0 = 0.0;
    p.spectral = SpectralForm{g, [d, n](std::span<const double> e) { return (e.front() + d * sum(e)) / (1 + n * d); },
                              FrameRule::Eigen};
    return p;
  }
  if (name == "pucci_minus") {
    int n = n_of();
    double lam = rparam(params, "lambda", name), Lam = rparam(params, "Lambda", name);
    Subequation F = make_subequation("P_pucci", {{"n", double(n)}, {"lambda", lam}, {"Lambda", Lam}});
    OperatorPair p = base(name, params, F);
    EigFn g = [lam, Lam](std::span<const double> e) { return pucci_value(e, lam, Lam); };
    p.f = on_spectrum(g);
    p.degree = 1;
    p.range = nonneg();
    p.c0 = 0.0;
    p.total = true;
    p.spectral = SpectralForm{g, membership_offset(F), FrameRule::Concave};
    return p;
  }
  if (name == "garding_pucci" || name == "garding_pucci_root") {
    int n = n_of();
    double lam = rparam(params, "lambda", name), Lam = rparam(params, "Lambda", name);
    if (n > 12) throw InvalidInput(name + ": n <= 12");
    GardingPolynomial g = make_garding("garding_pucci", {{"n", double(n)}, {"lambda", lam}, {"Lambda", Lam}});
    Subequation F = make_subequation("P_pucci", {{"n", double(n)}, {"lambda", lam}, {"Lambda", Lam}});
    OperatorPair p = base(name, params, F);
    const bool root = name == "garding_pucci_root";
    const double deg = std::ldexp(1.0, n);
    p.f = [g, root, deg](const Jet2& j) {
      double v = g(j.A);
      return root ? std::pow(std::max(v, 0.0), 1.0 / deg) : v;
    };
    p.degree = root ? 1.0 : deg;
    p.range = nonneg();
    p.c0 = 0.0;
    p.note = root ? "2^n-th root of the Garding-Pucci product" : "product over the 2^n vertices of the {lambda, Lambda} cube";
    return p;
  }
  if (name == "special_lagrangian") {
    int n = n_of();
    EigFn g = [](std::span<const double> e) {
      double v = 0.0;
      for (double x : e) v += std::atan(x);
      return v;
    };
    const double half = n * kPi / 2;
    auto th = params.find("theta");
    OperatorPair p;
    if (th != params.end()) {
      p = base(name, params, make_subequation("F_theta", {{"n", double(n)}, {"theta", th->second}}));
      p.range = Interval{th->second, half, true, false};
      p.c0 = th->second;
      p.spectral = SpectralForm{g, membership_offset(p.F), FrameRule::Eigen};
    } else {
      p = base(name, params, make_subequation("Sym", {{"n", double(n)}}));
      p.range = Interval{-half, half, false, false};
      p.spectral = SpectralForm{g, [](std::span<const double>) { return kInf; }, FrameRule::Eigen};
    }
    p.f = on_spectrum(g);
    p.total = true;
    p.expect.tame = false;
    p.note = "tamable on F_theta only for theta > (n-2) pi/2";
    return p;
  }
  if (name == "log_laplace") {
    int n = n_of();
    OperatorPair p = base(name, params, make_subequation("Delta", {{"n", double(n)}}));
    p.f = [](const Jet2& j) { return std::log1p(j.A.trace()); };
    p.degree = std::nullopt;
    p.range = nonneg();
    p.c0 = 0.0;
    p.spectral = SpectralForm{[](std::span<const double> e) { return std::log1p(sum(e)); },
                              [n](std::span<const double> e) { return sum(e) / n; }, FrameRule::Concave};
    p.expect.tame = false;
    p.note = "tamed by chi(t) = e^t - 1";
    return p;
  }
  if (name == "ex_3_21") {
    int n = n_of();
    OperatorPair p = base(name, params, make_subequation("Delta", {{"n", double(n)}}));
    p.f = [n](const Jet2& j) {
      double y = j.A.trace();
      double x = (j.A.matrix() - (y / n) * Matrix::Identity(n, n)).norm();
      return ex_3_21_value(x, y);
    };
    p.range = nonneg();
    p.c0 = 0.0;
    p.expect.tame = false;
    p.note = "topologically tame, not tamable";
    return p;
  }
  if (name == "oscillator") {
    int n = n_of();
    OperatorPair p = base(name, params, make_subequation("Sym", {{"n", double(n)}}));
    EigFn g = [](std::span<const double> e) {
      double l = e.front(), L = e.back();
      if (l >= 1.0) return l;
      if (L <= -1.0) return L;
      return (l + L) / std::hypot(l - 1.0, L + 1.0);
    };
    p.f = on_spectrum(g);
    p.range = Interval{-kInf, kInf, false, false};
    p.total = true;
    p.spectral = SpectralForm{g, [](std::span<const double>) { return kInf; }, FrameRule::Eigen};
    p.expect.tame = false;
    p.note = "level sets are rays through (1, -1) in (lambda_min, lambda_max)";
    return p;
  }
  if (name == "ex_1_5") {
    OperatorPair p = base(name, params, make_subequation("P_dual", {{"n", 2.0}}));
    EigFn g = [](std::span<const double> e) { return e[0] + e[1]; };
    p.f = on_spectrum(g);
    p.degree = 1;
    p.range = Interval{-kInf, kInf, false, false};
    p.total = true;
    p.expect.compatible = false;
    p.note = "elliptic but incompatible: f is unbounded below on the boundary";
    return p;
  }
  if (name == "det_C" || name == "det_H") {
    int n0 = iparam(params, "n0", name);
    bool cx = name == "det_C";
    int mult = cx ? 2 : 4;
    Subequation F = make_subequation(cx ? "P_C" : "P_H", {{"n0", double(n0)}});
    OperatorPair p = base(name, params, F);
    p.f = [cx, mult, n0](const Jet2& j) {
      SymMatrix h = cx ? hermitian_part(j.A) : quaternionic_part(j.A);
      const auto& e = h.eigenvalues();
      double v = 1.0;
      for (int b = 0; b < n0; ++b) {
        double avg = 0.0;
        for (int i = 0; i < mult; ++i) avg += e[b * mult + i];
        v *= avg / mult;
      }
      return v;
    };
    p.degree = n0;
    p.range = nonneg();
    p.c0 = 0.0;
    return p;
  }
  if (name == "lag_canonical") {
    int n0 = iparam(params, "n0", name);
    OperatorPair p = base(name, params, make_subequation("Lag", {{"n0", double(n0)}}));
    p.f = [n0](const Jet2& j) { return lagrangian_min_trace(j.A) / n0; };
    p.degree = 1;
    p.range = nonneg();
    p.c0 = 0.0;
    p.total = true;
    p.note = "min over Lagrangian planes of tr(A|W)/n0, sampled";
    return p;
  }
  if (name == "min_eig_minus_value") {
    int n = n_of();
    OperatorPair p = base(name, params, make_subequation("P_minus_r", {{"n", double(n)}}));
    p.f = [](const Jet2& j) { return j.A.min_eigenvalue() - j.r; };
    p.degree = 1;
    p.range = nonneg();
    p.c0 = 0.0;
    p.total = true;
    return p;
  }
  if (name == "constant_zero") {
    int n = n_of();
    OperatorPair p = base(name, params, make_subequation("P", {{"n", double(n)}}));
    p.f = [](const Jet2&) { return 0.0; };
    p.degree = 0;
    p.range = Interval{0.0, 0.0, true, true};
    p.c0 = 0.0;
    p.expect = Expectation{false, false, false};
    p.note = "every level set has interior";
    return p;
  }
  throw InvalidInput("unknown operator: " + name);
}

std::vector<std::string> pair_names() {
  std::vector<std::string> v = {"constant_zero", "det", "det_C", "det_H", "det_k", "ex_1_5", "ex_3_21",
                                "f_delta", "garding_pucci", "garding_pucci_root", "lag_canonical", "lambda_k",
                                "laplace", "log_laplace", "min_eig_minus_value", "oscillator", "p_fold",
                                "pucci_minus", "sigma_k", "sigma_quotient", "special_lagrangian"};
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<CatalogRef> pair_catalog_defaults() {
  return {
      {"det", {{"n", 3}}},
      {"det_k", {{"n", 3}, {"k", 2}}},
      {"lambda_k", {{"n", 3}, {"k", 2}}},
      {"laplace", {{"n", 3}}},
      {"sigma_k", {{"n", 4}, {"k", 2}}},
      {"sigma_quotient", {{"n", 4}, {"k", 3}, {"l", 1}}},
      {"p_fold", {{"n", 4}, {"p", 2}}},
      {"f_delta", {{"n", 3}, {"delta", 0.5}}},
      {"pucci_minus", {{"n", 3}, {"lambda", 1.0}, {"Lambda", 2.0}}},
      {"garding_pucci", {{"n", 2}, {"lambda", 1.0}, {"Lambda", 2.0}}},
      {"garding_pucci_root", {{"n", 3}, {"lambda", 1.0}, {"Lambda", 2.0}}},
      {"special_lagrangian", {{"n", 3}}},
      {"log_laplace", {{"n", 2}}},
      {"ex_3_21", {{"n", 2}}},
      {"oscillator", {{"n", 2}}},
      {"ex_1_5", {}},
      {"det_C", {{"n0", 2}}},
      {"det_H", {{"n0", 1}}},
      {"lag_canonical", {{"n0", 2}}},
      {"min_eig_minus_value", {{"n", 3}}},
      {"constant_zero", {{"n", 2}}},
  };
}

OperatorPair canonical_operator(const Subequation& F, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw InvalidInput("canonical_operator: k must be positive");
  if (!F.flags().pure_second_order) throw InvalidInput("canonical_operator: F must be pure second order");
  const int n = F.dim();
  double t0 = identity_ray_offset(F, Jet2(SymMatrix(n)), false);
  if (!std::isfinite(t0))
    throw NumericalFailure("canonical_operator: " + F.name() + " is degenerate for this construction (" +
                           std::string(t0 > 0 ? "every" : "no") + " point of the I-axis lies in F)");
  OperatorPair p;
  p.name = "canonical(" + F.name() + ")";
  p.params = F.params();
  p.params["k"] = k;
  p.F = F;
  Subequation Fc = F;
  p.f = [Fc, k](const Jet2& j) {
    double t = identity_ray_offset(Fc, Jet2(j.A), false);
    if (!std::isfinite(t)) throw NumericalFailure("canonical operator: no bracket along the I-axis");
    return k * t;
  };
  if (F.flags().is_cone) p.degree = 1;
  p.range = nonneg();
  p.c0 = 0.0;
  p.total = true;
  return p;
}

OperatorPair tame_via_chi(const OperatorPair& pair, std::function<double(double)> chi, const std::string& chi_name) {
  // strict monotonicity of chi on a grid covering range(f)
  double lo = pair.range.lo, hi = pair.range.hi;
  double a = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi - 50.0 : -50.0);
  double b = std::isfinite(hi) ? hi : a + 50.0;
  if (b < a) std::swap(a, b);
  double prev = chi(a);
  const int steps = 2000;
  for (int i = 1; i <= steps; ++i) {
    double t = a + (b - a) * i / steps;
    double v = chi(t);
    if (!(v > prev) && b > a) throw InvalidInput("tame_via_chi: " + chi_name + " is not strictly increasing on the range");
    prev = v;
  }
  OperatorPair out = pair;
  out.name = chi_name + "(" + pair.name + ")";
  auto f = pair.f;
  out.f = [f, chi](const Jet2& j) { return chi(f(j)); };
  out.range = Interval{std::isfinite(lo) ? chi(lo) : lo, std::isfinite(hi) ? chi(hi) : hi, pair.range.lo_closed,
                       pair.range.hi_closed};
  if (pair.c0) out.c0 = chi(*pair.c0);
  out.degree = std::nullopt;
  if (pair.spectral) {
    auto g = pair.spectral->f;
    out.spectral->f = [g, chi](std::span<const double> e) { return chi(g(e)); };
  }
  out.expect.tame = true;
  return out;
}

Subequation level_subequation(const OperatorPair& pair, double c) {
  OperatorPair p = pair;
  SubeqFlags fl = pair.F.flags();
  fl.is_cone = fl.is_cone && c == 0.0;
  fl.convex = false;
  std::ostringstream nm;
  nm.precision(17);
  nm << pair.name << ">=" << c;
  Subequation s(nm.str(), pair.params, pair.dim(),
                [p, c](const Jet2& j) { return p.F.contains(j) && p.f(j) >= c; }, fl, pair.F.monotonicity_cone_ref());
  return s;
}

bool inhom_contains(const OperatorPair& pair, double psi, const Jet2& j) {
  if (!pair.range.in_closure(psi, 1e-12)) throw InvalidInput("inhom_contains: psi outside the closure of f(F)");
  return pair.F.contains(j) && pair.f(j) >= psi;
}

bool inhom_dual_contains(const OperatorPair& pair, double psi, const Jet2& j) {
  if (!pair.range.in_closure(psi, 1e-12)) throw InvalidInput("inhom_dual_contains: psi outside the closure of f(F)");
  if (dual_contains(pair.F, j)) return true;
  Jet2 mj = -j;
  return interior_contains(pair.F, mj) && pair.f(mj) <= psi;
}

double ex_3_21_value(double xnorm, double y) {
  if (y <= 1.0 + xnorm) return y / (1.0 + xnorm);
  return y - xnorm;
}

bool ex_3_21_levelset_identity(const SymMatrix& x, double y) {
  const int n = x.dim();
  if (std::abs(x.trace()) > 1e-12 * (1.0 + x.frobenius())) throw InvalidInput("ex_3_21: x must be traceless");
  OperatorPair p = make_operator_pair("ex_3_21", {{"n", double(n)}});
  double xn = x.frobenius();
  auto jet = [n](const SymMatrix& xx, double yy) { return Jet2(xx.shifted(yy / n)); };
  double lhs = p(jet(x, (1.0 + xn) * y));
  double rhs = p(jet(SymMatrix(n), y));
  return std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs));
}

double tau(const OperatorPair& pair, const SymMatrix& a, const TauOptions& opt) {
  if (!pair.F.flags().pure_second_order) throw InvalidInput("tau: pure second-order pair required");
  if (!(opt.t_max > opt.t_min && opt.t_min > 0 && opt.points >= 3)) throw InvalidInput("tau: bad grid");
  const double l0 = std::log(opt.t_min), l1 = std::log(opt.t_max);
  std::vector<double> vals;
  for (int i = 0; i < opt.points; ++i) {
    double t = std::exp(l0 + (l1 - l0) * i / (opt.points - 1));
    if (t < opt.t_max / 10.0 * (1 - 1e-12)) continue;  // last decade only
    SymMatrix ta = a * t;
    if (!pair.F.contains(ta)) return -kInf;
    vals.push_back(pair.f(Jet2(ta)));
  }
  double mn = *std::min_element(vals.begin(), vals.end());
  if (mn >= opt.cap) return kInf;
  if (mn <= -opt.cap) return -kInf;
  double first = vals.front(), last = vals.back();
  // unbounded growth across the decade counts as +inf, unbounded decrease as -inf
  if (first > 0 && last >= 2.0 * first && mn == first) return kInf;
  if (first < 0 && last <= 2.0 * first) return -kInf;
  return mn;
}

}  // namespace nlpot
