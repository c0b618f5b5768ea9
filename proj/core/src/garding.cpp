#include "nlpot/garding.hpp"

#include "nlpot/error.hpp"
#include "nlpot/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

namespace nlpot {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

namespace {

int iparam(const Params& p, const std::string& key, const std::string& fam) {
  auto it = p.find(key);
  if (it == p.end()) throw InvalidInput(fam + ": missing parameter " + key);
  if (it->second != std::floor(it->second) || it->second < 1) throw InvalidInput(fam + ": " + key + " must be a positive integer");
  return static_cast<int>(it->second);
}

double rparam(const Params& p, const std::string& key, const std::string& fam) {
  auto it = p.find(key);
  if (it == p.end()) throw InvalidInput(fam + ": missing parameter " + key);
  return it->second;
}

long double horner(const std::vector<long double>& c, long double x) {
  long double v = 0.0L;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

long double abs_horner(const std::vector<long double>& c, long double x) {
  long double v = 0.0L, ax = std::fabs(x);
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * ax + std::fabs(*it);
  return v;
}

std::vector<long double> derivative(const std::vector<long double>& c) {
  std::vector<long double> d;
  for (std::size_t j = 1; j < c.size(); ++j) d.push_back(c[j] * static_cast<long double>(j));
  return d;
}

// Roots of a polynomial assumed real-rooted, by bracketing each root between
// consecutive roots of its derivative.  Returns false if some bracket shows no root.
bool interlacing_roots(const std::vector<long double>& c, std::vector<long double>& roots) {
  const int m = static_cast<int>(c.size()) - 1;
  if (m == 1) {
    roots = {-c[0] / c[1]};
    return true;
  }
  std::vector<long double> inner;
  if (!interlacing_roots(derivative(c), inner)) return false;
  long double bound = 1.0L;
  for (int j = 0; j < m; ++j) bound = std::max(bound, 1.0L + std::fabs(c[j] / c[m]));
  std::vector<long double> edges;
  edges.push_back(-bound);
  for (auto r : inner) edges.push_back(r);
  edges.push_back(bound);
  roots.clear();
  bool ok = true;
  for (int i = 0; i + 1 < static_cast<int>(edges.size()); ++i) {
    long double lo = edges[i], hi = std::max(edges[i], edges[i + 1]);
    long double flo = horner(c, lo), fhi = horner(c, hi);
    long double tlo = 1e-12L * abs_horner(c, lo), thi = 1e-12L * abs_horner(c, hi);
    if (std::fabs(flo) <= tlo) {
      roots.push_back(lo);
      continue;
    }
    if (std::fabs(fhi) <= thi) {
      roots.push_back(hi);
      continue;
    }
    if ((flo < 0) == (fhi < 0)) {
      ok = false;
      roots.push_back(std::fabs(flo) < std::fabs(fhi) ? lo : hi);
      continue;
    }
    for (int it = 0; it < 200; ++it) {
      long double mid = 0.5L * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      long double fm = horner(c, mid);
      if (fm == 0.0L) {
        lo = hi = mid;
        break;
      }
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(0.5L * (lo + hi));
  }
  std::sort(roots.begin(), roots.end());
  return ok;
}

struct Normalized {
  std::vector<long double> b;  // q(s) = f(A + R s I)
  long double R = 1.0L;
  double residual = 0.0;
};

Normalized interpolate(const GardingPolynomial& f, const SymMatrix& a) {
  const int m = f.degree;
  if (m < 1) throw InvalidInput("garding: degree must be >= 1");
  if (a.dim() != f.n) throw InvalidInput("garding: dimension mismatch");
  Normalized out;
  out.R = static_cast<long double>(a.frobenius()) + 1.0L;
  LMatrix v(m + 1, m + 1);
  LVector y(m + 1);
  for (int i = 0; i <= m; ++i) {
    long double s = std::cos(std::numbers::pi_v<long double> * (2 * i + 1) / (2.0L * (m + 1)));
    long double pw = 1.0L;
    for (int j = 0; j <= m; ++j) {
      v(i, j) = pw;
      pw *= s;
    }
    y(i) = f.eval(a.shifted(static_cast<double>(out.R * s)));
  }
  LVector b = v.fullPivLu().solve(y);
  out.b.assign(b.data(), b.data() + m + 1);
  // off-node checkpoints
  long double scale = y.cwiseAbs().maxCoeff(), worst = 0.0L;
  for (int i = 0; i <= m; ++i) {
    long double s = std::cos(std::numbers::pi_v<long double> * i / std::max(1, m));
    long double exact = f.eval(a.shifted(static_cast<double>(out.R * s)));
    scale = std::max(scale, std::fabs(exact));
    worst = std::max(worst, std::fabs(horner(out.b, s) - exact));
  }
  out.residual = static_cast<double>(worst / std::max(scale, 1e-300L));
  return out;
}

}  // namespace

IdentityRestriction restrict_to_identity_line(const GardingPolynomial& f, const SymMatrix& a) {
  Normalized q = interpolate(f, a);
  IdentityRestriction r;
  r.interpolation_residual = q.residual;
  long double rp = 1.0L;
  for (auto bj : q.b) {
    r.coeffs.push_back(bj / rp);
    rp *= q.R;
  }
  return r;
}

GardingSpectrum garding_spectrum(const GardingPolynomial& f, const SymMatrix& a, double tol) {
  Normalized q = interpolate(f, a);
  const int m = f.degree;
  GardingSpectrum out;
  out.interpolation_residual = q.residual;
  if (!(q.b[m] != 0.0L)) throw NumericalFailure("garding: leading coefficient vanished (f(I) = 0?)");

  // companion eigenvalues for the realness diagnostic
  std::vector<std::complex<long double>> z;
  if (m == 1) {
    z.emplace_back(-q.b[0] / q.b[1], 0.0L);
  } else {
    LMatrix comp = LMatrix::Zero(m, m);
    for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0L;
    for (int i = 0; i < m; ++i) comp(i, m - 1) = -q.b[i] / q.b[m];
    Eigen::EigenSolver<LMatrix> es(comp, false);
    if (es.info() == Eigen::Success) {
      for (int i = 0; i < m; ++i) z.push_back(es.eigenvalues()(i));
    } else {
      // the real QR iteration occasionally stalls on exact multiple roots
      using CMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
      Eigen::ComplexEigenSolver<CMatrix> ces(comp.cast<std::complex<long double>>(), false);
      if (ces.info() != Eigen::Success) throw NumericalFailure("garding: companion eigen solver failed");
      for (int i = 0; i < m; ++i) z.push_back(ces.eigenvalues()(i));
    }
  }
  // merge near-multiple roots, which split into small complex clusters
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      long double im = std::max(std::fabs(z[i].imag()), std::fabs(z[j].imag()));
      long double mag = 1.0L + std::abs(z[i]);
      if (im > 0.05L * mag) continue;
      if (std::abs(z[i] - z[j]) <= std::max(1e-7L * mag, 4.0L * im)) parent[find(i)] = find(j);
    }
  std::map<int, std::pair<std::complex<long double>, int>> clusters;
  for (int i = 0; i < m; ++i) {
    auto& c = clusters[find(i)];
    c.first += z[i];
    c.second += 1;
  }
  for (auto& [root, c] : clusters) {
    auto mean = c.first / static_cast<long double>(c.second);
    if (c.second > 1) out.near_multiple = true;
    double im = static_cast<double>(std::fabs(mean.imag()) / (1.0L + std::abs(mean)));
    out.max_imag = std::max(out.max_imag, im);
  }
  out.hyperbolic = out.max_imag <= tol;

  std::vector<long double> roots;
  bool bracketed = interlacing_roots(q.b, roots);
  if (!bracketed || static_cast<int>(roots.size()) != m) {
    // exact multiple roots defeat the sign-change bracketing; fall back to the merged
    // companion clusters, which already decided realness
    roots.clear();
    for (auto& [root, c] : clusters) {
      auto mean = c.first / static_cast<long double>(c.second);
      for (int i = 0; i < c.second; ++i) roots.push_back(mean.real());
    }
  }
  for (auto r : roots) out.values.push_back(static_cast<double>(-r * q.R));
  std::sort(out.values.begin(), out.values.end());
  return out;
}

std::vector<double> garding_eigenvalues(const GardingPolynomial& f, const SymMatrix& a, double tol) {
  GardingSpectrum s = garding_spectrum(f, a, tol);
  if (!s.hyperbolic)
    throw NumericalFailure(f.name + ": not hyperbolic at this matrix (relative imaginary part " +
                           std::to_string(s.max_imag) + ")");
  return s.values;
}

ProbeReport is_hyperbolic(const GardingPolynomial& f, const SampleOptions& opt, double tol) {
  ProbeReport rep;
  rep.probe = "hyperbolicity";
  rep.subject = f.name;
  rep.samples = opt.samples;
  rep.seed = opt.seed;
  struct Out {
    bool ok = true;
    double imag = 0.0;
    SymMatrix a;
    bool warn = false;
  };
  auto outs = parallel_map<Out>(opt.samples, opt.threads, [&](std::size_t i) {
    Rng rng = sample_rng(opt.seed, i);
    Out o;
    o.a = random_symmetric(rng, f.n, opt.scale);
    auto s = garding_spectrum(f, o.a, tol);
    o.ok = s.hyperbolic;
    o.imag = s.max_imag;
    o.warn = s.near_multiple;
    return o;
  });
  double worst = 0.0, warnings = 0.0;
  for (auto& o : outs) {
    worst = std::max(worst, o.ok ? 0.0 : o.imag);
    if (o.warn) warnings += 1.0;
    if (!o.ok) rep.add_witness("complex root of f(A + tI)", Jet2(o.a), o.imag);
  }
  rep.stats["max_relative_imag"] = worst;
  rep.stats["near_multiple_warnings"] = warnings;
  return rep;
}

bool branch_contains(const GardingPolynomial& f, int k, const SymMatrix& a) {
  if (k < 1 || k > f.degree) throw InvalidInput("branch_contains: k out of range");
  return garding_eigenvalues(f, a)[k - 1] >= 0.0;
}

Subequation garding_branch(const GardingPolynomial& f, int k) {
  if (k < 1 || k > f.degree) throw InvalidInput("garding_branch: k out of range");
  SubeqFlags fl;
  fl.is_cone = true;
  fl.convex = k == 1;
  fl.st_invariant = false;
  std::optional<CatalogRef> mono;
  Subequation s("branch_" + std::to_string(k) + "(" + f.name + ")", {{"n", double(f.n)}, {"k", double(k)}}, f.n,
                [f, k](const Jet2& j) { return branch_contains(f, k, j.A); }, fl, mono);
  s.set_offset_hint([f, k](const Jet2& j) { return garding_eigenvalues(f, j.A)[k - 1]; });
  return s;
}

GardingPolynomial derivative_polynomial(const GardingPolynomial& f, int j) {
  if (j < 1 || j >= f.degree) throw InvalidInput("derivative_polynomial: need 1 <= j < degree");
  GardingPolynomial d;
  d.name = "d" + std::to_string(j) + "(" + f.name + ")";
  d.n = f.n;
  d.degree = f.degree - j;
  d.eval = [f, j](const SymMatrix& a) {
    auto r = restrict_to_identity_line(f, a);
    long double fact = 1.0L;
    for (int i = 2; i <= j; ++i) fact *= i;
    return static_cast<double>(fact * r.coeffs[j]);
  };
  d.at_identity = d.eval(SymMatrix::identity(f.n));
  return d;
}

GardingPolynomial make_garding(const std::string& name, const Params& params) {
  GardingPolynomial g;
  g.name = name;
  if (name == "non_hyperbolic_quadratic") {
    g.n = 2;
    g.degree = 2;
    g.eval = [](const SymMatrix& a) { return a(0, 0) * a(0, 0) + a(1, 1) * a(1, 1); };
    g.at_identity = 2.0;
    return g;
  }
  int n = iparam(params, "n", name);
  g.n = n;
  if (name == "det") {
    g.degree = n;
    g.eval = [](const SymMatrix& a) { return a.matrix().determinant(); };
  } else if (name == "det_squared") {
    g.degree = 2 * n;
    g.eval = [](const SymMatrix& a) {
      double d = a.matrix().determinant();
      return d * d;
    };
  } else if (name == "sigma_k") {
    int k = iparam(params, "k", name);
    if (k > n) throw InvalidInput("sigma_k: need k <= n");
    g.degree = k;
    g.eval = [k](const SymMatrix& a) { return elementary_symmetric(a.eigenvalues())[k]; };
  } else if (name == "f_delta") {
    double d = rparam(params, "delta", name);
    if (!(d > 0)) throw InvalidInput("f_delta: need delta > 0");
    g.degree = n;
    g.eval = [d](const SymMatrix& a) {
      double tr = a.trace(), prod = 1.0;
      for (double l : a.eigenvalues()) prod *= l + d * tr;
      return prod;
    };
  } else if (name == "garding_pucci") {
    double lam = rparam(params, "lambda", name), Lam = rparam(params, "Lambda", name);
    if (!(lam > 0 && Lam >= lam)) throw InvalidInput("garding_pucci: need 0 < lambda <= Lambda");
    if (n > 12) throw InvalidInput("garding_pucci: n <= 12");
    g.degree = 1 << n;
    g.eval = [lam, Lam, n](const SymMatrix& a) {
      const auto& mu = a.eigenvalues();
      double prod = 1.0;
      for (int mask = 0; mask < (1 << n); ++mask) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += ((mask >> i) & 1 ? Lam : lam) * mu[i];
        prod *= s;
      }
      return prod;
    };
  } else if (name == "p_fold") {
    int p = iparam(params, "p", name);
    if (p > n) throw InvalidInput("p_fold: need p <= n");
    g.degree = static_cast<int>(binomial(n, p));
    g.eval = [p](const SymMatrix& a) {
      double prod = 1.0;
      for (double s : p_fold_sums(a, p)) prod *= s;
      return prod;
    };
  } else {
    throw InvalidInput("unknown Garding polynomial: " + name);
  }
  g.at_identity = g.eval(SymMatrix::identity(n));
  return g;
}

std::vector<std::string> garding_names() {
  return {"det", "det_squared", "f_delta", "garding_pucci", "non_hyperbolic_quadratic", "p_fold", "sigma_k"};
}

}  // namespace nlpot
