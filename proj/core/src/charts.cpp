#include "nlpot/charts.hpp"

#include "nlpot/error.hpp"
#include "nlpot/parallel.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace nlpot {

namespace {

void check_invertible(const Matrix& m, const char* what) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[s.size() - 1] <= 1e-12 * std::max(1.0, s[0]))
    throw InvalidInput(std::string("jet-equivalence: singular ") + what);
}

double op_norm(const Matrix& m) { return Eigen::JacobiSVD<Matrix>(m).singularValues()[0]; }

// random matrix with spectral norm `s`
Matrix scaled_gaussian(Rng& rng, int n, double s) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = normal(rng);
  return m * (s / op_norm(m));
}

SymMatrix l_of(const JetEquivalence& phi, const Vector& x, const Vector& p) {
  SymMatrix out(Matrix::Zero(phi.n, phi.n));
  if (!phi.L) return out;
  auto ls = phi.L(x);
  for (int i = 0; i < phi.n; ++i)
    if (p[i] != 0.0) out = out + ls[i] * p[i];
  return out;
}

}  // namespace

Jet2 JetEquivalence::linear(const Vector& x, const Jet2& j) const {
  Matrix gx = g(x), hx = h(x);
  check_invertible(gx, "g");
  check_invertible(hx, "h");
  return Jet2(j.r, gx * j.p, j.A.congruence(hx) + l_of(*this, x, j.p));
}

Jet2 JetEquivalence::shift_at(const Vector& x) const {
  if (shift) return (*shift)(x);
  return Jet2(0.0, Vector::Zero(n), SymMatrix(Matrix::Zero(n, n)));
}

Jet2 JetEquivalence::apply(const Vector& x, const Jet2& j) const {
  Jet2 out = linear(x, j);
  if (shift) out = out + (*shift)(x);
  return out;
}

Jet2 JetEquivalence::inverse(const Vector& x, const Jet2& j) const {
  Jet2 y = shift ? j - (*shift)(x) : j;
  Matrix gx = g(x), hx = h(x);
  check_invertible(gx, "g");
  check_invertible(hx, "h");
  Vector p = gx.fullPivLu().solve(y.p);
  Matrix hinv = hx.fullPivLu().inverse();
  return Jet2(y.r, p, (y.A - l_of(*this, x, p)).congruence(hinv));
}

JetEquivalence identity_equivalence(int n) {
  JetEquivalence e;
  e.n = n;
  e.g = [n](const Vector&) { return Matrix(Matrix::Identity(n, n)); };
  e.h = e.g;
  return e;
}

JetEquivalence random_jet_equivalence(int n, Rng& rng, double strength, bool affine) {
  if (!(strength >= 0.0 && strength < 1.0)) throw InvalidInput("random_jet_equivalence: strength in [0, 1)");
  JetEquivalence e;
  e.n = n;
  Matrix G = scaled_gaussian(rng, n, strength), H = scaled_gaussian(rng, n, strength);
  Vector a = random_vector(rng, n) / std::sqrt(double(n)), b = random_vector(rng, n) / std::sqrt(double(n));
  e.g = [G, a, n](const Vector& x) { return Matrix(Matrix::Identity(n, n) + G * std::sin(a.dot(x))); };
  e.h = [H, b, n](const Vector& x) { return Matrix(Matrix::Identity(n, n) + H * std::cos(b.dot(x))); };
  e.lip_g = strength * a.norm();
  e.lip_h = strength * b.norm();
  std::vector<SymMatrix> S;
  std::vector<Vector> c;
  for (int i = 0; i < n; ++i) {
    S.push_back(random_symmetric(rng, n, strength));
    c.push_back(random_vector(rng, n));
    e.lip_L = std::max(e.lip_L, strength * c.back().norm());
  }
  e.L = [S, c](const Vector& x) {
    std::vector<SymMatrix> out;
    for (size_t i = 0; i < S.size(); ++i) out.push_back(S[i] * std::sin(c[i].dot(x)));
    return out;
  };
  if (affine) {
    SymMatrix A0 = random_symmetric(rng, n, 1.0);
    Vector p0 = random_vector(rng, n);
    Vector d = random_vector(rng, n);
    double r0 = normal(rng);
    e.shift = [A0, p0, d, r0](const Vector& x) {
      double s = std::sin(d.dot(x));
      return Jet2(r0 * s, p0 * std::cos(d.dot(x)), A0 * s);
    };
  }
  return e;
}

bool transported_membership(const Subequation& F, const JetEquivalence& phi, const Vector& x, const Jet2& j) {
  return F.contains(phi.apply(x, j));
}

Subequation transported_fiber(const Subequation& F, const JetEquivalence& phi, const Vector& x) {
  SubeqFlags fl = F.flags();
  fl.is_cone = fl.is_cone && !phi.shift;
  fl.pure_second_order = fl.pure_second_order && !phi.L;
  fl.st_invariant = false;
  Subequation out("transport(" + F.name() + ")", F.params(), F.dim(),
                  [F, phi, x](const Jet2& j) { return F.contains(phi.apply(x, j)); }, fl);
  out.set_monotonicity_cone(std::nullopt);
  return out;
}

bool transported_dual_membership(const Subequation& F, const JetEquivalence& phi, const Vector& x, const Jet2& j) {
  return dual_contains(F, phi.linear(x, j) - phi.shift_at(x));
}

ProbeReport positivity_negativity_probe(const Subequation& g, const SampleOptions& opt) {
  ProbeReport rep;
  rep.probe = "positivity_negativity";
  rep.subject = g.name();
  rep.samples = opt.samples;
  rep.seed = opt.seed;
  struct Out {
    int bad = 0;  // 1 = (P), 2 = (N)
    Jet2 j;
  };
  auto outs = parallel_map<Out>(opt.samples, opt.threads, [&](std::size_t i) {
    Rng rng = sample_rng(opt.seed, i);
    Jet2 j = (i % 2 == 0) ? sample_boundary(g, rng, opt.scale) : sample_member(g, rng, opt.scale);
    SymMatrix P = random_psd(rng, g.dim(), opt.scale);
    double s = uniform(rng, 0.0, opt.scale);
    double slack = 1e-9 * (1.0 + j.norm() + opt.scale);
    Out o;
    if (!g.contains(Jet2(j.r - slack, j.p, (j.A + P).shifted(slack)))) {
      o.bad = 1;
      o.j = j;
    } else if (!g.contains(Jet2(j.r - s - slack, j.p, j.A.shifted(slack)))) {
      o.bad = 2;
      o.j = j;
    }
    return o;
  });
  double pv = 0, nv = 0;
  for (auto& o : outs) {
    if (o.bad == 1) {
      pv += 1;
      rep.add_witness("J + P left the set", o.j, 0.0);
    } else if (o.bad == 2) {
      nv += 1;
      rep.add_witness("decreasing r left the set", o.j, 0.0);
    }
  }
  rep.stats["positivity_violations"] = pv;
  rep.stats["negativity_violations"] = nv;
  return rep;
}

ProbeReport congruence_lipschitz_check(const JetEquivalence& phi, const std::vector<Vector>& points,
                                       const SampleOptions& opt) {
  if (points.empty()) throw InvalidInput("congruence_lipschitz_check: no points");
  ProbeReport rep;
  rep.probe = "congruence_lipschitz";
  rep.subject = "h";
  rep.samples = opt.samples;
  rep.seed = opt.seed;
  double worst = 0.0;
  for (std::size_t i = 0; i < opt.samples; ++i) {
    Rng rng = sample_rng(opt.seed, i);
    const Vector& x = points[i % points.size()];
    double delta = std::pow(10.0, uniform(rng, -4.0, -1.0));
    Vector y = x + delta * random_unit_vector(rng, phi.n);
    SymMatrix A = random_symmetric(rng, phi.n, opt.scale);
    Matrix hx = phi.h(x), hy = phi.h(y);
    double lhs = (A.congruence(hx) - A.congruence(hy)).norm();
    double bound = phi.lip_h * (op_norm(hx) + op_norm(hy)) * A.norm() * delta;
    worst = std::max(worst, lhs / std::max(bound, 1e-300));
    if (lhs > bound * (1.0 + 1e-9) + 1e-14) rep.add_witness("congruence moved faster than the Lipschitz bound", Jet2(A), lhs / bound);
  }
  rep.stats["worst_ratio"] = worst;
  return rep;
}

// ---- metrics ----------------------------------------------------------------

std::array<Matrix, 2> Metric2D::christoffel(const Vector& x) const {
  Matrix gx = g(x);
  if (!(gx.determinant() > 1e-14 && gx(0, 0) > 0.0)) throw InvalidInput("metric " + name + ": degenerate at x");
  Matrix gi = gx.inverse();
  auto d = dg(x);
  std::array<Matrix, 2> gam{Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (int l = 0; l < 2; ++l) s += gi(k, l) * (d[i](j, l) + d[j](i, l) - d[l](i, j));
        gam[k](i, j) = 0.5 * s;
      }
  return gam;
}

Metric2D euclidean_metric() {
  return {"euclidean", [](const Vector&) { return Matrix(Matrix::Identity(2, 2)); },
          [](const Vector&) { return std::array<Matrix, 2>{Matrix::Zero(2, 2), Matrix::Zero(2, 2)}; }};
}

Metric2D polar_metric() {
  return {"polar",
          [](const Vector& x) {
            Matrix m = Matrix::Zero(2, 2);
            m(0, 0) = 1.0;
            m(1, 1) = x[0] * x[0];
            return m;
          },
          [](const Vector& x) {
            std::array<Matrix, 2> d{Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
            d[0](1, 1) = 2.0 * x[0];
            return d;
          }};
}

Metric2D hyperbolic_metric() {
  return {"hyperbolic",
          [](const Vector& x) { return Matrix(Matrix::Identity(2, 2) / (x[1] * x[1])); },
          [](const Vector& x) {
            return std::array<Matrix, 2>{Matrix::Zero(2, 2),
                                         Matrix(Matrix::Identity(2, 2) * (-2.0 / (x[1] * x[1] * x[1])))};
          }};
}

Metric2D sphere_metric() {
  return {"sphere",
          [](const Vector& x) {
            Matrix m = Matrix::Zero(2, 2);
            m(0, 0) = 1.0;
            m(1, 1) = std::sin(x[0]) * std::sin(x[0]);
            return m;
          },
          [](const Vector& x) {
            std::array<Matrix, 2> d{Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
            d[0](1, 1) = 2.0 * std::sin(x[0]) * std::cos(x[0]);
            return d;
          }};
}

Metric2D make_metric(const std::string& name) {
  if (name == "euclidean") return euclidean_metric();
  if (name == "polar") return polar_metric();
  if (name == "hyperbolic") return hyperbolic_metric();
  if (name == "sphere") return sphere_metric();
  throw InvalidInput("unknown metric: " + name);
}

std::vector<std::string> metric_names() { return {"euclidean", "hyperbolic", "polar", "sphere"}; }

SymMatrix riemannian_hessian(const Metric2D& m, const SmoothFunction& u, const Vector& x) {
  auto gam = m.christoffel(x);
  Jet2 j = u(x);
  Matrix h = j.A.matrix() - gam[0] * j.p[0] - gam[1] * j.p[1];
  return SymMatrix(h);
}

namespace {
Matrix inv_sqrt(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}
}  // namespace

Vector metric_eigenvalues(const Metric2D& m, const Vector& x, const SymMatrix& hess) {
  Matrix gx = m.g(x);
  if (!(gx.determinant() > 1e-14 && gx(0, 0) > 0.0)) throw InvalidInput("metric " + m.name + ": degenerate at x");
  const SymMatrix rel = hess.congruence(inv_sqrt(gx));
  const auto& e = rel.eigenvalues();
  return Eigen::Map<const Vector>(e.data(), static_cast<Eigen::Index>(e.size()));
}

JetEquivalence riemannian_equivalence(const Metric2D& m) {
  JetEquivalence e;
  e.n = 2;
  e.g = [](const Vector&) { return Matrix(Matrix::Identity(2, 2)); };
  e.h = [m](const Vector& x) { return inv_sqrt(m.g(x)); };
  e.L = [m](const Vector& x) {
    Matrix h = inv_sqrt(m.g(x));
    auto gam = m.christoffel(x);
    return std::vector<SymMatrix>{SymMatrix(-h * gam[0] * h.transpose()), SymMatrix(-h * gam[1] * h.transpose())};
  };
  return e;
}

VariablePair example_9_5_pair(const Section& m, const std::optional<Metric2D>& metric) {
  VariablePair vp;
  vp.phi = metric ? riemannian_equivalence(*metric) : identity_equivalence(2);
  vp.euclid = make_operator_pair("det", {{"n", 2.0}});
  vp.phi.shift = [m](const Vector& x) { return Jet2(0.0, Vector::Zero(2), m(x)); };
  return vp;
}

}  // namespace nlpot
