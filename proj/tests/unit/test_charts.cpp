#include "helpers.hpp"

#include "nlpot/charts.hpp"
#include "nlpot/error.hpp"
#include "nlpot/ops.hpp"

using namespace nlpot;
using nlpot::test::diag;

namespace {
Jet2 rand_jet(Rng& rng, int n) { return Jet2(normal(rng), random_vector(rng, n), random_symmetric(rng, n)); }
}  // namespace

TEST_CASE("identity and scaling equivalences") {
  Rng rng = sample_rng(61, 0);
  JetEquivalence id = identity_equivalence(3);
  Vector x = random_vector(rng, 3);
  Jet2 j = rand_jet(rng, 3);
  CHECK((id.apply(x, j) - j).norm() == 0.0);

  JetEquivalence two = identity_equivalence(2);
  two.h = [](const Vector&) { return Matrix(2.0 * Matrix::Identity(2, 2)); };
  Jet2 k(diag({1, -3}));
  CHECK((two.apply(Vector::Zero(2), k).A.matrix() - 4.0 * k.A.matrix()).norm() <= 1e-14);

  two.h = [](const Vector&) { return Matrix(Matrix::Zero(2, 2)); };
  CHECK_THROWS_AS(two.apply(Vector::Zero(2), k), InvalidInput);
}

TEST_CASE("inverse round trip") {
  Rng rng = sample_rng(62, 0);
  for (bool affine : {false, true}) {
    JetEquivalence phi = random_jet_equivalence(3, rng, 0.4, affine);
    for (int t = 0; t < 200; ++t) {
      Vector x = random_vector(rng, 3);
      Jet2 j = rand_jet(rng, 3);
      CHECK((phi.inverse(x, phi.apply(x, j)) - j).norm() <= 1e-10 * (1 + j.norm()));
    }
  }
}

TEST_CASE("transported fibers") {
  Rng rng = sample_rng(63, 0);
  Subequation P = make_subequation("P", {{"n", 3}});
  JetEquivalence id = identity_equivalence(3);
  for (int t = 0; t < 100; ++t) {
    Jet2 j = rand_jet(rng, 3);
    CHECK(transported_membership(P, id, Vector::Zero(3), j) == P.contains(j));
  }
  SampleOptions so{300, 64, 1, 1.0};
  for (int f = 0; f < 5; ++f) {
    JetEquivalence phi = random_jet_equivalence(3, rng, 0.4, false);
    Vector x = random_vector(rng, 3);
    CHECK(positivity_negativity_probe(transported_fiber(P, phi, x), so).pass);
  }
}

TEST_CASE("affine shift dual rule") {
  Rng rng = sample_rng(65, 0);
  Subequation F = make_subequation("Sigma_k", {{"n", 3}, {"k", 2}});
  for (int f = 0; f < 5; ++f) {
    JetEquivalence phi = random_jet_equivalence(3, rng, 0.4, true);
    Vector x = random_vector(rng, 3);
    Subequation fiber = transported_fiber(F, phi, x);
    for (int t = 0; t < 200; ++t) {
      Jet2 j = rand_jet(rng, 3);
      // stay off the boundary of the shifted dual
      Jet2 probe = phi.linear(x, j) - phi.shift_at(x);
      double off = identity_ray_offset(F, -probe);
      if (std::abs(off) < 1e-6) continue;
      CHECK(transported_dual_membership(F, phi, x, j) == dual_contains(fiber, j));
    }
  }
}

TEST_CASE("Christoffel symbols of the stock metrics") {
  Vector q(2);
  q << 0.7, 1.3;
  // polar (r, theta): Gamma^r_tt = -r, Gamma^t_rt = 1 / r
  auto G = polar_metric().christoffel(q);
  CHECK(G[0](1, 1) == doctest::Approx(-0.7));
  CHECK(G[1](0, 1) == doctest::Approx(1 / 0.7));
  CHECK(G[1](1, 0) == doctest::Approx(1 / 0.7));
  CHECK(G[0](0, 0) == 0.0);
  // hyperbolic (x, y): Gamma^x_xy = -1/y, Gamma^y_xx = 1/y, Gamma^y_yy = -1/y
  G = hyperbolic_metric().christoffel(q);
  CHECK(G[0](0, 1) == doctest::Approx(-1 / 1.3));
  CHECK(G[1](0, 0) == doctest::Approx(1 / 1.3));
  CHECK(G[1](1, 1) == doctest::Approx(-1 / 1.3));
  // sphere (theta, phi): Gamma^theta_pp = -sin cos, Gamma^phi_tp = cot
  G = sphere_metric().christoffel(q);
  CHECK(G[0](1, 1) == doctest::Approx(-std::sin(0.7) * std::cos(0.7)));
  CHECK(G[1](0, 1) == doctest::Approx(std::cos(0.7) / std::sin(0.7)));
}

TEST_CASE("Riemannian Hessians") {
  Vector q(2);
  q << 0.8, 0.4;
  SmoothFunction cubic = [](const Vector& x) {
    Vector p(2);
    p << 3 * x[0] * x[0] * x[1], x[0] * x[0] * x[0];
    Matrix a(2, 2);
    a << 6 * x[0] * x[1], 3 * x[0] * x[0], 3 * x[0] * x[0], 0;
    return Jet2(x[0] * x[0] * x[0] * x[1], p, SymMatrix(a));
  };
  CHECK((riemannian_hessian(euclidean_metric(), cubic, q).matrix() - cubic(q).A.matrix()).norm() == 0.0);

  // u = r^2 / 2 in polar coordinates is flat: eigenvalues (1, 1) relative to the metric
  SmoothFunction half_r2 = [](const Vector& x) {
    Vector p(2);
    p << x[0], 0;
    return Jet2(0.5 * x[0] * x[0], p, diag({1, 0}));
  };
  Vector ev = metric_eigenvalues(polar_metric(), q, riemannian_hessian(polar_metric(), half_r2, q));
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-12));

  // u = log y on the half plane: Hess = diag(-1/y^2, 0) - Gamma^y (1/y)
  SmoothFunction logy = [](const Vector& x) {
    Vector p(2);
    p << 0, 1 / x[1];
    return Jet2(std::log(x[1]), p, diag({0, -1 / (x[1] * x[1])}));
  };
  SymMatrix H = riemannian_hessian(hyperbolic_metric(), logy, q);
  double y = q[1];
  CHECK(std::abs(H(0, 0) - (-1 / (y * y))) <= 1e-8);
  CHECK(std::abs(H(1, 1) - 0.0) <= 1e-8);
  CHECK(std::abs(H(0, 1)) <= 1e-8);

  // sphere, u = cos theta: Hess = -cos(theta) g
  SmoothFunction ct = [](const Vector& x) {
    Vector p(2);
    p << -std::sin(x[0]), 0;
    return Jet2(std::cos(x[0]), p, diag({-std::cos(x[0]), 0}));
  };
  Matrix want = -std::cos(q[0]) * sphere_metric().g(q);
  CHECK((riemannian_hessian(sphere_metric(), ct, q).matrix() - want).norm() <= 1e-8);

  Vector pole(2);
  pole << 0.0, 0.3;
  CHECK_THROWS_AS(riemannian_hessian(polar_metric(), half_r2, pole), InvalidInput);
}

TEST_CASE("shifted Monge-Ampere pair") {
  Vector x = Vector::Zero(2);
  VariablePair plain = example_9_5_pair([](const Vector&) { return SymMatrix(2); });
  Rng rng = sample_rng(66, 0);
  OperatorPair det = make_operator_pair("det", {{"n", 2}});
  for (int t = 0; t < 100; ++t) {
    SymMatrix a = random_symmetric(rng, 2);
    CHECK(plain.contains(x, Jet2(a)) == det.F.contains(a));
  }
  VariablePair shifted = example_9_5_pair([](const Vector&) { return SymMatrix::identity(2); });
  CHECK(shifted.contains(x, Jet2(SymMatrix(2))));
  CHECK(shifted.value(x, Jet2(SymMatrix(2))) == doctest::Approx(1.0));
  CHECK(shifted.range().lo == 0.0);
  CHECK(std::isinf(shifted.range().hi));
}

TEST_CASE("congruence Lipschitz bound") {
  Rng rng = sample_rng(67, 0);
  JetEquivalence phi = random_jet_equivalence(3, rng, 0.3, false);
  std::vector<Vector> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(random_vector(rng, 3));
  CHECK(congruence_lipschitz_check(phi, pts, SampleOptions{100, 68, 1, 1.0}).pass);
}
