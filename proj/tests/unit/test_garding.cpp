#include "helpers.hpp"

#include "nlpot/error.hpp"
#include "nlpot/garding.hpp"
#include "nlpot/subeq.hpp"

#include <algorithm>

using namespace nlpot;
using nlpot::test::diag;

TEST_CASE("eigenvalues of det and sigma_2") {
  auto det = make_garding("det", {{"n", 3}});
  auto e = garding_eigenvalues(det, diag({1, 2, 3}));
  REQUIRE(e.size() == 3);
  CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(e[1] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(e[2] == doctest::Approx(3.0).epsilon(1e-10));

  // sigma_2((1 + t) I) = 3 (1 + t)^2
  auto s2 = make_garding("sigma_k", {{"n", 3}, {"k", 2}});
  e = garding_eigenvalues(s2, SymMatrix::identity(3));
  REQUIRE(e.size() == 2);
  CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(e[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("f_delta eigenvalues from the factors") {
  const double delta = 0.5;
  const int n = 3;
  auto fd = make_garding("f_delta", {{"n", n}, {"delta", delta}});
  Rng rng = sample_rng(41, 0);
  for (int t = 0; t < 50; ++t) {
    SymMatrix a = random_symmetric(rng, n, 2.0);
    auto ev = a.eigenvalues();
    // each factor (1 + n delta) t + lambda_j + delta tr A vanishes at minus this value
    std::vector<double> want;
    for (double l : ev) want.push_back((l + delta * a.trace()) / (1 + n * delta));
    std::sort(want.begin(), want.end());
    auto got = garding_eigenvalues(fd, a);
    for (int i = 0; i < n; ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-7 * (1 + std::abs(want[i])));
  }
}

TEST_CASE("hyperbolicity") {
  SampleOptions so{300, 42, 1, 1.0};
  for (auto [name, params] : std::vector<std::pair<std::string, Params>>{
           {"det", {{"n", 3}}},
           {"sigma_k", {{"n", 4}, {"k", 2}}},
           {"f_delta", {{"n", 3}, {"delta", 0.5}}},
           {"garding_pucci", {{"n", 2}, {"lambda", 1}, {"Lambda", 2}}},
           {"p_fold", {{"n", 4}, {"p", 2}}},
           {"det_squared", {{"n", 2}}}}) {
    CAPTURE(name);
    CHECK(is_hyperbolic(make_garding(name, params), so).pass);
  }
  auto bad = make_garding("non_hyperbolic_quadratic", {});
  CHECK_FALSE(is_hyperbolic(bad, so).pass);
  CHECK_THROWS_AS(garding_eigenvalues(bad, diag({1, 3})), NumericalFailure);
}

TEST_CASE("shift and product identities") {
  Rng rng = sample_rng(43, 0);
  for (auto [name, params] : std::vector<std::pair<std::string, Params>>{
           {"det", {{"n", 3}}}, {"sigma_k", {{"n", 4}, {"k", 3}}}, {"garding_pucci", {{"n", 2}, {"lambda", 1}, {"Lambda", 3}}}}) {
    CAPTURE(name);
    auto f = make_garding(name, params);
    for (int t = 0; t < 50; ++t) {
      SymMatrix a = random_symmetric(rng, f.n, 2.0);
      double s = uniform(rng, -2.0, 2.0);
      auto e = garding_eigenvalues(f, a);
      auto es = garding_eigenvalues(f, a.shifted(s));
      for (std::size_t k = 0; k < e.size(); ++k) CHECK(std::abs(es[k] - e[k] - s) <= 1e-8 * (1 + std::abs(e[k])));
      double prod = f.at_identity;
      for (double v : e) prod *= v;
      CHECK(std::abs(prod - f(a)) <= 1e-7 * std::max(1.0, std::abs(f(a))));
    }
  }
}

TEST_CASE("branches") {
  auto det = make_garding("det", {{"n", 3}});
  Rng rng = sample_rng(44, 0);
  for (int k = 1; k <= 3; ++k) {
    Subequation Lk = make_subequation("Lambda_k", {{"n", 3}, {"k", double(k)}});
    Subequation gb = garding_branch(det, k);
    for (int t = 0; t < 300; ++t) {
      SymMatrix a = random_symmetric(rng, 3);
      if (std::abs(a.eigenvalues()[k - 1]) < 1e-6) continue;
      CHECK(gb.contains(a) == Lk.contains(a));
    }
    CHECK(branch_contains(det, 1, SymMatrix::identity(3)));
  }
  auto s2 = make_garding("sigma_k", {{"n", 4}, {"k", 2}});
  Subequation Sk = make_subequation("Sigma_k", {{"n", 4}, {"k", 2}});
  for (int t = 0; t < 300; ++t) {
    SymMatrix a = random_symmetric(rng, 4);
    if (std::abs(s2(a)) < 1e-6 || std::abs(a.trace()) < 1e-6) continue;
    CHECK(branch_contains(s2, 1, a) == Sk.contains(a));
  }
}

TEST_CASE("derivatives and interlacing") {
  auto det = make_garding("det", {{"n", 3}});
  auto d1 = derivative_polynomial(det, 1);
  auto s2 = make_garding("sigma_k", {{"n", 3}, {"k", 2}});
  Rng rng = sample_rng(45, 0);
  for (int t = 0; t < 50; ++t) {
    SymMatrix a = random_symmetric(rng, 3);
    CHECK(d1(a) == doctest::Approx(s2(a)).epsilon(1e-9));
  }
  // top derivative is linear, proportional to the trace
  auto d2 = derivative_polynomial(det, 2);
  SymMatrix a = random_symmetric(rng, 3);
  CHECK(d2(a) == doctest::Approx(2.0 * a.trace()).epsilon(1e-9));

  for (auto [name, params] : std::vector<std::pair<std::string, Params>>{
           {"det", {{"n", 4}}}, {"garding_pucci", {{"n", 2}, {"lambda", 1}, {"Lambda", 2}}}}) {
    auto f = make_garding(name, params);
    auto fp = derivative_polynomial(f, 1);
    for (int t = 0; t < 1000; ++t) {
      SymMatrix b = random_symmetric(rng, f.n, 2.0);
      auto e = garding_eigenvalues(f, b);
      auto ep = garding_eigenvalues(fp, b);
      for (std::size_t k = 0; k < ep.size(); ++k) {
        CHECK(e[k] <= ep[k] + 1e-6);
        CHECK(ep[k] <= e[k + 1] + 1e-6);
      }
    }
  }
}
