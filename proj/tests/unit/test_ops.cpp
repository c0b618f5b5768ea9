#include "helpers.hpp"

#include "nlpot/error.hpp"
#include "nlpot/ops.hpp"

#include <numbers>

using namespace nlpot;
using nlpot::test::diag;

TEST_CASE("catalog values") {
  OperatorPair dk = make_operator_pair("det_k", {{"n", 3}, {"k", 2}});
  CHECK(dk(diag({-1, 2, 3})) == doctest::Approx(6.0));
  CHECK(*dk.degree == 2.0);  // n - k + 1 factors

  OperatorPair pm = make_operator_pair("pucci_minus", {{"n", 2}, {"lambda", 1}, {"Lambda", 2}});
  CHECK(pm(diag({1, -1})) == doctest::Approx(-1.0));

  OperatorPair sl = make_operator_pair("special_lagrangian", {{"n", 3}});
  CHECK(sl.range.lo == doctest::Approx(-1.5 * std::numbers::pi));
  CHECK(sl.range.hi == doctest::Approx(1.5 * std::numbers::pi));
  CHECK_FALSE(sl.range.lo_closed);
  CHECK_FALSE(sl.range.hi_closed);

  OperatorPair det = make_operator_pair("det", {{"n", 3}});
  Rng rng = sample_rng(31, 0);
  for (int t = 0; t < 50; ++t) {
    SymMatrix a = random_symmetric(rng, 3);
    CHECK(det(a) == doctest::Approx(test::cofactor_det(a.matrix())).epsilon(1e-12));
  }
  CHECK_THROWS_AS(make_operator_pair("det", {}), InvalidInput);
  CHECK_THROWS_AS(make_operator_pair("no_such_pair", {{"n", 2}}), InvalidInput);
}

TEST_CASE("canonical operators") {
  OperatorPair cp = canonical_operator(make_subequation("P", {{"n", 3}}), 1.0);
  CHECK(cp(SymMatrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-10));
  Rng rng = sample_rng(32, 0);
  OperatorPair cd = canonical_operator(make_subequation("Delta", {{"n", 3}}), 1.0);
  for (int t = 0; t < 50; ++t) {
    SymMatrix a = random_symmetric(rng, 3);
    CHECK(cp(a) == doctest::Approx(a.min_eigenvalue()).epsilon(1e-10));
    CHECK(cd(a) == doctest::Approx(a.trace() / 3).epsilon(1e-10));
  }

  // zero level set of the canonical operator of the Pucci cone equals the zero set of Pucci minus
  Params pp{{"n", 3}, {"lambda", 1}, {"Lambda", 2}};
  OperatorPair cpu = canonical_operator(make_subequation("P_pucci", pp), 1.0);
  OperatorPair pm = make_operator_pair("pucci_minus", pp);
  for (int t = 0; t < 200; ++t) {
    SymMatrix a = random_symmetric(rng, 3);
    double c = cpu(a);
    SymMatrix b = a.shifted(-c);  // on the zero level set of the canonical operator
    CHECK(std::abs(pm(b)) <= 1e-8);
    CHECK((cpu(a) > 0) == (pm(a) > 0));
  }
}

TEST_CASE("tameness") {
  TamenessOptions o;
  o.sample.samples = 60;
  for (std::string name : {"det_k", "sigma_k", "sigma_quotient", "p_fold", "f_delta", "pucci_minus", "garding_pucci"}) {
    CAPTURE(name);
    Params params;
    for (const auto& ref : pair_catalog_defaults())
      if (ref.name == name) params = ref.params;
    CHECK(tameness_probe(make_operator_pair(name, params), o).pass);
  }
  for (double k : {1.0, 2.5}) {
    ProbeReport r = tameness_probe(canonical_operator(make_subequation("Sigma_k", {{"n", 3}, {"k", 2}}), k), o);
    CHECK(r.pass);
    for (const auto& c : r.cells) CHECK(std::abs(c.min_increment - k * c.lambda) <= 1e-9);
  }
  // Garding branch increments are at least lambda^(m - k + 1)
  OperatorPair gb = make_operator_pair("garding_branch:det", {{"n", 3}, {"k", 2}});
  ProbeReport r = tameness_probe(gb, o);
  CHECK(r.pass);
  for (const auto& c : r.cells) CHECK(c.min_increment >= std::pow(c.lambda, 2) * (1 - 1e-9));

  ProbeReport ll = tameness_probe(make_operator_pair("log_laplace", {{"n", 2}}), o);
  CHECK_FALSE(ll.pass);
  double at_cap = 1e300;
  for (const auto& c : ll.cells)
    if (c.cap >= 1e6) at_cap = std::min(at_cap, c.min_increment);
  CHECK(at_cap < 1e-3);

  CHECK_FALSE(tameness_probe(make_operator_pair("ex_3_21", {{"n", 2}}), o).pass);
}

TEST_CASE("chi relabeling") {
  OperatorPair ll = make_operator_pair("log_laplace", {{"n", 2}});
  OperatorPair tamed = tame_via_chi(ll, [](double t) { return std::expm1(t); }, "expm1");
  Rng rng = sample_rng(33, 0);
  for (int t = 0; t < 50; ++t) {
    SymMatrix a = random_with_spectrum(rng, 2, 0.0, 3.0);
    CHECK(tamed(a) == doctest::Approx(a.trace()).epsilon(1e-12));
  }
  TamenessOptions o;
  o.sample.samples = 60;
  CHECK(tameness_probe(tamed, o).pass);

  OperatorPair det = make_operator_pair("det", {{"n", 2}});
  OperatorPair same = tame_via_chi(det, [](double t) { return t; });
  OperatorPair cubic = tame_via_chi(det, [](double t) { return t * t * t + t; });
  for (int t = 0; t < 100; ++t) {
    SymMatrix a = random_with_spectrum(rng, 2, 0.0, 2.0);
    CHECK(same(a) == det(a));
    double c = 0.7;
    CHECK((cubic(a) >= c * c * c + c) == (det(a) >= c));
  }
  CHECK_THROWS_AS(tame_via_chi(det, [](double t) { return -t; }), InvalidInput);
}

TEST_CASE("topological tameness") {
  TopTameOptions o;
  o.sample.samples = 200;
  CHECK(topological_tameness_probe(make_operator_pair("special_lagrangian", {{"n", 3}}), o).pass);
  CHECK(topological_tameness_probe(canonical_operator(make_subequation("P", {{"n", 2}}), 1.0), o).pass);
  CHECK_FALSE(topological_tameness_probe(make_operator_pair("constant_zero", {{"n", 2}}), o).pass);
}

TEST_CASE("compatibility") {
  CompatOptions o;
  o.sample.samples = 200;
  ProbeReport det = compatibility_probe(make_operator_pair("det", {{"n", 3}}), o);
  CHECK(det.pass);
  CHECK(std::abs(det.stats["c0"]) <= 1e-9);
  ProbeReport bad = compatibility_probe(make_operator_pair("ex_1_5", {}), o);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.witnesses.empty());
  ProbeReport th = compatibility_probe(make_operator_pair("special_lagrangian", {{"n", 3}, {"theta", 2.0}}), o);
  CHECK(th.pass);
  CHECK(th.stats["c0"] == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("piecewise level-set identity") {
  Matrix xm(2, 2);
  xm << 3.0 / std::sqrt(2.0), 0, 0, -3.0 / std::sqrt(2.0);  // traceless, norm 3
  SymMatrix x(xm);
  CHECK(ex_3_21_value(3.0, 2.0) == doctest::Approx(0.5));
  CHECK(ex_3_21_value(0.0, 0.5) == doctest::Approx(0.5));
  CHECK(ex_3_21_levelset_identity(x, 0.5));
  CHECK(ex_3_21_levelset_identity(SymMatrix(2), 0.8));
  // both formulas give 1 at the seam y = 1 + |x|
  CHECK(ex_3_21_value(2.0, 3.0) == doctest::Approx(1.0));
  CHECK(ex_3_21_value(2.0, 3.0 + 1e-9) == doctest::Approx(1.0));
}

TEST_CASE("tau") {
  OperatorPair det = make_operator_pair("det", {{"n", 2}});
  CHECK(tau(det, SymMatrix::identity(2)) == kInf);
  OperatorPair sl = make_operator_pair("special_lagrangian", {{"n", 3}});
  CHECK(tau(sl, diag({1, 2, -1})) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-5));
  CHECK(tau(sl, diag({-1, -2, -1})) == doctest::Approx(-1.5 * std::numbers::pi).epsilon(1e-5));
  CHECK(tau(det, diag({-1, 1})) == -kInf);
}

TEST_CASE("asymptotic-interior probe") {
  SampleOptions so{200, 7, 1, 1.0};
  CHECK(lemma_3_23_probe(make_operator_pair("laplace", {{"n", 2}}), 0.0, so).pass);
  CHECK(lemma_3_23_probe(make_operator_pair("det", {{"n", 2}}), 1.0, so).pass);
}

TEST_CASE("ellipticity, homogeneity and monotone level sets") {
  SampleOptions so{300, 8, 1, 1.0};
  for (const auto& ref : pair_catalog_defaults()) {
    CAPTURE(ref.name);
    OperatorPair p = make_operator_pair(ref.name, ref.params);
    CHECK(ellipticity_check(p, so).pass);
    if (p.degree) CHECK(homogeneity_check(p, so).pass);
  }
  OperatorPair sk = make_operator_pair("sigma_k", {{"n", 4}, {"k", 2}});
  CHECK(monotonicity_check(sk, sk.F.monotonicity_cone(), {0.0, 1.0, 3.0}, so).pass);
}
