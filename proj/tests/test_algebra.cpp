#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "kms/algebra.hpp"
#include "kms/error.hpp"
#include "kms/verify.hpp"

using namespace kms;

namespace {

// Two vertices: v with loops e, f and an edge h: w -> v; w is a source.
WeightedGraph loops_and_source() {
  GraphBuilder b;
  b.add_vertex("v").add_vertex("w");
  b.add_edge("e", "v", "v", 2).add_edge("f", "v", "v", 3).add_edge("h", "w", "v", 5);
  return b.build();
}

Monomial iso(const WeightedGraph& g, std::initializer_list<std::string_view> p) {
  return Monomial::isometry(g.path(p));
}

Monomial mono(const WeightedGraph& g, std::initializer_list<std::string_view> mu,
              std::initializer_list<std::string_view> nu) {
  return {g.path(mu), g.path(nu)};
}

double max_coeff_diff(const AlgebraElement& a, const AlgebraElement& b) {
  double d = 0.0;
  for (const auto& [m, c] : a.terms()) d = std::max(d, std::abs(c - b.coefficient(m)));
  for (const auto& [m, c] : b.terms()) d = std::max(d, std::abs(c - a.coefficient(m)));
  return d;
}

}  // namespace

TEST(Monomial, RequiresMatchingSources) {
  const auto g = loops_and_source();
  EXPECT_THROW(Monomial(g.path({"e"}), g.path({"h"})), InputError);
  EXPECT_NO_THROW(Monomial(g.path({"e", "e"}), g.path({"f"})));
}

TEST(Product, ProjectionIdempotent) {
  const auto g = loops_and_source();
  const auto pv = Monomial::projection(g.vertex("v"));
  EXPECT_EQ(mono_mul(pv, pv), AlgebraElement(pv));
  const auto pw = Monomial::projection(g.vertex("w"));
  EXPECT_TRUE(mono_mul(pv, pw).is_zero());
}

TEST(Product, PrefixCases) {
  const auto g = loops_and_source();
  // (s_e s_e*)(s_e s_f*) = s_e s_f*
  EXPECT_EQ(mono_mul(mono(g, {"e"}, {"e"}), mono(g, {"e"}, {"f"})), AlgebraElement(mono(g, {"e"}, {"f"})));
  // (s_e s_f*)(s_e s_e*) = 0
  EXPECT_TRUE(mono_mul(mono(g, {"e"}, {"f"}), mono(g, {"e"}, {"e"})).is_zero());
  // s_e* s_e = p_{s(e)}
  EXPECT_EQ(mono_mul(Monomial::adjoint_isometry(g.path({"e"})), iso(g, {"e"})),
            AlgebraElement(Monomial::projection(g.vertex("v"))));
  // s_f^* (s_{fe} s_e^*) = s_e s_e^*
  EXPECT_EQ(mono_mul(Monomial::adjoint_isometry(g.path({"f"})), mono(g, {"f", "e"}, {"e"})),
            AlgebraElement(mono(g, {"e"}, {"e"})));
  // (s_e s_{fe}^*) s_f = s_e s_e^*
  EXPECT_EQ(mono_mul(mono(g, {"e"}, {"f", "e"}), iso(g, {"f"})),
            AlgebraElement(mono(g, {"e"}, {"e"})));
  EXPECT_EQ(mono_mul(iso(g, {"e"}), iso(g, {"h"})), AlgebraElement(iso(g, {"e", "h"})));
}

TEST(Adjoint, InvolutionAndIsometry) {
  const auto g = loops_and_source();
  const AlgebraElement x = Complex(2, -1) * AlgebraElement(mono(g, {"e", "f"}, {"e"})) +
                           AlgebraElement(iso(g, {"e"}));
  EXPECT_EQ(adjoint(adjoint(x)), x);
  const auto se_star = adjoint(AlgebraElement(iso(g, {"e"})));
  EXPECT_EQ(se_star, AlgebraElement(Monomial(g.at_vertex("v"), g.path({"e"}))));
  EXPECT_TRUE(elem_mul(x, AlgebraElement()).is_zero());
  EXPECT_EQ(adjoint(x).coefficient(mono(g, {"e"}, {"e", "f"})), Complex(2, 1));
}

TEST(Gauge, Examples) {
  const auto g = loops_and_source();
  const auto pv = AlgebraElement(Monomial::projection(g.vertex("v")));
  EXPECT_EQ(gauge(Complex(0, 1), pv), pv);
  EXPECT_EQ(gauge(-1.0, AlgebraElement(iso(g, {"e"}))), Complex(-1) * AlgebraElement(iso(g, {"e"})));
  EXPECT_EQ(gauge(Complex(0, 1), AlgebraElement(mono(g, {"e"}, {"f"}))), AlgebraElement(mono(g, {"e"}, {"f"})));
  // z^{|mu|-|nu|} with a negative exponent
  const auto x = gauge(Complex(0, 1), AlgebraElement(mono(g, {"e"}, {"f", "e", "e"})));
  EXPECT_NEAR(std::abs(x.coefficient(mono(g, {"e"}, {"f", "e", "e"})) - Complex(-1, 0)), 0.0, 1e-15);
  EXPECT_THROW((void)gauge(2.0, pv), InputError);
}

TEST(Dynamics, Examples) {
  const auto g = loops_and_source();
  const auto pv = AlgebraElement(Monomial::projection(g.vertex("v")));
  EXPECT_EQ(dynamics(g, 0.7, pv), pv);
  const auto y = dynamics(g, Complex(0, 1), AlgebraElement(iso(g, {"e"})));
  EXPECT_NEAR(std::abs(y.coefficient(iso(g, {"e"})) - 0.5), 0.0, 1e-15);
  const auto z = dynamics(g, 1.3, AlgebraElement(mono(g, {"e", "f"}, {"e"})));
  EXPECT_NEAR(std::abs(z.coefficient(mono(g, {"e", "f"}, {"e"}))), 1.0, 1e-14);
  // sigma_{i beta}(s_mu s_nu^*) = c(mu)^{-beta} c(nu)^{beta} s_mu s_nu^*
  EXPECT_NEAR(std::abs(dynamics_factor(g, Complex(0, 2), mono(g, {"e", "f"}, {"e"})) - 4.0 / 36.0), 0.0,
              1e-14);
}

TEST(Dynamics, RejectsBundles) {
  const auto g = fixtures::load("o_infinity.json");
  EXPECT_THROW((void)dynamics(g, 1.0, AlgebraElement(Monomial::isometry(g.path({"e#1"})))),
               UnsupportedPathError);
}

TEST(CondExpect, Examples) {
  const auto g = loops_and_source();
  EXPECT_TRUE(cond_expect(AlgebraElement(iso(g, {"e"}))).is_zero());
  const auto pv = AlgebraElement(Monomial::projection(g.vertex("v")));
  EXPECT_EQ(cond_expect(pv), pv);
  const auto ef = AlgebraElement(mono(g, {"e"}, {"f"}));
  EXPECT_EQ(cond_expect(ef), ef);
  EXPECT_EQ(cond_expect(ef + AlgebraElement(iso(g, {"f"}))), ef);
}

TEST(Expand, Examples) {
  const auto g = loops_and_source();
  // p_v has in-edges e, f, h
  const auto ev = expand(g, Monomial::projection(g.vertex("v")));
  EXPECT_EQ(ev.size(), 3u);
  EXPECT_EQ(ev.coefficient(mono(g, {"e"}, {"e"})), Complex(1));
  EXPECT_EQ(ev.coefficient(mono(g, {"h"}, {"h"})), Complex(1));
  EXPECT_THROW((void)expand(g, Monomial::projection(g.vertex("w"))), NotExpandableError);
  // s_e s_e* with s(e) = v: s_e p_v s_e* = sum_g s_{eg} s_{eg}^*
  const auto ee = expand(g, mono(g, {"e"}, {"e"}));
  EXPECT_EQ(ee.size(), 3u);
  EXPECT_EQ(ee.coefficient(mono(g, {"e", "f"}, {"e", "f"})), Complex(1));

  GraphBuilder b;
  b.add_vertex("v");
  b.add_edge("e", "v", "v", 2).add_edge("f", "v", "v", 2);
  const auto two = b.build();
  const auto pv2 = expand(two, Monomial::projection(two.vertex("v")));
  EXPECT_EQ(pv2, AlgebraElement(mono(two, {"e"}, {"e"})) + AlgebraElement(mono(two, {"f"}, {"f"})));
}

TEST(Expand, InfiniteReceiverIsNotExpandable) {
  const auto g = fixtures::load("o_infinity.json");
  EXPECT_THROW((void)expand(g, Monomial::projection(g.vertex("v"))), NotExpandableError);
}

TEST(Filtration, Classify) {
  const auto g = loops_and_source();
  EXPECT_EQ(classify(g, Monomial::projection(g.vertex("w"))), (FiltrationTag{0, FiltrationTag::Kind::Ek}));
  EXPECT_EQ(classify(g, mono(g, {"e"}, {"e"})), (FiltrationTag{1, FiltrationTag::Kind::Fk}));
  EXPECT_EQ(classify(g, iso(g, {"e"})).kind, FiltrationTag::Kind::OffCore);
  EXPECT_EQ(classify(g, mono(g, {"h"}, {"h"})), (FiltrationTag{1, FiltrationTag::Kind::Ek}));
}

TEST(Filtration, DecomposeExamples) {
  GraphBuilder b;
  b.add_vertex("v").add_vertex("s");
  b.add_edge("e", "v", "v", 2).add_edge("f", "v", "v", 2);
  const auto g = b.build();
  const auto pv = AlgebraElement(Monomial::projection(g.vertex("v")));
  const auto d = decompose_core(g, pv, 1);
  ASSERT_EQ(d.singular_parts.size(), 1u);
  EXPECT_TRUE(d.singular_parts[0].is_zero());
  EXPECT_EQ(d.top, expand(g, Monomial::projection(g.vertex("v"))));

  const auto ps = AlgebraElement(Monomial::projection(g.vertex("s")));
  const auto ds = decompose_core(g, ps, 1);
  EXPECT_EQ(ds.singular_parts[0], ps);
  EXPECT_TRUE(ds.top.is_zero());

  const auto top = AlgebraElement(mono(g, {"e"}, {"f"}));
  const auto dt = decompose_core(g, top, 1);
  EXPECT_EQ(dt.top, top);

  EXPECT_THROW((void)decompose_core(g, AlgebraElement(mono(g, {"e"}, {"e", "f"})), 3), DecompositionError);
  EXPECT_THROW((void)decompose_core(g, AlgebraElement(mono(g, {"e", "e"}, {"e", "f"})), 1),
               DecompositionError);
}

// --- Laws over every monomial with paths <= 2 on the rich fixture ---

class AlgebraLaws : public ::testing::Test {
 protected:
  void SetUp() override {
    g_ = std::make_unique<WeightedGraph>(fixtures::load("rich.json"));
    monomials_ = all_monomials(*g_, 2);
  }
  std::unique_ptr<WeightedGraph> g_;
  std::vector<Monomial> monomials_;
};

TEST_F(AlgebraLaws, StarAntimultiplicative) {
  for (const auto& x : monomials_)
    for (const auto& y : monomials_)
      ASSERT_EQ(adjoint(mono_mul(x, y)), mono_mul(y.adjoint(), x.adjoint()));
}

TEST_F(AlgebraLaws, AssociativeOnSampledTriples) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, monomials_.size() - 1);
  for (int t = 0; t < 20000; ++t) {
    const AlgebraElement x(monomials_[pick(rng)]), y(monomials_[pick(rng)]), z(monomials_[pick(rng)]);
    ASSERT_EQ((x * y) * z, x * (y * z));
  }
}

TEST_F(AlgebraLaws, DynamicsGroupLawAndMultiplicativity) {
  const double ts[] = {-1.7, 0.0, 0.3, 2.5};
  for (const auto& m : monomials_) {
    const AlgebraElement x(m, Complex(0.5, -2.0));
    for (double t1 : ts)
      for (double t2 : ts)
        ASSERT_LE(max_coeff_diff(dynamics(*g_, t1, dynamics(*g_, t2, x)), dynamics(*g_, t1 + t2, x)), 1e-10);
  }
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, monomials_.size() - 1);
  const Complex zetas[] = {0.4, Complex(0, 1.1), Complex(0.3, -0.6)};
  for (int t = 0; t < 2000; ++t) {
    const AlgebraElement x(monomials_[pick(rng)]), y(monomials_[pick(rng)]);
    for (Complex z : zetas)
      ASSERT_LE(max_coeff_diff(dynamics(*g_, z, x * y), dynamics(*g_, z, x) * dynamics(*g_, z, y)), 1e-10);
  }
}

TEST_F(AlgebraLaws, CondExpectIdempotentAndGaugeInvariant) {
  AlgebraElement x;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const auto& m : monomials_) x.add_term(m, Complex(u(rng), u(rng)));
  const auto ex = cond_expect(x);
  EXPECT_EQ(cond_expect(ex), ex);
  for (double theta : {0.3, 1.0, 2.0, std::numbers::pi}) {
    const Complex z = std::polar(1.0, theta);
    EXPECT_LE(max_coeff_diff(cond_expect(gauge(z, x)), gauge(z, ex)), 1e-10);
    EXPECT_LE(max_coeff_diff(gauge(z, ex), ex), 1e-10);
  }
}

TEST_F(AlgebraLaws, DecompositionResumsToNormalForm) {
  for (const auto& m : monomials_) {
    if (!m.in_core()) continue;
    const AlgebraElement x(m);
    for (std::size_t k = m.mu().length(); k <= 3; ++k) {
      const auto d = decompose_core(*g_, x, k);
      ASSERT_EQ(d.singular_parts.size(), k);
      for (std::size_t j = 0; j < k; ++j)
        for (const auto& [t, c] : d.singular_parts[j].terms()) {
          ASSERT_EQ(classify(*g_, t).kind, FiltrationTag::Kind::Ek);
          ASSERT_EQ(classify(*g_, t).level, j);
        }
      for (const auto& [t, c] : d.top.terms()) ASSERT_EQ(t.mu().length(), k);
      ASSERT_EQ(normal_form(*g_, d.sum(), k), normal_form(*g_, x, k));
    }
  }
}
