#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "kms/error.hpp"
#include "kms/solver.hpp"

using namespace kms;

namespace {

const double kLog2of3 = std::log(3.0) / std::log(2.0);

WeightedGraph sources(std::size_t n) {
  GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_vertex("s" + std::to_string(i));
  return b.build();
}

WeightedGraph loops(std::size_t n, double weight) {
  GraphBuilder b;
  b.add_vertex("v");
  for (std::size_t i = 0; i < n; ++i) b.add_edge("e" + std::to_string(i), "v", "v", weight);
  return b.build();
}

}  // namespace

TEST(Polytope, Assembly) {
  const auto g = fixtures::load("three_loops.json");
  const auto p = build_polytope(g, 1.0);
  ASSERT_EQ(p.equality_rows.rows(), 1);
  EXPECT_NEAR(p.equality_rows(0, 0), 3 * 0.5 - 1.0, 1e-15);
  EXPECT_EQ(p.inequality_rows.rows(), 0);

  const auto s = build_polytope(sources(3), 1.0);
  EXPECT_EQ(s.equality_rows.rows(), 0);
  EXPECT_EQ(s.inequality_rows.rows(), 0);

  const auto o = build_polytope(fixtures::load("o_infinity.json"), 2.0);
  ASSERT_EQ(o.inequality_rows.rows(), 1);
  EXPECT_NEAR(o.inequality_rows(0, 0), 1.0 / 3.0 - 1.0, 1e-15);
  EXPECT_THROW((void)build_polytope(g, 0.0), InputError);
}

TEST(Polytope, DivergentBundleForcesZeroUpstream) {
  GraphBuilder b;
  b.add_vertex("v").add_vertex("w").add_bundle("c", "w", "v", constant_family(2.0));
  const auto g = b.build();
  const auto p = build_polytope(g, 1.0);
  ASSERT_EQ(p.forced_zero.size(), 1u);
  EXPECT_EQ(p.forced_zero[0], g.vertex("w"));
  const auto r = solve(g, 1.0);
  ASSERT_TRUE(r.feasible);
  EXPECT_TRUE(r.unique());
  EXPECT_NEAR((*r.witness)[g.vertex("v")], 1.0, 1e-12);
}

TEST(Solve, Examples) {
  const auto g = fixtures::load("two_vertex.json");
  const auto r = solve(g, 1.0);
  ASSERT_TRUE(r.feasible);
  EXPECT_TRUE(r.unique());
  ASSERT_EQ(r.extreme_points.size(), 1u);
  EXPECT_NEAR(r.extreme_points[0][g.vertex("v0")], 0.4, 1e-12);
  EXPECT_NEAR(r.extreme_points[0][g.vertex("v1")], 0.6, 1e-12);

  const auto three = fixtures::load("three_loops.json");
  EXPECT_FALSE(solve(three, 1.0).feasible);
  const auto at_crit = solve(three, kLog2of3);
  ASSERT_TRUE(at_crit.feasible);
  EXPECT_TRUE(at_crit.unique());
  EXPECT_NEAR(at_crit.extreme_points[0][VertexId{0}], 1.0, 1e-12);
}

TEST(Solve, ExtremePointsPassConditions) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = fixtures::random_graph(rng, 4, 5, 1.0, 4.0);
    for (double beta : {0.5, 1.0, 3.0}) {
      const auto r = solve(g, beta);
      if (!r.feasible) continue;
      ASSERT_TRUE(r.witness);
      EXPECT_TRUE(check_k1(g, *r.witness, beta, 1e-8).pass());
      EXPECT_TRUE(check_k2(g, *r.witness, beta, 1e-8).pass());
      EXPECT_FALSE(r.extreme_points.empty());
      for (const auto& t : r.extreme_points) {
        EXPECT_TRUE(t.is_state(1e-8));
        EXPECT_TRUE(check_k1(g, t, beta, 1e-8).pass());
        EXPECT_TRUE(check_k2(g, t, beta, 1e-8).pass());
      }
      EXPECT_EQ(r.dimension < 0, false);
      EXPECT_LE(static_cast<std::size_t>(r.dimension) + 1, r.extreme_points.size());
    }
  }
}

TEST(Solve, SourceOnlySimplex) {
  const auto r = solve(sources(4), 1.0);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.dimension, 3);
  EXPECT_EQ(r.extreme_points.size(), 4u);
}

TEST(Solve, EnumerationCap) {
  const auto r = solve(sources(5), 1.0, SolveOptions{.enumeration_cap = 3});
  EXPECT_TRUE(r.feasible);
  EXPECT_TRUE(r.witness);
  EXPECT_TRUE(r.enumeration_error);
  EXPECT_EQ(r.dimension, -1);
  EXPECT_TRUE(r.extreme_points.empty());
}

TEST(Solve, ThresholdOnThreeLoops) {
  const auto g = fixtures::load("three_loops.json");
  const auto bc = critical_beta(g);
  ASSERT_TRUE(bc);
  EXPECT_FALSE(solve(g, *bc - 0.01).feasible);
  EXPECT_TRUE(solve(g, *bc).unique());
}

TEST(SpectralRadius, Examples) {
  EXPECT_NEAR(spectral_radius(fixtures::load("three_loops.json"), 1.0), 1.5, 1e-12);
  EXPECT_NEAR(spectral_radius(fixtures::load("two_cycle.json"), 1.0), 0.25, 1e-12);
  EXPECT_THROW((void)spectral_radius(fixtures::load("o_infinity.json"), 1.0), InputError);
  const auto g = fixtures::load("rich.json");
  double prev = spectral_radius(g, 0.1);
  for (double beta = 0.2; beta <= 5.0; beta += 0.1) {
    const double r = spectral_radius(g, beta);
    EXPECT_LT(r, prev);
    prev = r;
  }
}

// 2x2 nonnegative matrices against the larger root of the characteristic polynomial.
TEST(SpectralRadius, MatchesCharacteristicPolynomial) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int t = 0; t < 500; ++t) {
    Eigen::MatrixXd m(2, 2);
    m << u(rng), u(rng), u(rng), u(rng);
    if (t % 5 == 0) m(0, 1) = 0.0;        // reducible
    if (t % 7 == 0) m(0, 0) = m(1, 1) = 0;  // periodic
    const double tr = m.trace(), det = m.determinant();
    const double root = 0.5 * (tr + std::sqrt(std::max(0.0, tr * tr - 4 * det)));
    ASSERT_NEAR(spectral_radius(m), root, 1e-9) << m;
  }
}

TEST(SpectralRadius, ReducibleAndNilpotent) {
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(3, 3);
  n(1, 0) = 2.0;
  n(2, 1) = 5.0;
  EXPECT_NEAR(spectral_radius(n), 0.0, 1e-12);
  Eigen::MatrixXd blocks = Eigen::MatrixXd::Zero(4, 4);
  blocks(0, 1) = blocks(1, 0) = 1.0;  // period-2 block with radius 1
  blocks(2, 2) = 0.5;
  blocks(3, 0) = 7.0;
  EXPECT_NEAR(spectral_radius(blocks), 1.0, 1e-12);
  EXPECT_EQ(strongly_connected_components(blocks).size(), 3u);
}

TEST(CriticalBeta, Examples) {
  const auto bc = critical_beta(fixtures::load("three_loops.json"));
  ASSERT_TRUE(bc);
  EXPECT_NEAR(*bc, kLog2of3, 1e-6);
  const auto o = critical_beta(fixtures::load("o_infinity.json"));
  ASSERT_TRUE(o);
  EXPECT_NEAR(*o, 1.0, 1e-6);
  EXPECT_FALSE(critical_beta(fixtures::load("two_cycle.json")));
  for (int n : {2, 3, 5}) {
    const auto b = critical_beta(loops(static_cast<std::size_t>(n), std::numbers::e));
    ASSERT_TRUE(b);
    EXPECT_NEAR(*b, std::log(n), 1e-6);
  }
}

TEST(CriticalBeta, Preconditions) {
  try {
    (void)critical_beta(fixtures::load("weight_below_one.json"));
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("c(e)>1"), std::string::npos);
  }
  // not strongly connected
  EXPECT_THROW((void)critical_beta(fixtures::load("two_vertex.json")), PreconditionError);
}

TEST(Scan, OInfinity) {
  const auto g = fixtures::load("o_infinity.json");
  const double grid[] = {0.5, 1.0, 2.0};
  const auto r = beta_scan(g, grid);
  ASSERT_EQ(r.points.size(), 3u);
  EXPECT_FALSE(r.points[0].feasible);
  EXPECT_TRUE(r.points[1].feasible);
  EXPECT_EQ(r.points[1].dimension, 0);
  EXPECT_EQ(r.points[2].dimension, 0);
  EXPECT_TRUE(r.monotone);
  ASSERT_TRUE(r.threshold);
  EXPECT_EQ(*r.threshold, 1.0);
}

TEST(Scan, ParallelMatchesSerial) {
  const auto g = fixtures::load("rich.json");
  std::vector<double> grid;
  for (int i = 1; i <= 30; ++i) grid.push_back(0.1 * i);
  const auto a = beta_scan(g, grid, {}, false);
  const auto b = beta_scan(g, grid, {}, true);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].beta, b.points[i].beta);
    EXPECT_EQ(a.points[i].feasible, b.points[i].feasible);
    EXPECT_EQ(a.points[i].dimension, b.points[i].dimension);
  }
}

TEST(Scan, SourceOnlyAndThreeLoops) {
  const double grid[] = {0.3, 1.0, 4.0};
  for (const auto& p : beta_scan(sources(3), grid).points) {
    EXPECT_TRUE(p.feasible);
    EXPECT_EQ(p.dimension, 2);
  }
  const double g2[] = {1.0, kLog2of3};
  const auto r = beta_scan(fixtures::load("three_loops.json"), g2);
  EXPECT_FALSE(r.points[0].feasible);
  EXPECT_TRUE(r.points[1].feasible);
  EXPECT_EQ(r.points[1].dimension, 0);
}

TEST(Ground, Examples) {
  const auto o = ground_simplex(fixtures::load("o_infinity.json"));
  EXPECT_EQ(o.singular_vertices.size(), 1u);
  EXPECT_EQ(o.dimension, 0);

  const auto star = ground_simplex(fixtures::load("star.json"));
  EXPECT_EQ(star.singular_vertices.size(), 5u);
  EXPECT_EQ(star.dimension, 4);

  const auto regular = ground_simplex(fixtures::load("three_loops.json"));
  EXPECT_TRUE(regular.singular_vertices.empty());
  EXPECT_FALSE(regular.dimension);

  EXPECT_THROW((void)ground_simplex(fixtures::load("weight_below_one.json")), PreconditionError);
}

TEST(Star, GraphShape) {
  const auto family = StarFamily::geometric(2.0, 2.0);
  const auto g = star_graph(family, 4);
  EXPECT_EQ(g.vertex_count(), 6u);
  for (VertexId v : g.vertices()) EXPECT_TRUE(vertex_class(g, v).singular());
  EXPECT_EQ(vertex_class(g, g.vertex("v0")).kind, VertexClass::Kind::InfiniteReceiver);
  // the tail bundle carries a_5, a_6, ...: sum_{n>4} 2^{-n} = 2^{-4}
  EXPECT_NEAR(g.bundles()[0].series(1.0), 1.0 / 16.0, 1e-15);
}

TEST(Star, TruncationThresholdMatchesFiniteSumBisection) {
  const auto family = StarFamily::geometric(2.0, 2.0);
  const StarProfile profile = [](std::size_t n) {
    std::vector<double> w{0.5};
    for (std::size_t k = 1; k <= n; ++k) w.push_back(std::pow(2.0, -static_cast<double>(k)));
    return w;
  };
  const std::size_t levels[] = {1, 2, 8};
  const auto points = star_truncation_scan(family, profile, levels);
  ASSERT_EQ(points.size(), 3u);
  for (const auto& p : points) {
    ASSERT_TRUE(p.threshold);
    // oracle: K2 at v0 reads sum_{n<=N} 2^{-n(beta+1)} <= 1/2, a strictly decreasing function
    const auto lhs = [&](double beta) {
      double s = 0;
      for (std::size_t k = 1; k <= p.n; ++k) s += std::pow(2.0, -static_cast<double>(k) * (beta + 1));
      return s;
    };
    double lo = 1e-9, hi = 10;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (lhs(mid) <= 0.5 ? hi : lo) = mid;
    }
    const double oracle = lhs(1e-9) <= 0.5 ? 0.0 : hi;
    EXPECT_NEAR(*p.threshold, oracle, 1e-9) << "N=" << p.n;
  }
  EXPECT_TRUE(points[0].feasible_for_all_beta);  // N=1: 2^{-(beta+1)} < 1/2
}

TEST(Star, InfeasibleWithoutHubMass) {
  const auto family = StarFamily::geometric(2.0, 2.0);
  const StarProfile profile = [](std::size_t n) { return std::vector<double>(n + 1, 1.0); };
  const StarProfile no_hub = [](std::size_t n) {
    std::vector<double> w(n + 1, 1.0);
    w[0] = 0.0;
    return w;
  };
  const std::size_t levels[] = {3};
  EXPECT_TRUE(star_truncation_scan(family, profile, levels)[0].threshold);
  const auto r = star_truncation_scan(family, no_hub, levels);
  EXPECT_FALSE(r[0].threshold);
  EXPECT_FALSE(r[0].feasible_for_all_beta);
}

TEST(Star, NonSummableFamilyRejected) {
  StarFamily flat{[](std::size_t) { return 2.0; },
                  [](std::size_t, double) { return std::numeric_limits<double>::infinity(); }};
  const StarProfile profile = [](std::size_t n) { return std::vector<double>(n + 1, 1.0); };
  const std::size_t levels[] = {2};
  EXPECT_THROW((void)star_truncation_scan(flat, profile, levels), PreconditionError);
}
