#include <gtest/gtest.h>

#include <random>

#include "graphon/homdensity.hpp"
#include "graphon/reference.hpp"
#include "support/poly.hpp"

using namespace graphon;
using testsupport::Poly;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }

StepKernel bip2() { return StepKernel::equal_parts(2, {q(0), q(1), q(1), q(0)}); }

SimpleGraph bowtie() { return SimpleGraph(5, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {3, 4}, {0, 4}}); }

SimpleGraph petersen() {
  std::vector<Edge> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return SimpleGraph(10, e);
}

std::vector<SimpleGraph> test_graphs() {
  return {graphs::edge(),     graphs::path(3),  graphs::complete(3),          graphs::cycle(4),
          graphs::cycle(5),   graphs::complete(4), graphs::complete_bipartite(2, 3), bowtie(),
          SimpleGraph(3, {{0, 1}})};
}

/// t(H, p + eps U) through a plain assignment sum over polynomial edge weights.
Poly expansion_oracle(const SimpleGraph& h, const Rational& p, const StepKernel& u) {
  const std::size_t m = u.parts();
  std::vector<Poly> edges(m * m);
  for (std::size_t i = 0; i < m * m; ++i) edges[i] = Poly({p, u.values()[i]});
  std::vector<Poly> sizes;
  for (const auto& s : u.sizes()) sizes.emplace_back(s);
  std::vector<std::vector<Poly>> weights(static_cast<std::size_t>(h.order()), sizes);
  return reference::assignment_sum<Poly>(h, m, edges, weights);
}

}  // namespace

TEST(Density, HandValues) {
  EXPECT_EQ(density(graphs::edge(), constant_graphon(q(1, 3))), q(1, 3));
  EXPECT_EQ(density(graphs::complete(3), constant_graphon(q(1, 2))), q(1, 8));
  EXPECT_EQ(density(graphs::complete(3), bip2()), q(0));
  EXPECT_EQ(density(graphs::cycle(4), bip2()), q(1, 8));
  EXPECT_EQ(density(graphs::edge(), bip2()), q(1, 2));
  // isolated vertices contribute a factor 1
  EXPECT_EQ(density(SimpleGraph(4, {{0, 1}}), bip2()), q(1, 2));
}

TEST(Density, MatchesBruteForceOnRandomGraphons) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    auto w = reference::random_graphon(rng, 4);
    for (const auto& h : test_graphs()) EXPECT_EQ(density(h, w), reference::density(h, w));
  }
}

TEST(Density, PetersenOnSignedKernel) {
  std::mt19937_64 rng(5);
  auto u = reference::random_kernel(rng, 3);
  EXPECT_EQ(density(petersen(), u), reference::density(petersen(), u));
}

TEST(Density, IsomorphismInvariant) {
  auto c5 = graphs::cycle(5);
  SimpleGraph relabeled(5, {{0, 2}, {2, 4}, {4, 1}, {1, 3}, {3, 0}});
  std::mt19937_64 rng(8);
  auto w = reference::random_graphon(rng, 5);
  EXPECT_EQ(density(c5, w), density(relabeled, w));
}

TEST(Density, CapacityGuard) {
  std::mt19937_64 rng(2);
  auto w = reference::random_kernel(rng, 6);
  EvalOptions tight;
  tight.budget = 1000;
  EXPECT_THROW(density(graphs::complete(6), w, tight), CapacityError);
  EXPECT_NO_THROW(density(graphs::complete(3), w));
}

TEST(Density, PlanWidthOfCycleIsTwo) {
  auto plan = plan_elimination(graphs::cycle(8));
  EXPECT_EQ(plan.width, 2u);
  EXPECT_EQ(plan.order.size(), 8u);
}

TEST(RootedDensity, AveragesToDensity) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    auto w = reference::random_graphon(rng, 4);
    auto h = graphs::complete_bipartite(2, 2);
    std::vector<int> roots{0, 1};
    Rational total = 0;
    for (std::size_t i = 0; i < w.parts(); ++i)
      for (std::size_t j = 0; j < w.parts(); ++j) {
        std::vector<std::size_t> parts{i, j};
        total += w.size(i) * w.size(j) * rooted_density(h, roots, w, parts);
      }
    EXPECT_EQ(total, density(h, w));
  }
}

TEST(RootedDensity, HandValueAndErrors) {
  // rooted at the two ends of P3 in the bipartite graphon: both ends in the same part
  auto p3 = graphs::path(3);
  std::vector<int> roots{0, 2};
  std::vector<std::size_t> same{0, 0}, diff{0, 1};
  EXPECT_EQ(rooted_density(p3, roots, bip2(), same), q(1, 2));
  EXPECT_EQ(rooted_density(p3, roots, bip2(), diff), q(0));
  std::vector<int> adjacent{0, 1};
  EXPECT_THROW(rooted_density(p3, adjacent, bip2(), diff), DomainError);
}

TEST(EpsilonExpansion, MatchesPolynomialOracle) {
  std::mt19937_64 rng(31);
  const std::vector<SimpleGraph> hs{graphs::complete(3), graphs::cycle(5), bowtie(), graphs::cycle(4)};
  for (int trial = 0; trial < 6; ++trial) {
    auto u = reference::random_kernel(rng, 3);
    const Rational p = reference::quarter_grid()[trial % 5];
    for (const auto& h : hs) {
      auto got = epsilon_expansion(h, p, u);
      auto want = expansion_oracle(h, p, u);
      ASSERT_EQ(got.coeffs.size(), h.size() + 1);
      for (std::size_t i = 0; i <= h.size(); ++i) EXPECT_EQ(got.coeffs[i], want.coeff(i)) << "coefficient " << i;
    }
  }
}

TEST(EpsilonExpansion, EvaluatesToPerturbedDensity) {
  std::mt19937_64 rng(4);
  auto u = reference::random_kernel(rng, 3);
  const Rational p = q(1, 2), eps = q(1, 5);
  auto poly = epsilon_expansion(graphs::cycle(5), p, u);
  auto perturbed = affine_combine({{q(1), StepKernel(std::vector<Rational>(u.sizes().begin(), u.sizes().end()),
                                                     std::vector<Rational>(9, p))},
                                   {eps, u}});
  EXPECT_EQ(poly(eps), density(graphs::cycle(5), perturbed));
}

TEST(Reflect, SmallCases) {
  auto p3 = graphs::path(3);
  std::vector<int> ends{0, 2};
  auto c4 = reflect(p3, ends, 2);
  EXPECT_EQ(c4.order(), 4);
  EXPECT_EQ(c4.size(), 4u);
  EXPECT_EQ(graph_stats(c4).girth, 4);

  std::vector<int> hub{0};
  auto star = reflect(graphs::edge(), hub, 3);
  EXPECT_EQ(star.order(), 4);
  EXPECT_EQ(star.degree(0), 3);

  EXPECT_EQ(reflect(p3, ends, 1), p3);
  std::vector<int> bad{0, 1};
  EXPECT_THROW(reflect(p3, bad, 2), DomainError);
}

TEST(Reflect, K22ReflectsToK2n) {
  auto k22 = graphs::complete_bipartite(2, 2);
  std::vector<int> side{0, 1};
  auto k26 = reflect(k22, side, 3);
  EXPECT_EQ(k26.order(), 8);
  EXPECT_EQ(k26.size(), 12u);
  std::mt19937_64 rng(6);
  auto w = reference::random_graphon(rng, 3);
  EXPECT_EQ(density(k26, w), density(graphs::complete_bipartite(2, 6), w));
}

TEST(K2a2bC5, Shape) {
  auto g = build_K2a2bC5(1, 1);
  EXPECT_EQ(g.order(), 8);
  EXPECT_EQ(g.size(), 9u);
  auto s = graph_stats(g);
  EXPECT_EQ(s.girth, 4);
  EXPECT_EQ(s.chromatic_number, 3);
  auto g2 = build_K2a2bC5(2, 2);
  EXPECT_EQ(g2.order(), 4 + 4 + 8);
  EXPECT_EQ(g2.size(), 16u + 10u);
  for (int t = 0; t < 4; ++t) EXPECT_EQ(g2.degree(4 + t), t < 2 ? 6 : 4);
}

TEST(Commonness, UniformColoringIsTight) {
  auto third = StepKernel({q(1)}, {q(1, 3)});
  ColoringTemplate t({third, third, third});
  EXPECT_EQ(mono_sum(t, graphs::cycle(5)), q(1, 81));
  EXPECT_EQ(commonness_margin(t, graphs::cycle(5)), q(0));
  EXPECT_EQ(random_coloring_value(2, graphs::complete(3)), q(1, 4));
  EXPECT_EQ(random_coloring_value(3, SimpleGraph(2, {})), q(3));
}

TEST(Commonness, GoodmanBoundForTriangle) {
  // every 2-coloring has mono_sum(K3) >= 1/4
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto w = reference::random_graphon(rng, 4);
    std::vector<Rational> ones(w.parts() * w.parts(), Rational(1));
    StepKernel all(std::vector<Rational>(w.sizes().begin(), w.sizes().end()), ones);
    ColoringTemplate t({w, affine_combine({{q(1), all}, {q(-1), w}})});
    EXPECT_GE(commonness_margin(t, graphs::complete(3)), 0);
  }
}
