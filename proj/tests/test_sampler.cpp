#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "graphon/constructions.hpp"
#include "graphon/reference.hpp"
#include "graphon/sampler.hpp"

using namespace graphon;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }

SimpleGraph bowtie() { return SimpleGraph(5, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {3, 4}, {0, 4}}); }

std::int64_t brute_hom(const SimpleGraph& h, const DenseGraph& g) {
  std::vector<std::vector<std::int64_t>> ones(static_cast<std::size_t>(h.order()),
                                              std::vector<std::int64_t>(static_cast<std::size_t>(g.n), 1));
  return reference::assignment_sum<std::int64_t>(h, static_cast<std::size_t>(g.n), g.adj, ones);
}

}  // namespace

TEST(Sampling, ConstantGraphons) {
  auto full = sample_w_random(constant_graphon(q(1)), 7, 1);
  EXPECT_EQ(full.size(), 21u);
  auto none = sample_w_random(constant_graphon(q(0)), 7, 1);
  EXPECT_EQ(none.size(), 0u);
  EXPECT_THROW(sample_w_random(constant_kernel(q(-1)), 5, 1), DomainError);
  EXPECT_THROW(sample_w_random(constant_graphon(q(1)), 0, 1), DomainError);
}

TEST(Sampling, EdgeDensityConcentrates) {
  const int n = 1000;
  auto g = sample_w_random(constant_graphon(q(1, 2)), n, 7);
  const double pairs = n * (n - 1) / 2.0;
  const double sigma = std::sqrt(pairs / 4);
  EXPECT_LE(std::fabs(static_cast<double>(g.size()) - pairs / 2), 3 * sigma);
}

TEST(Sampling, PartFrequencies) {
  StepKernel w({q(1, 3), q(2, 3)}, {q(1), q(0), q(0), q(0)});
  const int n = 3000;
  auto g = sample_w_random_dense(w, n, 11);
  // vertices in part 0 form a clique and are isolated from the rest: count them by degree
  int in_first = 0;
  for (int i = 0; i < n; ++i) {
    int deg = 0;
    for (int j = 0; j < n; ++j) deg += g.edge(i, j);
    if (deg > 0) ++in_first;
  }
  const double sigma = std::sqrt(n * (1.0 / 3) * (2.0 / 3));
  EXPECT_LE(std::fabs(in_first - n / 3.0), 4 * sigma);
}

TEST(Sampling, Deterministic) {
  auto w = constant_graphon(q(1, 3));
  EXPECT_EQ(sample_w_random(w, 50, 5, 2), sample_w_random(w, 50, 5, 2));
  EXPECT_FALSE(sample_w_random(w, 50, 5, 2) == sample_w_random(w, 50, 5, 3));
  EXPECT_FALSE(sample_w_random(w, 50, 5, 2) == sample_w_random(w, 50, 6, 2));
}

TEST(Sampling, ThresholdIsExact) {
  EXPECT_EQ(detail::threshold_of(q(0)), 0u);
  EXPECT_EQ(detail::threshold_of(q(1)), static_cast<detail::Threshold>(1) << 64);
  EXPECT_EQ(detail::threshold_of(q(1, 2)), static_cast<detail::Threshold>(1) << 63);
  // ceil(2^64 / 3)
  EXPECT_EQ(detail::threshold_of(q(1, 3)), static_cast<detail::Threshold>(6148914691236517206ull));
}

TEST(Coloring, ColorFractions) {
  auto a = constant_graphon(q(1, 3)), b = constant_graphon(q(2, 3));
  ColoringTemplate t({a, b});
  const int n = 400;
  auto g = sample_coloring(t, n, 3);
  std::int64_t first = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) first += g.color(i, j) == 0;
  const double pairs = n * (n - 1) / 2.0;
  const double sigma = std::sqrt(pairs * (1.0 / 3) * (2.0 / 3));
  EXPECT_LE(std::fabs(first - pairs / 3), 3 * sigma);
  EXPECT_THROW(sample_coloring(t, 1, 3), DomainError);
}

TEST(Coloring, BinaryColoringIsDeterministicGivenParts) {
  auto g = sample_coloring(binary_coloring(2), 40, 9);
  for (int i = 0; i < 40; ++i)
    for (int j = i + 1; j < 40; ++j) EXPECT_EQ(g.color(i, j), g.part[i] == g.part[j] ? 1u : 0u);
}

TEST(Counting, HomMatchesBruteForce) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 8; ++trial) {
    auto w = reference::random_graphon(rng, 3);
    auto g = sample_w_random_dense(w, 9, 100 + trial);
    for (const auto& h : {graphs::complete(3), graphs::cycle(4), graphs::cycle(5), graphs::path(3)})
      EXPECT_EQ(hom_count(h, g), brute_hom(h, g));
  }
}

TEST(Counting, InjectiveMatchesBacktracking) {
  std::mt19937_64 rng(72);
  const std::vector<SimpleGraph> hs{graphs::edge(),     graphs::path(3),  graphs::complete(3),
                                    graphs::cycle(4),   graphs::cycle(5), graphs::complete(4),
                                    bowtie(),           graphs::complete_bipartite(2, 3)};
  for (int trial = 0; trial < 6; ++trial) {
    auto w = reference::random_graphon(rng, 3);
    auto g = sample_w_random_dense(w, 12, 200 + trial);
    for (const auto& h : hs) {
      auto ex = InjectiveExpansion::of(h);
      EXPECT_EQ(injective_count(ex, h, g), reference::injective_count(h, g.n, g.adj));
    }
  }
}

TEST(Counting, CycleExpansionMergesQuotients) {
  // C5 quotients: C5 itself, five triangles with a pendant edge, five triangles
  auto ex = InjectiveExpansion::of(graphs::cycle(5));
  ASSERT_EQ(ex.terms.size(), 3u);
  std::vector<std::int64_t> coefs;
  for (const auto& [mu, qg] : ex.terms) coefs.push_back(mu);
  std::sort(coefs.begin(), coefs.end());
  EXPECT_EQ(coefs, (std::vector<std::int64_t>{-5, 1, 5}));
}

TEST(Counting, MonoCountEdges) {
  auto t = ColoringTemplate({constant_graphon(q(1, 2)), constant_graphon(q(1, 2))});
  auto g = sample_coloring(t, 30, 4);
  auto counts = mono_count(g, graphs::edge(), CountMode::homomorphism);
  std::int64_t edges0 = 0;
  for (int i = 0; i < 30; ++i)
    for (int j = i + 1; j < 30; ++j) edges0 += g.color(i, j) == 0;
  EXPECT_EQ(counts[0], 2 * edges0);
  EXPECT_EQ(counts[0] + counts[1], 30 * 29);
  EXPECT_EQ(mono_count(g, graphs::edge(), CountMode::injective), counts);
}

TEST(Counting, CapacityGuard) {
  DenseGraph g{100, std::vector<std::int64_t>(100 * 100, 0)};
  EXPECT_THROW(hom_count(graphs::cycle(10), g), CapacityError);
}

TEST(Convergence, ConstantHalfTriangle) {
  std::vector<int> schedule{20, 40};
  auto rep = convergence_report(constant_graphon(q(1, 2)), graphs::complete(3), schedule, 60, 7);
  EXPECT_EQ(rep.exact, q(1, 8));
  for (const auto& row : rep.rows) {
    EXPECT_FALSE(row.flagged) << "n=" << row.n;
    EXPECT_LE(row.deviation, 4 * row.standard_error);
  }
}

TEST(Convergence, BinaryColoringCycle) {
  std::vector<int> schedule{60};
  auto rep = convergence_report(binary_coloring(2), graphs::cycle(5), schedule, 40, 3);
  EXPECT_EQ(rep.exact, q(1, 16));
  EXPECT_FALSE(rep.rows[0].flagged);
}

TEST(Convergence, GoodmanValueForUniformTwoColoring) {
  auto half = constant_graphon(q(1, 2));
  std::vector<int> schedule{60};
  auto rep = convergence_report(ColoringTemplate({half, half}), graphs::complete(3), schedule, 40, 5);
  EXPECT_EQ(rep.exact, q(1, 4));
  EXPECT_FALSE(rep.rows[0].flagged);
}

TEST(Convergence, HomomorphismBiasShrinks) {
  std::vector<int> schedule{10, 20, 40, 80};
  auto rep = convergence_report(constant_graphon(q(1, 2)), graphs::complete(3), schedule, 60, 9,
                                CountMode::homomorphism);
  int inversions = 0;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) inversions += rep.rows[i].deviation > rep.rows[i - 1].deviation;
  EXPECT_LE(inversions, 1);
}

TEST(Convergence, ThreadCountDoesNotChangeRows) {
  std::vector<int> schedule{15, 25};
  EvalOptions one, three;
  three.threads = 3;
  auto src = SampleSource(odd_girth_template(3, q(1, 20), 5));
  auto a = convergence_report(src, graphs::cycle(5), schedule, 9, 13, CountMode::injective, one);
  auto b = convergence_report(src, graphs::cycle(5), schedule, 9, 13, CountMode::injective, three);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].mean, b.rows[i].mean);
    EXPECT_EQ(a.rows[i].sd, b.rows[i].sd);
  }
}

TEST(Convergence, Errors) {
  std::vector<int> tiny{2};
  EXPECT_THROW(convergence_report(constant_graphon(q(1, 2)), graphs::complete(3), tiny, 10, 1), DomainError);
  std::vector<int> ok{10};
  EXPECT_THROW(convergence_report(constant_graphon(q(1, 2)), graphs::complete(3), ok, 1, 1), DomainError);
}
