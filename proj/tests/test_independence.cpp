#include <gtest/gtest.h>

#include <random>

#include "graphon/independence.hpp"
#include "graphon/reference.hpp"

using namespace graphon;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }

StepKernel bip2() { return StepKernel::equal_parts(2, {q(0), q(1), q(1), q(0)}); }

}  // namespace

TEST(Alpha, TrivialCases) {
  auto empty = alpha_lower(constant_graphon(q(0)), q(1, 10));
  EXPECT_EQ(empty.bound, q(1));
  EXPECT_EQ(empty.h.weights, std::vector<Rational>{q(1)});
  auto full = alpha_lower(constant_graphon(q(1)), q(1, 2));
  EXPECT_EQ(full.bound, q(0));
}

TEST(Alpha, BipartiteIndependentHalf) {
  auto r = alpha_lower(bip2(), q(0));
  EXPECT_EQ(r.bound, q(1, 2));
  // lexicographically least optimal weighting
  std::vector<Rational> want{q(0), q(1)};
  EXPECT_EQ(r.h.weights, want);
  EXPECT_TRUE(verify_certificate(bip2(), q(0), r.h));
}

TEST(Alpha, ErrorsAndCapacity) {
  EXPECT_THROW(alpha_lower(bip2(), q(-1)), DomainError);
  EXPECT_THROW(alpha_lower(constant_kernel(q(-1)), q(1)), DomainError);
  std::vector<Rational> values(12 * 12, Rational(1, 2));
  AlphaOptions opts;
  opts.budget = 1000000;
  EXPECT_THROW(alpha_lower(StepKernel::equal_parts(12, values), q(1, 2), opts), CapacityError);
}

TEST(Alpha, CertificatesVerify) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 15; ++trial) {
    auto w = reference::random_graphon(rng, 4);
    const Rational delta = reference::quarter_grid()[trial % 5];
    AlphaOptions opts;
    opts.resolution = 4;
    auto r = alpha_lower(w, delta, opts);
    EXPECT_TRUE(verify_certificate(w, delta, r.h));
    EXPECT_EQ(r.bound, r.h.mass(w));
  }
}

TEST(Alpha, MonotoneInDeltaOnFixedGrid) {
  std::mt19937_64 rng(62);
  AlphaOptions grid_only;
  grid_only.resolution = 4;
  grid_only.refine_levels = 0;
  for (int trial = 0; trial < 10; ++trial) {
    auto w = reference::random_graphon(rng, 4);
    Rational prev = -1;
    for (const auto& delta : reference::quarter_grid()) {
      auto r = alpha_lower(w, delta, grid_only);
      EXPECT_GE(r.bound, prev);
      prev = r.bound;
    }
  }
}

TEST(Alpha, RefinementNeverLosesMass) {
  std::mt19937_64 rng(63);
  AlphaOptions grid_only, refined;
  grid_only.resolution = refined.resolution = 3;
  grid_only.refine_levels = 0;
  for (int trial = 0; trial < 10; ++trial) {
    auto w = reference::random_graphon(rng, 3);
    const Rational delta = q(1, 3);
    auto a = alpha_lower(w, delta, grid_only), b = alpha_lower(w, delta, refined);
    EXPECT_GE(b.bound, a.bound);
    EXPECT_TRUE(verify_certificate(w, delta, b.h));
  }
}

TEST(Certificate, HandCases) {
  EXPECT_TRUE(verify_certificate(bip2(), q(0), PartWeighting{{q(0), q(0)}}));
  EXPECT_FALSE(verify_certificate(constant_graphon(q(1)), q(1, 2), PartWeighting::ones(1)));
  EXPECT_TRUE(verify_certificate(constant_graphon(q(1, 2)), q(1, 2), PartWeighting::ones(1)));
  EXPECT_THROW(verify_certificate(bip2(), q(0), PartWeighting::ones(3)), AlignmentError);
  // int hWh for h = (1, 1/2) on bip2: 2 * (1/2)(1/2)(1)(1/2) = 1/4
  EXPECT_EQ(weighted_edge_mass(bip2(), PartWeighting{{q(1), q(1, 2)}}), q(1, 4));
}

TEST(Peel, ConstantGraphon) {
  auto none = low_degree_peel(constant_graphon(q(1, 2)), q(1, 3));
  EXPECT_TRUE(none.peeled.empty());
  EXPECT_EQ(none.measure, q(0));
  auto all = low_degree_peel(constant_graphon(q(1, 2)), q(1, 2));
  EXPECT_EQ(all.peeled, std::vector<std::size_t>{0});
  ASSERT_EQ(all.layers.size(), 1u);
  EXPECT_TRUE(all.outside_degrees_exceed);
  EXPECT_TRUE(all.density_bound_holds);
}

TEST(Peel, PendantPart) {
  auto w = StepKernel::equal_parts(3, {q(1), q(1), q(0), q(1), q(1), q(1, 10), q(0), q(1, 10), q(0)});
  auto r = low_degree_peel(w, q(1, 10));
  EXPECT_EQ(r.peeled, std::vector<std::size_t>{2});
  ASSERT_GE(r.layers.size(), 1u);
  EXPECT_EQ(r.layers[0], std::vector<std::size_t>{2});
  EXPECT_EQ(r.measure, q(1, 3));
  EXPECT_EQ(r.internal_mass, q(0));
  EXPECT_TRUE(r.outside_degrees_exceed);
}

TEST(Peel, Cascade) {
  // a chain 0 - 1 - 2 - 3: part 1 only becomes light once part 0 is gone
  auto w = StepKernel::equal_parts(4, {q(0), q(1, 4), q(0), q(0),  //
                                       q(1, 4), q(0), q(1, 2), q(0),  //
                                       q(0), q(1, 2), q(0), q(1),  //
                                       q(0), q(0), q(1), q(1)});
  auto r = low_degree_peel(w, q(1, 8));
  ASSERT_EQ(r.layers.size(), 2u);
  EXPECT_EQ(r.layers[0], std::vector<std::size_t>{0});
  EXPECT_EQ(r.layers[1], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.peeled, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.measure, q(1, 2));
  EXPECT_EQ(r.internal_mass, q(1, 32));
  EXPECT_TRUE(r.density_bound_holds);
  EXPECT_TRUE(r.outside_degrees_exceed);
}

TEST(Peel, PropertiesOnRandomInstances) {
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 40; ++trial) {
    auto w = reference::random_graphon(rng, 6);
    const Rational d0 = q(trial % 5, 8);
    auto r = low_degree_peel(w, d0);
    EXPECT_TRUE(r.density_bound_holds);
    EXPECT_TRUE(r.outside_degrees_exceed);
    EXPECT_LE(r.layers.size(), w.parts() + 1);
    for (std::size_t i = 1; i < r.layers.size(); ++i)
      EXPECT_TRUE(std::includes(r.layers[i].begin(), r.layers[i].end(), r.layers[i - 1].begin(),
                                r.layers[i - 1].end()));
    // the indicator of the peeled set certifies alpha at threshold 2 d0 / |A|
    if (r.measure > 0) {
      auto h = PartWeighting::indicator(w.parts(), r.peeled);
      EXPECT_TRUE(verify_certificate(w, 2 * d0 / r.measure, h));
    }
  }
}

TEST(Peel, Errors) {
  EXPECT_THROW(low_degree_peel(bip2(), q(-1)), DomainError);
  EXPECT_THROW(low_degree_peel(constant_kernel(q(2)), q(1)), DomainError);
}
