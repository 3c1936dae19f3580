#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "graphon/constructions.hpp"
#include "graphon/reference.hpp"
#include "graphon/spectral.hpp"

using namespace graphon;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }

StepKernel bip2() { return StepKernel::equal_parts(2, {q(0), q(1), q(1), q(0)}); }

void expect_invariants(const StepKernel& w, const SpectralDecomposition& d) {
  const double tol = 1e-8;
  const std::size_t m = w.parts();
  for (std::size_t i = 0; i < d.rank(); ++i) {
    for (std::size_t k = 0; k < d.rank(); ++k) {
      double ip = 0;
      for (std::size_t j = 0; j < m; ++j) ip += w.size(j).get_d() * d.eigenfunctions[i][j] * d.eigenfunctions[k][j];
      EXPECT_NEAR(ip, i == k ? 1.0 : 0.0, tol);
    }
    double beta_sq = 0;
    for (std::size_t j = 0; j < m; ++j) beta_sq += w.size(j).get_d() * d.betas[i][j] * d.betas[i][j];
    EXPECT_NEAR(beta_sq, d.eigenvalues[i] * d.eigenvalues[i], tol);
    if (i > 0) {
      EXPECT_GE(std::fabs(d.eigenvalues[i - 1]) + tol, std::fabs(d.eigenvalues[i]));
    }
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      double v = 0;
      for (std::size_t i = 0; i < d.rank(); ++i) v += d.eigenvalues[i] * d.eigenfunctions[i][a] * d.eigenfunctions[i][b];
      EXPECT_NEAR(v, w.value(a, b).get_d(), tol);
    }
  if (w.is_graphon()) {
    const double top = d.rank() ? d.eigenvalues[0] : 0.0;
    EXPECT_GE(top + tol, density(graphs::edge(), w).get_d());
    // sum_i beta_i(x)^2 <= 1 for graphons
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0;
      for (std::size_t i = 0; i < d.rank(); ++i) s += d.betas[i][j] * d.betas[i][j];
      EXPECT_LE(s, 1.0 + tol);
    }
  }
}

}  // namespace

TEST(Decompose, Constant) {
  auto d = decompose(constant_graphon(q(1, 3)));
  ASSERT_EQ(d.rank(), 1u);
  EXPECT_NEAR(d.eigenvalues[0], 1.0 / 3, 1e-12);
  EXPECT_NEAR(d.eigenfunctions[0][0], 1.0, 1e-12);
  EXPECT_EQ(decompose(constant_graphon(q(0))).rank(), 0u);
}

TEST(Decompose, BipartiteOrderedPositiveFirst) {
  auto d = decompose(bip2());
  ASSERT_EQ(d.rank(), 2u);
  EXPECT_NEAR(d.eigenvalues[0], 0.5, 1e-12);
  EXPECT_NEAR(d.eigenvalues[1], -0.5, 1e-12);
  EXPECT_NEAR(d.eigenfunctions[1][0], 1.0, 1e-12);
  EXPECT_NEAR(d.eigenfunctions[1][1], -1.0, 1e-12);
  expect_invariants(bip2(), d);
}

TEST(Decompose, RejectsBadTolerance) { EXPECT_THROW(decompose(bip2(), 0.0), DomainError); }

TEST(Decompose, InvariantsOnRandomKernels) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    auto w = trial % 2 ? reference::random_graphon(rng, 6) : reference::random_kernel(rng, 5);
    expect_invariants(w, decompose(w));
  }
  auto u = odd_girth_kernel(3);
  auto d = decompose(u);
  expect_invariants(u, d);
  double sum = 0;
  for (double l : d.eigenvalues) sum += l;
  EXPECT_NEAR(sum, 0.0, 1e-9);
}

TEST(CycleTrace, HandValues) {
  auto c = cycle_trace_check(constant_graphon(q(1, 2)), 4);
  EXPECT_EQ(c.exact, q(1, 16));
  EXPECT_NEAR(c.spectral, 1.0 / 16, 1e-12);
  auto b3 = cycle_trace_check(bip2(), 3);
  EXPECT_EQ(b3.exact, q(0));
  EXPECT_NEAR(b3.spectral, 0.0, 1e-12);
  auto b4 = cycle_trace_check(bip2(), 4);
  EXPECT_EQ(b4.exact, q(1, 8));
  EXPECT_NEAR(b4.spectral, 0.125, 1e-12);
  EXPECT_THROW(cycle_trace_check(bip2(), 2), DomainError);
}

TEST(CycleTrace, OddGirthKernelClosedForm) {
  for (int ell : {3, 5, 7}) {
    auto c = cycle_trace_check(odd_girth_kernel(ell), ell);
    EXPECT_EQ(c.exact, Rational(2) / rpow(Rational(ell), ell - 1));
    EXPECT_NEAR(c.spectral, c.exact.get_d(), 1e-10);
  }
}

TEST(RootedCycle, HandValues) {
  auto c = rooted_cycle_identity(constant_graphon(q(1, 2)), 4, 0);
  EXPECT_EQ(c.direct, q(1, 16));
  EXPECT_NEAR(c.spectral, 1.0 / 16, 1e-12);
  for (std::size_t part : {0u, 1u}) {
    auto b = rooted_cycle_identity(bip2(), 4, part);
    EXPECT_EQ(b.direct, q(1, 8));
    EXPECT_NEAR(b.spectral, 0.125, 1e-12);
  }
}

TEST(RootedCycle, RandomGraphonsEveryPart) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 15; ++trial) {
    auto w = reference::random_graphon(rng, 6);
    for (std::size_t part = 0; part < w.parts(); ++part) {
      auto c = rooted_cycle_identity(w, 5, part);
      EXPECT_NEAR(c.spectral, c.direct.get_d(), 1e-8);
    }
  }
}

TEST(FourthMoment, NonTopEigenvaluesBounded) {
  // |lambda_i| <= (t(K22) - p^4)^{1/4} for every eigenvalue after the first
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    auto w = reference::random_graphon(rng, 6);
    const Rational p = density(graphs::edge(), w);
    const Rational gap = density(graphs::cycle(4), w) - rpow(p, 4);
    ASSERT_GE(gap, 0);
    const double bound = std::pow(gap.get_d(), 0.25) + 1e-8;
    auto d = decompose(w);
    for (std::size_t i = 1; i < d.rank(); ++i) EXPECT_LE(std::fabs(d.eigenvalues[i]), bound);
  }
}
