#pragma once

// Slow, obviously-correct reference computations and seeded instance generators.
// These are the independent oracles behind the test suites and the `reproduce`
// battery; nothing in the fast paths calls into this header.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "graphon/graph.hpp"
#include "graphon/kernel.hpp"
#include "graphon/rational.hpp"

namespace graphon::reference {

/// Sum over all m^{|H|} assignments in lexicographic order.
template <class Scalar>
Scalar assignment_sum(const SimpleGraph& h, std::size_t m, std::span<const Scalar> edge_values,
                        std::span<const std::vector<Scalar>> weights) {
  const int n = h.order();
  std::vector<std::size_t> phi(static_cast<std::size_t>(n), 0);
  Scalar total(0);
  for (;;) {
    Scalar term(1);
    for (int v = 0; v < n; ++v) term *= weights[v][phi[v]];
    for (auto [u, v] : h.edges()) term *= edge_values[phi[u] * m + phi[v]];
    total += term;
    int d = n - 1;
    while (d >= 0 && ++phi[d] == m) phi[d--] = 0;
    if (d < 0) break;
  }
  return total;
}

inline Rational density(const SimpleGraph& h, const StepKernel& w) {
  std::vector<std::vector<Rational>> weights(static_cast<std::size_t>(h.order()),
                                             std::vector<Rational>(w.sizes().begin(), w.sizes().end()));
  return assignment_sum<Rational>(h, w.parts(), w.values(), weights);
}

/// h-weighted assignment sum: integral of prod_v h(x_v) prod_{uv} W(x_u, x_v).
inline Rational weighted_density(const SimpleGraph& h, const StepKernel& w, const PartWeighting& hw) {
  std::vector<Rational> wv(w.parts());
  for (std::size_t j = 0; j < w.parts(); ++j) wv[j] = hw.weights[j] * w.size(j);
  std::vector<std::vector<Rational>> weights(static_cast<std::size_t>(h.order()), wv);
  return assignment_sum<Rational>(h, w.parts(), w.values(), weights);
}

/// Cut norm by enumerating every pair (S, T) of part sets.
inline Rational cut_norm_full(const StepKernel& u) {
  const std::size_t m = u.parts();
  std::vector<Rational> a(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a[i * m + j] = u.size(i) * u.size(j) * u.value(i, j);
  Rational best = 0;
  const std::uint64_t total = std::uint64_t{1} << m;
  std::vector<Rational> col(m);
  for (std::uint64_t s = 0; s < total; ++s) {
    for (std::size_t j = 0; j < m; ++j) {
      col[j] = 0;
      for (std::size_t i = 0; i < m; ++i)
        if ((s >> i) & 1u) col[j] += a[i * m + j];
    }
    for (std::uint64_t t = 0; t < total; ++t) {
      Rational v = 0;
      for (std::size_t j = 0; j < m; ++j)
        if ((t >> j) & 1u) v += col[j];
      if (abs_of(v) > best) best = abs_of(v);
    }
  }
  return best;
}

/// Brute-force injective homomorphism count of H into a 0/1 adjacency matrix.
inline std::int64_t injective_count(const SimpleGraph& h, int n, std::span<const std::int64_t> adj) {
  const int k = h.order();
  std::vector<int> phi(static_cast<std::size_t>(k), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::int64_t count = 0;
  auto place = [&](auto&& self, int v) -> void {
    if (v == k) {
      ++count;
      return;
    }
    for (int x = 0; x < n; ++x) {
      if (used[x]) continue;
      bool ok = true;
      for (int u : h.neighbors(v))
        if (u < v && adj[static_cast<std::size_t>(phi[u]) * n + x] == 0) { ok = false; break; }
      if (!ok) continue;
      used[x] = 1;
      phi[v] = x;
      self(self, v + 1);
      used[x] = 0;
    }
  };
  place(place, 0);
  return count;
}

// ---------------------------------------------------------------------------
// Seeded instance generators.

/// Part sizes proportional to integers drawn from 1..4.
inline std::vector<Rational> random_sizes(std::mt19937_64& rng, std::size_t m) {
  std::uniform_int_distribution<long> d(1, 4);
  std::vector<long> raw(m);
  long total = 0;
  for (auto& r : raw) total += (r = d(rng));
  std::vector<Rational> out;
  for (long r : raw) {
    Rational q(r, total);
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

/// Symmetric values drawn uniformly from `grid`.
inline std::vector<Rational> random_values(std::mt19937_64& rng, std::size_t m, std::span<const Rational> grid) {
  std::uniform_int_distribution<std::size_t> d(0, grid.size() - 1);
  std::vector<Rational> v(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) v[i * m + j] = v[j * m + i] = grid[d(rng)];
  return v;
}

inline const std::vector<Rational>& quarter_grid() {
  static const std::vector<Rational> g{Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)};
  return g;
}

inline const std::vector<Rational>& signed_quarter_grid() {
  static const std::vector<Rational> g{Rational(-1),   Rational(-3, 4), Rational(-1, 2), Rational(-1, 4), Rational(0),
                                       Rational(1, 4), Rational(1, 2),  Rational(3, 4),  Rational(1)};
  return g;
}

/// Step graphon with 1..max_parts parts, random sizes, values in {0, 1/4, ..., 1}.
inline StepKernel random_graphon(std::mt19937_64& rng, std::size_t max_parts) {
  std::uniform_int_distribution<std::size_t> dm(1, max_parts);
  const std::size_t m = dm(rng);
  return StepKernel(random_sizes(rng, m), random_values(rng, m, quarter_grid()));
}

/// Signed step kernel with exactly m parts, values in {-1, -3/4, ..., 1}.
inline StepKernel random_kernel(std::mt19937_64& rng, std::size_t m) {
  return StepKernel(random_sizes(rng, m), random_values(rng, m, signed_quarter_grid()));
}

inline PartWeighting random_weighting(std::mt19937_64& rng, std::size_t m) {
  std::uniform_int_distribution<long> d(0, 4);
  PartWeighting h{std::vector<Rational>(m)};
  bool any = false;
  for (auto& x : h.weights) {
    x = Rational(d(rng), 4);
    x.canonicalize();
    any = any || x != 0;
  }
  if (!any) h.weights[0] = 1;
  return h;
}

}  // namespace graphon::reference
