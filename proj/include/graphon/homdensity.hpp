#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphon/graph.hpp"
#include "graphon/hom.hpp"
#include "graphon/kernel.hpp"
#include "graphon/rational.hpp"

namespace graphon {

namespace detail {

inline std::vector<std::vector<Rational>> size_weights(const SimpleGraph& h, const StepKernel& w) {
  return std::vector<std::vector<Rational>>(static_cast<std::size_t>(h.order()),
                                            std::vector<Rational>(w.sizes().begin(), w.sizes().end()));
}

}  // namespace detail

/// t(H, W): exact homomorphism density of H in a step kernel.
inline Rational density(const SimpleGraph& h, const StepKernel& w, const EvalOptions& opts = {}) {
  auto weights = detail::size_weights(h, w);
  return weighted_hom_sum<Rational>(h, w.parts(), w.values(), weights, opts);
}

/// t_W^H(x_U) for x_U ranging over the given tuple of parts (the value is constant there).
inline Rational rooted_density(const SimpleGraph& h, std::span<const int> roots, const StepKernel& w,
                               std::span<const std::size_t> parts, const EvalOptions& opts = {}) {
  if (roots.size() != parts.size()) throw DomainError("one part index per root vertex required");
  for (int r : roots)
    if (r < 0 || r >= h.order()) throw DomainError("root vertex out of range");
  if (!h.is_independent(roots)) throw DomainError("root set must be independent");
  auto weights = detail::size_weights(h, w);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (parts[i] >= w.parts()) throw DomainError("part index out of range");
    auto& wv = weights[static_cast<std::size_t>(roots[i])];
    std::fill(wv.begin(), wv.end(), Rational(0));
    wv[parts[i]] = 1;
  }
  return weighted_hom_sum<Rational>(h, w.parts(), w.values(), weights, opts);
}

/// Coefficients c_0..c_D of a density expression as a polynomial in epsilon.
struct DeficitPolynomial {
  std::vector<Rational> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

  Rational operator()(const Rational& eps) const {
    Rational acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * eps + *it;
    return acc;
  }

  DeficitPolynomial& operator+=(const DeficitPolynomial& o) {
    if (o.coeffs.size() > coeffs.size()) coeffs.resize(o.coeffs.size(), Rational(0));
    for (std::size_t i = 0; i < o.coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
  }

  DeficitPolynomial scaled(const Rational& c) const {
    DeficitPolynomial out = *this;
    for (auto& x : out.coeffs) x *= c;
    return out;
  }
};

/// t(H, p + eps U) = sum over F subset E(H) of t(H[F], U) p^{|E(H)|-|F|} eps^{|F|},
/// H[F] being the spanning subgraph with edge set F.
inline DeficitPolynomial epsilon_expansion(const SimpleGraph& h, const Rational& p, const StepKernel& u,
                                           const EvalOptions& opts = {}) {
  const std::size_t e = h.size();
  if (e >= 63 || (std::uint64_t{1} << e) > opts.budget)
    throw CapacityError("epsilon expansion over 2^" + std::to_string(e) + " edge subsets exceeds budget");
  std::vector<Rational> ppow(e + 1);
  ppow[0] = 1;
  for (std::size_t i = 1; i <= e; ++i) ppow[i] = ppow[i - 1] * p;
  DeficitPolynomial poly{std::vector<Rational>(e + 1, Rational(0))};
  const std::uint64_t subsets = std::uint64_t{1} << e;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    const auto j = static_cast<std::size_t>(__builtin_popcountll(mask));
    Rational t = mask == 0 ? Rational(1) : density(h.spanning_subgraph(mask), u, opts);
    if (t == 0) continue;
    poly.coeffs[j] += t * ppow[e - j];
  }
  return poly;
}

/// n copies of H glued along the independent set U. Copy 0 keeps H's labels;
/// later copies append their non-U vertices in increasing order.
inline SimpleGraph reflect(const SimpleGraph& h, std::span<const int> u, int n) {
  if (n < 1) throw DomainError("reflect: number of copies must be positive");
  for (int r : u)
    if (r < 0 || r >= h.order()) throw DomainError("reflect: vertex out of range");
  if (!h.is_independent(u)) throw DomainError("reflect: glued set must be independent");
  std::vector<char> in_u(static_cast<std::size_t>(h.order()), 0);
  for (int r : u) in_u[r] = 1;
  std::vector<Edge> edges(h.edges().begin(), h.edges().end());
  int next = h.order();
  for (int c = 1; c < n; ++c) {
    std::vector<int> label(static_cast<std::size_t>(h.order()));
    for (int v = 0; v < h.order(); ++v) label[v] = in_u[v] ? v : next++;
    for (auto [a, b] : h.edges()) edges.emplace_back(label[a], label[b]);
  }
  return SimpleGraph(next, std::move(edges));
}

/// K_{2a,2b} with b pendant 5-cycles, each sharing one distinct vertex of the 2b side.
/// Vertices 0..2a-1 form the 2a side, 2a..2a+2b-1 the 2b side.
inline SimpleGraph build_K2a2bC5(int a, int b) {
  if (a < 1 || b < 1) throw DomainError("build_K2a2bC5: a and b must be positive");
  const int left = 2 * a, right = 2 * b;
  std::vector<Edge> edges;
  for (int i = 0; i < left; ++i)
    for (int j = 0; j < right; ++j) edges.emplace_back(i, left + j);
  int next = left + right;
  for (int t = 0; t < b; ++t) {
    int ring[5] = {left + t, next, next + 1, next + 2, next + 3};
    next += 4;
    for (int i = 0; i < 5; ++i) edges.emplace_back(ring[i], ring[(i + 1) % 5]);
  }
  return SimpleGraph(next, std::move(edges));
}

/// Sum of t(H, W_i) over the colors of a template.
inline Rational mono_sum(const ColoringTemplate& t, const SimpleGraph& h, const EvalOptions& opts = {}) {
  Rational total = 0;
  for (const auto& w : t.colors()) total += density(h, w, opts);
  return total;
}

/// k^{1-|E(H)|}: the monochromatic density of the uniformly random coloring.
inline Rational random_coloring_value(std::size_t k, const SimpleGraph& h) {
  const Rational kq(static_cast<long>(k));
  if (h.size() == 0) return kq;
  return Rational(1) / rpow(kq, h.size() - 1);
}

/// mono_sum - k^{1-|E(H)|}; negative means the template shows H is not k-common.
inline Rational commonness_margin(const ColoringTemplate& t, const SimpleGraph& h, const EvalOptions& opts = {}) {
  return mono_sum(t, h, opts) - random_coloring_value(t.k(), h);
}

}  // namespace graphon
