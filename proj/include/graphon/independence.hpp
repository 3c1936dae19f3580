#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "graphon/hom.hpp"
#include "graphon/kernel.hpp"

namespace graphon {

/// integral of h(x) W(x,y) h(y) for a part-aligned h.
inline Rational weighted_edge_mass(const StepKernel& w, const PartWeighting& h) {
  h.check_against(w);
  const std::size_t m = w.parts();
  Rational total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (h.weights[i] == 0) continue;
    Rational row = 0;
    for (std::size_t j = 0; j < m; ++j) row += w.value(i, j) * w.size(j) * h.weights[j];
    total += h.weights[i] * w.size(i) * row;
  }
  return total;
}

/// True iff h lies in A(W, delta), i.e. int hWh <= delta ||h||_1^2.
inline bool verify_certificate(const StepKernel& w, const Rational& delta, const PartWeighting& h) {
  const Rational mass = h.mass(w);
  return weighted_edge_mass(w, h) <= delta * mass * mass;
}

struct AlphaOptions {
  unsigned resolution = 8;
  unsigned refine_levels = 4;  // halvings of the step during local improvement
  unsigned max_sweeps = 100;
  std::uint64_t budget = kDefaultBudget;
};

struct AlphaResult {
  Rational bound;  // ||h||_1 of the certificate
  PartWeighting h;
};

/// Lower bound on alpha_delta(W): exhaustive search over h on the grid
/// {0, 1/r, ..., 1}^m (lexicographically least h among ties), then first-improvement
/// coordinate ascent with steps 1/r, 1/(2r), ... that keeps the constraint exact.
inline AlphaResult alpha_lower(const StepKernel& w, const Rational& delta, const AlphaOptions& opts = {}) {
  if (delta < 0) throw DomainError("alpha_lower: delta must be non-negative");
  if (!w.is_graphon()) throw DomainError("alpha_lower: kernel must be a graphon");
  if (opts.resolution == 0) throw DomainError("alpha_lower: resolution must be positive");
  const std::size_t m = w.parts();
  const std::uint64_t side = opts.resolution + 1u;
  std::uint64_t grid = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (grid > opts.budget / side)
      throw CapacityError("alpha_lower: grid of (" + std::to_string(side) + ")^" + std::to_string(m) +
                          " points exceeds budget");
    grid *= side;
  }
  // Integer grid coordinates; the objective and the constraint are evaluated exactly.
  std::vector<Rational> mass_coef(m);  // s_j / r
  std::vector<Rational> quad(m * m);   // s_i s_j W_ij / r^2
  const Rational r(static_cast<long>(opts.resolution));
  for (std::size_t i = 0; i < m; ++i) {
    mass_coef[i] = w.size(i) / r;
    for (std::size_t j = 0; j < m; ++j) quad[i * m + j] = w.size(i) * w.size(j) * w.value(i, j) / (r * r);
  }
  std::vector<unsigned> digits(m, 0), best_digits(m, 0);
  Rational best = 0;
  for (std::uint64_t g = 0; g < grid; ++g) {
    Rational mass = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (digits[i]) mass += mass_coef[i] * digits[i];
    if (mass > best) {
      Rational q = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (!digits[i]) continue;
        for (std::size_t j = 0; j < m; ++j)
          if (digits[j]) q += quad[i * m + j] * (digits[i] * digits[j]);
      }
      if (q <= delta * mass * mass) {
        best = mass;
        best_digits = digits;
      }
    }
    // lexicographic order: last coordinate fastest
    for (std::size_t d = m; d-- > 0;) {
      if (++digits[d] <= opts.resolution) break;
      digits[d] = 0;
    }
  }
  PartWeighting h{std::vector<Rational>(m)};
  for (std::size_t i = 0; i < m; ++i) h.weights[i] = Rational(static_cast<long>(best_digits[i])) / r;

  // coordinate ascent on finer steps
  Rational step = Rational(1) / r;
  for (unsigned level = 0; level <= opts.refine_levels; ++level, step /= 2) {
    if (level == 0) continue;  // the grid is already exhaustive at step 1/r
    for (unsigned sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      bool moved = false;
      for (std::size_t i = 0; i < m; ++i) {
        if (h.weights[i] + step > 1) continue;
        PartWeighting trial = h;
        trial.weights[i] += step;
        if (verify_certificate(w, delta, trial)) {
          h = std::move(trial);
          moved = true;
        }
      }
      if (!moved) break;
    }
  }
  return {h.mass(w), std::move(h)};
}

struct PeelResult {
  std::vector<std::size_t> peeled;               // A, sorted part indices
  std::vector<std::vector<std::size_t>> layers;  // A_1 <= A_2 <= ... up to the fixpoint
  Rational measure;                              // |A|
  Rational internal_mass;                        // integral of W over A x A
  bool outside_degrees_exceed = true;            // every part outside A has degree > d0 into [0,1] \ A
  bool density_bound_holds = true;               // internal_mass <= 2 |A| d0
};

/// Iterated low-degree peeling: A_0 = {} and A_i collects the parts whose degree
/// into the complement of A_{i-1} is at most d0.
inline PeelResult low_degree_peel(const StepKernel& w, const Rational& d0) {
  if (d0 < 0) throw DomainError("low_degree_peel: d0 must be non-negative");
  if (!w.is_graphon()) throw DomainError("low_degree_peel: kernel must be a graphon");
  const std::size_t m = w.parts();
  std::vector<char> in_prev(m, 0);
  auto degree_outside = [&](std::size_t j, const std::vector<char>& set) {
    Rational deg = 0;
    for (std::size_t t = 0; t < m; ++t)
      if (!set[t]) deg += w.size(t) * w.value(j, t);
    return deg;
  };
  PeelResult out;
  for (std::size_t iter = 0; iter <= m; ++iter) {
    std::vector<char> next(m, 0);
    std::vector<std::size_t> layer;
    for (std::size_t j = 0; j < m; ++j)
      if (degree_outside(j, in_prev) <= d0) {
        next[j] = 1;
        layer.push_back(j);
      }
    if (iter > 0 && next == in_prev) break;
    out.layers.push_back(layer);
    in_prev = std::move(next);
  }
  for (std::size_t j = 0; j < m; ++j)
    if (in_prev[j]) {
      out.peeled.push_back(j);
      out.measure += w.size(j);
    }
  for (std::size_t j = 0; j < m; ++j)
    if (!in_prev[j] && !(degree_outside(j, in_prev) > d0)) out.outside_degrees_exceed = false;
  for (std::size_t i : out.peeled)
    for (std::size_t j : out.peeled) out.internal_mass += w.size(i) * w.size(j) * w.value(i, j);
  out.density_bound_holds = out.internal_mass <= 2 * out.measure * d0;
  return out;
}

}  // namespace graphon
