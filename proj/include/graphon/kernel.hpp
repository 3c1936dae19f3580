#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "graphon/rational.hpp"

namespace graphon {

/// A symmetric step kernel: [0,1] is cut into consecutive intervals of the given
/// sizes and the kernel is constant on every tile. A kernel whose values all lie
/// in [0,1] is a step graphon.
class StepKernel {
 public:
  StepKernel() : StepKernel({Rational(1)}, {Rational(0)}) {}

  /// `values` is row-major m x m.
  StepKernel(std::vector<Rational> sizes, std::vector<Rational> values)
      : sizes_(std::move(sizes)), values_(std::move(values)) {
    const std::size_t m = sizes_.size();
    if (m == 0) throw DomainError("step kernel needs at least one part");
    if (values_.size() != m * m)
      throw DomainError("value matrix must be " + std::to_string(m) + "x" + std::to_string(m));
    Rational total = 0;
    for (const auto& s : sizes_) {
      if (s <= 0) throw DomainError("part sizes must be positive");
      total += s;
    }
    if (total != 1) throw DomainError("part sizes must sum to 1 (got " + to_string(total) + ")");
    graphon_ = true;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const Rational& v = values_[i * m + j];
        if (v != values_[j * m + i]) throw DomainError("value matrix must be symmetric");
        if (v < 0 || v > 1) graphon_ = false;
      }
  }

  /// m equal parts.
  static StepKernel equal_parts(std::size_t m, std::vector<Rational> values) {
    return StepKernel(std::vector<Rational>(m, Rational(1, static_cast<unsigned long>(m))), std::move(values));
  }

  std::size_t parts() const { return sizes_.size(); }
  const Rational& size(std::size_t i) const { return sizes_[i]; }
  const Rational& value(std::size_t i, std::size_t j) const { return values_[i * sizes_.size() + j]; }
  std::span<const Rational> sizes() const { return sizes_; }
  std::span<const Rational> values() const { return values_; }
  bool is_graphon() const { return graphon_; }

  Rational max_abs() const {
    Rational best = 0;
    for (const auto& v : values_) best = std::max(best, abs_of(v));
    return best;
  }

  bool same_partition(const StepKernel& other) const { return sizes_ == other.sizes_; }

  friend bool operator==(const StepKernel& a, const StepKernel& b) {
    return a.sizes_ == b.sizes_ && a.values_ == b.values_;
  }

 private:
  std::vector<Rational> sizes_;
  std::vector<Rational> values_;
  bool graphon_ = true;
};

/// A step function h with values in [0,1], aligned with a kernel's partition.
struct PartWeighting {
  std::vector<Rational> weights;

  static PartWeighting ones(std::size_t m) { return {std::vector<Rational>(m, Rational(1))}; }

  static PartWeighting indicator(std::size_t m, std::span<const std::size_t> parts) {
    PartWeighting h{std::vector<Rational>(m, Rational(0))};
    for (auto p : parts) {
      if (p >= m) throw DomainError("part index out of range");
      h.weights[p] = 1;
    }
    return h;
  }

  void check_against(const StepKernel& w) const {
    if (weights.size() != w.parts())
      throw AlignmentError("weighting has " + std::to_string(weights.size()) + " entries, kernel has " +
                           std::to_string(w.parts()) + " parts");
    for (const auto& x : weights)
      if (x < 0 || x > 1) throw DomainError("weights must lie in [0,1]");
  }

  /// ||h||_1 with respect to the kernel's part sizes.
  Rational mass(const StepKernel& w) const {
    check_against(w);
    Rational total = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) total += weights[j] * w.size(j);
    return total;
  }
};

/// k graphons on one partition summing pointwise to 1.
class ColoringTemplate {
 public:
  explicit ColoringTemplate(std::vector<StepKernel> colors) : colors_(std::move(colors)) {
    if (colors_.empty()) throw DomainError("template needs at least one color");
    const auto& first = colors_.front();
    const std::size_t m = first.parts();
    std::vector<Rational> total(m * m, Rational(0));
    for (std::size_t c = 0; c < colors_.size(); ++c) {
      const auto& w = colors_[c];
      if (!w.same_partition(first)) throw AlignmentError("template colors must share one partition");
      if (!w.is_graphon()) throw DomainError("color " + std::to_string(c + 1) + " is not a graphon");
      for (std::size_t i = 0; i < m * m; ++i) total[i] += w.values()[i];
    }
    for (const auto& t : total)
      if (t != 1) throw DomainError("template colors do not sum to 1 (a tile sums to " + to_string(t) + ")");
  }

  std::size_t k() const { return colors_.size(); }
  const std::vector<StepKernel>& colors() const { return colors_; }
  const StepKernel& color(std::size_t i) const { return colors_[i]; }
  std::size_t parts() const { return colors_.front().parts(); }

 private:
  std::vector<StepKernel> colors_;
};

// ---------------------------------------------------------------------------
// Algebra of step kernels.

inline StepKernel constant_kernel(const Rational& c) { return StepKernel({Rational(1)}, {c}); }

inline StepKernel constant_graphon(const Rational& p) {
  if (p < 0 || p > 1) throw DomainError("constant graphon value must lie in [0,1], got " + to_string(p));
  return constant_kernel(p);
}

using KernelTerm = std::pair<Rational, StepKernel>;

/// Entrywise linear combination of kernels on a common partition.
inline StepKernel affine_combine(std::span<const KernelTerm> terms) {
  if (terms.empty()) throw DomainError("affine_combine needs at least one term");
  const StepKernel& base = terms.front().second;
  std::vector<Rational> values(base.values().size(), Rational(0));
  for (const auto& [coef, w] : terms) {
    if (!w.same_partition(base))
      throw AlignmentError("affine_combine: kernels live on different partitions (use common_refinement)");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += coef * w.values()[i];
  }
  return StepKernel(std::vector<Rational>(base.sizes().begin(), base.sizes().end()), std::move(values));
}

inline StepKernel affine_combine(std::initializer_list<KernelTerm> terms) {
  return affine_combine(std::span<const KernelTerm>(terms.begin(), terms.size()));
}

inline StepKernel scale(const Rational& c, const StepKernel& w) { return affine_combine({{c, w}}); }

/// Re-expresses `w` on a finer partition; piece i lies inside part `parent[i]`.
inline StepKernel pull_back(const StepKernel& w, std::span<const std::size_t> parent,
                            std::vector<Rational> piece_sizes) {
  const std::size_t n = parent.size();
  std::vector<Rational> values(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) values[a * n + b] = w.value(parent[a], parent[b]);
  return StepKernel(std::move(piece_sizes), std::move(values));
}

struct Refinement {
  std::vector<Rational> sizes;
  std::vector<std::size_t> first_parent;
  std::vector<std::size_t> second_parent;
};

/// Intersects the interval partitions of two kernels.
inline Refinement refine_partitions(std::span<const Rational> a, std::span<const Rational> b) {
  Refinement r;
  std::size_t i = 0, j = 0;
  Rational lo = 0, end_a = a[0], end_b = b[0];
  while (i < a.size() && j < b.size()) {
    const Rational hi = std::min(end_a, end_b);
    r.sizes.push_back(hi - lo);
    r.first_parent.push_back(i);
    r.second_parent.push_back(j);
    lo = hi;
    if (end_a == hi && ++i < a.size()) end_a += a[i];
    if (end_b == hi && ++j < b.size()) end_b += b[j];
  }
  return r;
}

inline std::pair<StepKernel, StepKernel> common_refinement(const StepKernel& w1, const StepKernel& w2) {
  auto r = refine_partitions(w1.sizes(), w2.sizes());
  return {pull_back(w1, r.first_parent, r.sizes), pull_back(w2, r.second_parent, r.sizes)};
}

/// Splits every part into r equal subparts.
inline StepKernel split_parts(const StepKernel& w, unsigned r) {
  if (r == 0) throw DomainError("split factor must be positive");
  std::vector<std::size_t> parent;
  std::vector<Rational> sizes;
  for (std::size_t i = 0; i < w.parts(); ++i)
    for (unsigned t = 0; t < r; ++t) {
      parent.push_back(i);
      sizes.push_back(w.size(i) / r);
    }
  return pull_back(w, parent, std::move(sizes));
}

/// Replaces every diagonal tile by the unweighted average of the values on
/// pairs i < j. Returns the new kernel and that average.
inline std::pair<StepKernel, Rational> diagonal_average(const StepKernel& w) {
  const std::size_t m = w.parts();
  if (m < 2) throw DomainError("diagonal_average needs at least two parts");
  Rational sum = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) sum += w.value(i, j);
  Rational delta = sum / Rational(static_cast<long>(m * (m - 1) / 2));
  std::vector<Rational> values(w.values().begin(), w.values().end());
  for (std::size_t i = 0; i < m; ++i) values[i * m + i] = delta;
  return {StepKernel(std::vector<Rational>(w.sizes().begin(), w.sizes().end()), std::move(values)), delta};
}

/// W[h]: parts reweighted by h and renormalized; parts with zero mass are dropped.
inline StepKernel subgraphon(const StepKernel& w, const PartWeighting& h) {
  const Rational mass = h.mass(w);
  if (mass == 0) throw DomainError("subgraphon: weighting has zero mass");
  std::vector<std::size_t> kept;
  std::vector<Rational> sizes;
  for (std::size_t j = 0; j < w.parts(); ++j) {
    if (h.weights[j] == 0) continue;
    kept.push_back(j);
    sizes.push_back(h.weights[j] * w.size(j) / mass);
  }
  return pull_back(w, kept, std::move(sizes));
}

/// U_z: U squeezed into [0,z]^2, zero elsewhere.
inline StepKernel corner_scale(const StepKernel& u, const Rational& z) {
  if (z <= 0 || z > 1) throw DomainError("corner_scale: z must lie in (0,1]");
  if (z == 1) return u;
  const std::size_t m = u.parts();
  std::vector<Rational> sizes;
  for (std::size_t i = 0; i < m; ++i) sizes.push_back(u.size(i) * z);
  sizes.push_back(1 - z);
  std::vector<Rational> values((m + 1) * (m + 1), Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) values[i * (m + 1) + j] = u.value(i, j);
  return StepKernel(std::move(sizes), std::move(values));
}

}  // namespace graphon
