#pragma once

// Weighted homomorphism sums
//
//   Z(H) = sum over phi: V(H) -> [m] of  prod_v w_v(phi(v)) * prod_{uv in E(H)} A(phi(u), phi(v))
//
// evaluated by variable elimination along a greedy min-fill order (a tree
// decomposition in disguise). The scalar type is a template parameter so the same
// engine serves exact rationals, integer counts and polynomial coefficients.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "graphon/graph.hpp"
#include "graphon/rational.hpp"

namespace graphon {

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

struct EvalOptions {
  std::uint64_t budget = kDefaultBudget;  // weighted assignment evaluations
  unsigned threads = 1;
};

struct EliminationPlan {
  std::vector<int> order;               // vertices in elimination order
  std::vector<std::vector<int>> scopes;  // neighbourhood of each vertex when eliminated
  int width = 0;                         // max scope size (treewidth bound)
};

/// Greedy min-fill elimination order; ties by min degree, then lowest index.
inline EliminationPlan plan_elimination(const SimpleGraph& h) {
  const int n = h.order();
  std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
  for (auto [u, v] : h.edges()) {
    adj[u].insert(v);
    adj[v].insert(u);
  }
  std::vector<char> gone(static_cast<std::size_t>(n), 0);
  EliminationPlan plan;
  for (int step = 0; step < n; ++step) {
    int best = -1;
    std::size_t best_fill = 0, best_deg = 0;
    for (int v = 0; v < n; ++v) {
      if (gone[v]) continue;
      std::size_t fill = 0;
      for (auto a = adj[v].begin(); a != adj[v].end(); ++a)
        for (auto b = std::next(a); b != adj[v].end(); ++b)
          if (!adj[*a].count(*b)) ++fill;
      if (best < 0 || fill < best_fill || (fill == best_fill && adj[v].size() < best_deg)) {
        best = v;
        best_fill = fill;
        best_deg = adj[v].size();
      }
    }
    std::vector<int> scope(adj[best].begin(), adj[best].end());
    for (int a : scope) {
      adj[a].erase(best);
      for (int b : scope)
        if (a != b) adj[a].insert(b);
    }
    adj[best].clear();
    gone[best] = 1;
    plan.width = std::max(plan.width, static_cast<int>(scope.size()));
    plan.order.push_back(best);
    plan.scopes.push_back(std::move(scope));
  }
  return plan;
}

/// Number of inner-loop evaluations for the plan with m parts; saturates.
inline std::uint64_t plan_cost(const EliminationPlan& plan, std::size_t m) {
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max() / 4;
  std::uint64_t total = 0;
  for (const auto& scope : plan.scopes) {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i <= scope.size(); ++i) {
      if (c > cap / std::max<std::size_t>(m, 1)) return cap;
      c *= m;
    }
    total += c;
    if (total > cap) return cap;
  }
  return total;
}

namespace detail {

template <class Scalar>
struct Factor {
  std::vector<int> scope;  // table is row-major, last scope variable fastest
  std::vector<Scalar> table;
};

inline std::size_t ipow(std::size_t base, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= base;
  return r;
}

// Reorders the factor so that `var` becomes the last (fastest) scope variable,
// the other variables keeping their relative order.
template <class Scalar>
Factor<Scalar> move_to_back(const Factor<Scalar>& f, int var, std::size_t m) {
  auto pos = static_cast<std::size_t>(std::find(f.scope.begin(), f.scope.end(), var) - f.scope.begin());
  const std::size_t k = f.scope.size();
  if (pos + 1 == k) return f;
  Factor<Scalar> out;
  for (std::size_t i = 0; i < k; ++i)
    if (i != pos) out.scope.push_back(f.scope[i]);
  out.scope.push_back(var);
  out.table.resize(f.table.size());
  // strides of the source factor
  std::vector<std::size_t> stride(k, 1);
  for (std::size_t i = k - 1; i-- > 0;) stride[i] = stride[i + 1] * m;
  std::vector<std::size_t> digits(k, 0);
  for (std::size_t idx = 0; idx < out.table.size(); ++idx) {
    // digits of idx in `out` order: out.scope = others..., var
    std::size_t rem = idx, src = 0;
    for (std::size_t t = k; t-- > 0;) {
      std::size_t d = rem % m;
      rem /= m;
      std::size_t src_pos = (t == k - 1) ? pos : (t < pos ? t : t + 1);
      src += d * stride[src_pos];
    }
    out.table[idx] = f.table[src];
  }
  return out;
}

template <class Scalar>
Scalar eliminate_all(const SimpleGraph& h, std::size_t m, std::span<const Scalar> edge_values,
                     std::span<const std::vector<Scalar>> weights, const EliminationPlan& plan) {
  const Scalar zero(0);
  std::vector<Factor<Scalar>> pool;
  pool.reserve(h.size());
  for (auto [u, v] : h.edges()) {
    Factor<Scalar> f;
    f.scope = {u, v};
    f.table.assign(edge_values.begin(), edge_values.end());
    pool.push_back(std::move(f));
  }
  Scalar result(1);
  for (std::size_t step = 0; step < plan.order.size(); ++step) {
    const int v = plan.order[step];
    const auto& w = weights[v];
    std::vector<Factor<Scalar>> involved;
    for (auto it = pool.begin(); it != pool.end();) {
      if (std::find(it->scope.begin(), it->scope.end(), v) != it->scope.end()) {
        involved.push_back(move_to_back(*it, v, m));
        it = pool.erase(it);
      } else {
        ++it;
      }
    }
    if (involved.empty()) {
      Scalar s(0);
      for (std::size_t x = 0; x < m; ++x) s += w[x];
      result *= s;
      continue;
    }
    std::vector<int> scope;
    for (const auto& f : involved)
      for (std::size_t i = 0; i + 1 < f.scope.size(); ++i) scope.push_back(f.scope[i]);
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());

    const std::size_t k = scope.size();
    const std::size_t nf = involved.size();
    // stride of each scope variable inside each involved factor (0 if absent)
    std::vector<std::vector<std::size_t>> stride(nf, std::vector<std::size_t>(k, 0));
    for (std::size_t f = 0; f < nf; ++f) {
      const auto& fs = involved[f].scope;
      std::size_t s = m;  // var itself has stride 1
      for (std::size_t i = fs.size() - 1; i-- > 0;) {
        auto pos = static_cast<std::size_t>(std::lower_bound(scope.begin(), scope.end(), fs[i]) - scope.begin());
        stride[f][pos] = s;
        s *= m;
      }
    }
    std::vector<std::size_t> nz;
    for (std::size_t x = 0; x < m; ++x)
      if (!(w[x] == zero)) nz.push_back(x);
    bool unit = false;
    if constexpr (std::is_arithmetic_v<Scalar>)
      unit = nz.size() == m && std::all_of(w.begin(), w.end(), [](const Scalar& s) { return s == Scalar(1); });

    Factor<Scalar> out;
    out.scope = scope;
    out.table.assign(ipow(m, k), zero);
    std::vector<std::size_t> digit(k, 0), base(nf, 0);
    Scalar term(0);
    for (std::size_t idx = 0; idx < out.table.size(); ++idx) {
      Scalar& acc = out.table[idx];
      if (unit && nf <= 3) {
        // plain dot product: unit weights over a machine scalar
        const Scalar* t0 = involved[0].table.data() + base[0];
        Scalar s(0);
        if (nf == 3) {
          const Scalar* t1 = involved[1].table.data() + base[1];
          const Scalar* t2 = involved[2].table.data() + base[2];
          for (std::size_t x = 0; x < m; ++x) s += t0[x] * t1[x] * t2[x];
        } else if (nf == 2) {
          const Scalar* t1 = involved[1].table.data() + base[1];
          for (std::size_t x = 0; x < m; ++x) s += t0[x] * t1[x];
        } else {
          for (std::size_t x = 0; x < m; ++x) s += t0[x];
        }
        acc = s;
      } else if (nf == 1) {
        const Scalar* t0 = involved[0].table.data() + base[0];
        for (std::size_t x : nz) {
          term = w[x];
          term *= t0[x];
          acc += term;
        }
      } else if (nf == 2) {
        const Scalar* t0 = involved[0].table.data() + base[0];
        const Scalar* t1 = involved[1].table.data() + base[1];
        for (std::size_t x : nz) {
          if (t0[x] == zero) continue;
          term = w[x];
          term *= t0[x];
          term *= t1[x];
          acc += term;
        }
      } else {
        for (std::size_t x : nz) {
          term = w[x];
          for (std::size_t f = 0; f < nf && !(term == zero); ++f) term *= involved[f].table[base[f] + x];
          acc += term;
        }
      }
      // advance odometer over scope (last scope variable fastest)
      for (std::size_t d = k; d-- > 0;) {
        for (std::size_t f = 0; f < nf; ++f) base[f] += stride[f][d];
        if (++digit[d] < m) break;
        for (std::size_t f = 0; f < nf; ++f) base[f] -= stride[f][d] * m;
        digit[d] = 0;
      }
    }
    if (k == 0) {
      result *= out.table[0];
    } else {
      pool.push_back(std::move(out));
    }
  }
  return result;
}

}  // namespace detail

/// Weighted homomorphism sum by variable elimination.
/// `edge_values` is the m x m symmetric matrix (row-major); `weights[v]` has m entries.
template <class Scalar>
Scalar weighted_hom_sum(const SimpleGraph& h, std::size_t m, std::span<const Scalar> edge_values,
                        std::span<const std::vector<Scalar>> weights, const EvalOptions& opts = {}) {
  if (edge_values.size() != m * m) throw AlignmentError("edge value matrix has wrong size");
  if (weights.size() != static_cast<std::size_t>(h.order())) throw AlignmentError("one weight vector per vertex required");
  for (const auto& w : weights)
    if (w.size() != m) throw AlignmentError("weight vector has wrong length");
  auto plan = plan_elimination(h);
  const std::uint64_t cost = plan_cost(plan, m);
  if (cost > opts.budget)
    throw CapacityError("homomorphism evaluation needs ~" + std::to_string(cost) +
                        " evaluations (elimination width " + std::to_string(plan.width) + ", " +
                        std::to_string(m) + " parts), budget is " + std::to_string(opts.budget));
  return detail::eliminate_all<Scalar>(h, m, edge_values, weights, plan);
}

}  // namespace graphon
