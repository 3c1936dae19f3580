#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "graphon/rational.hpp"

namespace graphon {

using Edge = std::pair<int, int>;

/// A finite simple graph on vertices 0..order()-1. Edges are stored with u < v,
/// sorted lexicographically.
class SimpleGraph {
 public:
  SimpleGraph() : SimpleGraph(1, {}) {}

  SimpleGraph(int vertex_count, std::vector<Edge> edges) : n_(vertex_count) {
    if (vertex_count < 1) throw DomainError("graph must have at least one vertex");
    for (auto& [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n_ || v >= n_)
        throw DomainError("edge endpoint out of range: " + std::to_string(u) + "-" + std::to_string(v));
      if (u == v) throw DomainError("loop at vertex " + std::to_string(u));
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
      throw DomainError("duplicate edge");
    edges_ = std::move(edges);
    adj_.assign(static_cast<std::size_t>(n_), {});
    for (auto [u, v] : edges_) {
      adj_[u].push_back(v);
      adj_[v].push_back(u);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
  }

  int order() const { return n_; }
  std::size_t size() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }

  bool adjacent(int u, int v) const {
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
  }

  bool is_independent(std::span<const int> vertices) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      for (std::size_t j = i + 1; j < vertices.size(); ++j)
        if (vertices[i] == vertices[j] || adjacent(vertices[i], vertices[j])) return false;
    return true;
  }

  /// Spanning subgraph keeping the edges whose bit is set in `mask`.
  SimpleGraph spanning_subgraph(std::uint64_t mask) const {
    std::vector<Edge> kept;
    for (std::size_t i = 0; i < edges_.size(); ++i)
      if ((mask >> i) & 1u) kept.push_back(edges_[i]);
    return SimpleGraph(n_, std::move(kept));
  }

  friend bool operator==(const SimpleGraph& a, const SimpleGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 1;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

namespace graphs {

inline SimpleGraph edge() { return SimpleGraph(2, {{0, 1}}); }

inline SimpleGraph complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return SimpleGraph(n, std::move(e));
}

inline SimpleGraph cycle(int n) {
  if (n < 3) throw DomainError("cycle needs at least 3 vertices");
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return SimpleGraph(n, std::move(e));
}

/// Path on n vertices (n-1 edges); path(3) is the cherry, path(4) the 3-edge path.
inline SimpleGraph path(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return SimpleGraph(n, std::move(e));
}

/// Parts are {0..a-1} and {a..a+b-1}.
inline SimpleGraph complete_bipartite(int a, int b) {
  std::vector<Edge> e;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) e.emplace_back(i, a + j);
  return SimpleGraph(a + b, std::move(e));
}

}  // namespace graphs

struct GraphStats {
  int order = 0;
  std::size_t size = 0;
  int components = 0;
  Rational average_degree;
  std::optional<int> girth;        // empty for forests
  std::size_t shortest_cycles = 0; // number of cycles of length girth, as subgraphs
  int chromatic_number = 0;
  bool bipartite = false;

  bool odd_girth() const { return girth && (*girth % 2 == 1); }
};

namespace detail {

inline int count_components(const SimpleGraph& g) {
  std::vector<int> seen(static_cast<std::size_t>(g.order()), 0);
  int comps = 0;
  for (int s = 0; s < g.order(); ++s) {
    if (seen[s]) continue;
    ++comps;
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : g.neighbors(v))
        if (!seen[w]) seen[w] = 1, stack.push_back(w);
    }
  }
  return comps;
}

inline std::optional<int> girth_of(const SimpleGraph& g) {
  int best = std::numeric_limits<int>::max();
  const int n = g.order();
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(static_cast<std::size_t>(n), -1), parent(static_cast<std::size_t>(n), -1);
    std::queue<int> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          parent[w] = v;
          q.push(w);
        } else if (parent[v] != w) {
          best = std::min(best, dist[v] + dist[w] + 1);
        }
      }
    }
  }
  if (best == std::numeric_limits<int>::max()) return std::nullopt;
  return best;
}

// Simple cycles of length len, each counted once (rooted at its smallest vertex,
// both directions enumerated and halved).
inline std::size_t count_cycles_of_length(const SimpleGraph& g, int len) {
  std::size_t directed = 0;
  const int n = g.order();
  std::vector<int> on_path(static_cast<std::size_t>(n), 0);
  auto dfs = [&](auto&& self, int start, int v, int depth) -> void {
    if (depth == len - 1) {
      if (g.adjacent(v, start)) ++directed;
      return;
    }
    for (int w : g.neighbors(v)) {
      if (w <= start || on_path[w]) continue;
      on_path[w] = 1;
      self(self, start, w, depth + 1);
      on_path[w] = 0;
    }
  };
  for (int s = 0; s < n; ++s) {
    on_path[s] = 1;
    dfs(dfs, s, s, 0);
    on_path[s] = 0;
  }
  return directed / 2;
}

inline bool colorable(const SimpleGraph& g, int colors) {
  const int n = g.order();
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return g.degree(a) > g.degree(b); });
  std::vector<int> color(static_cast<std::size_t>(n), -1);
  auto place = [&](auto&& self, int idx, int used) -> bool {
    if (idx == n) return true;
    int v = order[idx];
    // new colors are interchangeable, so only try one fresh color
    int limit = std::min(colors, used + 1);
    for (int c = 0; c < limit; ++c) {
      bool ok = true;
      for (int w : g.neighbors(v))
        if (color[w] == c) { ok = false; break; }
      if (!ok) continue;
      color[v] = c;
      if (self(self, idx + 1, std::max(used, c + 1))) return true;
      color[v] = -1;
    }
    return false;
  };
  return place(place, 0, 0);
}

}  // namespace detail

inline int chromatic_number(const SimpleGraph& g) {
  if (g.size() == 0) return 1;
  int k = 2;
  while (!detail::colorable(g, k)) ++k;
  return k;
}

inline GraphStats graph_stats(const SimpleGraph& g) {
  GraphStats s;
  s.order = g.order();
  s.size = g.size();
  s.components = detail::count_components(g);
  s.average_degree = Rational(2 * static_cast<long>(g.size()), g.order());
  s.average_degree.canonicalize();
  s.girth = detail::girth_of(g);
  s.shortest_cycles = s.girth ? detail::count_cycles_of_length(g, *s.girth) : 0;
  s.chromatic_number = chromatic_number(g);
  s.bipartite = s.chromatic_number <= 2;
  return s;
}

}  // namespace graphon
