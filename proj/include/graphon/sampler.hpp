#pragma once

// W-random graphs and template colorings of K_N, with exact monochromatic counts.
//
// Randomness: every sample call owns one std::mt19937_64 stream seeded with
// splitmix64(seed ^ splitmix64(tag)), where tag identifies the call (for example
// the trial index). Results depend only on (inputs, seed), never on thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "graphon/graph.hpp"
#include "graphon/hom.hpp"
#include "graphon/homdensity.hpp"
#include "graphon/kernel.hpp"

namespace graphon {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t tag) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(tag)));
}

namespace detail {

using Threshold = unsigned __int128;

// ceil(q * 2^64) for q in [0,1]; a uniform 64-bit draw u hits q with u < threshold.
inline Threshold threshold_of(const Rational& q) {
  Integer scaled = q.get_num() << 64;
  Integer t;
  mpz_cdiv_q(t.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  Integer hi = t >> 64;
  Integer lo = t - (hi << 64);
  Threshold out = static_cast<Threshold>(mpz_get_ui(hi.get_mpz_t())) << 64;
  if (mpz_sizeinbase(lo.get_mpz_t(), 2) > 32) {
    Integer top = lo >> 32;
    out += static_cast<Threshold>(mpz_get_ui(top.get_mpz_t())) << 32;
    lo -= top << 32;
  }
  return out + static_cast<Threshold>(mpz_get_ui(lo.get_mpz_t()));
}

// Inverse CDF over the exact cumulative part sizes.
inline std::vector<int> sample_parts(std::span<const Rational> sizes, int n, std::mt19937_64& rng) {
  std::vector<Threshold> cum;
  Rational acc = 0;
  for (const auto& s : sizes) {
    acc += s;
    cum.push_back(threshold_of(acc));
  }
  std::vector<int> part(static_cast<std::size_t>(n));
  for (auto& p : part) {
    const Threshold u = rng();
    p = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
  }
  return part;
}

}  // namespace detail

/// Dense 0/1 adjacency matrix of a finite graph.
struct DenseGraph {
  int n = 0;
  std::vector<std::int64_t> adj;  // n*n, 0/1

  bool edge(int i, int j) const { return adj[static_cast<std::size_t>(i) * n + j] != 0; }

  SimpleGraph to_simple() const {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (edge(i, j)) e.emplace_back(i, j);
    return SimpleGraph(n, std::move(e));
  }

  static DenseGraph from_simple(const SimpleGraph& g) {
    DenseGraph d{g.order(), std::vector<std::int64_t>(static_cast<std::size_t>(g.order()) * g.order(), 0)};
    for (auto [u, v] : g.edges()) d.adj[static_cast<std::size_t>(u) * d.n + v] = d.adj[static_cast<std::size_t>(v) * d.n + u] = 1;
    return d;
  }
};

inline DenseGraph sample_w_random_dense(const StepKernel& w, int n, std::uint64_t seed, std::uint64_t tag = 0) {
  if (!w.is_graphon()) throw DomainError("sample_w_random: kernel must be a graphon");
  if (n < 1) throw DomainError("sample_w_random: n must be positive");
  auto rng = make_stream(seed, tag);
  const auto part = detail::sample_parts(w.sizes(), n, rng);
  const std::size_t m = w.parts();
  std::vector<detail::Threshold> thr(m * m);
  for (std::size_t i = 0; i < m * m; ++i) thr[i] = detail::threshold_of(w.values()[i]);
  DenseGraph g{n, std::vector<std::int64_t>(static_cast<std::size_t>(n) * n, 0)};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const detail::Threshold u = rng();
      if (u < thr[static_cast<std::size_t>(part[i]) * m + part[j]])
        g.adj[static_cast<std::size_t>(i) * n + j] = g.adj[static_cast<std::size_t>(j) * n + i] = 1;
    }
  return g;
}

/// G_{n,W}: n points placed in parts with probability equal to the part sizes, each
/// pair joined independently with probability W on its tile.
inline SimpleGraph sample_w_random(const StepKernel& w, int n, std::uint64_t seed, std::uint64_t tag = 0) {
  return sample_w_random_dense(w, n, seed, tag).to_simple();
}

/// An edge-colored complete graph K_N; color(i,j) in [0,k) for i != j.
struct ColoredCompleteGraph {
  int n = 0;
  std::size_t k = 0;
  std::vector<int> part;
  std::vector<std::uint8_t> colors;  // n*n, diagonal unused

  std::size_t color(int i, int j) const { return colors[static_cast<std::size_t>(i) * n + j]; }

  DenseGraph color_class(std::size_t c) const {
    DenseGraph g{n, std::vector<std::int64_t>(static_cast<std::size_t>(n) * n, 0)};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && color(i, j) == c) g.adj[static_cast<std::size_t>(i) * n + j] = 1;
    return g;
  }
};

inline ColoredCompleteGraph sample_coloring(const ColoringTemplate& t, int n, std::uint64_t seed,
                                            std::uint64_t tag = 0) {
  if (n < 2) throw DomainError("sample_coloring: N must be at least 2");
  if (t.k() > 255) throw CapacityError("sample_coloring: at most 255 colors");
  auto rng = make_stream(seed, tag);
  const std::size_t m = t.parts(), k = t.k();
  ColoredCompleteGraph g;
  g.n = n;
  g.k = k;
  g.part = detail::sample_parts(t.color(0).sizes(), n, rng);
  // cumulative color thresholds per tile
  std::vector<detail::Threshold> cum(m * m * k);
  for (std::size_t tile = 0; tile < m * m; ++tile) {
    Rational acc = 0;
    for (std::size_t c = 0; c < k; ++c) {
      acc += t.color(c).values()[tile];
      cum[tile * k + c] = detail::threshold_of(acc);
    }
  }
  g.colors.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const detail::Threshold u = rng();
      const std::size_t tile = static_cast<std::size_t>(g.part[i]) * m + g.part[j];
      const auto* row = &cum[tile * k];
      const auto c = static_cast<std::uint8_t>(std::upper_bound(row, row + k, u) - row);
      g.colors[static_cast<std::size_t>(i) * n + j] = g.colors[static_cast<std::size_t>(j) * n + i] = c;
    }
  return g;
}

// ---------------------------------------------------------------------------
// Exact counting in finite graphs.

enum class CountMode { homomorphism, injective };

namespace detail {

inline void check_count_capacity(const SimpleGraph& h, int n) {
  const double bits = h.order() * std::log2(std::max(n, 2));
  if (bits > 61) throw CapacityError("counts of a " + std::to_string(h.order()) + "-vertex graph in " +
                                     std::to_string(n) + " vertices overflow 64-bit arithmetic");
}

// Canonical edge list under all vertex relabelings (small graphs only).
inline std::vector<Edge> canonical_edges(const SimpleGraph& g) {
  std::vector<int> perm(static_cast<std::size_t>(g.order()));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Edge> best;
  bool first = true;
  do {
    std::vector<Edge> e;
    for (auto [u, v] : g.edges()) {
      int a = perm[u], b = perm[v];
      e.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(e.begin(), e.end());
    if (first || e < best) best = std::move(e), first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace detail

/// inj(H, G) = sum over partitions P of V(H) into independent blocks of
/// mu(P) hom(H/P, G), mu(P) = prod_B (-1)^{|B|-1} (|B|-1)!. Quotients are merged
/// up to isomorphism when they have at most 6 vertices.
struct InjectiveExpansion {
  std::vector<std::pair<std::int64_t, SimpleGraph>> terms;

  static InjectiveExpansion of(const SimpleGraph& h) {
    const int n = h.order();
    if (n > 12) throw CapacityError("injective expansion limited to graphs with at most 12 vertices");
    std::map<std::pair<int, std::vector<Edge>>, std::size_t> index;
    InjectiveExpansion out;
    std::vector<int> block(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> members;
    auto emit = [&]() {
      std::int64_t mu = 1;
      for (const auto& b : members) {
        const auto s = static_cast<std::int64_t>(b.size());
        for (std::int64_t i = 1; i < s; ++i) mu *= -i;
      }
      std::vector<Edge> e;
      for (auto [u, v] : h.edges()) {
        int a = block[u], b = block[v];
        e.emplace_back(std::min(a, b), std::max(a, b));
      }
      std::sort(e.begin(), e.end());
      e.erase(std::unique(e.begin(), e.end()), e.end());
      SimpleGraph q(static_cast<int>(members.size()), e);
      auto key = std::make_pair(q.order(), q.order() <= 6 ? detail::canonical_edges(q) : q.edges());
      auto [it, inserted] = index.emplace(key, out.terms.size());
      if (inserted)
        out.terms.emplace_back(mu, std::move(q));
      else
        out.terms[it->second].first += mu;
    };
    auto place = [&](auto&& self, int v) -> void {
      if (v == n) {
        emit();
        return;
      }
      const std::size_t existing = members.size();
      for (std::size_t b = 0; b <= existing; ++b) {
        const bool fresh = b == existing;
        if (!fresh) {
          bool ok = true;
          for (int u : members[b])
            if (h.adjacent(u, v)) { ok = false; break; }
          if (!ok) continue;
          members[b].push_back(v);
        } else {
          members.push_back({v});
        }
        block[v] = static_cast<int>(b);
        self(self, v + 1);
        if (fresh)
          members.pop_back();
        else
          members[b].pop_back();
      }
    };
    place(place, 0);
    std::erase_if(out.terms, [](const auto& t) { return t.first == 0; });
    return out;
  }
};

inline std::int64_t hom_count(const SimpleGraph& h, const DenseGraph& g, const EvalOptions& opts = {}) {
  detail::check_count_capacity(h, g.n);
  std::vector<std::vector<std::int64_t>> ones(static_cast<std::size_t>(h.order()),
                                              std::vector<std::int64_t>(static_cast<std::size_t>(g.n), 1));
  return weighted_hom_sum<std::int64_t>(h, static_cast<std::size_t>(g.n), g.adj, ones, opts);
}

inline std::int64_t injective_count(const InjectiveExpansion& ex, const SimpleGraph& h, const DenseGraph& g,
                                    const EvalOptions& opts = {}) {
  detail::check_count_capacity(h, g.n);
  __int128 total = 0;
  for (const auto& [mu, q] : ex.terms) total += static_cast<__int128>(mu) * hom_count(q, g, opts);
  return static_cast<std::int64_t>(total);
}

/// Per-color counts of labeled monochromatic copies (homomorphisms or injective maps).
inline std::vector<std::int64_t> mono_count(const ColoredCompleteGraph& g, const SimpleGraph& h, CountMode mode,
                                            const EvalOptions& opts = {}) {
  std::vector<std::int64_t> out;
  std::optional<InjectiveExpansion> ex;
  if (mode == CountMode::injective) ex = InjectiveExpansion::of(h);
  for (std::size_t c = 0; c < g.k; ++c) {
    const auto cls = g.color_class(c);
    out.push_back(mode == CountMode::homomorphism ? hom_count(h, cls, opts) : injective_count(*ex, h, cls, opts));
  }
  return out;
}

/// Number of maps counted against: N^{|H|} or N (N-1) ... (N-|H|+1).
inline Rational count_normalizer(const SimpleGraph& h, int n, CountMode mode) {
  Integer total = 1;
  for (int i = 0; i < h.order(); ++i) total *= mode == CountMode::homomorphism ? n : n - i;
  return Rational(total);
}

// ---------------------------------------------------------------------------
// Convergence of sampled densities to the limit value.

using SampleSource = std::variant<StepKernel, ColoringTemplate>;

struct ConvergenceRow {
  int n = 0;
  std::size_t trials = 0;
  double mean = 0;
  double sd = 0;
  double standard_error = 0;
  double deviation = 0;  // |mean - exact|
  bool flagged = false;  // deviation > 4 standard errors
};

struct ConvergenceReport {
  Rational exact;
  CountMode mode = CountMode::injective;
  std::vector<ConvergenceRow> rows;
};

inline Rational exact_limit(const SampleSource& src, const SimpleGraph& h, const EvalOptions& opts = {}) {
  if (const auto* w = std::get_if<StepKernel>(&src)) return density(h, *w, opts);
  return mono_sum(std::get<ColoringTemplate>(src), h, opts);
}

/// One sampled value of t(H, .): the density in G_{n,W}, or the summed
/// monochromatic density in a sampled coloring.
inline double sampled_density(const SampleSource& src, const SimpleGraph& h, int n, std::uint64_t seed,
                              std::uint64_t tag, CountMode mode, const InjectiveExpansion& ex,
                              const EvalOptions& opts = {}) {
  const Rational norm = count_normalizer(h, n, mode);
  auto count = [&](const DenseGraph& g) {
    return mode == CountMode::homomorphism ? hom_count(h, g, opts) : injective_count(ex, h, g, opts);
  };
  Integer total = 0;
  if (const auto* w = std::get_if<StepKernel>(&src)) {
    total = static_cast<long>(count(sample_w_random_dense(*w, n, seed, tag)));
  } else {
    const auto g = sample_coloring(std::get<ColoringTemplate>(src), n, seed, tag);
    for (std::size_t c = 0; c < g.k; ++c) total += static_cast<long>(count(g.color_class(c)));
  }
  return Rational(Rational(total) / norm).get_d();
}

inline ConvergenceReport convergence_report(const SampleSource& src, const SimpleGraph& h,
                                            std::span<const int> schedule, int trials, std::uint64_t seed,
                                            CountMode mode = CountMode::injective, const EvalOptions& opts = {}) {
  if (trials < 2) throw DomainError("convergence_report: need at least 2 trials");
  for (int n : schedule)
    if (n < h.order()) throw DomainError("convergence_report: n must be at least |H|");
  ConvergenceReport rep;
  rep.mode = mode;
  rep.exact = exact_limit(src, h, opts);
  const double exact = rep.exact.get_d();
  const InjectiveExpansion ex = mode == CountMode::injective ? InjectiveExpansion::of(h) : InjectiveExpansion{};
  for (std::size_t si = 0; si < schedule.size(); ++si) {
    const int n = schedule[si];
    std::vector<double> values(static_cast<std::size_t>(trials));
    const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(trials)));
    auto run = [&](unsigned w) {
      for (std::size_t t = w; t < values.size(); t += workers)
        values[t] = sampled_density(src, h, n, seed, (static_cast<std::uint64_t>(si) << 32) | t, mode, ex, opts);
    };
    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
      for (auto& th : pool) th.join();
    }
    ConvergenceRow row;
    row.n = n;
    row.trials = values.size();
    double sum = 0;
    for (double v : values) sum += v;
    row.mean = sum / static_cast<double>(values.size());
    double ss = 0;
    for (double v : values) ss += (v - row.mean) * (v - row.mean);
    row.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    row.standard_error = row.sd / std::sqrt(static_cast<double>(values.size()));
    row.deviation = std::fabs(row.mean - exact);
    row.flagged = row.deviation > 4 * row.standard_error;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace graphon
