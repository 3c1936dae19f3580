#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "graphon/graph.hpp"
#include "graphon/homdensity.hpp"
#include "graphon/kernel.hpp"

namespace graphon {

struct CutNormOptions {
  std::size_t max_parts = 24;
  unsigned threads = 1;
};

/// ||U||_box together with a maximizing pair of part sets.
struct CutNormResult {
  Rational value;
  std::vector<std::size_t> s;
  std::vector<std::size_t> t;
};

inline std::vector<std::size_t> mask_to_parts(std::uint64_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

namespace detail {

struct CutCandidate {
  std::uint64_t s = 0, t = 0;
};

// Among equal values the pair with the smaller (S mask, T mask) wins.
inline bool better_pair(const CutCandidate& a, const CutCandidate& b) {
  return a.s != b.s ? a.s < b.s : a.t < b.t;
}

// Gray-code sweep over S masks with index in [begin, end). For each S the best T
// is read off the signs of the column sums.
template <class Int>
void cut_sweep(const std::vector<Int>& a, std::size_t m, std::uint64_t begin, std::uint64_t end, Int& best,
               CutCandidate& arg, bool& found) {
  std::vector<Int> col(m, Int(0));
  std::uint64_t s = begin ^ (begin >> 1);
  for (std::size_t i = 0; i < m; ++i)
    if ((s >> i) & 1u)
      for (std::size_t j = 0; j < m; ++j) col[j] += a[i * m + j];
  for (std::uint64_t g = begin; g < end; ++g) {
    if (g != begin) {
      const auto i = static_cast<std::size_t>(__builtin_ctzll(g));
      const bool add = ((s >> i) & 1u) == 0;
      s ^= std::uint64_t{1} << i;
      for (std::size_t j = 0; j < m; ++j) {
        if (add)
          col[j] += a[i * m + j];
        else
          col[j] -= a[i * m + j];
      }
    }
    Int pos(0), neg(0);
    std::uint64_t tpos = 0, tneg = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (col[j] > 0) {
        pos += col[j];
        tpos |= std::uint64_t{1} << j;
      } else if (col[j] < 0) {
        neg -= col[j];
        tneg |= std::uint64_t{1} << j;
      }
    }
    for (int side = 0; side < 2; ++side) {
      const Int& v = side == 0 ? pos : neg;
      CutCandidate c{s, side == 0 ? tpos : tneg};
      if (!found || v > best || (v == best && better_pair(c, arg))) {
        best = v;
        arg = c;
        found = true;
      }
    }
  }
}

template <class Int>
CutCandidate cut_search(const std::vector<Int>& a, std::size_t m, unsigned threads, Int& best_out) {
  const std::uint64_t total = std::uint64_t{1} << m;
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(total, 64))));
  std::vector<Int> best(workers, Int(0));
  std::vector<CutCandidate> arg(workers);
  std::vector<char> found(workers, 0);
  auto run = [&](unsigned w) {
    const std::uint64_t lo = total * w / workers, hi = total * (w + 1) / workers;
    bool f = false;
    cut_sweep<Int>(a, m, lo, hi, best[w], arg[w], f);
    found[w] = f;
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  Int b(0);
  CutCandidate c;
  bool any = false;
  for (unsigned w = 0; w < workers; ++w) {
    if (!found[w]) continue;
    if (!any || best[w] > b || (best[w] == b && better_pair(arg[w], c))) {
      b = best[w];
      c = arg[w];
      any = true;
    }
  }
  best_out = b;
  return c;
}

}  // namespace detail

/// Exact cut norm of a step kernel. The objective is bilinear in the per-part
/// inclusion fractions of S and T, so an optimum sits at part-indicator vertices:
/// enumerate S, pick T by the signs of the column sums. Returns the least optimal
/// (S,T) by (mask(S), mask(T)), where mask has bit j set for part j.
inline CutNormResult cut_norm(const StepKernel& u, const CutNormOptions& opts = {}) {
  const std::size_t m = u.parts();
  if (m > opts.max_parts || m > 62)
    throw CapacityError("cut norm enumeration over " + std::to_string(m) + " parts exceeds the limit of " +
                        std::to_string(opts.max_parts));
  // tile masses a_ij = s_i s_j U_ij, scaled to integers by a common denominator
  std::vector<Rational> mass(m * m);
  Integer den = 1;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      mass[i * m + j] = u.size(i) * u.size(j) * u.value(i, j);
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), mass[i * m + j].get_den_mpz_t());
    }
  std::vector<Integer> scaled(m * m);
  Integer abs_total = 0;
  for (std::size_t i = 0; i < m * m; ++i) {
    Rational q = mass[i] * den;
    scaled[i] = q.get_num();
    abs_total += abs(scaled[i]);
  }
  detail::CutCandidate arg;
  Rational value;
  if (abs_total < Integer(std::numeric_limits<std::int64_t>::max() / 2)) {
    std::vector<std::int64_t> a(m * m);
    for (std::size_t i = 0; i < m * m; ++i) a[i] = scaled[i].get_si();
    std::int64_t best = 0;
    arg = detail::cut_search<std::int64_t>(a, m, opts.threads, best);
    value = Rational(Integer(static_cast<long>(best)), den);
  } else {
    Integer best = 0;
    arg = detail::cut_search<Integer>(scaled, m, opts.threads, best);
    value = Rational(best, den);
  }
  value.canonicalize();
  return {value, mask_to_parts(arg.s), mask_to_parts(arg.t)};
}

/// Cut norm of W - W' after refining both to a common partition: an upper bound
/// on the cut distance (identity coupling only).
inline Rational cut_distance_upper(const StepKernel& w1, const StepKernel& w2, const CutNormOptions& opts = {}) {
  auto [a, b] = common_refinement(w1, w2);
  return cut_norm(affine_combine({{Rational(1), a}, {Rational(-1), b}}), opts).value;
}

struct LipschitzCheck {
  Rational lhs;  // |t(H,W) - t(H,W')|
  Rational rhs;  // |E(H)| * cut_distance_upper(W, W')
  bool holds() const { return lhs <= rhs; }
};

inline LipschitzCheck density_lipschitz_check(const SimpleGraph& h, const StepKernel& w1, const StepKernel& w2,
                                              const EvalOptions& opts = {}, const CutNormOptions& cut = {}) {
  LipschitzCheck out;
  out.lhs = abs_of(density(h, w1, opts) - density(h, w2, opts));
  out.rhs = Rational(static_cast<long>(h.size())) * cut_distance_upper(w1, w2, cut);
  return out;
}

struct WindowCheck {
  Rational cut_deviation;  // ||W_i - 1/k||_box
  Rational sup_deviation;  // ||W_i - 1/k||_inf
  bool cut_ok = false;     // cut_deviation <= eps0 / k
  bool sup_ok = false;     // sup_deviation <= 1 / k
};

/// Per color, whether the template sits in the window used by local k-commonness.
inline std::vector<WindowCheck> local_window_check(const ColoringTemplate& t, const Rational& eps0,
                                                   const CutNormOptions& cut = {}) {
  if (eps0 <= 0) throw DomainError("eps0 must be positive");
  const Rational inv_k(1, static_cast<unsigned long>(t.k()));
  std::vector<WindowCheck> out;
  for (const auto& w : t.colors()) {
    StepKernel ones(std::vector<Rational>(w.sizes().begin(), w.sizes().end()),
                    std::vector<Rational>(w.values().size(), Rational(1)));
    auto dev = affine_combine({{Rational(1), w}, {-inv_k, ones}});
    WindowCheck c;
    c.cut_deviation = cut_norm(dev, cut).value;
    c.sup_deviation = dev.max_abs();
    c.cut_ok = c.cut_deviation <= eps0 * inv_k;
    c.sup_ok = c.sup_deviation <= inv_k;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace graphon
