#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "graphon/graph.hpp"
#include "graphon/homdensity.hpp"
#include "graphon/kernel.hpp"

namespace graphon {

inline constexpr std::size_t kMaxTemplateParts = 4096;
inline constexpr std::size_t kMaxFamilyColors = 40320;

/// q^{k-1} equal parts; the tile (i,j), i != j, gets color c when the lowest base-q
/// digit in which i and j differ is digit c (1-indexed from the least significant);
/// diagonal tiles get color k.
inline ColoringTemplate chromatic_coloring(int k, int q, std::size_t part_limit = kMaxTemplateParts) {
  if (k < 2) throw DomainError("coloring needs k >= 2");
  if (q < 2) throw DomainError("digit base must be at least 2");
  std::size_t m = 1;
  for (int i = 0; i < k - 1; ++i) {
    m *= static_cast<std::size_t>(q);
    if (m > part_limit)
      throw CapacityError(std::to_string(q) + "^" + std::to_string(k - 1) + " parts exceed the limit of " +
                          std::to_string(part_limit));
  }
  std::vector<std::vector<Rational>> vals(static_cast<std::size_t>(k), std::vector<Rational>(m * m, Rational(0)));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t color = static_cast<std::size_t>(k) - 1;
      if (i != j) {
        std::size_t a = i, b = j, digit = 0;
        while (a % q == b % q) {
          a /= q;
          b /= q;
          ++digit;
        }
        color = digit;
      }
      vals[color][i * m + j] = 1;
    }
  std::vector<StepKernel> colors;
  for (auto& v : vals) colors.push_back(StepKernel::equal_parts(m, std::move(v)));
  return ColoringTemplate(std::move(colors));
}

inline ColoringTemplate binary_coloring(int k, std::size_t part_limit = kMaxTemplateParts) {
  return chromatic_coloring(k, 2, part_limit);
}

struct KappaBounds {
  std::optional<int> k_search;   // least k with 2^{-(k-1)(|H|-1)} < k^{1-|E(H)|}
  std::optional<int> k_formula;  // ceil(2 d log2 d), d the average degree
  std::string diagnostic;
};

/// Upper bounds on kappa(H) from the binary coloring.
inline KappaBounds kappa_upper(const SimpleGraph& h, int max_k = 64) {
  KappaBounds out;
  const auto stats = graph_stats(h);
  if (stats.components != 1) {
    out.diagnostic = "graph is disconnected";
    return out;
  }
  if (stats.bipartite) {
    out.diagnostic = "graph is bipartite; the binary coloring gives no bound";
    return out;
  }
  const unsigned long vertices = static_cast<unsigned long>(h.order());
  const unsigned long edges = h.size();
  for (int k = 2; k <= max_k; ++k) {
    // 2^{-(k-1)(|H|-1)} < k^{-(|E|-1)}  <=>  k^{|E|-1} < 2^{(k-1)(|H|-1)}
    Integer lhs, rhs;
    mpz_ui_pow_ui(lhs.get_mpz_t(), static_cast<unsigned long>(k), edges - 1);
    mpz_ui_pow_ui(rhs.get_mpz_t(), 2, static_cast<unsigned long>(k - 1) * (vertices - 1));
    if (lhs < rhs) {
      out.k_search = k;
      break;
    }
  }
  // 2 d log2 d <= K  <=>  d^{2d} <= 2^K  <=>  d^{4|E|} <= 2^{K |H|}   (d = 2|E|/|H| >= 2 here)
  const Rational d = stats.average_degree;
  const Rational lhs = rpow(d, 4 * edges);
  for (int big_k = 1; big_k < 1 << 20; ++big_k) {
    if (lhs <= rpow(Rational(2), static_cast<unsigned long>(big_k) * vertices)) {
      out.k_formula = big_k;
      break;
    }
  }
  if (!out.k_search) out.diagnostic = "no k <= " + std::to_string(max_k) + " satisfies the strict inequality";
  return out;
}

/// The k = l * m! colorings indexed by (sigma, s); the color for (sigma, s) is 1/k on
/// the diagonal and d_{sigma(i) sigma(j)} / (k delta) off it. Colors are ordered by
/// sigma in lexicographic order, then s.
inline ColoringTemplate permutation_family(const StepKernel& wpp, int ell, std::size_t max_colors = kMaxFamilyColors) {
  const std::size_t m = wpp.parts();
  if (m < 2) throw DomainError("permutation_family: needs at least two parts");
  if (ell < 1) throw DomainError("permutation_family: l must be positive");
  if (!wpp.is_graphon()) throw DomainError("permutation_family: input must be a graphon");
  for (std::size_t i = 1; i < m; ++i)
    if (wpp.size(i) != wpp.size(0)) throw DomainError("permutation_family: parts must have equal sizes");
  const Rational delta = wpp.value(0, 0);
  for (std::size_t i = 1; i < m; ++i)
    if (wpp.value(i, i) != delta) throw DomainError("permutation_family: diagonal must be constant");
  Rational off = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) off += wpp.value(i, j);
  if (off != delta * Rational(static_cast<long>(m * (m - 1) / 2)))
    throw DomainError("permutation_family: diagonal must equal the average off-diagonal value");
  std::size_t k = static_cast<std::size_t>(ell);
  for (std::size_t i = 2; i <= m; ++i) {
    k *= i;
    if (k > max_colors)
      throw CapacityError("permutation_family: l*m! exceeds the limit of " + std::to_string(max_colors) + " colors");
  }
  const Rational kq(static_cast<long>(k));
  if (delta * kq < 1) throw DomainError("permutation_family: requires 1 <= delta * l * m!");
  const Rational denom = kq * delta;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && wpp.value(i, j) > denom) throw DomainError("permutation_family: d_ij / (k delta) exceeds 1");

  std::vector<std::size_t> sigma(m);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<StepKernel> colors;
  colors.reserve(k);
  const std::vector<Rational> sizes(wpp.sizes().begin(), wpp.sizes().end());
  do {
    std::vector<Rational> v(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        v[i * m + j] = i == j ? Rational(1) / kq : wpp.value(sigma[i], sigma[j]) / denom;
    StepKernel w(sizes, std::move(v));
    for (int s = 0; s < ell; ++s) colors.push_back(w);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return ColoringTemplate(std::move(colors));
}

/// The signed kernel on 2l equal parts A_1..A_{2l}: +1 on A_i x A_j when i, j are in
/// the same half and their residues in {1..l} are cyclically adjacent, -1 when
/// they are in different halves with adjacent residues, 0 otherwise.
inline StepKernel odd_girth_kernel(int ell) {
  if (ell < 3 || ell % 2 == 0) throw DomainError("odd_girth_kernel: l must be odd and at least 3");
  const std::size_t m = 2 * static_cast<std::size_t>(ell);
  std::vector<Rational> v(m * m, Rational(0));
  for (int i = 1; i <= 2 * ell; ++i)
    for (int j = 1; j <= 2 * ell; ++j) {
      const int ri = (i - 1) % ell + 1, rj = (j - 1) % ell + 1;
      const int diff = ((ri - rj) % ell + ell) % ell;
      if (diff != 1 && diff != ell - 1) continue;
      const bool same_half = (i - 1) / ell == (j - 1) / ell;
      v[(i - 1) * m + (j - 1)] = same_half ? 1 : -1;
    }
  return StepKernel::equal_parts(m, std::move(v));
}

/// W_1 = W_2 = 1/k + eps U, W_3 = 1/k - 2 eps U, W_4 = ... = W_k = 1/k with U the
/// odd-girth kernel for l.
inline ColoringTemplate odd_girth_template(int k, const Rational& eps, int ell) {
  if (k < 3) throw DomainError("odd-girth template needs k >= 3");
  const auto u = odd_girth_kernel(ell);
  const std::size_t m = u.parts();
  const Rational inv_k(1, static_cast<unsigned long>(k));
  const StepKernel flat = StepKernel::equal_parts(m, std::vector<Rational>(m * m, inv_k));
  std::vector<StepKernel> colors;
  const auto plus = affine_combine({{Rational(1), flat}, {eps, u}});
  colors.push_back(plus);
  colors.push_back(plus);
  colors.push_back(affine_combine({{Rational(1), flat}, {Rational(-2) * eps, u}}));
  for (int i = 3; i < k; ++i) colors.push_back(flat);
  return ColoringTemplate(std::move(colors));
}

/// Exact monochromatic density of H in the odd-girth template, as a polynomial in eps.
inline DeficitPolynomial local_deficit(const SimpleGraph& h, int k, const EvalOptions& opts = {}) {
  if (k < 3) throw DomainError("local_deficit: k must be at least 3");
  const auto girth = detail::girth_of(h);
  if (!girth) throw DomainError("local_deficit: graph is a forest (infinite girth)");
  if (*girth % 2 == 0) throw DomainError("local_deficit: girth " + std::to_string(*girth) + " is even");
  const auto u = odd_girth_kernel(*girth);
  const Rational p(1, static_cast<unsigned long>(k));
  DeficitPolynomial total = epsilon_expansion(h, p, u, opts).scaled(Rational(2));
  total += epsilon_expansion(h, p, scale(Rational(-2), u), opts);
  DeficitPolynomial flat{std::vector<Rational>(h.size() + 1, Rational(0))};
  flat.coeffs[0] = Rational(k - 3) * rpow(p, h.size());
  total += flat;
  return total;
}

/// -(2^{l+1} - 4) m_l / l^{l-1} * k^{l - |E(H)|}: the closed form of the eps^l coefficient.
inline Rational predicted_leading_deficit(const SimpleGraph& h, int k) {
  const auto girth = detail::girth_of(h);
  if (!girth || *girth % 2 == 0) throw DomainError("predicted_leading_deficit: girth must be odd");
  const int ell = *girth;
  const auto cycles = detail::count_cycles_of_length(h, ell);
  Rational c = Rational((1L << (ell + 1)) - 4) * Rational(static_cast<long>(cycles)) /
               rpow(Rational(ell), static_cast<unsigned long>(ell - 1));
  const long e = static_cast<long>(h.size());
  const Rational kq(k);
  const Rational kpow = ell >= e ? rpow(kq, static_cast<unsigned long>(ell - e))
                                 : Rational(1) / rpow(kq, static_cast<unsigned long>(e - ell));
  return -c * kpow;
}

// ---------------------------------------------------------------------------
// Certified constants of the K_{2n,2n,C5} argument.

inline constexpr std::uint64_t kDefaultScanBound = 10'000'000;

/// Least n in [lower, bound] with base^n >= target, or empty when even n = bound fails.
struct ExponentScan {
  std::optional<std::uint64_t> value;
  std::uint64_t lower = 0;
  std::uint64_t bound = 0;
  double log10_estimate = 0;  // log10 of the real solution of base^n = target (floating)

  bool capped() const { return !value.has_value(); }
  /// Smallest n not ruled out: the value, or bound + 1 when capped.
  std::uint64_t at_least() const { return value ? *value : bound + 1; }
};

namespace detail {

// Interval [lo, hi] * 2^-prec enclosing base^n for base >= 1.
inline std::pair<Integer, Integer> power_enclosure(const Rational& base, std::uint64_t n, unsigned long prec) {
  Integer one = 1;
  one <<= prec;
  Integer scaled_num = base.get_num() << prec;
  Integer blo, bhi;
  mpz_fdiv_q(blo.get_mpz_t(), scaled_num.get_mpz_t(), base.get_den_mpz_t());
  mpz_cdiv_q(bhi.get_mpz_t(), scaled_num.get_mpz_t(), base.get_den_mpz_t());
  Integer lo = one, hi = one;
  Integer round = one - 1;
  while (n) {
    if (n & 1u) {
      lo = (lo * blo) >> prec;
      hi = (hi * bhi + round) >> prec;
    }
    n >>= 1;
    if (n) {
      blo = (blo * blo) >> prec;
      bhi = (bhi * bhi + round) >> prec;
    }
  }
  return {lo, hi};
}

inline bool power_at_least(const Rational& base, std::uint64_t n, const Rational& target) {
  for (unsigned long prec = 256; prec <= (1ul << 18); prec *= 2) {
    auto [lo, hi] = power_enclosure(base, n, prec);
    Integer one = 1;
    one <<= prec;
    if (Rational(lo, one) >= target) return true;
    if (Rational(hi, one) < target) return false;
  }
  // boundary case: decide exactly when the numbers stay small enough
  if (n * mpz_sizeinbase(base.get_den_mpz_t(), 2) < 4'000'000) return rpow(base, static_cast<unsigned long>(n)) >= target;
  throw CapacityError("cannot decide base^n >= target at any tried precision");
}

}  // namespace detail

inline ExponentScan least_exponent(const Rational& base, const Rational& target, std::uint64_t lower,
                                   std::uint64_t bound) {
  if (base <= 1) throw DomainError("least_exponent: base must exceed 1");
  ExponentScan out;
  out.lower = lower;
  out.bound = bound;
  const double lt = target > 0 ? log_of(target) : 0.0;
  const Rational x = base - 1;
  if (lt <= 0) {
    out.log10_estimate = 0;
  } else if (x.get_d() >= 1e-300) {
    out.log10_estimate = std::log10(lt) - std::log10(std::log1p(x.get_d()));
  } else {
    out.log10_estimate = std::log10(lt) - log_of(x) / std::log(10.0);
  }
  if (lower > bound) return out;
  if (detail::power_at_least(base, lower, target)) {
    out.value = lower;
    return out;
  }
  // base^lo < target <= base^hi
  std::uint64_t lo = lower, hi = lower + 1, step = 1;
  while (!detail::power_at_least(base, std::min(hi, bound), target)) {
    if (hi >= bound) return out;
    lo = hi;
    step *= 2;
    hi = lo + step;
  }
  hi = std::min(hi, bound);
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (detail::power_at_least(base, mid, target))
      hi = mid;
    else
      lo = mid;
  }
  out.value = hi;
  return out;
}

/// Constants of one induction level of the K_{2n,2n,C5} argument.
struct LevelConstants {
  int k = 1;
  Rational p0;      // 3/4 at level 1, delta_{k-1}/(4k) afterwards
  Rational eps0;    // p0^7 / 16
  Rational pi0;     // p0^2 / 2
  Rational delta0;  // p0 eps0 / 16
  Rational d0;      // = delta0
  ExponentScan n0;  // least n with (1 + eps0/2)^n d0^4 p0^3 >= 1
  Rational delta;   // delta_k
  ExponentScan n_condition;  // least n >= 1 with the n_k inequality alone (k >= 2)
  ExponentScan n;            // n_k
};

struct CertifiedConstants {
  std::vector<LevelConstants> levels;

  bool capped() const {
    return std::any_of(levels.begin(), levels.end(), [](const LevelConstants& l) { return l.n.capped(); });
  }
};

inline CertifiedConstants certified_constants(int k, std::uint64_t scan_bound = kDefaultScanBound) {
  if (k < 1) throw DomainError("certified_constants: k must be positive");
  CertifiedConstants out;
  for (int level = 1; level <= k; ++level) {
    LevelConstants c;
    c.k = level;
    c.p0 = level == 1 ? Rational(3, 4) : out.levels.back().delta / Rational(4 * level);
    c.eps0 = rpow(c.p0, 7) / 16;
    c.pi0 = c.p0 * c.p0 / 2;
    c.delta0 = c.p0 * c.eps0 / 16;
    c.d0 = c.delta0;
    c.n0 = least_exponent(1 + c.eps0 / 2, Rational(1) / (rpow(c.d0, 4) * rpow(c.p0, 3)), 1, scan_bound);
    if (level == 1) {
      c.delta = c.eps0 / 4;
      c.n.value = 1;
      c.n.lower = 1;
      c.n.bound = scan_bound;
      c.n_condition = c.n;
    } else {
      const auto& prev = out.levels.back();
      c.delta = prev.delta * c.delta0 * c.delta0 / Rational(4 * level);
      // (1/k + 1/(2k(k-1)))^{4n+5} delta0^8 >= k/(k-1) (1/k)^{4n+5}
      //   <=>  (r^4)^n >= k / ((k-1) delta0^8 r^5),   r = (2k-1) / (2k-2)
      const Rational r(2 * level - 1, static_cast<unsigned long>(2 * level - 2));
      const Rational base = rpow(r, 4);
      const Rational target = Rational(level) / (Rational(level - 1) * rpow(c.delta0, 8) * rpow(r, 5));
      c.n_condition = least_exponent(base, target, 1, scan_bound);
      if (c.n0.capped() || prev.n.capped()) {
        c.n.lower = std::max(c.n0.at_least(), prev.n.at_least());
        c.n.bound = scan_bound;
        c.n.log10_estimate =
            std::max({c.n0.log10_estimate, c.n_condition.log10_estimate, prev.n.log10_estimate});
      } else {
        c.n = least_exponent(base, target, std::max(*c.n0.value, *prev.n.value), scan_bound);
      }
    }
    out.levels.push_back(std::move(c));
  }
  return out;
}

}  // namespace graphon
