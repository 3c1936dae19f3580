#pragma once

// The acceptance battery: eleven end-to-end checks, each with a pinned tolerance
// and a wall-clock limit. Shared by the `acceptance` test binary and by
// `graphon reproduce --suite paper`.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "graphon/constructions.hpp"
#include "graphon/cutnorm.hpp"
#include "graphon/homdensity.hpp"
#include "graphon/independence.hpp"
#include "graphon/reference.hpp"
#include "graphon/sampler.hpp"
#include "graphon/spectral.hpp"

namespace graphon::acceptance {

struct Outcome {
  int id = 0;
  std::string name;
  bool checks_passed = false;
  double seconds = 0;
  double limit_seconds = 0;
  std::string detail;

  bool passed() const { return checks_passed && seconds < limit_seconds; }
};

struct Options {
  unsigned threads = 1;
};

namespace detail {

inline Rational q(long a, long b = 1) { return make_rational(a, b); }

// Collects failed expectations as human-readable notes.
struct Checker {
  bool ok = true;
  std::ostringstream notes;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    if (!ok) notes << "; ";
    ok = false;
    notes << what;
  }
  void expect_eq(const Rational& got, const Rational& want, const std::string& what) {
    expect(got == want, what + ": got " + to_string(got) + ", want " + to_string(want));
  }
};

struct Result {
  bool ok;
  std::string detail;
};

inline Result finish(Checker& c, const std::string& summary) {
  return {c.ok, c.ok ? summary : c.notes.str()};
}

inline StepKernel bipartite_witness() {
  const Rational o = 1, z = 0;
  return StepKernel::equal_parts(4, {z, z, o, o, z, z, o, o, o, o, z, z, o, o, z, z});
}

inline Result odd_girth_deficits() {
  Checker c;
  auto c5 = local_deficit(graphs::cycle(5), 3);
  const std::vector<Rational> want5{q(1, 81), q(0), q(0), q(0), q(0), q(-12, 125)};
  c.expect(c5.coeffs == want5, "deficit(C5, k=3) coefficients differ");
  auto k3 = local_deficit(graphs::complete(3), 3);
  const std::vector<Rational> want3{q(1, 9), q(0), q(0), q(-4, 3)};
  c.expect(k3.coeffs == want3, "deficit(K3, k=3) coefficients differ");
  auto c5k4 = local_deficit(graphs::cycle(5), 4);
  c.expect(c5k4.coeffs.size() == 6, "deficit(C5, k=4) has wrong degree");
  if (c5k4.coeffs.size() == 6) c.expect_eq(c5k4.coeffs[5], q(-12, 125), "deficit(C5, k=4) eps^5");
  return finish(c, "C5,k=3 -> [1/81,0,0,0,0,-12/125]; K3,k=3 -> [1/9,0,0,-4/3]; C5,k=4 eps^5 -> -12/125");
}

inline Result closed_forms() {
  Checker c;
  auto u3 = odd_girth_kernel(3), u5 = odd_girth_kernel(5);
  c.expect_eq(density(graphs::complete(3), u3), q(2, 9), "t(C3, U_3)");
  c.expect_eq(density(graphs::cycle(5), u5), q(2, 625), "t(C5, U_5)");
  for (const auto* u : {&u3, &u5}) {
    c.expect_eq(density(graphs::path(3), *u), q(0), "t(P3, U)");
    c.expect_eq(density(graphs::edge(), *u), q(0), "t(K2, U)");
  }
  return finish(c, "t(C3,U3)=2/9, t(C5,U5)=2/625, t(P3,U)=t(K2,U)=0");
}

inline Result binary_counts() {
  Checker c;
  for (int k = 2; k <= 4; ++k) {
    auto t = binary_coloring(k);
    for (const auto& h : {graphs::complete(3), graphs::cycle(5)}) {
      const Rational want =
          Rational(1) / rpow(Rational(2), static_cast<unsigned long>((k - 1) * (h.order() - 1)));
      c.expect_eq(mono_sum(t, h), want, "mono_sum(binary_coloring(" + std::to_string(k) + "), " +
                                            (h.order() == 3 ? "K3" : "C5") + ")");
    }
  }
  auto c5 = kappa_upper(graphs::cycle(5));
  auto k3 = kappa_upper(graphs::complete(3));
  auto show = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("none"); };
  c.expect(c5.k_search == 3, "kappa_upper(C5).k_search = " + show(c5.k_search) + ", want 3");
  c.expect(k3.k_search == 3, "kappa_upper(K3).k_search = " + show(k3.k_search) + ", want 3");
  c.expect(c5.k_formula == 4, "kappa_upper(C5).k_formula = " + show(c5.k_formula) + ", want 4");
  c.expect(k3.k_formula == 5, "kappa_upper(K3).k_formula = " + show(k3.k_formula) +
                                  ", want 5 (K3 has average degree 2, so ceil(2 d log2 d) = 4)");
  return finish(c, "binary mono_sums exact; k_search(C5)=k_search(K3)=3; k_formula 4 and 5");
}

inline Result cycle_trace(std::mt19937_64& rng) {
  Checker c;
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto w = reference::random_graphon(rng, 6);
    for (int n = 3; n <= 8; ++n) {
      auto t = cycle_trace_check(w, n);
      const double err = std::fabs(t.exact.get_d() - t.spectral);
      const double tol = 1e-8 * std::max(1.0, t.abs_power_sum);
      worst = std::max(worst, err / tol);
      c.expect(err <= tol, "trace mismatch on instance " + std::to_string(trial) + ", n=" + std::to_string(n));
    }
  }
  std::ostringstream s;
  s << "20 graphons, n=3..8; worst error/tolerance = " << worst;
  return finish(c, s.str());
}

inline Result reflection(std::mt19937_64& rng) {
  Checker c;
  for (int trial = 0; trial < 20; ++trial) {
    auto w = reference::random_graphon(rng, 4);
    const Rational k22 = density(graphs::complete_bipartite(2, 2), w);
    for (int n : {2, 3})
      c.expect(density(graphs::complete_bipartite(2, 2 * n), w) >= rpow(k22, n),
               "t(K_{2,2n}) < t(K22)^n on instance " + std::to_string(trial));
    c.expect(density(graphs::complete_bipartite(4, 4), w) >= rpow(k22, 4),
             "t(K44) < t(K22)^4 on instance " + std::to_string(trial));
  }
  return finish(c, "20 graphons: K_{2,4}, K_{2,6}, K_{4,4} inequalities hold exactly");
}

inline Result permutation_pipeline() {
  Checker c;
  auto w = bipartite_witness();
  const Rational p = density(graphs::edge(), w);
  c.expect_eq(reference::density(graphs::complete(3), w), q(0), "t(K3, witness)");
  c.expect(rpow(p, 3) > 0, "witness edge density is zero");
  auto [wpp, delta] = diagonal_average(w);
  c.expect_eq(delta, q(2, 3), "delta");
  auto fam = permutation_family(wpp, 1);
  c.expect(fam.k() == 24, "family has " + std::to_string(fam.k()) + " colors, want 24");
  const std::size_t m = fam.parts();
  for (std::size_t tile = 0; tile < m * m; ++tile) {
    Rational sum = 0;
    for (const auto& col : fam.colors()) sum += col.values()[tile];
    c.expect(sum == 1, "colors do not sum to 1 on a tile");
  }
  for (const auto& col : fam.colors()) c.expect_eq(density(graphs::edge(), col), q(1, 24), "color density");
  Rational ms = 0;
  for (const auto& col : fam.colors()) ms += reference::density(graphs::complete(3), col);
  const Rational bound = q(1, 24 * 24);
  c.expect(ms < bound, "mono_sum(K3) = " + to_string(ms) + " is not below 1/576");
  return finish(c, "delta=2/3, k=24, colors sum to 1, each density 1/24, mono_sum(K3) = " + to_string(ms) +
                       " < 1/576");
}

inline Result lipschitz(std::mt19937_64& rng) {
  Checker c;
  for (int trial = 0; trial < 20; ++trial) {
    auto w1 = reference::random_graphon(rng, 4);
    StepKernel w2(std::vector<Rational>(w1.sizes().begin(), w1.sizes().end()),
                  reference::random_values(rng, w1.parts(), reference::quarter_grid()));
    for (const auto& h : {graphs::complete(3), graphs::cycle(4)}) {
      auto l = density_lipschitz_check(h, w1, w2);
      c.expect(l.holds(), "Lipschitz bound fails on pair " + std::to_string(trial));
    }
  }
  return finish(c, "20 same-partition pairs, H in {K3, C4}: |t(H,W)-t(H,W')| <= |E(H)| cut_norm(W-W')");
}

inline Result cut_oracle(std::mt19937_64& rng) {
  Checker c;
  std::uniform_int_distribution<std::size_t> dm(1, 8);
  for (int trial = 0; trial < 50; ++trial) {
    auto u = reference::random_kernel(rng, dm(rng));
    const Rational fast = cut_norm(u).value, full = reference::cut_norm_full(u);
    c.expect(fast == full, "kernel " + std::to_string(trial) + ": greedy " + to_string(fast) + " vs full " +
                               to_string(full));
  }
  return finish(c, "50 kernels, m <= 8: greedy-T enumeration equals full 2^m x 2^m enumeration");
}

inline Result constants() {
  Checker c;
  auto cc = certified_constants(3);
  const auto& l1 = cc.levels[0];
  c.expect(l1.n.value == 1u, "n_1 != 1");
  c.expect_eq(l1.delta, q(2187, 1048576), "delta_1");
  for (const auto& l : cc.levels) {
    c.expect_eq(l.eps0, rpow(l.p0, 7) / 16, "eps0 at level " + std::to_string(l.k));
    c.expect_eq(l.delta0, l.p0 * l.eps0 / 16, "delta0 at level " + std::to_string(l.k));
  }
  for (std::size_t i = 1; i < cc.levels.size(); ++i) {
    c.expect(cc.levels[i].delta < cc.levels[i - 1].delta, "delta_k not strictly decreasing");
    c.expect(cc.levels[i].n.at_least() >= cc.levels[i - 1].n.at_least(), "n_k decreasing");
  }
  std::ostringstream s;
  s << "n_1=1, delta_1=2187/1048576; delta_k decreasing; n_k:";
  for (const auto& l : cc.levels) {
    if (l.n.capped())
      s << " n_" << l.k << " capped (> " << l.n.bound << ", log10 ~ " << l.n.log10_estimate << ")";
    else
      s << " n_" << l.k << "=" << *l.n.value;
  }
  return finish(c, s.str());
}

inline Result subgraphon_and_peeling(std::mt19937_64& rng) {
  Checker c;
  for (int trial = 0; trial < 20; ++trial) {
    auto w = reference::random_graphon(rng, 4);
    auto h = reference::random_weighting(rng, w.parts());
    const Rational mass = h.mass(w);
    auto sub = subgraphon(w, h);
    for (const auto& g : {graphs::complete(3), graphs::cycle(4)}) {
      c.expect(density(g, w) >= rpow(mass, static_cast<unsigned long>(g.order())) * density(g, sub),
               "subgraphon inequality fails on instance " + std::to_string(trial));
    }
    const Rational d0 = q(trial % 5, 8);
    auto peel = low_degree_peel(w, d0);
    c.expect(peel.density_bound_holds, "peel density bound fails on instance " + std::to_string(trial));
  }
  return finish(c, "20 (W,h,H): t(H,W) >= |h|^|H| t(H,W[h]); peel bound holds on all");
}

inline Result sampling(const Options& opts) {
  Checker c;
  EvalOptions eval;
  eval.threads = opts.threads;
  const std::vector<int> schedule{200};
  const Rational eps = q(1, 20);
  const Rational poly_value = local_deficit(graphs::cycle(5), 3)(eps);
  std::ostringstream s;
  auto run = [&](const SampleSource& src, const std::string& label, std::uint64_t seed) {
    auto rep = convergence_report(src, graphs::cycle(5), schedule, 200, seed, CountMode::injective, eval);
    const auto& row = rep.rows.front();
    c.expect(!row.flagged, label + ": |mean - exact| = " + std::to_string(row.deviation) + " exceeds 4 SE = " +
                               std::to_string(4 * row.standard_error));
    s << label << " mean " << row.mean << " exact " << rep.exact.get_d() << " (" << row.deviation / row.standard_error
      << " SE); ";
    return rep.exact;
  };
  run(constant_graphon(q(1, 2)), "constant 1/2", 2024);
  const Rational exact = run(odd_girth_template(3, eps, 5), "odd-girth k=3", 2025);
  c.expect_eq(exact, poly_value, "exact template value vs deficit polynomial at 1/20");
  return finish(c, s.str() + "injective densities, n=200, 200 trials");
}

}  // namespace detail

/// "[PASS] 3 name (0.12 s / 1 s): detail"
inline std::string format_line(const Outcome& o) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << (o.passed() ? "[PASS] " : "[FAIL] ") << o.id << " " << o.name << " (" << o.seconds << " s / "
    << o.limit_seconds << " s";
  if (o.checks_passed && !o.passed()) s << ", over time";
  s << "): " << o.detail;
  return s.str();
}

using Check = std::function<detail::Result()>;

/// Runs every criterion in order; `log` (if given) receives one line per criterion as it finishes.
inline std::vector<Outcome> run_all(const Options& opts = {}, std::ostream* log = nullptr) {
  std::mt19937_64 rng(20240601);
  struct Spec {
    int id;
    std::string name;
    double limit;
    Check check;
  };
  const std::vector<Spec> specs{
      {1, "odd-girth deficit exactness", 1.0, [] { return detail::odd_girth_deficits(); }},
      {2, "odd-girth kernel closed forms", 1.0, [] { return detail::closed_forms(); }},
      {3, "binary-coloring counts and kappa bounds", 1.0, [] { return detail::binary_counts(); }},
      {4, "cycle-trace identity", 5.0, [&] { return detail::cycle_trace(rng); }},
      {5, "reflection inequalities", 30.0, [&] { return detail::reflection(rng); }},
      {6, "permutation-family pipeline for K3", 60.0, [] { return detail::permutation_pipeline(); }},
      {7, "density Lipschitz property", 10.0, [&] { return detail::lipschitz(rng); }},
      {8, "cut-norm oracle agreement", 10.0, [&] { return detail::cut_oracle(rng); }},
      {9, "certified constants", 5.0, [] { return detail::constants(); }},
      {10, "subgraphon and peeling", 10.0, [&] { return detail::subgraphon_and_peeling(rng); }},
      {11, "sampling convergence", 120.0, [&] { return detail::sampling(opts); }},
  };
  std::vector<Outcome> out;
  for (const auto& s : specs) {
    Outcome o;
    o.id = s.id;
    o.name = s.name;
    o.limit_seconds = s.limit;
    const auto start = std::chrono::steady_clock::now();
    try {
      auto r = s.check();
      o.checks_passed = r.ok;
      o.detail = r.detail;
    } catch (const std::exception& e) {
      o.checks_passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (log) *log << format_line(o) << std::endl;
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace graphon::acceptance
