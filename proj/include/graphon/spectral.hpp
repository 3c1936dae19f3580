#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "graphon/graph.hpp"
#include "graphon/homdensity.hpp"
#include "graphon/kernel.hpp"

namespace graphon {

inline constexpr double kDefaultSpectralTolerance = 1e-9;

/// Nonzero spectrum of a step kernel viewed as an integral operator.
/// eigenfunctions[i][j] is g_i on part j, betas[i][j] = lambda_i * g_i(j).
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenfunctions;
  std::vector<std::vector<double>> betas;
  double tolerance = kDefaultSpectralTolerance;

  std::size_t rank() const { return eigenvalues.size(); }
};

namespace detail {

// Cyclic Jacobi rotations on a dense symmetric matrix; returns eigenvalues and
// column eigenvectors (vecs[r][c], column c belongs to eigenvalue c).
inline void jacobi_eigen(std::vector<std::vector<double>> a, std::vector<double>& vals,
                         std::vector<std::vector<double>>& vecs) {
  const std::size_t n = a.size();
  vecs.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) vecs[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0, scale = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) (i == j ? scale : off) += a[i][j] * a[i][j];
    if (off <= 1e-30 * std::max(scale, 1e-300)) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = vecs[k][p], vkq = vecs[k][q];
          vecs[k][p] = c * vkp - s * vkq;
          vecs[k][q] = s * vkp + c * vkq;
        }
      }
  }
  vals.resize(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = a[i][i];
}

}  // namespace detail

/// Spectrum of W through the symmetric matrix B[a][b] = sqrt(s_a) W[a][b] sqrt(s_b).
/// Eigenvalues with |lambda| <= tol are dropped. Ordering: decreasing |lambda|,
/// positive before negative on ties, then lexicographic on the eigenfunction
/// (normalized so its first nonzero coordinate is positive).
inline SpectralDecomposition decompose(const StepKernel& w, double tol = kDefaultSpectralTolerance) {
  if (!(tol > 0)) throw DomainError("spectral tolerance must be positive");
  const std::size_t m = w.parts();
  std::vector<double> root(m);
  for (std::size_t j = 0; j < m; ++j) root[j] = std::sqrt(w.size(j).get_d());
  std::vector<std::vector<double>> b(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) b[i][j] = root[i] * w.value(i, j).get_d() * root[j];
  std::vector<double> vals;
  std::vector<std::vector<double>> vecs;
  detail::jacobi_eigen(b, vals, vecs);

  struct Entry {
    double lambda;
    std::vector<double> g;
  };
  std::vector<Entry> entries;
  for (std::size_t c = 0; c < m; ++c) {
    if (std::fabs(vals[c]) <= tol) continue;
    Entry e{vals[c], std::vector<double>(m)};
    for (std::size_t j = 0; j < m; ++j) e.g[j] = vecs[j][c] / root[j];
    for (double x : e.g)
      if (std::fabs(x) > tol) {
        if (x < 0)
          for (double& y : e.g) y = -y;
        break;
      }
    entries.push_back(std::move(e));
  }
  std::stable_sort(entries.begin(), entries.end(), [tol](const Entry& a, const Entry& b) {
    const double da = std::fabs(a.lambda), db = std::fabs(b.lambda);
    if (std::fabs(da - db) > tol) return da > db;
    if ((a.lambda > 0) != (b.lambda > 0)) return a.lambda > 0;
    for (std::size_t j = 0; j < a.g.size(); ++j)
      if (std::fabs(a.g[j] - b.g[j]) > tol) return a.g[j] < b.g[j];
    return false;
  });

  SpectralDecomposition out;
  out.tolerance = tol;
  for (auto& e : entries) {
    std::vector<double> beta(m);
    for (std::size_t j = 0; j < m; ++j) beta[j] = e.lambda * e.g[j];
    out.eigenvalues.push_back(e.lambda);
    out.eigenfunctions.push_back(std::move(e.g));
    out.betas.push_back(std::move(beta));
  }
  return out;
}

struct TraceCheck {
  Rational exact;
  double spectral = 0;
  double abs_power_sum = 0;  // sum |lambda|^n, the natural scale of the comparison
};

/// t(C_n, W) exactly, against the spectral sum of lambda^n.
inline TraceCheck cycle_trace_check(const StepKernel& w, int n, double tol = kDefaultSpectralTolerance,
                                    const EvalOptions& opts = {}) {
  if (n < 3) throw DomainError("cycle length must be at least 3");
  TraceCheck out;
  out.exact = density(graphs::cycle(n), w, opts);
  const auto spec = decompose(w, tol);
  for (double l : spec.eigenvalues) {
    out.spectral += std::pow(l, n);
    out.abs_power_sum += std::pow(std::fabs(l), n);
  }
  return out;
}

struct RootedCycleCheck {
  Rational direct;
  double spectral = 0;
};

/// t_W^{C_k}(x) for x in `part` directly, against sum_i lambda_i^{k-2} beta_i(x)^2.
inline RootedCycleCheck rooted_cycle_identity(const StepKernel& w, int k, std::size_t part,
                                              double tol = kDefaultSpectralTolerance, const EvalOptions& opts = {}) {
  if (k < 3) throw DomainError("cycle length must be at least 3");
  if (part >= w.parts()) throw DomainError("part index out of range");
  RootedCycleCheck out;
  const int root = 0;
  const std::size_t parts[] = {part};
  out.direct = rooted_density(graphs::cycle(k), std::span<const int>(&root, 1), w, parts, opts);
  const auto spec = decompose(w, tol);
  for (std::size_t i = 0; i < spec.rank(); ++i)
    out.spectral += std::pow(spec.eigenvalues[i], k - 2) * spec.betas[i][part] * spec.betas[i][part];
  return out;
}

}  // namespace graphon
