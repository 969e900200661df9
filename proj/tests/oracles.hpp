// Test-only oracles, deliberately independent of the library's solve paths:
// exhaustive KNN, Cramer's-rule solves of tiny normal systems, and plain
// coordinate-descent-free grid search over fit coefficients.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "scattersmooth/geometry.hpp"
#include "scattersmooth/linsolve.hpp"

namespace oracles {

// All (distance, index) pairs sorted by (distance, index); take the first k.
inline std::vector<std::pair<double, std::size_t>> brute_force_knn(
    const scattersmooth::Dataset& data, std::span<const double> query,
    std::size_t k) {
  std::vector<std::pair<double, std::size_t>> all;
  all.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    all.emplace_back(scattersmooth::point_distance(data.position(i), query), i);
  }
  std::sort(all.begin(), all.end());
  all.resize(k);
  return all;
}

inline double det_n(const std::vector<double>& m, std::size_t n) {
  if (n == 1) return m[0];
  if (n == 2) return m[0] * m[3] - m[1] * m[2];
  double det = 0.0;
  double sign = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> minor((n - 1) * (n - 1));
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t mc = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == c) continue;
        minor[(i - 1) * (n - 1) + mc] = m[i * n + j];
        ++mc;
      }
    }
    det += sign * m[c] * det_n(minor, n - 1);
    sign = -sign;
  }
  return det;
}

// Solves the q x q normal system of the weighted least-squares problem by
// Cramer's rule. Returns nullopt when the determinant is too small for the
// comparison to be meaningful.
inline std::optional<std::vector<double>> cramer_weighted_normal(
    const scattersmooth::DenseMatrix& a, std::span<const double> w,
    std::span<const double> b) {
  const std::size_t q = a.cols;
  std::vector<double> m(q * q, 0.0);
  std::vector<double> v(q, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t c1 = 0; c1 < q; ++c1) {
      v[c1] += w[i] * a(i, c1) * b[i];
      for (std::size_t c2 = 0; c2 < q; ++c2) {
        m[c1 * q + c2] += w[i] * a(i, c1) * a(i, c2);
      }
    }
  }
  const double det = det_n(m, q);
  double scale = 0.0;
  for (double e : m) scale = std::max(scale, std::abs(e));
  if (!(std::abs(det) > 1e-7 * std::pow(scale, static_cast<double>(q)))) {
    return std::nullopt;
  }
  std::vector<double> x(q);
  for (std::size_t c = 0; c < q; ++c) {
    std::vector<double> replaced = m;
    for (std::size_t r = 0; r < q; ++r) replaced[r * q + c] = v[r];
    x[c] = det_n(replaced, q) / det;
  }
  return x;
}

// Refined grid search minimizing `objective` over n coefficients. Shrinks the
// box around the best grid point each round; resolution after the final
// round is well below 1e-6 for unit-scale starting boxes.
inline std::vector<double> grid_search_minimize(
    const std::function<double(const std::vector<double>&)>& objective,
    std::vector<double> center, double half_width, int rounds = 18,
    int points_per_axis = 9) {
  const std::size_t n = center.size();
  std::vector<double> best = center;
  double best_value = objective(center);
  for (int round = 0; round < rounds; ++round) {
    std::vector<int> idx(n, 0);
    std::vector<double> candidate(n);
    for (;;) {
      for (std::size_t c = 0; c < n; ++c) {
        const double t =
            static_cast<double>(idx[c]) / static_cast<double>(points_per_axis - 1);
        candidate[c] = center[c] - half_width + 2.0 * half_width * t;
      }
      const double value = objective(candidate);
      if (value < best_value) {
        best_value = value;
        best = candidate;
      }
      std::size_t c = 0;
      while (c < n && ++idx[c] == points_per_axis) {
        idx[c] = 0;
        ++c;
      }
      if (c == n) break;
    }
    center = best;
    half_width *= 0.45;
  }
  return best;
}

}  // namespace oracles
