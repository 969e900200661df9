#include "scattersmooth/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scattersmooth {

namespace {

constexpr double kPivotRatio = 1e-12;

// Solves the symmetric system m x = v with full diagonal pivoting. Consumes
// both arguments.
std::vector<double> solve_symmetric_pivoted(DenseMatrix m, std::vector<double> v) {
  const std::size_t n = m.rows;
  std::vector<std::size_t> col_of(n);  // original index sitting at position k
  std::iota(col_of.begin(), col_of.end(), std::size_t{0});

  double max_pivot = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t j = k + 1; j < n; ++j) {
      if (std::abs(m(j, j)) > std::abs(m(p, p))) p = j;
    }
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(p, c), m(k, c));
      for (std::size_t r = 0; r < n; ++r) std::swap(m(r, p), m(r, k));
      std::swap(v[p], v[k]);
      std::swap(col_of[p], col_of[k]);
    }
    const double pivot = m(k, k);
    const double mag = std::abs(pivot);
    max_pivot = std::max(max_pivot, mag);
    if (!(mag > kPivotRatio * max_pivot) || max_pivot == 0.0) {
      throw RankDeficient("rank deficient", k);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = m(i, k) / pivot;
      if (factor == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= factor * m(k, j);
      v[i] -= factor * v[k];
    }
  }

  std::vector<double> y(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double acc = v[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= m(k, j) * y[j];
    y[k] = acc / m(k, k);
  }

  std::vector<double> x(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) x[col_of[k]] = y[k];
  return x;
}

void validate_system(const DenseMatrix& a, std::span<const double> rhs) {
  if (a.rows < 1 || a.cols < 1) throw InvalidArgument("empty system");
  if (rhs.size() != a.rows) throw InvalidArgument("rhs length mismatch");
  for (double v : a.entries) {
    if (!std::isfinite(v)) throw InvalidArgument("matrix entries must be finite");
  }
  for (double v : rhs) {
    if (!std::isfinite(v)) throw InvalidArgument("rhs entries must be finite");
  }
}

}  // namespace

std::vector<double> solve_weighted_normal_equations(const DenseMatrix& a,
                                                    std::span<const double> weights,
                                                    std::span<const double> rhs) {
  validate_system(a, rhs);
  if (weights.size() != a.rows) throw InvalidArgument("weight length mismatch");
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("weights must be finite and nonnegative");
  }

  const std::size_t q = a.cols;
  DenseMatrix normal(q, q, 0.0);
  std::vector<double> moment(q, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double w = weights[i];
    if (w == 0.0) continue;  // contributes nothing, and skipping keeps sums bit-stable
    const double* row = a.entries.data() + i * q;
    for (std::size_t c1 = 0; c1 < q; ++c1) {
      const double t = w * row[c1];
      moment[c1] += t * rhs[i];
      for (std::size_t c2 = c1; c2 < q; ++c2) {
        normal(c1, c2) += t * row[c2];
      }
    }
  }
  for (std::size_t c1 = 0; c1 < q; ++c1) {
    for (std::size_t c2 = 0; c2 < c1; ++c2) {
      normal(c1, c2) = normal(c2, c1);
    }
  }
  return solve_symmetric_pivoted(std::move(normal), std::move(moment));
}

std::vector<double> solve_least_squares(const DenseMatrix& a,
                                        std::span<const double> rhs) {
  validate_system(a, rhs);
  const std::vector<double> ones(a.rows, 1.0);
  return solve_weighted_normal_equations(a, ones, rhs);
}

}  // namespace scattersmooth
