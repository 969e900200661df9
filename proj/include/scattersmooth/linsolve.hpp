#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scattersmooth/error.hpp"

namespace scattersmooth {

/// Small row-major dense matrix. The systems solved here never exceed a few
/// dozen columns, so no effort is spent on anything beyond clarity.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> entries;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), entries(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

/// Minimizes sum_i w_i (b_i - (A a)_i)^2 through the normal equations
/// (A^T W A) a = A^T W b, eliminating with full diagonal pivoting. Throws
/// RankDeficient when a pivot drops below 1e-12 of the largest pivot seen.
std::vector<double> solve_weighted_normal_equations(const DenseMatrix& a,
                                                    std::span<const double> weights,
                                                    std::span<const double> rhs);

/// Unweighted least squares: identical to the weighted solve with unit weights.
std::vector<double> solve_least_squares(const DenseMatrix& a,
                                        std::span<const double> rhs);

}  // namespace scattersmooth
