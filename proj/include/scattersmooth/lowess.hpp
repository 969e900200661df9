#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "scattersmooth/execution.hpp"
#include "scattersmooth/geometry.hpp"
#include "scattersmooth/kernels.hpp"

namespace scattersmooth {

/// Multivariate monomial basis: exponent tuples in graded order (constant
/// term first, then ascending total degree, ties broken so that earlier
/// coordinates come first, e.g. x before y, x^2 before xy before y^2).
struct PolynomialBasis {
  int dimension = 1;
  std::vector<std::vector<int>> exponents;

  std::size_t size() const noexcept { return exponents.size(); }
};

/// Exponent tuples to omit from a basis. The constant term cannot be masked.
using MonomialMask = std::vector<std::vector<int>>;

/// Full monomial basis of total degree <= degree in `dimension` variables,
/// minus any masked non-constant terms.
PolynomialBasis basis_monomials(int dimension, int degree,
                                const MonomialMask* omit = nullptr);

struct LowessConfig {
  int degree = 1;
  std::size_t neighbors = 0;
  KernelProfile kernel = KernelProfile::Tricube;
  std::optional<MonomialMask> mask;
  /// On a rank-deficient neighborhood retry with degree-1, down to 0.
  bool degree_fallback = true;
};

/// A local weighted polynomial fit centered at a query point. Coefficients
/// live in the shifted basis (powers of x - center), so the fitted value at
/// the center is the constant coefficient.
struct LocalFit {
  std::vector<double> center;
  std::vector<double> coefficients;
  double objective = 0.0;  // weighted residual sum of squares
  int effective_degree = 0;

  double value_at_center() const { return coefficients.front(); }
};

/// Weighted least-squares polynomial fit over a neighborhood, weights from
/// the kernel at distances normalized by the neighborhood radius.
LocalFit fit_local(const NeighborSet& neighbors, const Dataset& data,
                   const LowessConfig& config);

/// Degree-0 fast path: the fitted value is the weighted mean of the
/// neighbor values.
LocalFit fit_constant_closed_form(const NeighborSet& neighbors,
                                  const Dataset& data, KernelProfile kernel);

/// Degree-1 fast path for 1D data: the 2x2 normal system solved explicitly
/// in shifted coordinates.
LocalFit fit_linear_closed_form(const NeighborSet& neighbors,
                                const Dataset& data, KernelProfile kernel);

/// Smooths the dataset at each query position: K nearest neighbors, local
/// fit, fitted value at the query. Uses the closed forms automatically for
/// unmasked 1D fits of degree 0 or 1. Queries are independent; Parallel
/// mode gives bit-identical results.
std::vector<double> smooth(const SpatialIndex& index, const PointSet& queries,
                           const LowessConfig& config,
                           Execution exec = Execution::Parallel);

/// Convenience overload that builds the index first.
std::vector<double> smooth(const Dataset& data, const PointSet& queries,
                           const LowessConfig& config,
                           Execution exec = Execution::Parallel);

}  // namespace scattersmooth
