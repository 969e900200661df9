#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scattersmooth/execution.hpp"
#include "scattersmooth/geometry.hpp"
#include "scattersmooth/kernels.hpp"

namespace scattersmooth {

/// Polynomial tail attached to an RBF fit.
struct PolynomialTail {
  enum class Kind { None, Constant, Degree };
  Kind kind = Kind::Constant;
  int degree = 0;  // used when kind == Degree

  static PolynomialTail none() { return {Kind::None, 0}; }
  static PolynomialTail constant() { return {Kind::Constant, 0}; }
  static PolynomialTail of_degree(int d) { return {Kind::Degree, d}; }

  bool operator==(const PolynomialTail&) const = default;
};

struct LocalRbfConfig {
  PolynomialTail tail = PolynomialTail::constant();
  std::size_t neighbors = 0;
  KernelProfile kernel = KernelProfile::Tricube;
  /// On rank deficiency retry with a simpler tail, down to no tail at all.
  bool tail_fallback = true;
};

/// Single-center RBF fit over a neighborhood: one kernel weight lambda plus
/// an optional polynomial tail in the shifted basis.
struct LocalRbfFit {
  std::vector<double> center;
  double lambda = 0.0;
  std::vector<double> poly_coefficients;  // empty when the tail is absent
  double residual_norm = 0.0;             // ||A eta - f||_2
  PolynomialTail tail;                    // tail actually used

  /// Fitted value at the center: lambda * kernel(0) + constant tail term.
  double value_at_center() const {
    return lambda + (poly_coefficients.empty() ? 0.0 : poly_coefficients.front());
  }
};

/// Least-squares fit of [kernel column | shifted polynomial columns] to the
/// neighbor values. Requires a positive neighborhood radius.
LocalRbfFit fit_local_rbf(const NeighborSet& neighbors, const Dataset& data,
                          const LocalRbfConfig& config);

/// Constant-tail fast path: the 2x2 normal system solved explicitly.
LocalRbfFit fit_local_rbf_constant_closed_form(const NeighborSet& neighbors,
                                               const Dataset& data,
                                               KernelProfile kernel);

/// No-tail fast path: lambda = sum(phi_i f_i) / sum(phi_i^2). Also covers the
/// all-coincident neighborhood, where every kernel value is 1.
LocalRbfFit fit_local_rbf_no_polynomial_closed_form(const NeighborSet& neighbors,
                                                    const Dataset& data,
                                                    KernelProfile kernel);

/// Uniformly spaced centers across the dataset's bounding box, endpoints
/// included; a single center sits at the box midpoint.
PointSet place_centers(const Dataset& data, std::size_t m);

/// Global approximation: fixed centers with one weight each, a shared
/// support radius, and an optional global polynomial tail. Immutable.
class GlobalRbfModel {
 public:
  GlobalRbfModel(PointSet centers, double support_radius,
                 std::vector<double> lambdas, std::optional<int> tail_degree,
                 std::vector<double> tail_coefficients, KernelProfile kernel);

  int dimension() const noexcept { return centers_.dimension(); }
  const PointSet& centers() const noexcept { return centers_; }
  double support_radius() const noexcept { return support_radius_; }
  const std::vector<double>& lambdas() const noexcept { return lambdas_; }
  std::optional<int> tail_degree() const noexcept { return tail_degree_; }
  const std::vector<double>& tail_coefficients() const noexcept {
    return tail_coefficients_;
  }
  KernelProfile kernel() const noexcept { return kernel_; }

 private:
  PointSet centers_;
  double support_radius_;
  std::vector<double> lambdas_;
  std::optional<int> tail_degree_;
  std::vector<double> tail_coefficients_;  // unshifted global basis
  KernelProfile kernel_;
};

/// Fits the global model by least squares over the whole dataset. The
/// support radius is support_overlap times the center spacing, so overlap
/// greater than 1 makes adjacent supports intersect. tail_degree == nullopt
/// drops the polynomial columns entirely.
GlobalRbfModel fit_global(const Dataset& data, std::size_t m,
                          std::optional<int> tail_degree, double support_overlap,
                          KernelProfile kernel = KernelProfile::Tricube);

/// Evaluates the global model at one position.
double evaluate_global(const GlobalRbfModel& model, std::span<const double> x);

/// Evaluates the global model at many positions.
std::vector<double> evaluate_global(const GlobalRbfModel& model, const PointSet& xs,
                                    Execution exec = Execution::Parallel);

/// Smooths via the single-center local RBF at each query position.
std::vector<double> smooth_local_rbf(const SpatialIndex& index,
                                     const PointSet& queries,
                                     const LocalRbfConfig& config,
                                     Execution exec = Execution::Parallel);
std::vector<double> smooth_local_rbf(const Dataset& data, const PointSet& queries,
                                     const LocalRbfConfig& config,
                                     Execution exec = Execution::Parallel);

/// Text serialization, 17 significant digits: round-trips bit-exactly.
void write_model(const GlobalRbfModel& model, std::ostream& out);
GlobalRbfModel read_model(std::istream& in);
void save_model(const GlobalRbfModel& model, const std::string& path);
GlobalRbfModel load_model(const std::string& path);

}  // namespace scattersmooth
