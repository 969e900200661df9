#include "scattersmooth/lowess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scattersmooth/linsolve.hpp"

namespace scattersmooth {

namespace {

// Integer power by repeated multiplication; exponents here are tiny and this
// keeps results deterministic across libm implementations.
double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

bool grlex_before(const std::vector<int>& a, const std::vector<int>& b) {
  int ta = 0, tb = 0;
  for (int v : a) ta += v;
  for (int v : b) tb += v;
  if (ta != tb) return ta < tb;
  return a > b;  // higher leading exponents first within a degree
}

std::vector<double> kernel_weights(const NeighborSet& neighbors,
                                   const Dataset& data, KernelProfile kernel) {
  (void)data;
  const double radius = neighbors.d_max();
  std::vector<double> w(neighbors.count());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = weight(kernel, normalized_distance(neighbors.distances[i], radius));
  }
  return w;
}

double monomial_value(std::span<const double> shifted, const std::vector<int>& exps) {
  double v = 1.0;
  for (std::size_t c = 0; c < exps.size(); ++c) v *= ipow(shifted[c], exps[c]);
  return v;
}

void validate_neighbors(const NeighborSet& neighbors, const Dataset& data) {
  if (neighbors.count() == 0) throw InvalidArgument("empty neighborhood");
  if (neighbors.query.size() != static_cast<std::size_t>(data.dimension())) {
    throw InvalidArgument("query dimension mismatch");
  }
  for (std::size_t idx : neighbors.indices) {
    if (idx >= data.size()) throw InvalidArgument("neighbor index out of range");
  }
}

double weighted_objective(const NeighborSet& neighbors, const Dataset& data,
                          std::span<const double> w,
                          const PolynomialBasis& basis,
                          std::span<const double> coeffs) {
  double s = 0.0;
  std::vector<double> shifted(static_cast<std::size_t>(data.dimension()));
  for (std::size_t i = 0; i < neighbors.count(); ++i) {
    const auto pos = data.position(neighbors.indices[i]);
    for (std::size_t c = 0; c < shifted.size(); ++c) {
      shifted[c] = pos[c] - neighbors.query[c];
    }
    double fit = 0.0;
    for (std::size_t t = 0; t < basis.size(); ++t) {
      fit += coeffs[t] * monomial_value(shifted, basis.exponents[t]);
    }
    const double r = data.value(neighbors.indices[i]) - fit;
    s += w[i] * r * r;
  }
  return s;
}

}  // namespace

PolynomialBasis basis_monomials(int dimension, int degree, const MonomialMask* omit) {
  if (dimension < 1) throw InvalidArgument("dimension must be >= 1");
  if (degree < 0) throw InvalidArgument("degree must be >= 0");

  std::vector<std::vector<int>> tuples;
  std::vector<int> current(static_cast<std::size_t>(dimension), 0);
  auto enumerate = [&](auto&& self, int coord, int remaining) -> void {
    if (coord == dimension) {
      tuples.push_back(current);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      current[static_cast<std::size_t>(coord)] = e;
      self(self, coord + 1, remaining - e);
    }
    current[static_cast<std::size_t>(coord)] = 0;
  };
  enumerate(enumerate, 0, degree);
  std::sort(tuples.begin(), tuples.end(), grlex_before);

  if (omit != nullptr) {
    for (const auto& masked : *omit) {
      if (masked.size() != static_cast<std::size_t>(dimension)) {
        throw InvalidArgument("mask dimension mismatch");
      }
      if (std::all_of(masked.begin(), masked.end(), [](int e) { return e == 0; })) {
        throw InvalidArgument("constant term required");
      }
      std::erase(tuples, masked);
    }
  }

  PolynomialBasis basis;
  basis.dimension = dimension;
  basis.exponents = std::move(tuples);
  return basis;
}

LocalFit fit_local(const NeighborSet& neighbors, const Dataset& data,
                   const LowessConfig& config) {
  validate_neighbors(neighbors, data);
  if (config.degree < 0) throw InvalidArgument("degree must be >= 0");

  const std::vector<double> w = kernel_weights(neighbors, data, config.kernel);
  if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; })) {
    throw DegenerateNeighborhood("degenerate neighborhood: all weights zero");
  }

  const std::size_t k = neighbors.count();
  const int dim = data.dimension();
  std::vector<double> values(k);
  for (std::size_t i = 0; i < k; ++i) values[i] = data.value(neighbors.indices[i]);

  const MonomialMask* mask = config.mask ? &*config.mask : nullptr;
  std::vector<double> shifted(static_cast<std::size_t>(dim));
  for (int d = config.degree;; --d) {
    const PolynomialBasis basis = basis_monomials(dim, d, mask);
    DenseMatrix a(k, basis.size());
    for (std::size_t i = 0; i < k; ++i) {
      const auto pos = data.position(neighbors.indices[i]);
      for (std::size_t c = 0; c < shifted.size(); ++c) {
        shifted[c] = pos[c] - neighbors.query[c];
      }
      for (std::size_t t = 0; t < basis.size(); ++t) {
        a(i, t) = monomial_value(shifted, basis.exponents[t]);
      }
    }
    try {
      std::vector<double> coeffs = solve_weighted_normal_equations(a, w, values);
      LocalFit fit;
      fit.center.assign(neighbors.query.begin(), neighbors.query.end());
      fit.objective = weighted_objective(neighbors, data, w, basis, coeffs);
      fit.coefficients = std::move(coeffs);
      fit.effective_degree = d;
      return fit;
    } catch (const RankDeficient&) {
      if (!config.degree_fallback || d == 0) throw;
    }
  }
}

LocalFit fit_constant_closed_form(const NeighborSet& neighbors,
                                  const Dataset& data, KernelProfile kernel) {
  validate_neighbors(neighbors, data);
  const std::vector<double> w = kernel_weights(neighbors, data, kernel);

  double sum_w = 0.0, sum_wy = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    sum_w += w[i];
    sum_wy += w[i] * data.value(neighbors.indices[i]);
  }
  if (!(sum_w > 0.0)) {
    throw DegenerateNeighborhood("degenerate neighborhood: all weights zero");
  }

  LocalFit fit;
  fit.center.assign(neighbors.query.begin(), neighbors.query.end());
  fit.coefficients = {sum_wy / sum_w};
  fit.effective_degree = 0;
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double r = data.value(neighbors.indices[i]) - fit.coefficients[0];
    s += w[i] * r * r;
  }
  fit.objective = s;
  return fit;
}

LocalFit fit_linear_closed_form(const NeighborSet& neighbors,
                                const Dataset& data, KernelProfile kernel) {
  validate_neighbors(neighbors, data);
  if (data.dimension() != 1) {
    throw InvalidArgument("linear closed form requires 1D data");
  }
  const std::vector<double> w = kernel_weights(neighbors, data, kernel);

  // Sums over shifted coordinates u = x - center.
  double sw = 0.0, sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double u = data.position(neighbors.indices[i])[0] - neighbors.query[0];
    const double y = data.value(neighbors.indices[i]);
    sw += w[i];
    sx += w[i] * u;
    sxx += w[i] * u * u;
    sy += w[i] * y;
    sxy += w[i] * u * y;
  }
  if (!(sw > 0.0)) {
    throw DegenerateNeighborhood("degenerate neighborhood: all weights zero");
  }
  const double det = sw * sxx - sx * sx;
  const double scale = std::max(std::abs(sw * sxx), sx * sx);
  if (!(std::abs(det) > 1e-12 * scale)) {
    throw RankDeficient("rank deficient", 1);
  }

  LocalFit fit;
  fit.center.assign(neighbors.query.begin(), neighbors.query.end());
  fit.coefficients = {(sy * sxx - sx * sxy) / det, (sw * sxy - sy * sx) / det};
  fit.effective_degree = 1;
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double u = data.position(neighbors.indices[i])[0] - neighbors.query[0];
    const double r = data.value(neighbors.indices[i]) -
                     (fit.coefficients[0] + fit.coefficients[1] * u);
    s += w[i] * r * r;
  }
  fit.objective = s;
  return fit;
}

namespace {

double evaluate_one(const SpatialIndex& index, std::span<const double> query,
                    const LowessConfig& config) {
  const NeighborSet neighbors = k_nearest(index, query, config.neighbors);
  const Dataset& data = index.dataset();
  const bool closed_form_eligible =
      data.dimension() == 1 && !config.mask && config.degree <= 1;
  if (closed_form_eligible) {
    if (config.degree == 0) {
      return fit_constant_closed_form(neighbors, data, config.kernel).value_at_center();
    }
    try {
      return fit_linear_closed_form(neighbors, data, config.kernel).value_at_center();
    } catch (const RankDeficient&) {
      if (!config.degree_fallback) throw;
      return fit_constant_closed_form(neighbors, data, config.kernel).value_at_center();
    }
  }
  return fit_local(neighbors, data, config).value_at_center();
}

}  // namespace

std::vector<double> smooth(const SpatialIndex& index, const PointSet& queries,
                           const LowessConfig& config, Execution exec) {
  if (queries.size() == 0) throw InvalidArgument("no query points");
  if (queries.dimension() != index.dataset().dimension()) {
    throw InvalidArgument("query dimension mismatch");
  }
  if (config.degree < 0) throw InvalidArgument("degree must be >= 0");

  const std::size_t n = queries.size();
  std::vector<double> out(n, 0.0);
  std::vector<std::string> errors(n);
  std::vector<char> failed(n, 0);
  for_each_index(exec, n, [&](std::size_t i) {
    try {
      out[i] = evaluate_one(index, queries[i], config);
    } catch (const std::exception& e) {
      failed[i] = 1;
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (failed[i]) throw QueryError(i, errors[i]);
  }
  return out;
}

std::vector<double> smooth(const Dataset& data, const PointSet& queries,
                           const LowessConfig& config, Execution exec) {
  const SpatialIndex index = build_index(data);
  return smooth(index, queries, config, exec);
}

}  // namespace scattersmooth
