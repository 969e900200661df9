#include "scattersmooth/metrics.hpp"

#include <cmath>

namespace scattersmooth {

CurvePoints curve_from(const Dataset& data) {
  return CurvePoints{data.positions(), data.values()};
}

namespace {

void require_1d_curve(const CurvePoints& curve) {
  if (curve.positions.dimension() != 1) {
    throw InvalidArgument("curvature metric requires a 1D curve");
  }
  if (curve.positions.size() != curve.values.size()) {
    throw InvalidArgument("positions and values differ in length");
  }
}

}  // namespace

double second_difference(const CurvePoints& curve, std::size_t i) {
  require_1d_curve(curve);
  const std::size_t n = curve.size();
  if (n < 3 || i < 1 || i > n - 2) throw InvalidArgument("not interior");
  const double x_prev = curve.positions[i - 1][0];
  const double x_mid = curve.positions[i][0];
  const double x_next = curve.positions[i + 1][0];
  const double h_right = x_next - x_mid;
  const double h_left = x_mid - x_prev;
  if (h_right == 0.0 || h_left == 0.0) throw InvalidArgument("duplicate abscissa");
  const double numer =
      curve.values[i + 1] - 2.0 * curve.values[i] + curve.values[i - 1];
  return numer / (h_right * h_left);
}

double curvature_error(const CurvePoints& curve) {
  require_1d_curve(curve);
  const std::size_t n = curve.size();
  if (n < 3) throw InvalidArgument("curvature needs at least 3 points");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(curve.positions[i][0] > curve.positions[i - 1][0])) {
      throw InvalidArgument(curve.positions[i][0] == curve.positions[i - 1][0]
                                ? "duplicate abscissa"
                                : "abscissae must be strictly increasing");
    }
  }
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    total += std::abs(second_difference(curve, i));
  }
  return total;
}

double distance_error(const CurvePoints& approx, const CurvePoints& reference,
                      Execution exec) {
  if (approx.size() == 0 || reference.size() == 0) {
    throw InvalidArgument("curves must be non-empty");
  }
  if (approx.positions.dimension() != reference.positions.dimension()) {
    throw InvalidArgument("curve dimension mismatch");
  }
  const int dim = approx.positions.dimension();

  // Embed the reference into graph space: position coordinates plus the
  // value as one more axis, then reuse the exact-KNN machinery.
  PointSet graph(dim + 1, {});
  std::vector<double> embedded(static_cast<std::size_t>(dim) + 1);
  for (std::size_t j = 0; j < reference.size(); ++j) {
    const auto p = reference.positions[j];
    for (int c = 0; c < dim; ++c) embedded[static_cast<std::size_t>(c)] = p[c];
    embedded[static_cast<std::size_t>(dim)] = reference.values[j];
    graph.push_back(embedded);
  }
  const Dataset graph_points(std::move(graph),
                             std::vector<double>(reference.size(), 0.0));
  const SpatialIndex index = build_index(graph_points);

  std::vector<double> nearest(approx.size(), 0.0);
  for_each_index(exec, approx.size(), [&](std::size_t i) {
    std::vector<double> q(static_cast<std::size_t>(dim) + 1);
    const auto p = approx.positions[i];
    for (int c = 0; c < dim; ++c) q[static_cast<std::size_t>(c)] = p[c];
    q[static_cast<std::size_t>(dim)] = approx.values[i];
    nearest[i] = k_nearest(index, q, 1).distances[0];
  });

  double total = 0.0;  // summed serially so both policies agree bit-for-bit
  for (double d : nearest) total += d;
  return total;
}

}  // namespace scattersmooth
