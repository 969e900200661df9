#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "scattersmooth/execution.hpp"
#include "scattersmooth/geometry.hpp"

namespace scattersmooth {

/// An ordered sampled curve: positions plus the value observed at each.
struct CurvePoints {
  PointSet positions;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

/// Curve view of a dataset (same positions and values).
CurvePoints curve_from(const Dataset& data);

/// Discrete second derivative at interior index i of a 1D curve:
/// (f_{i+1} - 2 f_i + f_{i-1}) / ((x_{i+1} - x_i)(x_i - x_{i-1})).
double second_difference(const CurvePoints& curve, std::size_t i);

/// Curvature error: sum of |second_difference| over all interior points of a
/// 1D curve with strictly increasing abscissae. Lower means smoother.
double curvature_error(const CurvePoints& curve);

/// Distance error: for each approximated point, the Euclidean distance in
/// graph space (position plus value axis) to the nearest reference point,
/// summed. Lower means closer to the reference curve.
double distance_error(const CurvePoints& approx, const CurvePoints& reference,
                      Execution exec = Execution::Parallel);

/// Measured errors for one method configuration.
struct ErrorReport {
  std::string method;
  std::size_t param = 0;  // neighbors K for local methods, centers M for global
  double curvature = 0.0;
  double distance = 0.0;
};

}  // namespace scattersmooth
