#pragma once

#include <cmath>

#include "scattersmooth/error.hpp"

namespace scattersmooth {

/// Weighting profile for local regression and, identically, radial basis
/// kernel for the RBF fits. Compactly supported: zero from radius 1 outward.
enum class KernelProfile { Tricube };

/// Tricube profile (1 - r^3)^3 on [0, 1), 0 beyond.
inline double tricube(double r) {
  if (r >= 1.0) return 0.0;
  const double c = 1.0 - r * r * r;
  return c * c * c;
}

/// Kernel weight at normalized radius r >= 0. Weight 1 at the center,
/// non-increasing, exactly 0 at and beyond radius 1.
inline double weight(KernelProfile profile, double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw InvalidArgument("invalid radius");
  }
  switch (profile) {
    case KernelProfile::Tricube:
      return tricube(r);
  }
  throw InvalidArgument("unknown kernel profile");
}

/// Maps a raw distance into the kernel's unit support: dist / d_max, where
/// d_max is the neighborhood radius (distance to the farthest kept neighbor).
/// The farthest neighbor therefore lands exactly on the support boundary.
inline double normalized_distance(double dist, double d_max) {
  if (!(d_max > 0.0)) {
    throw DegenerateNeighborhood("degenerate neighborhood: zero radius");
  }
  return dist / d_max;
}

}  // namespace scattersmooth
