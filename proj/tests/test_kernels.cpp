#include <doctest.h>

#include <cmath>
#include <limits>

#include "scattersmooth/kernels.hpp"
#include "scattersmooth/prng.hpp"

using namespace scattersmooth;

TEST_CASE("tricube takes its pinned values") {
  CHECK(weight(KernelProfile::Tricube, 0.0) == 1.0);
  CHECK(weight(KernelProfile::Tricube, 1.0) == 0.0);
  // (1 - 0.5^3)^3 = 0.875^3, exactly representable
  CHECK(weight(KernelProfile::Tricube, 0.5) == 0.669921875);
  CHECK(weight(KernelProfile::Tricube, 2.0) == 0.0);
  CHECK(weight(KernelProfile::Tricube, 100.0) == 0.0);
}

TEST_CASE("tricube satisfies the weighting-function conditions on a dense grid") {
  double prev = weight(KernelProfile::Tricube, 0.0);
  CHECK(prev == 1.0);
  for (int i = 1; i <= 4000; ++i) {
    const double r = i * 5e-4;  // covers [0, 2]
    const double w = weight(KernelProfile::Tricube, r);
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
    CHECK(w <= prev);  // monotone non-increasing
    if (r >= 1.0) CHECK(w == 0.0);
    prev = w;
  }
}

TEST_CASE("tricube is continuous at the support boundary") {
  CHECK(weight(KernelProfile::Tricube, 1.0 - 1e-12) < 1e-11);
  CHECK(weight(KernelProfile::Tricube, 1.0) == 0.0);
  CHECK(weight(KernelProfile::Tricube, 1.0 + 1e-12) == 0.0);
}

TEST_CASE("weight rejects invalid radii") {
  CHECK_THROWS_AS(weight(KernelProfile::Tricube, -0.1), InvalidArgument);
  CHECK_THROWS_AS(weight(KernelProfile::Tricube, std::nan("")), InvalidArgument);
  CHECK_THROWS_AS(weight(KernelProfile::Tricube,
                         std::numeric_limits<double>::infinity()),
                  InvalidArgument);
}

TEST_CASE("normalized_distance maps into the unit support") {
  CHECK(normalized_distance(0.0, 3.7) == 0.0);
  CHECK(normalized_distance(3.7, 3.7) == 1.0);
  CHECK(normalized_distance(0.45, 0.9) == 0.5);
}

TEST_CASE("normalized_distance rejects a degenerate radius") {
  CHECK_THROWS_AS(normalized_distance(1.0, 0.0), DegenerateNeighborhood);
  CHECK_THROWS_AS(normalized_distance(1.0, -2.0), DegenerateNeighborhood);
}

TEST_CASE("weights are invariant under common distance rescaling") {
  SplitMix64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const double d_max = rng.next_in(0.1, 10.0);
    const double dist = rng.next_in(0.0, d_max);
    const double factor = rng.next_in(1e-3, 1e3);
    const double w = weight(KernelProfile::Tricube, normalized_distance(dist, d_max));
    const double w_scaled = weight(
        KernelProfile::Tricube, normalized_distance(factor * dist, factor * d_max));
    CHECK(w_scaled == doctest::Approx(w).epsilon(1e-12));
  }
}
