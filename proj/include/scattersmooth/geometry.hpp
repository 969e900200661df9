#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scattersmooth/error.hpp"

namespace scattersmooth {

/// Fixed-dimension list of points stored as one flat coordinate array.
class PointSet {
 public:
  PointSet() = default;
  PointSet(int dimension, std::vector<double> coords);

  static PointSet from_1d(std::vector<double> xs);

  int dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept {
    return coords_.size() / static_cast<std::size_t>(dim_);
  }
  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& coords() const noexcept { return coords_; }

  void push_back(std::span<const double> p);

 private:
  int dim_ = 1;
  std::vector<double> coords_;
};

/// One sample: a D-dimensional position and the scalar value observed there.
struct SamplePoint {
  std::vector<double> position;
  double value = 0.0;
};

/// Immutable collection of samples sharing one dimension. All coordinates and
/// values must be finite; a dataset is never empty.
class Dataset {
 public:
  Dataset(int dimension, const std::vector<SamplePoint>& points);
  Dataset(PointSet positions, std::vector<double> values);

  static Dataset from_1d(std::vector<double> xs, std::vector<double> ys);

  int dimension() const noexcept { return positions_.dimension(); }
  std::size_t size() const noexcept { return positions_.size(); }
  std::span<const double> position(std::size_t i) const { return positions_[i]; }
  double value(std::size_t i) const { return values_[i]; }
  const PointSet& positions() const noexcept { return positions_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Same positions, new values (e.g. after noise injection).
  Dataset with_values(std::vector<double> values) const;

 private:
  PointSet positions_;
  std::vector<double> values_;
};

/// Euclidean distance. Every distance this library compares or reports goes
/// through this one function, so selections are consistent bit-for-bit.
double point_distance(std::span<const double> a, std::span<const double> b);

/// The K nearest samples to a query position, ascending by (distance, index).
struct NeighborSet {
  std::vector<double> query;
  std::vector<std::size_t> indices;
  std::vector<double> distances;

  std::size_t count() const noexcept { return indices.size(); }
  double d_max() const { return distances.back(); }
};

/// Exact nearest-neighbor index over an immutable dataset: a sorted
/// permutation in 1D, a kd-tree (median split on the widest axis, leaves of
/// at most 16 points) in higher dimensions. Safe for concurrent queries.
class SpatialIndex {
 public:
  const Dataset& dataset() const noexcept { return *data_; }

  /// Storage-order view of the indexed points; covers each dataset index
  /// exactly once.
  std::span<const std::uint32_t> permutation() const noexcept { return perm_; }

 private:
  struct Node {
    int axis = 0;
    double split = 0.0;
    std::uint32_t left = 0;   // node index; kNoChild marks a leaf
    std::uint32_t right = 0;
    std::uint32_t begin = 0;  // leaf range into perm_
    std::uint32_t end = 0;
  };
  static constexpr std::uint32_t kNoChild = 0xFFFFFFFFu;

  const Dataset* data_ = nullptr;
  std::vector<std::uint32_t> perm_;
  std::vector<Node> nodes_;  // empty in the 1D case

  friend SpatialIndex build_index(const Dataset& dataset);
  friend NeighborSet k_nearest(const SpatialIndex& index,
                               std::span<const double> query, std::size_t k);
};

/// Builds the exact-KNN index for a dataset. The index keeps a pointer to the
/// dataset; the caller keeps it alive.
SpatialIndex build_index(const Dataset& dataset);

/// Exact K nearest neighbors of `query` under Euclidean distance, ties at
/// equal distance resolved toward the lower dataset index.
NeighborSet k_nearest(const SpatialIndex& index, std::span<const double> query,
                      std::size_t k);

}  // namespace scattersmooth
