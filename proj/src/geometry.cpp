#include "scattersmooth/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <utility>

namespace scattersmooth {

namespace {

void check_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be finite");
  }
}

}  // namespace

PointSet::PointSet(int dimension, std::vector<double> coords)
    : dim_(dimension), coords_(std::move(coords)) {
  if (dim_ < 1) throw InvalidArgument("dimension must be >= 1");
  if (coords_.size() % static_cast<std::size_t>(dim_) != 0) {
    throw InvalidArgument("coordinate count not a multiple of the dimension");
  }
  check_finite(coords_, "coordinates");
}

PointSet PointSet::from_1d(std::vector<double> xs) {
  return PointSet(1, std::move(xs));
}

void PointSet::push_back(std::span<const double> p) {
  if (p.size() != static_cast<std::size_t>(dim_)) {
    throw InvalidArgument("point dimension mismatch");
  }
  check_finite(p, "coordinates");
  coords_.insert(coords_.end(), p.begin(), p.end());
}

Dataset::Dataset(int dimension, const std::vector<SamplePoint>& points) {
  if (points.empty()) throw InvalidArgument("dataset must hold at least one point");
  std::vector<double> coords;
  coords.reserve(points.size() * static_cast<std::size_t>(dimension));
  std::vector<double> values;
  values.reserve(points.size());
  for (const SamplePoint& p : points) {
    if (p.position.size() != static_cast<std::size_t>(dimension)) {
      throw InvalidArgument("sample dimension mismatch");
    }
    coords.insert(coords.end(), p.position.begin(), p.position.end());
    values.push_back(p.value);
  }
  positions_ = PointSet(dimension, std::move(coords));
  values_ = std::move(values);
  check_finite(values_, "values");
}

Dataset::Dataset(PointSet positions, std::vector<double> values)
    : positions_(std::move(positions)), values_(std::move(values)) {
  if (positions_.size() == 0) throw InvalidArgument("dataset must hold at least one point");
  if (positions_.size() != values_.size()) {
    throw InvalidArgument("positions and values differ in length");
  }
  check_finite(values_, "values");
}

Dataset Dataset::from_1d(std::vector<double> xs, std::vector<double> ys) {
  return Dataset(PointSet::from_1d(std::move(xs)), std::move(ys));
}

Dataset Dataset::with_values(std::vector<double> values) const {
  return Dataset(positions_, std::move(values));
}

double point_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double d = a[c] - b[c];
    sum += d * d;
  }
  return std::sqrt(sum);
}

namespace {

constexpr std::size_t kLeafSize = 16;

using DistIdx = std::pair<double, std::uint32_t>;  // ordered by distance, then index

}  // namespace

SpatialIndex build_index(const Dataset& dataset) {
  SpatialIndex index;
  index.data_ = &dataset;
  const std::size_t n = dataset.size();
  index.perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) index.perm_[i] = static_cast<std::uint32_t>(i);

  if (dataset.dimension() == 1) {
    std::sort(index.perm_.begin(), index.perm_.end(),
              [&](std::uint32_t a, std::uint32_t b) {
                const double xa = dataset.position(a)[0];
                const double xb = dataset.position(b)[0];
                if (xa != xb) return xa < xb;
                return a < b;
              });
    return index;
  }

  const int dim = dataset.dimension();
  struct Range {
    std::uint32_t begin, end;
    std::uint32_t node;
  };

  // Reserve the root, then split ranges iteratively.
  index.nodes_.emplace_back();
  std::vector<Range> stack{{0, static_cast<std::uint32_t>(n), 0}};
  while (!stack.empty()) {
    const Range range = stack.back();
    stack.pop_back();
    auto& node = index.nodes_[range.node];
    const std::uint32_t count = range.end - range.begin;
    if (count <= kLeafSize) {
      node.left = node.right = SpatialIndex::kNoChild;
      node.begin = range.begin;
      node.end = range.end;
      continue;
    }

    // Widest-spread axis.
    int axis = 0;
    double best_spread = -1.0;
    for (int c = 0; c < dim; ++c) {
      double lo = dataset.position(index.perm_[range.begin])[c];
      double hi = lo;
      for (std::uint32_t i = range.begin + 1; i < range.end; ++i) {
        const double v = dataset.position(index.perm_[i])[c];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        axis = c;
      }
    }

    const std::uint32_t mid = range.begin + count / 2;
    std::nth_element(index.perm_.begin() + range.begin, index.perm_.begin() + mid,
                     index.perm_.begin() + range.end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       return dataset.position(a)[axis] < dataset.position(b)[axis];
                     });

    node.axis = axis;
    node.split = dataset.position(index.perm_[mid])[axis];
    node.left = static_cast<std::uint32_t>(index.nodes_.size());
    node.right = node.left + 1;
    index.nodes_.emplace_back();
    index.nodes_.emplace_back();
    const std::uint32_t left = index.nodes_[range.node].left;
    const std::uint32_t right = index.nodes_[range.node].right;
    stack.push_back({range.begin, mid, left});
    stack.push_back({mid, range.end, right});
  }
  return index;
}

namespace {

// Max-heap on (distance, index): top is the worst kept candidate.
struct WorstFirst {
  bool operator()(const DistIdx& a, const DistIdx& b) const { return a < b; }
};

}  // namespace

NeighborSet k_nearest(const SpatialIndex& index, std::span<const double> query,
                      std::size_t k) {
  const Dataset& data = *index.data_;
  const std::size_t n = data.size();
  if (query.size() != static_cast<std::size_t>(data.dimension())) {
    throw InvalidArgument("query dimension mismatch");
  }
  for (double v : query) {
    if (!std::isfinite(v)) throw InvalidArgument("invalid query");
  }
  if (k < 1) throw InvalidArgument("invalid K");
  if (k > n) throw InsufficientPoints("insufficient points");

  std::vector<DistIdx> candidates;

  if (data.dimension() == 1) {
    const auto perm = index.permutation();
    const double qx = query[0];
    // First sorted position with coordinate >= qx.
    std::size_t lo = std::lower_bound(perm.begin(), perm.end(), qx,
                                      [&](std::uint32_t idx, double x) {
                                        return data.position(idx)[0] < x;
                                      }) -
                     perm.begin();
    std::ptrdiff_t l = static_cast<std::ptrdiff_t>(lo) - 1;
    std::size_t r = lo;
    candidates.reserve(k + 8);
    auto dist_at = [&](std::size_t pos) {
      return point_distance(data.position(perm[pos]), query);
    };
    while (candidates.size() < k) {
      if (l >= 0 && r < n) {
        const double dl = dist_at(static_cast<std::size_t>(l));
        const double dr = dist_at(r);
        if (dl <= dr) {
          candidates.emplace_back(dl, perm[static_cast<std::size_t>(l)]);
          --l;
        } else {
          candidates.emplace_back(dr, perm[r]);
          ++r;
        }
      } else if (l >= 0) {
        candidates.emplace_back(dist_at(static_cast<std::size_t>(l)),
                                perm[static_cast<std::size_t>(l)]);
        --l;
      } else {
        candidates.emplace_back(dist_at(r), perm[r]);
        ++r;
      }
    }
    // Pull in every remaining point tied with the current boundary distance
    // so the lower-index preference can act across the cut.
    const double boundary = candidates.back().first;
    while (l >= 0 && dist_at(static_cast<std::size_t>(l)) == boundary) {
      candidates.emplace_back(boundary, perm[static_cast<std::size_t>(l)]);
      --l;
    }
    while (r < n && dist_at(r) == boundary) {
      candidates.emplace_back(boundary, perm[r]);
      ++r;
    }
  } else {
    std::priority_queue<DistIdx, std::vector<DistIdx>, WorstFirst> heap;
    const auto perm = index.permutation();

    auto visit = [&](const auto& self, std::uint32_t node_id) -> void {
      const auto& node = index.nodes_[node_id];
      if (node.left == SpatialIndex::kNoChild) {
        for (std::uint32_t i = node.begin; i < node.end; ++i) {
          const std::uint32_t idx = perm[i];
          const DistIdx cand{point_distance(data.position(idx), query), idx};
          if (heap.size() < k) {
            heap.push(cand);
          } else if (cand < heap.top()) {
            heap.pop();
            heap.push(cand);
          }
        }
        return;
      }
      const double diff = query[node.axis] - node.split;
      const std::uint32_t near = diff < 0.0 ? node.left : node.right;
      const std::uint32_t far = diff < 0.0 ? node.right : node.left;
      self(self, near);
      if (heap.size() < k || std::abs(diff) <= heap.top().first) {
        self(self, far);
      }
    };
    visit(visit, 0);

    candidates.reserve(heap.size());
    while (!heap.empty()) {
      candidates.push_back(heap.top());
      heap.pop();
    }
  }

  std::sort(candidates.begin(), candidates.end());
  candidates.resize(k);

  NeighborSet result;
  result.query.assign(query.begin(), query.end());
  result.indices.reserve(k);
  result.distances.reserve(k);
  for (const auto& [dist, idx] : candidates) {
    result.indices.push_back(idx);
    result.distances.push_back(dist);
  }
  return result;
}

}  // namespace scattersmooth
