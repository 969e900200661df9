#pragma once

#include <cstddef>

namespace scattersmooth {

/// Execution policy for batch evaluations over independent items.
/// Serial is the reference implementation; Parallel distributes iterations
/// over OpenMP threads. Every item writes only to its own output slot, so
/// both policies produce bit-identical results.
enum class Execution { Serial, Parallel };

/// Runs fn(i) for i in [0, count). In Parallel mode fn must not throw;
/// batch operations catch per item and report afterwards.
template <typename Fn>
void for_each_index(Execution exec, std::size_t count, Fn&& fn) {
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
      fn(static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
  }
}

}  // namespace scattersmooth
