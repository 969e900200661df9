// Benchmark comparing the serial reference implementation against the
// OpenMP-parallel kernels on identical workloads, checking along the way
// that both produce the same bits.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "scattersmooth/harness.hpp"
#include "scattersmooth/lowess.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double median_ms_of(std::vector<double> times) {
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

template <typename Fn>
double time_median(std::size_t repeats, Fn&& fn) {
  std::vector<double> times;
  times.reserve(repeats);
  for (std::size_t i = 0; i < repeats; ++i) {
    const auto start = Clock::now();
    fn();
    times.push_back(
        std::chrono::duration<double, std::milli>(Clock::now() - start).count());
  }
  return median_ms_of(std::move(times));
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace scattersmooth;

  std::size_t n = 2000;
  std::size_t r = 2000;
  std::size_t k = 200;
  std::size_t m = 20;
  std::size_t repeats = 5;
  std::uint64_t seed = 42;

  CLI::App app{"Serial vs OpenMP comparison for the smoothing kernels"};
  app.add_option("--n", n, "Sample count");
  app.add_option("--r", r, "Query count");
  app.add_option("--k", k, "Neighbors for local methods");
  app.add_option("--m", m, "Centers for the global method");
  app.add_option("--repeats", repeats, "Repeats per measurement");
  app.add_option("--seed", seed, "Noise seed");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; both columns run serially\n");
#endif
  std::printf("N=%zu R=%zu K=%zu M=%zu repeats=%zu\n\n", n, r, k, m, repeats);

  const Dataset clean = sample_test_function(n, -1.0, 1.0);
  const Dataset noisy = add_uniform_noise(clean, 0.1, seed);
  const SpatialIndex index = build_index(noisy);

  std::vector<double> xs(r);
  for (std::size_t i = 0; i < r; ++i) {
    xs[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(r - 1);
  }
  const PointSet queries = PointSet::from_1d(std::move(xs));

  std::printf("%-26s %12s %12s %9s %12s\n", "kernel", "serial ms", "parallel ms",
              "speedup", "max |diff|");

  auto report = [&](const std::string& name, auto&& runner) {
    std::vector<double> serial_out, parallel_out;
    const double serial_ms =
        time_median(repeats, [&] { serial_out = runner(Execution::Serial); });
    const double parallel_ms =
        time_median(repeats, [&] { parallel_out = runner(Execution::Parallel); });
    std::printf("%-26s %12.3f %12.3f %8.2fx %12.3e\n", name.c_str(), serial_ms,
                parallel_ms, serial_ms / parallel_ms,
                max_abs_diff(serial_out, parallel_out));
  };

  {
    LowessConfig config;
    config.degree = 1;
    config.neighbors = k;
    report("lowess d=1", [&](Execution exec) {
      return smooth(index, queries, config, exec);
    });
  }
  {
    LocalRbfConfig config;
    config.tail = PolynomialTail::constant();
    config.neighbors = k;
    report("rbf-local poly=const", [&](Execution exec) {
      return smooth_local_rbf(index, queries, config, exec);
    });
  }
  {
    LocalRbfConfig config;
    config.tail = PolynomialTail::none();
    config.neighbors = k;
    report("rbf-local poly=none", [&](Execution exec) {
      return smooth_local_rbf(index, queries, config, exec);
    });
  }
  {
    const GlobalRbfModel model = fit_global(noisy, m, 1, 2.0);
    report("rbf-global evaluate", [&](Execution exec) {
      return evaluate_global(model, queries, exec);
    });
  }
  {
    const CurvePoints reference = curve_from(clean);
    LowessConfig config;
    config.degree = 1;
    config.neighbors = k;
    const std::vector<double> curve = smooth(index, queries, config);
    const CurvePoints approx{queries, curve};
    report("distance error", [&](Execution exec) {
      return std::vector<double>{distance_error(approx, reference, exec)};
    });
  }

  return 0;
}
