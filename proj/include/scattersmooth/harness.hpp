#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "scattersmooth/execution.hpp"
#include "scattersmooth/geometry.hpp"
#include "scattersmooth/metrics.hpp"
#include "scattersmooth/rbf.hpp"

namespace scattersmooth {

/// The standard 1D smoothing benchmark function: two narrow positive bumps
/// near +1/2 and a wider negative one near -1/2.
double test_function(double x);

/// Samples the benchmark function at n equally spaced abscissae, both
/// interval endpoints included.
Dataset sample_test_function(std::size_t n, double lo, double hi);

/// Adds an independent uniform(-amplitude, amplitude) perturbation to every
/// value, drawn from a SplitMix64 stream: same seed, same dataset,
/// bit-for-bit. Positions are untouched.
Dataset add_uniform_noise(const Dataset& data, double amplitude,
                          std::uint64_t seed);

/// One smoothing method configuration, parseable from the CLI syntax:
///   lowess:d=1,k=100
///   rbf-local:poly=const,k=100   (poly = none | const | <degree>)
///   rbf-global:m=20,d=1,overlap=2.0
struct MethodSpec {
  enum class Kind { Lowess, RbfLocal, RbfGlobal };

  Kind kind = Kind::Lowess;
  int degree = 1;                                   // lowess / global tail
  PolynomialTail tail = PolynomialTail::constant(); // rbf-local tail
  std::size_t k = 100;                              // neighbors (local methods)
  std::size_t m = 20;                               // centers (global)
  double overlap = 2.0;                             // global support overlap

  static MethodSpec parse(const std::string& text);

  /// Method name without the size parameter, e.g. "lowess:d=1".
  std::string label() const;
  /// Full canonical spec string.
  std::string canonical() const;
  /// Filename-safe form of canonical().
  std::string file_slug() const;
  /// K for local methods, M for the global one.
  std::size_t param() const { return kind == Kind::RbfGlobal ? m : k; }
};

enum class QueryMode { AtSamples, UniformGrid };

struct ExperimentConfig {
  std::size_t samples = 2000;
  double interval_low = -1.0;
  double interval_high = 1.0;
  double noise_amplitude = 0.0;
  std::uint64_t seed = 1;
  std::vector<MethodSpec> methods;
  QueryMode query_mode = QueryMode::AtSamples;
  std::size_t grid_queries = 0;  // used when query_mode == UniformGrid
  Execution execution = Execution::Parallel;
};

struct MethodResult {
  MethodSpec method;
  bool ok = false;
  std::string error;          // set when !ok
  ErrorReport errors;         // valid when ok
  double elapsed_ms = 0.0;
  std::vector<double> curve;  // smoothed values at the query positions
};

struct ExperimentReport {
  ExperimentConfig config;
  PointSet query_positions;
  CurvePoints reference;  // noiseless curve the distance error is measured against
  CurvePoints noisy;      // the actual method input
  std::vector<MethodResult> methods;

  std::size_t failed_count() const;
};

/// Samples the benchmark function, perturbs it, runs every configured method
/// at the query points, and measures both errors against the noiseless
/// curve. A failing method is recorded in its slot; the rest still run.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Same pipeline over caller-supplied input; `reference` is the curve the
/// distance error is measured against.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                const Dataset& input,
                                const CurvePoints& reference);

struct TimingRow {
  std::string method;
  std::size_t n = 0;
  std::size_t param = 0;  // K or M
  std::size_t queries = 0;
  double median_ms = 0.0;
  bool ok = true;
};

/// Median wall-clock per method over `repeats` runs of the smoothing phase
/// (at least 3).
std::vector<TimingRow> timing_benchmark(const ExperimentConfig& config,
                                        std::size_t repeats);

/// Output destinations; empty strings are skipped. The curves path is a
/// stem: each series lands in its own x,value file next to it (see README).
struct OutputPaths {
  std::string curves;
  std::string table;
  std::string plot;
};

void emit_results(const ExperimentReport& report, const OutputPaths& paths);

/// CSV with a header row, columns x[,y[,z]],value.
Dataset read_dataset_csv(const std::string& path);
void write_curve_csv(const std::string& path, const CurvePoints& curve);

/// Error/timing table, columns method,param,E_c,E_d,ms.
void write_table_csv(std::ostream& out, const ExperimentReport& report);
void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows);

/// Line chart overlaying the reference curve, the noisy samples, and each
/// method's smoothed curve. 1D experiments only.
void write_svg_chart(const std::string& path, const ExperimentReport& report);

/// Shortest text form that round-trips a double exactly (17 significant
/// digits, locale-independent).
std::string format_double(double v);

}  // namespace scattersmooth
