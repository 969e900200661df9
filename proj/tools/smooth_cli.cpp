// Command-line front end: runs smoothing experiments over synthetic or CSV
// input, writes curve/table/plot files, and times methods with --bench.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scattersmooth/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct CliOptions {
  std::string input;
  std::size_t synthetic = 0;
  std::string interval = "-1,1";
  double noise = 0.0;
  std::uint64_t seed = 1;
  std::vector<std::string> methods;
  std::string queries = "at-samples";
  std::string out_curves;
  std::string out_table;
  std::string out_plot;
  bool bench = false;
  std::size_t repeats = 5;
};

void parse_interval(const std::string& text, double& lo, double& hi) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw scattersmooth::InvalidArgument("--interval expects lo,hi");
  }
  try {
    lo = std::stod(text.substr(0, comma));
    hi = std::stod(text.substr(comma + 1));
  } catch (const std::exception&) {
    throw scattersmooth::InvalidArgument("--interval expects numbers lo,hi");
  }
  if (!(lo < hi)) {
    throw scattersmooth::InvalidArgument("--interval must be increasing");
  }
}

void parse_queries(const std::string& text, scattersmooth::ExperimentConfig& config) {
  if (text == "at-samples") {
    config.query_mode = scattersmooth::QueryMode::AtSamples;
    return;
  }
  if (text.rfind("grid:", 0) == 0) {
    config.query_mode = scattersmooth::QueryMode::UniformGrid;
    try {
      const long r = std::stol(text.substr(5));
      if (r < 2) throw std::invalid_argument("too small");
      config.grid_queries = static_cast<std::size_t>(r);
    } catch (const std::exception&) {
      throw scattersmooth::InvalidArgument("--queries grid:R expects R >= 2");
    }
    return;
  }
  throw scattersmooth::InvalidArgument("--queries expects at-samples or grid:R");
}

int run(const CliOptions& options) {
  using namespace scattersmooth;

  if (options.input.empty() == (options.synthetic == 0)) {
    std::cerr << "exactly one of --input or --synthetic is required\n";
    return kExitConfig;
  }
  if (options.methods.empty()) {
    std::cerr << "at least one --method is required\n";
    return kExitConfig;
  }

  ExperimentConfig config;
  parse_interval(options.interval, config.interval_low, config.interval_high);
  config.samples = options.synthetic;
  config.noise_amplitude = options.noise;
  config.seed = options.seed;
  parse_queries(options.queries, config);
  for (const std::string& text : options.methods) {
    config.methods.push_back(MethodSpec::parse(text));
  }

  if (options.bench) {
    if (!options.input.empty()) {
      std::cerr << "--bench requires --synthetic input\n";
      return kExitConfig;
    }
    const std::vector<TimingRow> rows = timing_benchmark(config, options.repeats);
    if (!options.out_table.empty()) {
      std::ofstream out(options.out_table);
      if (!out) throw IoError("cannot open for writing: " + options.out_table);
      write_timing_csv(out, rows);
    } else {
      write_timing_csv(std::cout, rows);
    }
    const bool all_failed =
        std::all_of(rows.begin(), rows.end(), [](const TimingRow& r) { return !r.ok; });
    return all_failed ? kExitNumerical : kExitOk;
  }

  ExperimentReport report;
  if (!options.input.empty()) {
    const Dataset original = read_dataset_csv(options.input);
    const Dataset input = options.noise > 0.0
                              ? add_uniform_noise(original, options.noise, options.seed)
                              : original;
    // Without a separate noiseless reference, distances are measured against
    // the points as they were read (before any --noise perturbation).
    report = run_experiment(config, input, curve_from(original));
  } else {
    report = run_experiment(config);
  }

  for (const MethodResult& m : report.methods) {
    if (!m.ok) {
      std::cerr << m.method.canonical() << " failed: " << m.error << "\n";
    }
  }
  if (report.failed_count() == report.methods.size()) {
    return kExitNumerical;
  }

  emit_results(report, OutputPaths{options.out_curves, options.out_table,
                                   options.out_plot});
  if (options.out_table.empty()) {
    write_table_csv(std::cout, report);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattered-data smoothing: local regression and RBF approximation"};
  app.require_subcommand(1);

  CliOptions options;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a smoothing experiment");
  run_cmd->add_option("--input", options.input, "Input CSV (header x[,y[,z]],value)");
  run_cmd->add_option("--synthetic", options.synthetic,
                      "Sample the built-in test function at N points");
  run_cmd->add_option("--interval", options.interval, "Sampling interval lo,hi");
  run_cmd->add_option("--noise", options.noise, "Uniform noise amplitude");
  run_cmd->add_option("--seed", options.seed, "Noise seed");
  run_cmd->add_option("--method", options.methods,
                      "Method spec, repeatable: lowess:d=1,k=100 | "
                      "rbf-local:poly=const|none|<deg>,k=100 | "
                      "rbf-global:m=20,d=1,overlap=2.0");
  run_cmd->add_option("--queries", options.queries, "at-samples | grid:R");
  run_cmd->add_option("--out-curves", options.out_curves,
                      "Curve CSV stem (one x,value file per series)");
  run_cmd->add_option("--out-table", options.out_table, "Error/timing table CSV");
  run_cmd->add_option("--out-plot", options.out_plot, "Overlay chart SVG");
  run_cmd->add_flag("--bench", options.bench, "Time methods instead of reporting errors");
  run_cmd->add_option("--repeats", options.repeats, "Timing repeats (>= 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    return run(options);
  } catch (const scattersmooth::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const scattersmooth::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const scattersmooth::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
