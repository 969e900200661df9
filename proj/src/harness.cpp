#include "scattersmooth/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "scattersmooth/lowess.hpp"
#include "scattersmooth/prng.hpp"

namespace scattersmooth {

double test_function(double x) {
  const double a = x - 0.5;
  const double b = x + 0.5;
  return std::exp(-15.0 * a * a) + 0.5 * std::exp(-20.0 * a * a) -
         0.75 * std::exp(-8.0 * b * b);
}

Dataset sample_test_function(std::size_t n, double lo, double hi) {
  if (n < 2) throw InvalidArgument("need at least two samples");
  if (!(lo < hi)) throw InvalidArgument("interval must be increasing");
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    ys[i] = test_function(xs[i]);
  }
  return Dataset::from_1d(std::move(xs), std::move(ys));
}

Dataset add_uniform_noise(const Dataset& data, double amplitude,
                          std::uint64_t seed) {
  if (amplitude < 0.0) throw InvalidArgument("amplitude must be >= 0");
  if (amplitude == 0.0) return data;
  SplitMix64 rng(seed);
  std::vector<double> values = data.values();
  for (double& v : values) v += rng.next_in(-amplitude, amplitude);
  return data.with_values(std::move(values));
}

namespace {

std::string tail_name(const PolynomialTail& tail) {
  switch (tail.kind) {
    case PolynomialTail::Kind::None:
      return "none";
    case PolynomialTail::Kind::Constant:
      return "const";
    case PolynomialTail::Kind::Degree:
      return std::to_string(tail.degree);
  }
  return "?";
}

std::vector<std::pair<std::string, std::string>> split_options(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> options;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw InvalidArgument("bad method option '" + item + "'");
    }
    options.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return options;
}

long parse_long(const std::string& text, const std::string& what) {
  long v = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw InvalidArgument("bad " + what + " value '" + text + "'");
  }
  return v;
}

double parse_real(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw InvalidArgument("bad " + what + " value '" + text + "'");
  }
  return v;
}

}  // namespace

MethodSpec MethodSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string opts = colon == std::string::npos ? "" : text.substr(colon + 1);

  MethodSpec spec;
  if (name == "lowess") {
    spec.kind = Kind::Lowess;
  } else if (name == "rbf-local") {
    spec.kind = Kind::RbfLocal;
  } else if (name == "rbf-global") {
    spec.kind = Kind::RbfGlobal;
  } else {
    throw InvalidArgument("unknown method '" + name + "'");
  }

  for (const auto& [key, value] : split_options(opts)) {
    if (key == "d" && spec.kind != Kind::RbfLocal) {
      const long d = parse_long(value, "degree");
      if (d < 0) throw InvalidArgument("degree must be >= 0");
      spec.degree = static_cast<int>(d);
    } else if (key == "k" && spec.kind != Kind::RbfGlobal) {
      const long k = parse_long(value, "k");
      if (k < 1) throw InvalidArgument("k must be >= 1");
      spec.k = static_cast<std::size_t>(k);
    } else if (key == "m" && spec.kind == Kind::RbfGlobal) {
      const long m = parse_long(value, "m");
      if (m < 1) throw InvalidArgument("m must be >= 1");
      spec.m = static_cast<std::size_t>(m);
    } else if (key == "overlap" && spec.kind == Kind::RbfGlobal) {
      const double o = parse_real(value, "overlap");
      if (!(o > 0.0)) throw InvalidArgument("overlap must be positive");
      spec.overlap = o;
    } else if (key == "poly" && spec.kind == Kind::RbfLocal) {
      if (value == "none") {
        spec.tail = PolynomialTail::none();
      } else if (value == "const") {
        spec.tail = PolynomialTail::constant();
      } else {
        const long d = parse_long(value, "poly degree");
        if (d < 0) throw InvalidArgument("poly degree must be >= 0");
        spec.tail = PolynomialTail::of_degree(static_cast<int>(d));
      }
    } else {
      throw InvalidArgument("option '" + key + "' does not apply to " + name);
    }
  }
  return spec;
}

std::string MethodSpec::label() const {
  switch (kind) {
    case Kind::Lowess:
      return "lowess:d=" + std::to_string(degree);
    case Kind::RbfLocal:
      return "rbf-local:poly=" + tail_name(tail);
    case Kind::RbfGlobal: {
      // Semicolon between options keeps the label usable as one CSV field.
      std::ostringstream out;
      out << "rbf-global:d=" << degree << ";overlap=" << overlap;
      return out.str();
    }
  }
  return "?";
}

std::string MethodSpec::canonical() const {
  switch (kind) {
    case Kind::Lowess:
      return label() + ",k=" + std::to_string(k);
    case Kind::RbfLocal:
      return label() + ",k=" + std::to_string(k);
    case Kind::RbfGlobal:
      return "rbf-global:m=" + std::to_string(m) + ",d=" + std::to_string(degree) +
             ",overlap=" + [this] {
               std::ostringstream out;
               out << overlap;
               return out.str();
             }();
  }
  return "?";
}

std::string MethodSpec::file_slug() const {
  std::string slug = canonical();
  for (char& c : slug) {
    if (c == ':' || c == ',' || c == '=' || c == '.') c = '_';
  }
  return slug;
}

std::size_t ExperimentReport::failed_count() const {
  std::size_t n = 0;
  for (const auto& m : methods) n += m.ok ? 0 : 1;
  return n;
}

namespace {

PointSet make_queries(const ExperimentConfig& config, const Dataset& input) {
  if (config.query_mode == QueryMode::AtSamples) {
    return input.positions();
  }
  if (input.dimension() != 1) {
    throw InvalidArgument("grid queries require 1D data");
  }
  const std::size_t r = config.grid_queries;
  if (r < 2) throw InvalidArgument("grid needs at least 2 query points");
  double lo = input.position(0)[0];
  double hi = lo;
  for (std::size_t i = 1; i < input.size(); ++i) {
    lo = std::min(lo, input.position(i)[0]);
    hi = std::max(hi, input.position(i)[0]);
  }
  std::vector<double> xs(r);
  for (std::size_t i = 0; i < r; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(r - 1);
  }
  return PointSet::from_1d(std::move(xs));
}

std::vector<double> run_method(const MethodSpec& method, const Dataset& input,
                               const SpatialIndex& index, const PointSet& queries,
                               Execution exec) {
  switch (method.kind) {
    case MethodSpec::Kind::Lowess: {
      LowessConfig config;
      config.degree = method.degree;
      config.neighbors = method.k;
      return smooth(index, queries, config, exec);
    }
    case MethodSpec::Kind::RbfLocal: {
      LocalRbfConfig config;
      config.tail = method.tail;
      config.neighbors = method.k;
      return smooth_local_rbf(index, queries, config, exec);
    }
    case MethodSpec::Kind::RbfGlobal: {
      const GlobalRbfModel model =
          fit_global(input, method.m, method.degree, method.overlap);
      return evaluate_global(model, queries, exec);
    }
  }
  throw InvalidArgument("unknown method kind");
}

double elapsed_ms_since(std::chrono::steady_clock::time_point start) {
  const auto end = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(end - start).count();
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config,
                                const Dataset& input,
                                const CurvePoints& reference) {
  if (config.methods.empty()) throw InvalidArgument("no methods configured");

  ExperimentReport report;
  report.config = config;
  report.reference = reference;
  report.noisy = curve_from(input);
  report.query_positions = make_queries(config, input);

  const SpatialIndex index = build_index(input);
  const bool curvature_defined = input.dimension() == 1;

  for (const MethodSpec& method : config.methods) {
    MethodResult result;
    result.method = method;
    try {
      const auto start = std::chrono::steady_clock::now();
      result.curve = run_method(method, input, index, report.query_positions,
                                config.execution);
      result.elapsed_ms = elapsed_ms_since(start);

      const CurvePoints smoothed{report.query_positions, result.curve};
      result.errors.method = method.label();
      result.errors.param = method.param();
      result.errors.curvature =
          curvature_defined ? curvature_error(smoothed)
                            : std::numeric_limits<double>::quiet_NaN();
      result.errors.distance = distance_error(smoothed, reference, config.execution);
      result.ok = true;
    } catch (const std::exception& e) {
      result.ok = false;
      result.error = e.what();
    }
    report.methods.push_back(std::move(result));
  }
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const Dataset clean = sample_test_function(config.samples, config.interval_low,
                                             config.interval_high);
  const Dataset noisy =
      add_uniform_noise(clean, config.noise_amplitude, config.seed);
  return run_experiment(config, noisy, curve_from(clean));
}

std::vector<TimingRow> timing_benchmark(const ExperimentConfig& config,
                                        std::size_t repeats) {
  if (repeats < 3) throw InvalidArgument("need at least 3 repeats");
  if (config.methods.empty()) throw InvalidArgument("no methods configured");

  const Dataset clean = sample_test_function(config.samples, config.interval_low,
                                             config.interval_high);
  const Dataset input =
      add_uniform_noise(clean, config.noise_amplitude, config.seed);
  const PointSet queries = make_queries(config, input);
  const SpatialIndex index = build_index(input);

  std::vector<TimingRow> rows;
  for (const MethodSpec& method : config.methods) {
    TimingRow row;
    row.method = method.label();
    row.n = input.size();
    row.param = method.param();
    row.queries = queries.size();
    std::vector<double> times;
    times.reserve(repeats);
    try {
      for (std::size_t rep = 0; rep < repeats; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        run_method(method, input, index, queries, config.execution);
        times.push_back(elapsed_ms_since(start));
      }
      std::sort(times.begin(), times.end());
      row.median_ms = times[times.size() / 2];
    } catch (const std::exception&) {
      row.ok = false;
      row.median_ms = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);

  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_csv_line(line);
  int dim = 0;
  if (header.size() >= 2 && header.back() == "value") {
    dim = static_cast<int>(header.size()) - 1;
    const char* expected[] = {"x", "y", "z"};
    if (dim > 3) dim = 0;
    for (int c = 0; c < dim; ++c) {
      if (header[static_cast<std::size_t>(c)] != expected[c]) dim = 0;
    }
  }
  if (dim == 0) {
    throw IoError("expected header x[,y[,z]],value in " + path);
  }

  PointSet positions(dim, {});
  std::vector<double> values;
  std::vector<double> point(static_cast<std::size_t>(dim));
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != static_cast<std::size_t>(dim) + 1) {
      throw IoError(path + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(dim + 1) + " columns");
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      const char* begin = fields[c].data();
      const char* end = begin + fields[c].size();
      const auto res = std::from_chars(begin, end, v);
      if (res.ec != std::errc{} || res.ptr != end) {
        throw IoError(path + ":" + std::to_string(line_no) + ": bad number '" +
                      fields[c] + "'");
      }
      if (c + 1 == fields.size()) {
        values.push_back(v);
      } else {
        point[c] = v;
      }
    }
    positions.push_back(point);
  }
  if (values.empty()) throw IoError("no data rows in " + path);
  return Dataset(std::move(positions), std::move(values));
}

void write_curve_csv(const std::string& path, const CurvePoints& curve) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  const int dim = curve.positions.dimension();
  if (dim > 3) throw IoError("curve files support up to 3 position columns");
  const char* headers[] = {"x", "y", "z"};
  for (int c = 0; c < dim; ++c) out << headers[c] << ',';
  out << "value\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto p = curve.positions[i];
    for (double v : p) out << format_double(v) << ',';
    out << format_double(curve.values[i]) << '\n';
  }
  if (!out.good()) throw IoError("write failed: " + path);
}

void write_table_csv(std::ostream& out, const ExperimentReport& report) {
  out << "method,param,E_c,E_d,ms\n";
  for (const MethodResult& m : report.methods) {
    if (m.ok) {
      out << m.errors.method << ',' << m.errors.param << ','
          << format_double(m.errors.curvature) << ','
          << format_double(m.errors.distance) << ','
          << format_double(m.elapsed_ms) << '\n';
    } else {
      out << m.method.label() << ',' << m.method.param() << ",nan,nan,nan\n";
    }
  }
}

void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows) {
  out << "method,N,param,R,median_ms\n";
  for (const TimingRow& row : rows) {
    out << row.method << ',' << row.n << ',' << row.param << ',' << row.queries
        << ',' << format_double(row.median_ms) << '\n';
  }
}

namespace {

std::string curve_path(const std::string& stem, const std::string& name) {
  const auto dot = stem.rfind('.');
  const auto slash = stem.rfind('/');
  const bool has_ext = dot != std::string::npos &&
                       (slash == std::string::npos || dot > slash);
  if (has_ext) {
    return stem.substr(0, dot) + "." + name + stem.substr(dot);
  }
  return stem + "." + name + ".csv";
}

}  // namespace

void emit_results(const ExperimentReport& report, const OutputPaths& paths) {
  if (!paths.curves.empty()) {
    write_curve_csv(curve_path(paths.curves, "reference"), report.reference);
    write_curve_csv(curve_path(paths.curves, "noisy"), report.noisy);
    for (const MethodResult& m : report.methods) {
      if (!m.ok) continue;
      write_curve_csv(curve_path(paths.curves, m.method.file_slug()),
                      CurvePoints{report.query_positions, m.curve});
    }
  }
  if (!paths.table.empty()) {
    std::ofstream out(paths.table);
    if (!out) throw IoError("cannot open for writing: " + paths.table);
    write_table_csv(out, report);
    if (!out.good()) throw IoError("write failed: " + paths.table);
  }
  if (!paths.plot.empty()) {
    write_svg_chart(paths.plot, report);
  }
}

}  // namespace scattersmooth
