#include "scattersmooth/rbf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "scattersmooth/linsolve.hpp"
#include "scattersmooth/lowess.hpp"

namespace scattersmooth {

namespace {

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

void validate_neighbors(const NeighborSet& neighbors, const Dataset& data) {
  if (neighbors.count() == 0) throw InvalidArgument("empty neighborhood");
  if (neighbors.query.size() != static_cast<std::size_t>(data.dimension())) {
    throw InvalidArgument("query dimension mismatch");
  }
  for (std::size_t idx : neighbors.indices) {
    if (idx >= data.size()) throw InvalidArgument("neighbor index out of range");
  }
}

// Kernel values over a neighborhood. A zero distance maps to radius 0
// directly, which also covers the all-coincident neighborhood (radius 0,
// every kernel value 1) used by the no-tail fast path.
std::vector<double> kernel_values(const NeighborSet& neighbors, KernelProfile kernel) {
  const double radius = neighbors.d_max();
  std::vector<double> phi(neighbors.count());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double dist = neighbors.distances[i];
    phi[i] = weight(kernel, dist == 0.0 ? 0.0 : normalized_distance(dist, radius));
  }
  return phi;
}

PolynomialTail simpler_tail(const PolynomialTail& tail) {
  switch (tail.kind) {
    case PolynomialTail::Kind::Degree:
      if (tail.degree > 1) return PolynomialTail::of_degree(tail.degree - 1);
      if (tail.degree == 1) return PolynomialTail::constant();
      return PolynomialTail::none();
    case PolynomialTail::Kind::Constant:
      return PolynomialTail::none();
    case PolynomialTail::Kind::None:
      break;
  }
  throw RankDeficient("rank deficient", 0);
}

std::size_t tail_size(const PolynomialTail& tail, int dimension) {
  switch (tail.kind) {
    case PolynomialTail::Kind::None:
      return 0;
    case PolynomialTail::Kind::Constant:
      return 1;
    case PolynomialTail::Kind::Degree:
      return basis_monomials(dimension, tail.degree).size();
  }
  return 0;
}

LocalRbfFit fit_with_tail(const NeighborSet& neighbors, const Dataset& data,
                          const PolynomialTail& tail, std::span<const double> phi) {
  const std::size_t k = neighbors.count();
  const int dim = data.dimension();
  const std::size_t q = 1 + tail_size(tail, dim);

  if (tail.kind == PolynomialTail::Kind::None &&
      std::all_of(phi.begin(), phi.end(), [](double v) { return v == 0.0; })) {
    throw DegenerateNeighborhood("degenerate neighborhood: all kernel values zero");
  }

  DenseMatrix a(k, q);
  std::vector<double> values(k);
  std::vector<double> shifted(static_cast<std::size_t>(dim));
  const PolynomialBasis basis =
      tail.kind == PolynomialTail::Kind::Degree
          ? basis_monomials(dim, tail.degree)
          : basis_monomials(dim, 0);
  for (std::size_t i = 0; i < k; ++i) {
    values[i] = data.value(neighbors.indices[i]);
    a(i, 0) = phi[i];
    if (tail.kind == PolynomialTail::Kind::None) continue;
    const auto pos = data.position(neighbors.indices[i]);
    for (std::size_t c = 0; c < shifted.size(); ++c) {
      shifted[c] = pos[c] - neighbors.query[c];
    }
    for (std::size_t t = 0; t < basis.size(); ++t) {
      double v = 1.0;
      for (std::size_t c = 0; c < shifted.size(); ++c) {
        v *= ipow(shifted[c], basis.exponents[t][c]);
      }
      a(i, 1 + t) = v;
    }
  }

  const std::vector<double> eta = solve_least_squares(a, values);

  LocalRbfFit fit;
  fit.center.assign(neighbors.query.begin(), neighbors.query.end());
  fit.lambda = eta[0];
  fit.poly_coefficients.assign(eta.begin() + 1, eta.end());
  fit.tail = tail;
  double ss = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double predicted = 0.0;
    for (std::size_t c = 0; c < q; ++c) predicted += a(i, c) * eta[c];
    const double r = values[i] - predicted;
    ss += r * r;
  }
  fit.residual_norm = std::sqrt(ss);
  return fit;
}

}  // namespace

LocalRbfFit fit_local_rbf(const NeighborSet& neighbors, const Dataset& data,
                          const LocalRbfConfig& config) {
  validate_neighbors(neighbors, data);
  if (config.tail.kind == PolynomialTail::Kind::Degree && config.tail.degree < 0) {
    throw InvalidArgument("tail degree must be >= 0");
  }
  if (!(neighbors.d_max() > 0.0)) {
    throw DegenerateNeighborhood("degenerate neighborhood: zero radius");
  }

  const std::vector<double> phi = kernel_values(neighbors, config.kernel);
  PolynomialTail tail = config.tail;
  for (;;) {
    try {
      return fit_with_tail(neighbors, data, tail, phi);
    } catch (const RankDeficient&) {
      if (!config.tail_fallback || tail.kind == PolynomialTail::Kind::None) throw;
      tail = simpler_tail(tail);
    }
  }
}

LocalRbfFit fit_local_rbf_constant_closed_form(const NeighborSet& neighbors,
                                               const Dataset& data,
                                               KernelProfile kernel) {
  validate_neighbors(neighbors, data);
  const std::vector<double> phi = kernel_values(neighbors, kernel);
  const double k = static_cast<double>(neighbors.count());

  double sp = 0.0, spp = 0.0, spf = 0.0, sf = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double f = data.value(neighbors.indices[i]);
    sp += phi[i];
    spp += phi[i] * phi[i];
    spf += phi[i] * f;
    sf += f;
  }
  const double det = spp * k - sp * sp;
  const double scale = std::max(std::abs(spp * k), sp * sp);
  if (!(std::abs(det) > 1e-12 * scale)) {
    throw RankDeficient("rank deficient", 1);
  }

  LocalRbfFit fit;
  fit.center.assign(neighbors.query.begin(), neighbors.query.end());
  fit.lambda = (k * spf - sp * sf) / det;
  fit.poly_coefficients = {(spp * sf - sp * spf) / det};
  fit.tail = PolynomialTail::constant();
  double ss = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double r = data.value(neighbors.indices[i]) -
                     (fit.lambda * phi[i] + fit.poly_coefficients[0]);
    ss += r * r;
  }
  fit.residual_norm = std::sqrt(ss);
  return fit;
}

LocalRbfFit fit_local_rbf_no_polynomial_closed_form(const NeighborSet& neighbors,
                                                    const Dataset& data,
                                                    KernelProfile kernel) {
  validate_neighbors(neighbors, data);
  const std::vector<double> phi = kernel_values(neighbors, kernel);

  double spp = 0.0, spf = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    spp += phi[i] * phi[i];
    spf += phi[i] * data.value(neighbors.indices[i]);
  }
  if (!(spp > 0.0)) {
    throw DegenerateNeighborhood("degenerate neighborhood: all kernel values zero");
  }

  LocalRbfFit fit;
  fit.center.assign(neighbors.query.begin(), neighbors.query.end());
  fit.lambda = spf / spp;
  fit.tail = PolynomialTail::none();
  double ss = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double r = data.value(neighbors.indices[i]) - fit.lambda * phi[i];
    ss += r * r;
  }
  fit.residual_norm = std::sqrt(ss);
  return fit;
}

namespace {

struct BoundingBox {
  std::vector<double> lo;
  std::vector<double> hi;
};

BoundingBox bounding_box(const Dataset& data) {
  const int dim = data.dimension();
  BoundingBox box;
  box.lo.assign(data.position(0).begin(), data.position(0).end());
  box.hi = box.lo;
  for (std::size_t i = 1; i < data.size(); ++i) {
    const auto p = data.position(i);
    for (int c = 0; c < dim; ++c) {
      box.lo[c] = std::min(box.lo[c], p[c]);
      box.hi[c] = std::max(box.hi[c], p[c]);
    }
  }
  return box;
}

}  // namespace

PointSet place_centers(const Dataset& data, std::size_t m) {
  if (m < 1) throw InvalidArgument("need at least one center");
  const int dim = data.dimension();
  const BoundingBox box = bounding_box(data);

  if (m == 1) {
    std::vector<double> mid(static_cast<std::size_t>(dim));
    for (int c = 0; c < dim; ++c) mid[c] = 0.5 * (box.lo[c] + box.hi[c]);
    return PointSet(dim, std::move(mid));
  }

  if (dim == 1) {
    std::vector<double> xs(m);
    const double span = box.hi[0] - box.lo[0];
    for (std::size_t i = 0; i < m; ++i) {
      xs[i] = box.lo[0] + span * static_cast<double>(i) / static_cast<double>(m - 1);
    }
    return PointSet(1, std::move(xs));
  }

  // Row-major grid with ceil(m^(1/D)) points per axis, truncated to m.
  std::size_t per_axis = 1;
  while (ipow(static_cast<double>(per_axis), dim) < static_cast<double>(m)) {
    ++per_axis;
  }
  PointSet centers(dim, {});
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
  std::vector<double> p(static_cast<std::size_t>(dim));
  for (std::size_t count = 0; count < m; ++count) {
    for (int c = 0; c < dim; ++c) {
      const double t = per_axis == 1 ? 0.5
                                     : static_cast<double>(idx[c]) /
                                           static_cast<double>(per_axis - 1);
      p[static_cast<std::size_t>(c)] = box.lo[c] + (box.hi[c] - box.lo[c]) * t;
    }
    centers.push_back(p);
    for (int c = dim - 1; c >= 0; --c) {
      if (++idx[static_cast<std::size_t>(c)] < per_axis) break;
      idx[static_cast<std::size_t>(c)] = 0;
    }
  }
  return centers;
}

GlobalRbfModel::GlobalRbfModel(PointSet centers, double support_radius,
                               std::vector<double> lambdas,
                               std::optional<int> tail_degree,
                               std::vector<double> tail_coefficients,
                               KernelProfile kernel)
    : centers_(std::move(centers)),
      support_radius_(support_radius),
      lambdas_(std::move(lambdas)),
      tail_degree_(tail_degree),
      tail_coefficients_(std::move(tail_coefficients)),
      kernel_(kernel) {
  if (centers_.size() == 0) throw InvalidArgument("model needs at least one center");
  if (!(support_radius_ > 0.0)) throw InvalidArgument("support radius must be positive");
  if (lambdas_.size() != centers_.size()) {
    throw InvalidArgument("one weight per center required");
  }
  const std::size_t want =
      tail_degree_ ? basis_monomials(centers_.dimension(), *tail_degree_).size() : 0;
  if (tail_coefficients_.size() != want) {
    throw InvalidArgument("tail coefficient count mismatch");
  }
}

GlobalRbfModel fit_global(const Dataset& data, std::size_t m,
                          std::optional<int> tail_degree, double support_overlap,
                          KernelProfile kernel) {
  if (!(support_overlap > 0.0)) throw InvalidArgument("support overlap must be positive");
  if (tail_degree && *tail_degree < 0) throw InvalidArgument("tail degree must be >= 0");

  const PointSet centers = place_centers(data, m);
  const int dim = data.dimension();
  const BoundingBox box = bounding_box(data);

  // Center spacing along the most spread axis; a lone center (or fully
  // collapsed data) falls back to the box extent, then to unit length.
  double extent = 0.0;
  for (int c = 0; c < dim; ++c) extent = std::max(extent, box.hi[c] - box.lo[c]);
  double spacing = extent;
  if (m >= 2 && dim == 1) {
    spacing = extent / static_cast<double>(m - 1);
  } else if (m >= 2) {
    std::size_t per_axis = 1;
    while (ipow(static_cast<double>(per_axis), dim) < static_cast<double>(m)) {
      ++per_axis;
    }
    spacing = per_axis > 1 ? extent / static_cast<double>(per_axis - 1) : extent;
  }
  if (!(spacing > 0.0)) spacing = 1.0;
  const double rho = support_overlap * spacing;

  const std::size_t n = data.size();
  const PolynomialBasis basis =
      tail_degree ? basis_monomials(dim, *tail_degree) : PolynomialBasis{dim, {}};
  const std::size_t q = m + basis.size();

  DenseMatrix a(n, q);
  for (std::size_t j = 0; j < n; ++j) {
    const auto pos = data.position(j);
    for (std::size_t i = 0; i < m; ++i) {
      a(j, i) = weight(kernel, point_distance(pos, centers[i]) / rho);
    }
    for (std::size_t t = 0; t < basis.size(); ++t) {
      double v = 1.0;
      for (int c = 0; c < dim; ++c) {
        v *= ipow(pos[c], basis.exponents[t][static_cast<std::size_t>(c)]);
      }
      a(j, m + t) = v;
    }
  }

  const std::vector<double> eta = solve_least_squares(a, data.values());
  std::vector<double> lambdas(eta.begin(), eta.begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<double> tail(eta.begin() + static_cast<std::ptrdiff_t>(m), eta.end());
  return GlobalRbfModel(centers, rho, std::move(lambdas), tail_degree,
                        std::move(tail), kernel);
}

double evaluate_global(const GlobalRbfModel& model, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(model.dimension())) {
    throw InvalidArgument("position dimension mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < model.centers().size(); ++i) {
    sum += model.lambdas()[i] *
           weight(model.kernel(),
                  point_distance(x, model.centers()[i]) / model.support_radius());
  }
  if (model.tail_degree()) {
    const PolynomialBasis basis = basis_monomials(model.dimension(), *model.tail_degree());
    for (std::size_t t = 0; t < basis.size(); ++t) {
      double v = 1.0;
      for (std::size_t c = 0; c < x.size(); ++c) v *= ipow(x[c], basis.exponents[t][c]);
      sum += model.tail_coefficients()[t] * v;
    }
  }
  return sum;
}

std::vector<double> evaluate_global(const GlobalRbfModel& model, const PointSet& xs,
                                    Execution exec) {
  if (xs.dimension() != model.dimension()) {
    throw InvalidArgument("position dimension mismatch");
  }
  std::vector<double> out(xs.size(), 0.0);
  for_each_index(exec, xs.size(), [&](std::size_t i) {
    out[i] = evaluate_global(model, xs[i]);
  });
  return out;
}

std::vector<double> smooth_local_rbf(const SpatialIndex& index,
                                     const PointSet& queries,
                                     const LocalRbfConfig& config, Execution exec) {
  if (queries.size() == 0) throw InvalidArgument("no query points");
  if (queries.dimension() != index.dataset().dimension()) {
    throw InvalidArgument("query dimension mismatch");
  }

  const std::size_t n = queries.size();
  std::vector<double> out(n, 0.0);
  std::vector<std::string> errors(n);
  std::vector<char> failed(n, 0);
  for_each_index(exec, n, [&](std::size_t i) {
    try {
      const NeighborSet neighbors = k_nearest(index, queries[i], config.neighbors);
      const Dataset& data = index.dataset();
      if (config.tail.kind == PolynomialTail::Kind::None) {
        out[i] = fit_local_rbf_no_polynomial_closed_form(neighbors, data, config.kernel)
                     .value_at_center();
      } else if (config.tail.kind == PolynomialTail::Kind::Constant) {
        try {
          out[i] = fit_local_rbf_constant_closed_form(neighbors, data, config.kernel)
                       .value_at_center();
        } catch (const RankDeficient&) {
          if (!config.tail_fallback) throw;
          out[i] = fit_local_rbf_no_polynomial_closed_form(neighbors, data, config.kernel)
                       .value_at_center();
        }
      } else {
        out[i] = fit_local_rbf(neighbors, data, config).value_at_center();
      }
    } catch (const std::exception& e) {
      failed[i] = 1;
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (failed[i]) throw QueryError(i, errors[i]);
  }
  return out;
}

std::vector<double> smooth_local_rbf(const Dataset& data, const PointSet& queries,
                                     const LocalRbfConfig& config, Execution exec) {
  const SpatialIndex index = build_index(data);
  return smooth_local_rbf(index, queries, config, exec);
}

namespace {

std::string format_g17(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw IoError("malformed number in model: '" + token + "'");
  }
  return v;
}

}  // namespace

void write_model(const GlobalRbfModel& model, std::ostream& out) {
  const int tail_d = model.tail_degree() ? *model.tail_degree() : -1;
  out << "rbf-model v1 " << model.dimension() << ' ' << model.centers().size()
      << ' ' << tail_d << ' ' << format_g17(model.support_radius()) << '\n';
  for (std::size_t i = 0; i < model.centers().size(); ++i) {
    const auto c = model.centers()[i];
    for (double v : c) out << format_g17(v) << ' ';
    out << format_g17(model.lambdas()[i]) << '\n';
  }
  bool first = true;
  for (double v : model.tail_coefficients()) {
    if (!first) out << ' ';
    out << format_g17(v);
    first = false;
  }
  out << '\n';
}

GlobalRbfModel read_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("model stream is empty");
  std::istringstream header(line);
  std::string magic, version;
  int dim = 0, tail_d = 0;
  std::size_t m = 0;
  std::string rho_token;
  if (!(header >> magic >> version >> dim >> m >> tail_d >> rho_token) ||
      magic != "rbf-model" || version != "v1") {
    throw IoError("not an rbf-model v1 header");
  }
  const double rho = parse_double(rho_token);

  PointSet centers(dim, {});
  std::vector<double> lambdas;
  std::vector<double> point(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::getline(in, line)) throw IoError("model truncated in center list");
    std::istringstream row(line);
    std::string token;
    for (int c = 0; c < dim; ++c) {
      if (!(row >> token)) throw IoError("model center line too short");
      point[static_cast<std::size_t>(c)] = parse_double(token);
    }
    if (!(row >> token)) throw IoError("model center line missing weight");
    centers.push_back(point);
    lambdas.push_back(parse_double(token));
  }

  if (!std::getline(in, line)) throw IoError("model truncated before tail line");
  std::vector<double> tail;
  std::istringstream tail_row(line);
  std::string token;
  while (tail_row >> token) tail.push_back(parse_double(token));

  const std::optional<int> tail_degree =
      tail_d >= 0 ? std::optional<int>(tail_d) : std::nullopt;
  return GlobalRbfModel(std::move(centers), rho, std::move(lambdas), tail_degree,
                        std::move(tail), KernelProfile::Tricube);
}

void save_model(const GlobalRbfModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_model(model, out);
  if (!out.good()) throw IoError("write failed: " + path);
}

GlobalRbfModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  return read_model(in);
}

}  // namespace scattersmooth
