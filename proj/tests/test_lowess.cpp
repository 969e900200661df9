#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "scattersmooth/lowess.hpp"
#include "scattersmooth/prng.hpp"

using namespace scattersmooth;

namespace {

// Inverts the tricube profile: radius that produces a given weight.
double radius_for_weight(double w) {
  return std::cbrt(1.0 - std::cbrt(w));
}

NeighborSet neighbors_of_all(const Dataset& data, std::vector<double> query) {
  const SpatialIndex index = build_index(data);
  return k_nearest(index, query, data.size());
}

Dataset random_1d(SplitMix64& rng, std::size_t n) {
  std::vector<double> xs(n), ys(n);
  for (double& x : xs) x = rng.next_in(-2.0, 2.0);
  for (double& y : ys) y = rng.next_in(-1.0, 1.0);
  return Dataset::from_1d(std::move(xs), std::move(ys));
}

}  // namespace

TEST_CASE("basis_monomials enumerates graded bases") {
  SUBCASE("1D quadratic") {
    const PolynomialBasis b = basis_monomials(1, 2);
    REQUIRE(b.size() == 3);
    CHECK(b.exponents[0] == std::vector<int>{0});
    CHECK(b.exponents[1] == std::vector<int>{1});
    CHECK(b.exponents[2] == std::vector<int>{2});
  }
  SUBCASE("2D quadratic has the six pinned tuples in order") {
    const PolynomialBasis b = basis_monomials(2, 2);
    REQUIRE(b.size() == 6);
    const std::vector<std::vector<int>> expected{
        {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    CHECK(b.exponents == expected);
  }
  SUBCASE("3D constant") {
    const PolynomialBasis b = basis_monomials(3, 0);
    REQUIRE(b.size() == 1);
    CHECK(b.exponents[0] == std::vector<int>{0, 0, 0});
  }
  SUBCASE("mask removes non-constant terms") {
    const MonomialMask mask{{1, 1}};
    const PolynomialBasis b = basis_monomials(2, 2, &mask);
    CHECK(b.size() == 5);
    for (const auto& e : b.exponents) CHECK(e != std::vector<int>{1, 1});
  }
  SUBCASE("masking the constant term is rejected") {
    const MonomialMask mask{{0, 0}};
    CHECK_THROWS_AS(basis_monomials(2, 2, &mask), InvalidArgument);
  }
  SUBCASE("mask dimension must match") {
    const MonomialMask mask{{1}};
    CHECK_THROWS_AS(basis_monomials(2, 2, &mask), InvalidArgument);
  }
}

TEST_CASE("fit_local reproduces a line exactly") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 12; ++i) {
    xs.push_back(0.3 * i);
    ys.push_back(2.0 * xs.back() + 1.0);
  }
  const Dataset data = Dataset::from_1d(std::move(xs), std::move(ys));
  const SpatialIndex index = build_index(data);
  LowessConfig config;
  config.degree = 1;
  config.neighbors = 6;
  for (double q : {0.4, 1.7, 2.95}) {
    const NeighborSet nb = k_nearest(index, std::vector<double>{q}, 6);
    const LocalFit fit = fit_local(nb, data, config);
    CHECK(fit.value_at_center() == doctest::Approx(2.0 * q + 1.0).epsilon(1e-9));
    CHECK(fit.objective <= 1e-18);
    CHECK(fit.effective_degree == 1);
  }
}

TEST_CASE("constant data fits to the constant at degree 0") {
  const Dataset data = Dataset::from_1d({0.0, 0.5, 1.5, 2.0}, {7.5, 7.5, 7.5, 7.5});
  const NeighborSet nb = neighbors_of_all(data, {0.7});
  LowessConfig config;
  config.degree = 0;
  config.neighbors = 4;
  CHECK(fit_local(nb, data, config).value_at_center() == doctest::Approx(7.5));
}

TEST_CASE("constant closed form is the weighted mean") {
  SUBCASE("equal weights give the arithmetic mean") {
    // symmetric distances => equal weights; the two outermost get weight 0
    const Dataset data =
        Dataset::from_1d({-1.0, -0.5, 0.5, 1.0}, {1.0, 2.0, 4.0, 3.0});
    const NeighborSet nb = neighbors_of_all(data, {0.0});
    const LocalFit fit = fit_constant_closed_form(nb, data, KernelProfile::Tricube);
    CHECK(fit.value_at_center() == doctest::Approx(3.0));  // mean of 2 and 4
  }
  SUBCASE("zero-weight neighbors are excluded") {
    const Dataset data = Dataset::from_1d({0.0, 1.0}, {4.0, 99.0});
    const NeighborSet nb = neighbors_of_all(data, {0.0});
    // weights (1, 0): the far point sits exactly on the support boundary
    const LocalFit fit = fit_constant_closed_form(nb, data, KernelProfile::Tricube);
    CHECK(fit.value_at_center() == doctest::Approx(4.0));
  }
  SUBCASE("weights 0.8/0.2 give 1.2") {
    const double d_max = 2.0;
    const double r1 = radius_for_weight(0.8) * d_max;
    const double r2 = radius_for_weight(0.2) * d_max;
    const Dataset data =
        Dataset::from_1d({r1, -r2, d_max}, {1.0, 2.0, 50.0});
    const NeighborSet nb = neighbors_of_all(data, {0.0});
    REQUIRE(weight(KernelProfile::Tricube, nb.distances[0] / nb.d_max()) ==
            doctest::Approx(0.8).epsilon(1e-12));
    const LocalFit fit = fit_constant_closed_form(nb, data, KernelProfile::Tricube);
    CHECK(fit.value_at_center() == doctest::Approx(1.2).epsilon(1e-12));
  }
}

TEST_CASE("linear closed form") {
  SUBCASE("collinear data is exact") {
    const Dataset data =
        Dataset::from_1d({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
    const NeighborSet nb = neighbors_of_all(data, {1.2});
    const LocalFit fit = fit_linear_closed_form(nb, data, KernelProfile::Tricube);
    CHECK(fit.coefficients[0] == doctest::Approx(2.0 * 1.2 + 1.0).epsilon(1e-12));
    CHECK(fit.coefficients[1] == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("symmetric abscissae decouple intercept and slope") {
    // u = -a, -b, b, a around the query: weighted sums of odd powers vanish
    const Dataset data =
        Dataset::from_1d({-2.0, -1.0, 1.0, 2.0}, {0.5, 1.0, 2.0, 1.5});
    const NeighborSet nb = neighbors_of_all(data, {0.0});
    const LocalFit fit = fit_linear_closed_form(nb, data, KernelProfile::Tricube);
    double sw = 0, sy = 0, sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < nb.count(); ++i) {
      const double u = data.position(nb.indices[i])[0];
      const double w = weight(KernelProfile::Tricube, nb.distances[i] / nb.d_max());
      sw += w;
      sy += w * data.value(nb.indices[i]);
      sxy += w * u * data.value(nb.indices[i]);
      sxx += w * u * u;
    }
    CHECK(fit.coefficients[0] == doctest::Approx(sy / sw).epsilon(1e-12));
    CHECK(fit.coefficients[1] == doctest::Approx(sxy / sxx).epsilon(1e-12));
  }
  SUBCASE("random neighborhoods agree with the general path") {
    SplitMix64 rng(808);
    for (int trial = 0; trial < 100; ++trial) {
      const Dataset data = random_1d(rng, 6);
      const NeighborSet nb = neighbors_of_all(data, {rng.next_in(-2.0, 2.0)});
      LowessConfig config;
      config.degree = 1;
      config.neighbors = 6;
      config.degree_fallback = false;
      LocalFit closed, general;
      try {
        closed = fit_linear_closed_form(nb, data, KernelProfile::Tricube);
        general = fit_local(nb, data, config);
      } catch (const RankDeficient&) {
        continue;
      }
      CHECK(std::abs(closed.coefficients[0] - general.coefficients[0]) <= 1e-10);
      CHECK(std::abs(closed.coefficients[1] - general.coefficients[1]) <= 1e-10);
    }
  }
  SUBCASE("one shared abscissa for all positive weights is rank deficient") {
    const Dataset data = Dataset::from_1d({1.0, 1.0, 1.0, -2.0}, {0.0, 1.0, 2.0, 3.0});
    const NeighborSet nb = neighbors_of_all(data, {0.0});
    CHECK_THROWS_AS(fit_linear_closed_form(nb, data, KernelProfile::Tricube),
                    RankDeficient);
  }
}

TEST_CASE("5-point weighted fit matches a grid-search oracle") {
  SplitMix64 rng(606);
  const Dataset data = Dataset::from_1d({-0.9, -0.4, 0.1, 0.6, 1.1},
                                        {rng.next_in(-1, 1), rng.next_in(-1, 1),
                                         rng.next_in(-1, 1), rng.next_in(-1, 1),
                                         rng.next_in(-1, 1)});
  const NeighborSet nb = neighbors_of_all(data, {0.05});
  LowessConfig config;
  config.degree = 1;
  config.neighbors = 5;
  const LocalFit fit = fit_local(nb, data, config);

  std::vector<double> weights(nb.count());
  for (std::size_t i = 0; i < nb.count(); ++i) {
    weights[i] = weight(KernelProfile::Tricube, nb.distances[i] / nb.d_max());
  }
  auto objective = [&](const std::vector<double>& coef) {
    double s = 0.0;
    for (std::size_t i = 0; i < nb.count(); ++i) {
      const double u = data.position(nb.indices[i])[0] - 0.05;
      const double r = data.value(nb.indices[i]) - (coef[0] + coef[1] * u);
      s += weights[i] * r * r;
    }
    return s;
  };
  const std::vector<double> best =
      oracles::grid_search_minimize(objective, {0.0, 0.0}, 2.0);
  CHECK(std::abs(fit.coefficients[0] - best[0]) <= 1e-5);
  CHECK(std::abs(fit.coefficients[1] - best[1]) <= 1e-5);
  CHECK(fit.objective <= objective(best) + 1e-12);
}

TEST_CASE("smooth on constant data returns the constant everywhere") {
  const Dataset data =
      Dataset::from_1d({0.0, 0.3, 0.9, 1.4, 2.0}, {4.0, 4.0, 4.0, 4.0, 4.0});
  LowessConfig config;
  config.degree = 1;
  config.neighbors = 3;
  const std::vector<double> out =
      smooth(data, data.positions(), config, Execution::Serial);
  for (double v : out) CHECK(v == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("smooth reproduces polynomials of matching degree") {
  SplitMix64 rng(1234);
  for (int trial = 0; trial < 25; ++trial) {
    const int dim = 1 + static_cast<int>(rng.next() % 2);
    const int degree = static_cast<int>(rng.next() % 4);
    const PolynomialBasis basis = basis_monomials(dim, degree);
    std::vector<double> coef(basis.size());
    for (double& c : coef) c = rng.next_in(-1.0, 1.0);
    auto poly = [&](std::span<const double> x) {
      double acc = 0.0;
      for (std::size_t t = 0; t < basis.size(); ++t) {
        double term = coef[t];
        for (int c = 0; c < dim; ++c) {
          for (int e = 0; e < basis.exponents[t][static_cast<std::size_t>(c)]; ++e) {
            term *= x[static_cast<std::size_t>(c)];
          }
        }
        acc += term;
      }
      return acc;
    };

    const std::size_t n = basis.size() + 12 + rng.next() % 20;
    PointSet positions(dim, {});
    std::vector<double> values;
    std::vector<double> p(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < n; ++i) {
      for (double& c : p) c = rng.next_in(-1.0, 1.0);
      positions.push_back(p);
      values.push_back(poly(p));
    }
    const Dataset data(std::move(positions), std::move(values));

    PointSet queries(dim, {});
    for (int q = 0; q < 4; ++q) {
      for (double& c : p) c = rng.next_in(-0.8, 0.8);
      queries.push_back(p);
    }
    LowessConfig config;
    config.degree = degree;
    config.neighbors = basis.size() + 6;
    const std::vector<double> out = smooth(data, queries, config, Execution::Serial);
    for (std::size_t q = 0; q < queries.size(); ++q) {
      const double expected = poly(queries[q]);
      CHECK(std::abs(out[q] - expected) <=
            1e-9 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("smoothing is shift invariant") {
  SplitMix64 rng(55);
  const Dataset data = random_1d(rng, 40);
  LowessConfig config;
  config.degree = 1;
  config.neighbors = 10;
  PointSet queries = PointSet::from_1d({-1.0, -0.25, 0.4, 1.3});
  const std::vector<double> base = smooth(data, queries, config, Execution::Serial);
  for (int trial = 0; trial < 20; ++trial) {
    const double shift = rng.next_in(-100.0, 100.0);
    std::vector<double> xs(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      xs[i] = data.position(i)[0] + shift;
    }
    const Dataset moved = Dataset::from_1d(std::move(xs), data.values());
    std::vector<double> qs(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) qs[i] = queries[i][0] + shift;
    const std::vector<double> out =
        smooth(moved, PointSet::from_1d(std::move(qs)), config, Execution::Serial);
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(std::abs(out[i] - base[i]) <= 1e-10);
    }
  }
}

TEST_CASE("degree-0 smoothing stays inside the neighbor value range") {
  SplitMix64 rng(66);
  const Dataset data = random_1d(rng, 60);
  const SpatialIndex index = build_index(data);
  LowessConfig config;
  config.degree = 0;
  config.neighbors = 9;
  for (int q = 0; q < 30; ++q) {
    const std::vector<double> query{rng.next_in(-2.0, 2.0)};
    const NeighborSet nb = k_nearest(index, query, 9);
    double lo = data.value(nb.indices[0]), hi = lo;
    for (std::size_t i : nb.indices) {
      lo = std::min(lo, data.value(i));
      hi = std::max(hi, data.value(i));
    }
    const double v = fit_constant_closed_form(nb, data, KernelProfile::Tricube)
                         .value_at_center();
    const double margin = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    CHECK(v >= lo - margin);
    CHECK(v <= hi + margin);
  }
}

TEST_CASE("scaling all values scales every output") {
  SplitMix64 rng(77);
  const Dataset data = random_1d(rng, 50);
  LowessConfig config;
  config.degree = 2;
  config.neighbors = 12;
  const PointSet queries = PointSet::from_1d({-0.9, 0.0, 0.7});
  const std::vector<double> base = smooth(data, queries, config, Execution::Serial);
  const double factor = -3.25;
  std::vector<double> scaled_values = data.values();
  for (double& v : scaled_values) v *= factor;
  const std::vector<double> scaled =
      smooth(data.with_values(std::move(scaled_values)), queries, config,
             Execution::Serial);
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(std::abs(scaled[i] - factor * base[i]) <=
          1e-10 * std::max(1.0, std::abs(factor * base[i])));
  }
}

TEST_CASE("degree fallback degrades to a fittable basis") {
  // Every positive-weight neighbor shares one abscissa (the point at -2 sits
  // on the support boundary with weight 0), so the slope is unidentifiable.
  const Dataset data =
      Dataset::from_1d({1.0, 1.0, 1.0, -2.0}, {2.0, 4.0, 2.0, 100.0});
  const NeighborSet nb = neighbors_of_all(data, {0.0});
  LowessConfig config;
  config.degree = 3;
  config.neighbors = 4;
  const LocalFit fit = fit_local(nb, data, config);
  CHECK(fit.effective_degree == 0);
  CHECK(fit.value_at_center() == doctest::Approx(8.0 / 3.0));

  config.degree_fallback = false;
  CHECK_THROWS_AS(fit_local(nb, data, config), RankDeficient);
}

TEST_CASE("neighborhoods smaller than the basis fall back to a lower degree") {
  const Dataset data = Dataset::from_1d({0.0, 0.4, 1.0}, {1.0, 2.0, 1.5});
  const NeighborSet nb = neighbors_of_all(data, {0.3});
  LowessConfig config;
  config.degree = 3;  // four basis terms, only three neighbors
  config.neighbors = 3;
  const LocalFit fit = fit_local(nb, data, config);
  CHECK(fit.effective_degree <= 2);
  CHECK(std::isfinite(fit.value_at_center()));
}

TEST_CASE("degenerate neighborhoods are rejected") {
  SUBCASE("all neighbors coincide with the query") {
    const Dataset data = Dataset::from_1d({0.5, 0.5}, {1.0, 2.0});
    const NeighborSet nb = neighbors_of_all(data, {0.5});
    LowessConfig config;
    config.degree = 1;
    config.neighbors = 2;
    CHECK_THROWS_AS(fit_local(nb, data, config), DegenerateNeighborhood);
    CHECK_THROWS_AS(fit_constant_closed_form(nb, data, KernelProfile::Tricube),
                    DegenerateNeighborhood);
  }
  SUBCASE("all neighbors equidistant means all weights vanish") {
    const Dataset data = Dataset::from_1d({-1.0, 1.0}, {3.0, 5.0});
    const NeighborSet nb = neighbors_of_all(data, {0.0});
    LowessConfig config;
    config.degree = 0;
    config.neighbors = 2;
    CHECK_THROWS_AS(fit_local(nb, data, config), DegenerateNeighborhood);
  }
}

TEST_CASE("per-query failures carry the query index") {
  const Dataset data = Dataset::from_1d({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0});
  LowessConfig config;
  config.degree = 1;
  config.neighbors = 2;
  const PointSet queries = PointSet::from_1d({0.9, 0.0});
  try {
    smooth(data, queries, config, Execution::Serial);
    CHECK(false);
  } catch (const QueryError& e) {
    CHECK(e.query_index() == 1);  // both nearest points coincide with query 0.0
  }
}

TEST_CASE("smooth validates queries") {
  const Dataset data = Dataset::from_1d({0.0, 1.0}, {0.0, 1.0});
  LowessConfig config;
  config.neighbors = 2;
  CHECK_THROWS_AS(smooth(data, PointSet(1, {}), config), InvalidArgument);
  CHECK_THROWS_AS(smooth(data, PointSet(2, {0.0, 0.0}), config), InvalidArgument);
}
