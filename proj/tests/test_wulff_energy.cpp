#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "spiral/wulff_energy.hpp"

using namespace spiral;

namespace {

SupportSpec regular(int count, double psi0, double eta = 1.0) {
  SupportSpec spec;
  for (int j = 0; j < count; ++j) spec.facets.push_back({eta, psi0 + kTwoPi * j / count});
  return spec;
}

SupportSpec square_spec() { return regular(4, 0.0); }
SupportSpec diagonal_spec() { return regular(4, kPi / 4.0); }
SupportSpec triangle_spec() { return regular(3, 0.0); }

// Set comparison up to cyclic reordering.
bool same_vector_set(const std::vector<Vec2>& a, const std::vector<Vec2>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const Vec2& va : a) {
    bool found = false;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!used[i] && norm(va - b[i]) <= tol) {
        used[i] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("eval_support on the presets") {
  CHECK(eval_support(square_spec(), {3.0, -4.0}) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(eval_support(square_spec(), {0.0, 0.0}) == 0.0);
  // oracle: direct max over the three dot products
  SupportSpec tri = triangle_spec();
  Vec2 p{-2.0, 0.0};
  double expect = -1e300;
  for (int j = 0; j < 3; ++j) expect = std::max(expect, dot(tri.m(j), p));
  CHECK(eval_support(tri, p) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(eval_support(tri, p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eval_energy on preset densities") {
  EnergyDensity square = dual(square_spec());
  CHECK(eval_energy(square, {2.0, -3.0}) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(eval_energy(square, {0.0, 0.0}) == 0.0);

  EnergyDensity tri = dual(triangle_spec());
  double expect = -1e300;
  for (const Vec2& n : tri.vectors) expect = std::max(expect, dot(n, Vec2{1.0, 0.0}));
  CHECK(eval_energy(tri, {1.0, 0.0}) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(eval_energy(tri, {1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dual reproduces the scenario densities") {
  EnergyDensity square = dual(square_spec());
  CHECK(same_vector_set(square.vectors,
                        {{1.0, 1.0}, {-1.0, 1.0}, {-1.0, -1.0}, {1.0, -1.0}}, 1e-12));

  EnergyDensity diag = dual(diagonal_spec());
  const double r2 = std::sqrt(2.0);
  CHECK(same_vector_set(diag.vectors, {{r2, 0.0}, {0.0, r2}, {-r2, 0.0}, {0.0, -r2}}, 1e-12));

  EnergyDensity tri = dual(triangle_spec());
  std::vector<Vec2> expect;
  for (int j = 0; j < 3; ++j) expect.push_back(2.0 * unit_dir((2 * j + 1) * kPi / 3.0));
  CHECK(same_vector_set(tri.vectors, expect, 1e-12));
}

TEST_CASE("dual rejects invalid specs with the failed assumption") {
  SupportSpec unsorted;
  unsorted.facets = {{1.0, 0.0}, {1.0, 3.0}, {1.0, 2.0}};
  CHECK_THROWS_AS(dual(unsorted), AssumptionError);
  try {
    dual(unsorted);
  } catch (const AssumptionError& e) {
    CHECK(e.assumption() == "gamma1");
  }

  SupportSpec wide_gap;  // gap of pi between consecutive normals
  wide_gap.facets = {{1.0, 0.0}, {1.0, kPi}, {1.0, 1.5 * kPi}};
  CHECK_THROWS_AS(dual(wide_gap), AssumptionError);

  SupportSpec bad_eta = square_spec();
  bad_eta.facets[1].eta = -1.0;
  CHECK_THROWS_AS(dual(bad_eta), AssumptionError);
}

TEST_CASE("wulff_shape_from_support on the presets") {
  WulffShape tri = wulff_shape_from_support(triangle_spec());
  CHECK(same_vector_set(tri.vertices, {{1.0, std::sqrt(3.0)}, {-2.0, 0.0}, {1.0, -std::sqrt(3.0)}},
                        1e-12));
  for (int j = 0; j < 3; ++j) {
    CHECK(tri.ell[j] == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-13));
    CHECK(tri.phi[j] == doctest::Approx(kTwoPi * j / 3.0));
  }

  WulffShape square = wulff_shape_from_support(square_spec());
  for (int j = 0; j < 4; ++j) {
    CHECK(square.ell[j] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(square.phi[j] == doctest::Approx(kPi * j / 2.0));
  }
  CHECK(same_vector_set(square.vertices, {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}, 1e-12));

  WulffShape diag = wulff_shape_from_support(diagonal_spec());
  const double r2 = std::sqrt(2.0);
  CHECK(same_vector_set(diag.vertices, {{r2, 0}, {0, r2}, {-r2, 0}, {0, -r2}}, 1e-12));
  for (int j = 0; j < 4; ++j) CHECK(diag.ell[j] == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("density vectors are the Wulff vertices") {
  for (const SupportSpec& spec : {square_spec(), diagonal_spec(), triangle_spec()}) {
    EnergyDensity d = dual(spec);
    WulffShape shape = wulff_shape_from_support(spec);
    CHECK(same_vector_set(d.vectors, shape.vertices, 1e-12));
  }
}

TEST_CASE("validate_sectors flags the degenerate four-vector set") {
  SectorReport report = validate_sectors({{3, 0}, {1, 1}, {0, 2}, {-1, -1}});
  CHECK_FALSE(report.pass);
  CHECK_FALSE(report.sectors[1].nonempty);

  CHECK(validate_sectors({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}).pass);
  SectorReport tri = validate_sectors(dual(triangle_spec()).vectors);
  CHECK(tri.pass);
}

TEST_CASE("normalization_check") {
  SupportSpec sq = square_spec();
  WulffShape shape = wulff_shape_from_support(sq);
  CHECK(normalization_check(sq, shape).pass);

  SupportSpec tri = triangle_spec();
  CHECK(normalization_check(tri, wulff_shape_from_support(tri)).pass);

  SupportSpec off = square_spec();
  off.facets[0].eta = 2.0;
  WulffShape off_shape = wulff_shape_from_support(off);
  NormalizationReport report = normalization_check(off, off_shape);
  CHECK_FALSE(report.pass);
  CHECK(report.residuals[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("duality round trip recovers the support vectors") {
  std::vector<SupportSpec> specs = {square_spec(), diagonal_spec(), triangle_spec()};
  // an irregular pentagon with distinct radii
  SupportSpec penta;
  const double angles[5] = {0.1, 1.3, 2.7, 4.0, 5.2};
  const double etas[5] = {1.0, 1.4, 0.8, 1.1, 0.9};
  for (int j = 0; j < 5; ++j) penta.facets.push_back({etas[j], angles[j]});
  specs.push_back(penta);

  for (const SupportSpec& spec : specs) {
    EnergyDensity d = dual(spec);
    EnergyDensity back = dual(as_support(d));
    std::vector<Vec2> original;
    for (int j = 0; j < spec.count(); ++j) original.push_back(spec.m(j));
    CHECK(same_vector_set(back.vectors, original, 1e-12));
  }
}

TEST_CASE("homogeneity and convexity spot checks") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  SupportSpec spec = triangle_spec();
  EnergyDensity d = dual(spec);
  for (int it = 0; it < 200; ++it) {
    Vec2 p{coord(rng), coord(rng)};
    Vec2 q{coord(rng), coord(rng)};
    double lambda = scale(rng);
    CHECK(eval_support(spec, lambda * p) ==
          doctest::Approx(lambda * eval_support(spec, p)).epsilon(1e-12));
    double mid = eval_energy(d, 0.5 * (p + q));
    CHECK(mid <= 0.5 * (eval_energy(d, p) + eval_energy(d, q)) + 1e-12);
  }
}

TEST_CASE("sector indicators partition the plane") {
  EnergyDensity d = dual(triangle_spec());
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (int it = 0; it < 500; ++it) {
    Vec2 p{coord(rng), coord(rng)};
    if (norm(p) < 1e-6) continue;
    int positive = 0, ties = 0;
    for (int j = 0; j < d.count(); ++j) {
      double f = d.indicator(j, p);
      if (f > 1e-12) ++positive;
      if (std::abs(f) <= 1e-12) ++ties;
    }
    CHECK((positive == 1 || ties > 0));
  }
}

TEST_CASE("wulff shape of a valid spec satisfies the angle assumptions") {
  SupportSpec penta;
  const double angles[5] = {0.1, 1.3, 2.7, 4.0, 5.2};
  const double etas[5] = {1.0, 1.4, 0.8, 1.1, 0.9};
  for (int j = 0; j < 5; ++j) penta.facets.push_back({etas[j], angles[j]});
  WulffShape shape = wulff_shape_from_support(penta);
  for (int j = 0; j + 1 < shape.count(); ++j) CHECK(shape.phi[j] < shape.phi[j + 1]);
  for (int j = 0; j < shape.count(); ++j) {
    double next = (j + 1 < shape.count()) ? shape.phi[j + 1] : shape.phi[0] + kTwoPi;
    CHECK(next - shape.phi[j] > 0.0);
    CHECK(next - shape.phi[j] < kPi);
    CHECK(shape.ell[j] > 0.0);
  }
}
