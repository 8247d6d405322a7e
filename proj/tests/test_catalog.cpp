#include <doctest.h>

#include <cmath>

#include "cotb/catalog.hpp"
#include "cotb/errors.hpp"

using namespace cotb;

TEST_SUITE("catalog") {
  TEST_CASE("sampling is deterministic in the seed") {
    ManifoldSpec spec = catalog_manifold(ManifoldKind::hyperbolic);
    auto a = sample_points(spec, 12, 2024);
    auto b = sample_points(spec, 12, 2024);
    REQUIRE(a.size() == b.size());
    for (size_t k = 0; k < a.size(); ++k) {
      for (int i = 0; i < spec.dim; ++i) {
        CHECK(a[k].x[static_cast<size_t>(i)] == b[k].x[static_cast<size_t>(i)]);
        CHECK(a[k].p[static_cast<size_t>(i)] == b[k].p[static_cast<size_t>(i)]);
      }
    }
    auto c = sample_points(spec, 12, 2025);
    bool same = true;
    for (size_t k = 0; k < a.size() && same; ++k)
      for (int i = 0; i < spec.dim; ++i)
        if (a[k].x[static_cast<size_t>(i)] != c[k].x[static_cast<size_t>(i)])
          same = false;
    CHECK_FALSE(same);
  }

  TEST_CASE("samples stay inside the chart box and the covector ball") {
    for (auto mk : {ManifoldKind::flat, ManifoldKind::sphere,
                    ManifoldKind::hyperbolic, ManifoldKind::polynomial}) {
      ManifoldSpec spec = catalog_manifold(mk);
      const double radius = 1.5;
      auto pts = sample_points(spec, 40, 7, radius);
      REQUIRE(static_cast<int>(pts.size()) == 42);
      for (const auto& pt : pts) {
        double norm2 = 0.0;
        for (int i = 0; i < spec.dim; ++i) {
          CHECK(pt.x[static_cast<size_t>(i)] >=
                spec.box_lo[static_cast<size_t>(i)]);
          CHECK(pt.x[static_cast<size_t>(i)] <=
                spec.box_hi[static_cast<size_t>(i)]);
          norm2 += pt.p[static_cast<size_t>(i)] * pt.p[static_cast<size_t>(i)];
        }
        CHECK(norm2 <= radius * radius + 1e-12);
      }
    }
  }

  TEST_CASE("two forced points close every sample list") {
    ManifoldSpec spec = catalog_manifold(ManifoldKind::sphere);
    const double radius = 0.75;
    auto pts = sample_points(spec, 5, 99, radius);
    REQUIRE(pts.size() == 7);
    const CotangentPoint& zero = pts[5];
    const CotangentPoint& axis = pts[6];
    for (int i = 0; i < spec.dim; ++i) {
      double center = 0.5 * (spec.box_lo[static_cast<size_t>(i)] +
                             spec.box_hi[static_cast<size_t>(i)]);
      CHECK(zero.x[static_cast<size_t>(i)] == doctest::Approx(center));
      CHECK(axis.x[static_cast<size_t>(i)] == doctest::Approx(center));
      CHECK(zero.p[static_cast<size_t>(i)] == 0.0);
    }
    CHECK(axis.p[0] == radius);
    CHECK(axis.p[1] == 0.0);
  }

  TEST_CASE("names round-trip through parse and to_string") {
    for (const auto& name : manifold_names())
      CHECK(to_string(parse_manifold(name)) == name);
    for (const auto& name : scaling_names())
      CHECK(to_string(parse_scaling(name)) == name);
    CHECK_THROWS_AS(parse_manifold("torus"), usage_error);
    CHECK_THROWS_AS(parse_scaling("log"), usage_error);
  }

  TEST_CASE("chart descriptors carry their geometric facts") {
    CHECK(catalog_manifold(ManifoldKind::flat).flat_base);
    CHECK(catalog_manifold(ManifoldKind::flat).curvature_k == 0.0);
    CHECK(catalog_manifold(ManifoldKind::sphere).curvature_k == 1.0);
    CHECK(catalog_manifold(ManifoldKind::hyperbolic).curvature_k == -1.0);
    CHECK_FALSE(catalog_manifold(ManifoldKind::polynomial).space_form);
    CHECK(catalog_manifold(ManifoldKind::flat, 3).dim == 3);
    CHECK_THROWS_AS(catalog_manifold(ManifoldKind::flat, 5), usage_error);
    CHECK_THROWS_AS(catalog_manifold(ManifoldKind::polynomial, 1), usage_error);
  }

  TEST_CASE("sampler argument validation") {
    ManifoldSpec spec = catalog_manifold(ManifoldKind::flat);
    CHECK_THROWS_AS(sample_points(spec, -1, 0), usage_error);
    CHECK_THROWS_AS(sample_points(spec, 3, 0, 0.0), usage_error);
  }
}
