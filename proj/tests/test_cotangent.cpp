#include <doctest.h>

#include <cmath>
#include <vector>

#include "cotb/catalog.hpp"
#include "cotb/cotangent.hpp"
#include "test_helpers.hpp"

using namespace cotb;
using cotb_test::bundle_point;

namespace {

double bundle_vec_diff(const BundleVector& a, const BundleVector& b) {
  double best = 0.0;
  for (size_t i = 0; i < a.h.size(); ++i)
    best = std::max(best, std::fabs(a.h[i] - b.h[i]));
  for (size_t i = 0; i < a.v.size(); ++i)
    best = std::max(best, std::fabs(a.v[i] - b.v[i]));
  return best;
}

}  // namespace

TEST_SUITE("cotangent") {
  TEST_CASE("alpha on the flat chart: p = (3,4) gives r^2 = 25") {
    auto spec = catalog_manifold(ManifoldKind::flat, 2);
    auto g = make_metric(spec);
    Alpha a = alpha_at(*g, bundle_point({0.0, 0.0}, {3.0, 4.0}));
    CHECK(a.r2 == doctest::Approx(25.0));
    CHECK(a.value == doctest::Approx(26.0));
  }

  TEST_CASE("alpha uses the inverse metric") {
    auto spec = catalog_manifold(ManifoldKind::hyperbolic);
    auto g = make_metric(spec);
    // g = delta / y^2, so g^{ij} = y^2 delta
    Alpha a = alpha_at(*g, bundle_point({0.0, 2.0}, {1.0, 1.0}));
    CHECK(a.r2 == doctest::Approx(8.0));
    CHECK(a.value == doctest::Approx(9.0));
  }

  TEST_CASE("lifts place components in the expected slots") {
    std::vector<double> w{0.3, -0.7};
    BundleVector v = vertical_lift(w);
    BundleVector h = horizontal_lift(w);
    CHECK(v.h[0] == 0.0);
    CHECK(v.v[1] == doctest::Approx(-0.7));
    CHECK(h.h[1] == doctest::Approx(-0.7));
    CHECK(h.v[0] == 0.0);

    auto spec = catalog_manifold(ManifoldKind::hyperbolic);
    auto g = make_metric(spec);
    NaturalVector nat = horizontal_lift_natural(
        *g, bundle_point({0.3, 2.0}, {1.0, 0.0}), std::vector<double>{1.0, 0.0});
    CHECK(nat.dx[0] == doctest::Approx(1.0));
    CHECK(std::fabs(nat.dp[0]) <= 1e-12);
    CHECK(nat.dp[1] == doctest::Approx(-0.5));  // p_a Gamma^a_{y x} X^x
  }

  TEST_CASE("liouville field is p in the vertical slots") {
    BundleVector lv = liouville(bundle_point({0.0, 0.0}, {0.2, -1.4}));
    CHECK(lv.h[0] == 0.0);
    CHECK(lv.v[0] == doctest::Approx(0.2));
    CHECK(lv.v[1] == doctest::Approx(-1.4));
  }

  TEST_CASE("flat chart brackets vanish") {
    auto spec = catalog_manifold(ManifoldKind::flat, 2);
    auto g = make_metric(spec);
    CotangentPoint pt = bundle_point({0.2, -0.3}, {1.0, 2.0});
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        BundleVector w = frame_bracket(*g, pt, a, b);
        for (double c : w.h) CHECK(std::fabs(c) <= 1e-14);
        for (double c : w.v) CHECK(std::fabs(c) <= 1e-14);
      }
  }

  TEST_CASE("sphere horizontal bracket carries the curvature contraction") {
    auto spec = catalog_manifold(ManifoldKind::sphere);
    auto g = make_metric(spec);
    CotangentPoint pt = bundle_point({1.0, 0.5}, {0.7, -0.3});
    BundleVector w = frame_bracket(*g, pt, 0, 1);
    // [E_theta, E_phi] = p_s R_{theta phi l}^s E_{lbar}
    const double s1 = std::sin(1.0);
    CHECK(w.h[0] == 0.0);
    CHECK(w.h[1] == 0.0);
    CHECK(w.v[0] == doctest::Approx(0.3));            // -p_phi
    CHECK(w.v[1] == doctest::Approx(0.7 * s1 * s1));  // p_theta sin^2
  }

  TEST_CASE("closed-form brackets match the chart-Jacobian oracle") {
    for (auto kind :
         {ManifoldKind::sphere, ManifoldKind::hyperbolic, ManifoldKind::polynomial}) {
      auto spec = catalog_manifold(kind);
      auto g = make_metric(spec);
      CotangentPoint pt =
          kind == ManifoldKind::hyperbolic
              ? bundle_point({0.4, 1.6}, {0.8, -0.5})
              : bundle_point({0.9, 0.8}, {0.8, -0.5});
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          BundleVector lhs = frame_bracket(*g, pt, a, b);
          BundleVector rhs = frame_bracket_oracle(*g, pt, a, b);
          CHECK(bundle_vec_diff(lhs, rhs) <= 1e-10);

          BundleVector fd_rhs =
              frame_bracket_oracle(*g, pt, a, b, fd_scheme());
          CHECK(bundle_vec_diff(lhs, fd_rhs) <= 1e-5);
        }
    }
  }

  TEST_CASE("the alternate mixed-bracket sign fails the oracle") {
    auto spec = catalog_manifold(ManifoldKind::sphere);
    auto g = make_metric(spec);
    CotangentPoint pt = bundle_point({1.0, 0.5}, {0.7, -0.3});
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        BundleVector alt = frame_bracket_alt_sign(*g, pt, i, 2 + j);
        BundleVector ref = frame_bracket_oracle(*g, pt, i, 2 + j);
        worst = std::max(worst, bundle_vec_diff(alt, ref));
      }
    CHECK(worst > 0.1);
  }

  TEST_CASE("frame brackets satisfy the Jacobi identity") {
    auto sph = catalog_manifold(ManifoldKind::sphere);
    auto pol = catalog_manifold(ManifoldKind::polynomial, 2);
    auto gs = make_metric(sph);
    auto gp = make_metric(pol);
    CotangentPoint pt1 = bundle_point({1.2, 0.4}, {0.5, 0.6});
    CotangentPoint pt2 = bundle_point({-0.2, 0.35}, {1.1, -0.4});
    CHECK(jacobi_defect(*gs, pt1) <= 1e-9);
    CHECK(jacobi_defect(*gp, pt2) <= 1e-9);
    CHECK(jacobi_defect(*gp, pt2, fd_scheme()) <= 1e-3);
  }

  TEST_CASE("frame index bounds are validated") {
    auto spec = catalog_manifold(ManifoldKind::flat, 2);
    auto g = make_metric(spec);
    CotangentPoint pt = bundle_point({0.0, 0.0}, {0.0, 0.0});
    CHECK_THROWS_AS(frame_bracket(*g, pt, 0, 4), usage_error);
    CHECK_THROWS_AS(frame_bracket(*g, pt, -1, 0), usage_error);
    CHECK_THROWS_AS(
        frame_bracket(*g, bundle_point({0.0}, {0.0, 0.0}), 0, 1), usage_error);
  }
}
