#include <doctest.h>

#include <cmath>

#include "cotb/catalog.hpp"
#include "cotb/norden.hpp"
#include "test_helpers.hpp"

using namespace cotb;
using cotb_test::bundle_point;

namespace {

struct Cell {
  ManifoldKind mk;
  ScalingKind sk;
  CotangentPoint pt;
};

const Cell kFlatCells[] = {
    {ManifoldKind::flat, ScalingKind::one, {{0.1, -0.4}, {1.2, 0.3}}},
    {ManifoldKind::flat, ScalingKind::exp_linear, {{0.4, -0.2}, {0.8, 0.5}}},
};

const Cell kCurvedCells[] = {
    {ManifoldKind::sphere, ScalingKind::one, {{1.0, 0.5}, {0.7, -0.3}}},
    {ManifoldKind::sphere, ScalingKind::exp_linear, {{0.8, 1.9}, {-0.6, 1.1}}},
    {ManifoldKind::hyperbolic, ScalingKind::poly, {{0.5, 1.4}, {0.9, 0.2}}},
    {ManifoldKind::polynomial, ScalingKind::poly, {{-0.3, 0.5}, {0.4, 1.0}}},
};

double grid3_diff(const Grid3<double>& a, const Grid3<double>& b) {
  double w = 0.0;
  for (size_t e = 0; e < a.v.size(); ++e)
    w = std::max(w, std::fabs(a.v[e] - b.v[e]));
  return w;
}

double grid3_max(const Grid3<double>& a) {
  double w = 0.0;
  for (double v : a.v) w = std::max(w, std::fabs(v));
  return w;
}

}  // namespace

TEST_SUITE("norden") {
  TEST_CASE("the metric is exactly pure for both block structures") {
    for (const auto& cells : {kFlatCells[1], kCurvedCells[0], kCurvedCells[2],
                              kCurvedCells[3]}) {
      auto spec = catalog_manifold(cells.mk);
      auto g = make_metric(spec);
      auto f = make_scaling(cells.sk, spec.dim);
      BundleMetricValue gv = cg_metric_at(*g, *f, cells.pt);
      CHECK(purity_defect(gv, para_structure(2)) == 0.0);
      CHECK(purity_defect(gv, diagonal_lift_structure(2)) == 0.0);
    }
  }

  TEST_CASE("a block-mixing endomorphism is not pure") {
    auto spec = catalog_manifold(ManifoldKind::sphere);
    auto g = make_metric(spec);
    auto f = make_scaling(ScalingKind::one, 2);
    CotangentPoint pt = bundle_point({1.0, 0.5}, {0.7, -0.3});
    BundleMetricValue gv = cg_metric_at(*g, *f, pt);
    FrameEndomorphism j = para_structure(2);
    j.m.at(0, 2) = 0.1;  // horizontal <- vertical leakage
    CHECK(purity_defect(gv, j) > 1e-3);
  }

  TEST_CASE("honest twist operator matches its closed form") {
    for (const auto& cell : kCurvedCells) {
      auto spec = catalog_manifold(cell.mk);
      auto g = make_metric(spec);
      auto f = make_scaling(cell.sk, spec.dim);
      Grid3<double> honest = phi_operator(*g, *f, cell.pt, para_structure(2));
      Grid3<double> closed = phi_closed_form(*g, *f, cell.pt);
      CHECK(grid3_diff(honest, closed) <= 1e-12);
    }
  }

  TEST_CASE("twist operator vanishes exactly on a flat base") {
    for (const auto& cell : kFlatCells) {
      auto spec = catalog_manifold(cell.mk);
      auto g = make_metric(spec);
      auto f = make_scaling(cell.sk, spec.dim);
      Grid3<double> honest = phi_operator(*g, *f, cell.pt, para_structure(2));
      CHECK(grid3_max(honest) <= 1e-14);
    }
  }

  TEST_CASE("twist operator is bounded away from zero on curved bases") {
    for (const auto& cell : kCurvedCells) {
      auto spec = catalog_manifold(cell.mk);
      auto g = make_metric(spec);
      auto f = make_scaling(cell.sk, spec.dim);
      Grid3<double> honest = phi_operator(*g, *f, cell.pt, para_structure(2));
      CHECK(grid3_max(honest) > 1e-2);
    }
  }

  TEST_CASE("frozen twist entry on the unit sphere") {
    auto spec = catalog_manifold(ManifoldKind::sphere);
    auto g = make_metric(spec);
    auto f = make_scaling(ScalingKind::one, 2);
    CotangentPoint pt = bundle_point({1.0, 0.5}, {0.7, -0.3});
    Grid3<double> phi = phi_operator(*g, *f, pt, para_structure(2));
    CHECK(phi.at(0, 2, 1) == doctest::Approx(0.371033314496).epsilon(1e-9));
  }

  TEST_CASE("cyclic sum of the twist operator vanishes") {
    for (const auto& cell : kCurvedCells) {
      auto spec = catalog_manifold(cell.mk);
      auto g = make_metric(spec);
      auto f = make_scaling(cell.sk, spec.dim);
      Grid3<double> honest = phi_operator(*g, *f, cell.pt, para_structure(2));
      CHECK(cyclic_sum_defect(honest) <= 1e-12);
    }
  }

  TEST_CASE("opposite block structure flips the twist operator") {
    auto spec = catalog_manifold(ManifoldKind::sphere);
    auto g = make_metric(spec);
    auto f = make_scaling(ScalingKind::exp_linear, 2);
    CotangentPoint pt = bundle_point({0.8, 1.9}, {-0.6, 1.1});
    Grid3<double> pj = phi_operator(*g, *f, pt, para_structure(2));
    Grid3<double> pd = phi_operator(*g, *f, pt, diagonal_lift_structure(2));
    double w = 0.0;
    for (size_t e = 0; e < pj.v.size(); ++e)
      w = std::max(w, std::fabs(pj.v[e] + pd.v[e]));
    CHECK(w <= 1e-15);
  }

  TEST_CASE("twist routes agree under finite differences") {
    auto spec = catalog_manifold(ManifoldKind::sphere);
    auto g = make_metric(spec);
    auto f = make_scaling(ScalingKind::one, 2);
    CotangentPoint pt = bundle_point({1.0, 0.5}, {0.7, -0.3});
    Grid3<double> honest = phi_operator(*g, *f, pt, para_structure(2), fd_scheme());
    Grid3<double> closed = phi_closed_form(*g, *f, pt, fd_scheme());
    CHECK(grid3_diff(honest, closed) <= 1e-9);
  }

  TEST_CASE("product connection: closed cases equal the potential route") {
    for (const auto& cell : kCurvedCells) {
      auto spec = catalog_manifold(cell.mk);
      auto g = make_metric(spec);
      auto f = make_scaling(cell.sk, spec.dim);
      ConnectionTable lc = connection_formula(*g, *f, cell.pt);
      ConnectionTable pc = product_connection(*g, *f, cell.pt);
      ConnectionTable pv = product_connection_via_potential(lc, para_structure(2));
      CHECK(grid3_diff(pc.gamma, pv.gamma) <= 1e-15);
      CHECK(structure_parallel_defect(pc, para_structure(2)) == 0.0);
    }
  }

  TEST_CASE("product-connection torsion matches its displayed components") {
    for (const auto& cell : kCurvedCells) {
      auto spec = catalog_manifold(cell.mk);
      auto g = make_metric(spec);
      auto f = make_scaling(cell.sk, spec.dim);
      ConnectionTable pc = product_connection(*g, *f, cell.pt);
      Grid3<double> lhs = table_torsion(*g, cell.pt, pc);
      Grid3<double> rhs = product_torsion_closed(*g, *f, cell.pt);
      CHECK(grid3_diff(lhs, rhs) <= 1e-12);
      CHECK(grid3_max(lhs) > 1e-2);  // never torsion-free over a curved base
    }
  }

  TEST_CASE("product-connection torsion vanishes over a flat base") {
    for (const auto& cell : kFlatCells) {
      auto spec = catalog_manifold(cell.mk);
      auto g = make_metric(spec);
      auto f = make_scaling(cell.sk, spec.dim);
      ConnectionTable pc = product_connection(*g, *f, cell.pt);
      Grid3<double> lhs = table_torsion(*g, cell.pt, pc);
      CHECK(grid3_max(lhs) <= 1e-14);
    }
  }

  TEST_CASE("conjugate connection is metric for the bundle metric") {
    for (const auto& cell : kCurvedCells) {
      auto spec = catalog_manifold(cell.mk);
      auto g = make_metric(spec);
      auto f = make_scaling(cell.sk, spec.dim);
      ConnectionTable cj =
          conjugate_table(connection_formula(*g, *f, cell.pt), para_structure(2));
      CHECK(table_compat_defect(*g, *f, cell.pt, cj) <= 1e-12);
    }
  }

  TEST_CASE("conjugate curvature satisfies the block sign relation") {
    for (const auto& cell : kCurvedCells) {
      auto spec = catalog_manifold(cell.mk);
      auto g = make_metric(spec);
      auto f = make_scaling(cell.sk, spec.dim);
      FrameEndomorphism j = para_structure(2);
      BundleCurvatureTable lhs = conjugate_curvature_oracle(*g, *f, cell.pt, j);
      BundleCurvatureTable rhs =
          conjugate_curvature_reference(curvature_formula(*g, *f, cell.pt), j);
      double w = 0.0;
      for (size_t e = 0; e < lhs.r.v.size(); ++e)
        w = std::max(w, std::fabs(lhs.r.v[e] - rhs.r.v[e]));
      CHECK(w <= 1e-10);

      // dropping the sign twist on the argument slot must fail
      BundleCurvatureTable plain = curvature_formula(*g, *f, cell.pt);
      double w2 = 0.0;
      for (size_t e = 0; e < lhs.r.v.size(); ++e)
        w2 = std::max(w2, std::fabs(lhs.r.v[e] - plain.r.v[e]));
      CHECK(w2 > 1e-3);
    }
  }

  TEST_CASE("structure helpers reject a non-diagonal endomorphism") {
    auto spec = catalog_manifold(ManifoldKind::sphere);
    auto g = make_metric(spec);
    auto f = make_scaling(ScalingKind::one, 2);
    CotangentPoint pt = bundle_point({1.0, 0.5}, {0.7, -0.3});
    FrameEndomorphism j = para_structure(2);
    j.m.at(1, 3) = 0.5;
    ConnectionTable lc = connection_formula(*g, *f, pt);
    CHECK_THROWS_AS(conjugate_table(lc, j), usage_error);
    CHECK_THROWS_AS(structure_parallel_defect(lc, j), usage_error);
  }
}
