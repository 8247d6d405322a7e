#include <doctest.h>

#include <cmath>
#include <vector>

#include "cotb/catalog.hpp"
#include "cotb/levi_civita.hpp"
#include "test_helpers.hpp"

using namespace cotb;
using cotb_test::bundle_point;
using cotb_test::constant_scaling;

TEST_SUITE("levi_civita") {
  TEST_CASE("scaling tensor on the flat chart with exponential scaling") {
    auto spec = catalog_manifold(ManifoldKind::flat, 2);
    auto g = make_metric(spec);
    auto f = make_scaling(ScalingKind::exp_linear, 2);  // exp(0.3 x0)
    std::vector<double> x{0.4, -0.2};
    Grid3<double> a = detail::a_tensor_at(*g, *f, x.data(), jets_scheme());

    // f_0/f = 0.3, f_1 = 0, so the nonzero entries are f_0/(2f) = 0.15
    CHECK(a.at(0, 0, 0) == doctest::Approx(0.15));   // A^0_{00}
    CHECK(a.at(0, 1, 1) == doctest::Approx(-0.15));  // A^0_{11}
    CHECK(a.at(1, 0, 1) == doctest::Approx(0.15));   // A^1_{01}
    CHECK(a.at(1, 1, 0) == doctest::Approx(0.15));
    CHECK(std::fabs(a.at(1, 1, 1)) <= 1e-14);
    CHECK(std::fabs(a.at(0, 0, 1)) <= 1e-14);
    CHECK(std::fabs(a.at(1, 0, 0)) <= 1e-14);

    // constant scaling kills the tensor entirely
    auto one = make_scaling(ScalingKind::one, 2);
    Grid3<double> a0 = detail::a_tensor_at(*g, *one, x.data(), jets_scheme());
    CHECK(max_abs(a0) <= 1e-14);
  }

  TEST_CASE("covariant derivative of the scaling tensor: schemes agree") {
    auto spec = catalog_manifold(ManifoldKind::polynomial, 2);
    auto g = make_metric(spec);
    auto f = make_scaling(ScalingKind::poly, 2);
    std::vector<double> x{0.3, 0.5};
    Grid4<double> dj = detail::a_tensor_covd(*g, *f, x.data(), jets_scheme());
    Grid4<double> df = detail::a_tensor_covd(*g, *f, x.data(), fd_scheme());
    CHECK(max_abs_diff(dj, df) <= 1e-4);
    CHECK(max_abs(dj) > 1e-2);  // nontrivial on this chart
  }

  TEST_CASE("vertical-vertical entries on the flat chart, p = (1,0)") {
    auto spec = catalog_manifold(ManifoldKind::flat, 2);
    auto g = make_metric(spec);
    auto f = make_scaling(ScalingKind::one, 2);
    ConnectionTable t = connection_formula(*g, *f, bundle_point({0.0, 0.0}, {1.0, 0.0}));
    const int n = 2;

    // nabla_{E_0bar} E_1bar along E_1bar: -(1/alpha) p^0 = -1/2
    CHECK(t.gamma.at(n + 1, n + 0, n + 1) == doctest::Approx(-0.5));
    // nabla_{E_0bar} E_0bar: -(2/alpha) p^0 d_l0 + ((alpha+1)/alpha^2) p_l
    //   + (1/alpha^2) p_l  with alpha = 2 -> component 0 vanishes
    CHECK(std::fabs(t.gamma.at(n + 0, n + 0, n + 0)) <= 1e-14);
    CHECK(std::fabs(t.gamma.at(n + 1, n + 0, n + 0)) <= 1e-14);
    // flat base, constant scaling: no horizontal parts anywhere
    for (int mu = 0; mu < 2 * n; ++mu)
      for (int c = 0; c < 2 * n; ++c)
        for (int b = 0; b < 2 * n; ++b)
          if (mu < n) CHECK(std::fabs(t.gamma.at(mu, c, b)) <= 1e-14);
  }

  TEST_CASE("sphere: vertical part of the horizontal-horizontal case") {
    auto spec = catalog_manifold(ManifoldKind::sphere);
    auto g = make_metric(spec);
    auto f = make_scaling(ScalingKind::one, 2);
    CotangentPoint pt = bundle_point({1.0, 0.5}, {0.7, -0.3});
    ConnectionTable t = connection_formula(*g, *f, pt);
    const double s1 = std::sin(1.0);
    // (1/2) p_s R_{01 l}^s
    CHECK(t.gamma.at(2, 0, 1) == doctest::Approx(0.15));
    CHECK(t.gamma.at(3, 0, 1) == doctest::Approx(0.35 * s1 * s1));
  }

  TEST_CASE("closed-form table matches the Koszul route") {
    struct Cell {
      ManifoldKind mk;
      ScalingKind sk;
      CotangentPoint pt;
    };
    const Cell cells[] = {
        {ManifoldKind::flat, ScalingKind::one, bundle_point({0.1, -0.4}, {1.2, 0.3})},
        {ManifoldKind::sphere, ScalingKind::one, bundle_point({1.0, 0.5}, {0.7, -0.3})},
        {ManifoldKind::sphere, ScalingKind::exp_linear,
         bundle_point({0.8, 1.9}, {-0.6, 1.1})},
        {ManifoldKind::hyperbolic, ScalingKind::poly,
         bundle_point({0.5, 1.4}, {0.9, 0.2})},
        {ManifoldKind::polynomial, ScalingKind::exp_linear,
         bundle_point({0.3, 0.6}, {-0.8, 0.4})},
    };
    for (const auto& cell : cells) {
      auto spec = catalog_manifold(cell.mk);
      auto g = make_metric(spec);
      auto f = make_scaling(cell.sk, spec.dim);
      ConnectionTable lhs = connection_formula(*g, *f, cell.pt);
      ConnectionTable rhs = koszul_oracle(*g, *f, cell.pt);
      CHECK(connection_tables_diff(lhs, rhs) <= 1e-6);
    }
  }

  TEST_CASE("doubling the scaling-correction prefactor breaks Koszul agreement") {
    auto spec = catalog_manifold(ManifoldKind::sphere);
    auto g = make_metric(spec);
    auto f = make_scaling(ScalingKind::exp_linear, 2);
    CotangentPoint pt = bundle_point({0.8, 1.9}, {-0.6, 1.1});
    const int n = spec.dim;

    ConnectionTable doubled = connection_formula(*g, *f, pt);
    std::vector<double> z{pt.x[0], pt.x[1], pt.p[0], pt.p[1]};
    Grid3<double> a = detail::a_tensor_at(*g, *f, z.data(), jets_scheme());
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) doubled.gamma.at(l, i, j) += a.at(l, i, j);

    ConnectionTable rhs = koszul_oracle(*g, *f, pt);
    CHECK(connection_tables_diff(doubled, rhs) > 0.05);
  }

  TEST_CASE("Koszul agreement holds under finite differences") {
    auto spec = catalog_manifold(ManifoldKind::sphere);
    auto g = make_metric(spec);
    auto f = make_scaling(ScalingKind::exp_linear, 2);
    CotangentPoint pt = bundle_point({1.2, 0.4}, {0.5, 0.6});
    ConnectionTable lhs = connection_formula(*g, *f, pt, fd_scheme());
    ConnectionTable rhs = koszul_oracle(*g, *f, pt, fd_scheme());
    CHECK(connection_tables_diff(lhs, rhs) <= 1e-4);
  }

  TEST_CASE("the table is torsion-free and metric") {
    struct Cell {
      ManifoldKind mk;
      ScalingKind sk;
      CotangentPoint pt;
    };
    const Cell cells[] = {
        {ManifoldKind::sphere, ScalingKind::exp_linear,
         bundle_point({1.0, 0.5}, {0.7, -0.3})},
        {ManifoldKind::polynomial, ScalingKind::poly,
         bundle_point({-0.3, 0.5}, {0.4, 1.0})},
    };
    for (const auto& cell : cells) {
      auto spec = catalog_manifold(cell.mk);
      auto g = make_metric(spec);
      auto f = make_scaling(cell.sk, spec.dim);
      ConnectionTable t = connection_formula(*g, *f, cell.pt);
      CHECK(table_torsion_defect(*g, *f, cell.pt, t) <= 1e-9);
      CHECK(table_compat_defect(*g, *f, cell.pt, t) <= 1e-8);
    }
  }

  TEST_CASE("scalar-generic table evaluation propagates jets") {
    auto spec = catalog_manifold(ManifoldKind::sphere);
    auto g = make_metric(spec);
    auto f = make_scaling(ScalingKind::exp_linear, 2);
    std::vector<double> z{1.0, 0.5, 0.7, -0.3};
    DiffScheme s = jets_scheme();

    // seed the p_0 slot and compare the jet against a central difference
    auto zs = detail::seed_vec(z.data(), 4, 2);
    Grid3<D1> tj = detail::connection_table_at(*g, *f, zs.data(), s);
    const double h = 1e-6;
    std::vector<double> zp = z, zm = z;
    zp[2] += h;
    zm[2] -= h;
    Grid3<double> tp = detail::connection_table_at(*g, *f, zp.data(), s);
    Grid3<double> tm = detail::connection_table_at(*g, *f, zm.data(), s);
    for (int mu = 0; mu < 4; ++mu)
      for (int c = 0; c < 4; ++c)
        for (int b = 0; b < 4; ++b) {
          double fd = (tp.at(mu, c, b) - tm.at(mu, c, b)) / (2.0 * h);
          CHECK(tj.at(mu, c, b).b == doctest::Approx(fd).epsilon(1e-5));
        }
  }

  TEST_CASE("constant-component arguments contract through the table") {
    auto spec = catalog_manifold(ManifoldKind::flat, 2);
    auto g = make_metric(spec);
    auto f = constant_scaling(2, 1.0);
    CotangentPoint pt = bundle_point({0.0, 0.0}, {1.0, 0.0});
    ConnectionTable t = connection_formula(*g, *f, pt);
    BundleVector dir = vertical_lift(std::vector<double>{1.0, 0.0});
    BundleVector arg = vertical_lift(std::vector<double>{0.0, 1.0});
    BundleVector out = apply_table(t, dir, arg);
    CHECK(out.v[1] == doctest::Approx(-0.5));
    CHECK(std::fabs(out.h[0]) <= 1e-14);
  }
}
