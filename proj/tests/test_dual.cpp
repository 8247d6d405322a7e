#include <doctest.h>

#include <cmath>

#include "cotb/dual.hpp"

using cotb::D1;
using cotb::D2;
using cotb::D3;

TEST_SUITE("dual") {
  TEST_CASE("first derivatives of elementary functions") {
    const double v = 0.7;
    D1 x{v, 1.0};

    CHECK(sin(x).b == doctest::Approx(std::cos(v)));
    CHECK(cos(x).b == doctest::Approx(-std::sin(v)));
    CHECK(exp(x).b == doctest::Approx(std::exp(v)));
    CHECK(log(x).b == doctest::Approx(1.0 / v));
    CHECK(sqrt(x).b == doctest::Approx(0.5 / std::sqrt(v)));

    // quotient and product rules
    D1 y = x * x / (1.0 + x);
    const double expect = (2.0 * v * (1.0 + v) - v * v) / ((1.0 + v) * (1.0 + v));
    CHECK(y.b == doctest::Approx(expect));
  }

  TEST_CASE("second derivative through nested duals") {
    const double v = 0.3;
    D2 x;
    x.a = D1{v, 1.0};
    x.b = D1{1.0, 0.0};
    D2 y = exp(2.0 * x);
    CHECK(y.a.a == doctest::Approx(std::exp(2.0 * v)));
    CHECK(y.a.b == doctest::Approx(2.0 * std::exp(2.0 * v)));
    CHECK(y.b.a == doctest::Approx(2.0 * std::exp(2.0 * v)));
    CHECK(y.b.b == doctest::Approx(4.0 * std::exp(2.0 * v)));
  }

  TEST_CASE("third derivative through nested duals") {
    const double v = 0.4;
    D3 x;
    x.a.a = D1{v, 1.0};
    x.a.b = D1{1.0, 0.0};
    x.b.a = D1{1.0, 0.0};
    D3 y = x * x * x * x;  // (x^4)''' = 24 x
    CHECK(y.b.b.b == doctest::Approx(24.0 * v));
  }

  TEST_CASE("mixed scalar operands and compound assignment") {
    D1 x{2.0, 1.0};
    D1 y = 3.0 * x - x / 2.0 + 1.0;
    CHECK(y.a == doctest::Approx(6.0 - 1.0 + 1.0));
    CHECK(y.b == doctest::Approx(2.5));
    y += x;
    y *= x;
    // y = (2.5x + 1 + x) * x = 3.5x^2 + x
    CHECK(y.a == doctest::Approx(3.5 * 4.0 + 2.0));
    CHECK(y.b == doctest::Approx(7.0 * 2.0 + 1.0));
  }

  TEST_CASE("primal extraction and finiteness scan") {
    D2 x;
    x.a = D1{1.5, 1.0};
    CHECK(cotb::primal(x) == doctest::Approx(1.5));
    CHECK(cotb::finite_all(x));
    x.a.a = std::numeric_limits<double>::quiet_NaN();
    CHECK(!cotb::finite_all(x));
    CHECK(cotb::dual_depth_v<double> == 0);
    CHECK(cotb::dual_depth_v<D1> == 1);
    CHECK(cotb::dual_depth_v<D3> == 3);
  }
}
