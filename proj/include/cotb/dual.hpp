#pragma once

// Forward-mode truncated Taylor scalars ("duals").  A Dual<T> carries a value
// and the derivative along one seed direction; nesting Dual<Dual<...>> gives
// exact mixed partials up to the nesting depth.  Depth 3 is the deepest the
// library ever needs (third metric derivatives, or first derivatives of
// curvature-bearing tables over the bundle chart).

#include <cmath>
#include <cstddef>

namespace cotb {

template <class T>
struct Dual {
  T a{};  // value
  T b{};  // derivative along this level's seed

  constexpr Dual() = default;
  constexpr Dual(double value) : a(value), b() {}  // NOLINT: implicit by design
  constexpr Dual(T value, T deriv) : a(value), b(deriv) {}
};

using D0 = double;
using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

template <class T>
struct dual_depth {
  static constexpr int value = 0;
};
template <class T>
struct dual_depth<Dual<T>> {
  static constexpr int value = 1 + dual_depth<T>::value;
};
template <class T>
inline constexpr int dual_depth_v = dual_depth<T>::value;

// Underlying double value, through all nesting levels.
inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) {
  return primal(x.a);
}

inline bool finite_all(double x) { return std::isfinite(x); }
template <class T>
bool finite_all(const Dual<T>& x) {
  return finite_all(x.a) && finite_all(x.b);
}

template <class T>
Dual<T> operator+(const Dual<T>& x, const Dual<T>& y) {
  return {x.a + y.a, x.b + y.b};
}
template <class T>
Dual<T> operator-(const Dual<T>& x, const Dual<T>& y) {
  return {x.a - y.a, x.b - y.b};
}
template <class T>
Dual<T> operator-(const Dual<T>& x) {
  return {-x.a, -x.b};
}
template <class T>
Dual<T> operator*(const Dual<T>& x, const Dual<T>& y) {
  return {x.a * y.a, x.a * y.b + x.b * y.a};
}
template <class T>
Dual<T> operator/(const Dual<T>& x, const Dual<T>& y) {
  T q = x.a / y.a;
  return {q, (x.b - q * y.b) / y.a};
}

template <class T>
Dual<T> operator+(const Dual<T>& x, double c) {
  return {x.a + c, x.b};
}
template <class T>
Dual<T> operator+(double c, const Dual<T>& x) {
  return {x.a + c, x.b};
}
template <class T>
Dual<T> operator-(const Dual<T>& x, double c) {
  return {x.a - c, x.b};
}
template <class T>
Dual<T> operator-(double c, const Dual<T>& x) {
  return {c - x.a, -x.b};
}
template <class T>
Dual<T> operator*(const Dual<T>& x, double c) {
  return {x.a * c, x.b * c};
}
template <class T>
Dual<T> operator*(double c, const Dual<T>& x) {
  return {x.a * c, x.b * c};
}
template <class T>
Dual<T> operator/(const Dual<T>& x, double c) {
  return {x.a / c, x.b / c};
}
template <class T>
Dual<T> operator/(double c, const Dual<T>& x) {
  T q = c / x.a;
  return {q, (-q * x.b) / x.a};
}

template <class T>
Dual<T>& operator+=(Dual<T>& x, const Dual<T>& y) {
  x = x + y;
  return x;
}
template <class T>
Dual<T>& operator-=(Dual<T>& x, const Dual<T>& y) {
  x = x - y;
  return x;
}
template <class T>
Dual<T>& operator*=(Dual<T>& x, const Dual<T>& y) {
  x = x * y;
  return x;
}

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {sin(x.a), cos(x.a) * x.b};
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {cos(x.a), -(sin(x.a) * x.b)};
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  T e = exp(x.a);
  return {e, e * x.b};
}
template <class T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  return {log(x.a), x.b / x.a};
}
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  T s = sqrt(x.a);
  return {s, x.b / (2.0 * s)};
}

}  // namespace cotb
