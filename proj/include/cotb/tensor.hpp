#pragma once

// Dense rank-2..5 component grids over a small square index range (chart
// dimension <= 4, bundle frame dimension <= 8).  Flat storage, row-major.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace cotb {

template <class T>
struct Grid2 {
  int n = 0;
  std::vector<T> v;
  Grid2() = default;
  explicit Grid2(int dim) : n(dim), v(static_cast<size_t>(dim) * dim) {}
  T& at(int i, int j) { return v[static_cast<size_t>(i) * n + j]; }
  const T& at(int i, int j) const { return v[static_cast<size_t>(i) * n + j]; }
};

template <class T>
struct Grid3 {
  int n = 0;
  std::vector<T> v;
  Grid3() = default;
  explicit Grid3(int dim) : n(dim), v(static_cast<size_t>(dim) * dim * dim) {}
  T& at(int i, int j, int k) {
    return v[(static_cast<size_t>(i) * n + j) * n + k];
  }
  const T& at(int i, int j, int k) const {
    return v[(static_cast<size_t>(i) * n + j) * n + k];
  }
};

template <class T>
struct Grid4 {
  int n = 0;
  std::vector<T> v;
  Grid4() = default;
  explicit Grid4(int dim)
      : n(dim), v(static_cast<size_t>(dim) * dim * dim * dim) {}
  T& at(int i, int j, int k, int l) {
    return v[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
  }
  const T& at(int i, int j, int k, int l) const {
    return v[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
  }
};

template <class T>
struct Grid5 {
  int n = 0;
  std::vector<T> v;
  Grid5() = default;
  explicit Grid5(int dim)
      : n(dim), v(static_cast<size_t>(dim) * dim * dim * dim * dim) {}
  T& at(int i, int j, int k, int l, int m) {
    return v[(((static_cast<size_t>(i) * n + j) * n + k) * n + l) * n + m];
  }
  const T& at(int i, int j, int k, int l, int m) const {
    return v[(((static_cast<size_t>(i) * n + j) * n + k) * n + l) * n + m];
  }
};

template <class G>
double max_abs(const G& g) {
  double m = 0.0;
  for (const auto& x : g.v) m = std::max(m, std::fabs(x));
  return m;
}

template <class G>
double max_abs_diff(const G& a, const G& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.v.size(); ++i)
    m = std::max(m, std::fabs(a.v[i] - b.v[i]));
  return m;
}

}  // namespace cotb
