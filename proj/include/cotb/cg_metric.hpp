#pragma once

// Rescaled Cheeger-Gromoll-type metric on the cotangent bundle.  In the
// adapted frame the metric is block diagonal:
//
//   G(E_i, E_j)        = f(x) g_ij            (horizontal block H)
//   G(E_ibar, E_jbar)  = (1/alpha) (g^ij + p^i p^j)   (vertical block V)
//   mixed              = 0
//
// with alpha = 1 + r^2, r^2 = g^{ij} p_i p_j, p^i = g^{it} p_t, and f a
// positive scaling of the base metric.  The templated block builder keeps
// every quantity scalar-generic so chart derivatives of metric entries can
// be taken with dual numbers.

#include <cmath>
#include <vector>

#include "cotb/base_geometry.hpp"
#include "cotb/cotangent.hpp"
#include "cotb/diff.hpp"
#include "cotb/errors.hpp"
#include "cotb/fields.hpp"
#include "cotb/tensor.hpp"

namespace cotb {
namespace detail {

template <class T>
struct BlockMetricT {
  int n = 0;
  T f{};
  T alpha{};
  Grid2<T> g{0}, ginv{0};
  std::vector<T> p_up;
  Grid2<T> H{0}, V{0};
};

// z points at 2n chart values (x | p).
template <class T>
BlockMetricT<T> cg_blocks_at(const MetricField& gf, const ScalarField& sf,
                             const T* z) {
  const int n = gf.dim();
  const T* x = z;
  const T* p = z + n;
  BlockMetricT<T> out;
  out.n = n;
  out.g = metric_at(gf, x);
  out.ginv = inverse_mat(out.g);
  out.f = sf.eval(x);
  if (!finite_all(out.f) || !(primal(out.f) > 0.0))
    throw numerical_domain_error("scaling must be positive");
  out.p_up.assign(static_cast<size_t>(n), T(0.0));
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < n; ++t)
      out.p_up[static_cast<size_t>(i)] += out.ginv.at(i, t) * p[t];
  T r2{};
  for (int i = 0; i < n; ++i) r2 += out.p_up[static_cast<size_t>(i)] * p[i];
  out.alpha = 1.0 + r2;
  out.H = Grid2<T>(n);
  out.V = Grid2<T>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.H.at(i, j) = out.f * out.g.at(i, j);
      out.V.at(i, j) = (out.ginv.at(i, j) + out.p_up[static_cast<size_t>(i)] *
                                                out.p_up[static_cast<size_t>(j)]) /
                       out.alpha;
    }
  return out;
}

// Frame-index metric entry; horizontal block first.
template <class T>
T frame_metric_entry(const BlockMetricT<T>& b, int a, int c) {
  const int n = b.n;
  const bool av = a >= n, cv = c >= n;
  if (av != cv) return T(0.0);
  if (!av) return b.H.at(a, c);
  return b.V.at(a - n, c - n);
}

}  // namespace detail

struct BundleMetricValue {
  int n = 0;
  double f = 1.0;
  Alpha alpha;
  Grid2<double> base_g{0}, base_ginv{0};
  std::vector<double> p_up;
  Grid2<double> H{0}, V{0};
  Grid2<double> Hinv{0}, Vinv{0};

  // Dense 2n x 2n matrix over the adapted frame, horizontal block first.
  Grid2<double> dense() const {
    Grid2<double> out(2 * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out.at(i, j) = H.at(i, j);
        out.at(n + i, n + j) = V.at(i, j);
      }
    return out;
  }
  Grid2<double> dense_inverse() const {
    Grid2<double> out(2 * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out.at(i, j) = Hinv.at(i, j);
        out.at(n + i, n + j) = Vinv.at(i, j);
      }
    return out;
  }
};

inline BundleMetricValue cg_metric_at(const MetricField& g,
                                      const ScalarField& f,
                                      const CotangentPoint& pt) {
  detail::check_point(g, pt);
  std::vector<double> z = detail::chart_coords(pt);
  detail::BlockMetricT<double> b = detail::cg_blocks_at(g, f, z.data());
  BundleMetricValue out;
  out.n = b.n;
  out.f = b.f;
  out.alpha.value = b.alpha;
  out.alpha.r2 = b.alpha - 1.0;
  out.base_g = b.g;
  out.base_ginv = b.ginv;
  out.p_up = b.p_up;
  out.H = b.H;
  out.V = b.V;
  out.Hinv = detail::inverse_mat(b.H);
  out.Vinv = detail::inverse_mat(b.V);

  // conditioning guard on the dense pair
  Grid2<double> G = out.dense();
  Grid2<double> Gi = out.dense_inverse();
  const int m = 2 * out.n;
  auto inf_norm = [m](const Grid2<double>& a) {
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
      double row = 0.0;
      for (int j = 0; j < m; ++j) row += std::fabs(a.at(i, j));
      best = std::max(best, row);
    }
    return best;
  };
  const double cond = inf_norm(G) * inf_norm(Gi);
  if (!std::isfinite(cond) || cond > 1e12)
    throw numerical_domain_error("bundle metric ill-conditioned at sample");
  double resid = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double acc = (i == j) ? -1.0 : 0.0;
      for (int k = 0; k < m; ++k) acc += G.at(i, k) * Gi.at(k, j);
      resid = std::max(resid, std::fabs(acc));
    }
  if (resid > 1e-7 * (1.0 + cond))
    throw numerical_domain_error("bundle metric inverse residual too large");
  return out;
}

inline bool positive_definite(const BundleMetricValue& v) {
  return detail::cholesky_pd(v.H) && detail::cholesky_pd(v.V);
}

// G evaluated on two adapted-frame vectors.
inline double cg_pair(const BundleMetricValue& v, const BundleVector& a,
                      const BundleVector& b) {
  double acc = 0.0;
  for (int i = 0; i < v.n; ++i)
    for (int j = 0; j < v.n; ++j) {
      acc += v.H.at(i, j) * a.h[static_cast<size_t>(i)] *
             b.h[static_cast<size_t>(j)];
      acc += v.V.at(i, j) * a.v[static_cast<size_t>(i)] *
             b.v[static_cast<size_t>(j)];
    }
  return acc;
}

// Squared length of the canonical vertical field; identically r^2 for this
// metric, which tests pin down.
inline double liouville_norm2(const MetricField& g, const ScalarField& f,
                              const CotangentPoint& pt) {
  BundleMetricValue v = cg_metric_at(g, f, pt);
  BundleVector lv = liouville(pt);
  return cg_pair(v, lv, lv);
}

}  // namespace cotb
