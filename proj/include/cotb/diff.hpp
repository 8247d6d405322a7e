#pragma once

// Derivative engine with two interchangeable schemes:
//
//  * jets: nested forward-mode duals, exact to rounding at every order;
//  * central finite differences with one Richardson extrapolation level.
//
// The finite-difference spacing is tiered by how noisy the differentiated
// quantity already is.  Exactly evaluated fields use step/10; quantities
// obtained through one finite-difference pass (Christoffel symbols) use the
// base step; curvature-bearing compounds, whose FD noise floor sits near
// 1e-7, widen the step by 100x so the difference quotient stays above it.
// Third derivatives under the FD scheme apply one central-difference layer
// over exact second-order jets.

#include <cmath>
#include <span>
#include <vector>

#include "cotb/dual.hpp"
#include "cotb/errors.hpp"
#include "cotb/fields.hpp"
#include "cotb/tensor.hpp"

namespace cotb {

enum class DiffKind { jets, central_fd };

struct DiffScheme {
  DiffKind kind = DiffKind::jets;
  double step = 1e-4;  // base FD spacing; order-1 stencils use step/10
  bool richardson = true;
};

inline DiffScheme jets_scheme() { return {DiffKind::jets, 1e-4, true}; }
inline DiffScheme fd_scheme(double step = 1e-4, bool richardson = true) {
  return {DiffKind::central_fd, step, richardson};
}

namespace detail {

inline void check_scheme(const DiffScheme& s) {
  if (!(s.step > 0.0)) throw usage_error("diff scheme step must be positive");
}

inline double fd_step(const DiffScheme& s, int tier) {
  switch (tier) {
    case 0:
      return s.step / 10.0;
    case 1:
      return s.step;
    default:
      return s.step * 100.0;
  }
}

template <class T>
std::vector<Dual<T>> seed_vec(const T* x, int n, int i) {
  std::vector<Dual<T>> xs(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    xs[k].a = x[k];
    xs[k].b = T(k == i ? 1.0 : 0.0);
  }
  return xs;
}

template <class T, class F>
T central1(const F& f, const T* x, int n, int i, double h) {
  std::vector<T> xp(x, x + n);
  std::vector<T> xm(x, x + n);
  xp[static_cast<size_t>(i)] = xp[static_cast<size_t>(i)] + h;
  xm[static_cast<size_t>(i)] = xm[static_cast<size_t>(i)] - h;
  return (f(xp.data()) - f(xm.data())) / (2.0 * h);
}

// First partial of a scalar-valued chart functor along coordinate i.  The
// functor must be evaluable at both T and Dual<T> argument vectors.
template <class T, class F>
T partial1(const F& f, const T* x, int n, int i, const DiffScheme& s,
           int tier) {
  if (s.kind == DiffKind::jets) {
    auto xs = seed_vec(x, n, i);
    return f(xs.data()).b;
  }
  double h = fd_step(s, tier);
  T d = central1(f, x, n, i, h);
  if (!s.richardson) return d;
  T dh2 = central1(f, x, n, i, h / 2.0);
  return (4.0 * dh2 - d) / 3.0;
}

// dg.at(k, i, j) = d_k g_ij, evaluated blockwise (one field evaluation per
// direction under jets, two per direction and Richardson level under FD).
template <class T>
Grid3<T> metric_d1(const MetricField& g, const T* x, const DiffScheme& s) {
  const int n = g.dim();
  Grid3<T> dg(n);
  if (s.kind == DiffKind::jets) {
    std::vector<Dual<T>> gv(static_cast<size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
      auto xs = seed_vec(x, n, k);
      g.eval(xs.data(), gv.data());
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          dg.at(k, i, j) = gv[static_cast<size_t>(i) * n + j].b;
    }
    return dg;
  }
  const double h = fd_step(s, 0);
  std::vector<T> gp(static_cast<size_t>(n) * n), gm(gp.size());
  std::vector<T> d(gp.size()), dfine(gp.size());
  for (int k = 0; k < n; ++k) {
    auto stencil = [&](double hh, std::vector<T>& out) {
      std::vector<T> xp(x, x + n), xm(x, x + n);
      xp[static_cast<size_t>(k)] = xp[static_cast<size_t>(k)] + hh;
      xm[static_cast<size_t>(k)] = xm[static_cast<size_t>(k)] - hh;
      g.eval(xp.data(), gp.data());
      g.eval(xm.data(), gm.data());
      for (size_t e = 0; e < out.size(); ++e)
        out[e] = (gp[e] - gm[e]) / (2.0 * hh);
    };
    stencil(h, d);
    if (s.richardson) {
      stencil(h / 2.0, dfine);
      for (size_t e = 0; e < d.size(); ++e)
        d[e] = (4.0 * dfine[e] - d[e]) / 3.0;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        dg.at(k, i, j) = d[static_cast<size_t>(i) * n + j];
  }
  return dg;
}

}  // namespace detail

// All partial derivatives of a scalar chart function up to `order` (1..3).
// Slots above the requested order stay zero-filled.
struct DerivativeBundle {
  int n = 0;
  int order = 0;
  double value = 0.0;
  std::vector<double> d1;  // [n]
  std::vector<double> d2;  // [n][n]
  std::vector<double> d3;  // [n][n][n]

  double g1(int i) const { return d1[static_cast<size_t>(i)]; }
  double g2(int i, int j) const { return d2[static_cast<size_t>(i) * n + j]; }
  double g3(int i, int j, int k) const {
    return d3[(static_cast<size_t>(i) * n + j) * n + k];
  }
};

inline DerivativeBundle derive(const ScalarField& f, std::span<const double> x,
                               int order, const DiffScheme& s = {}) {
  detail::check_scheme(s);
  const int n = f.dim();
  if (static_cast<int>(x.size()) != n)
    throw usage_error("derive: point dimension does not match field");
  if (order < 1 || order > 3) throw usage_error("derive: order must be 1..3");

  DerivativeBundle out;
  out.n = n;
  out.order = order;
  out.d1.assign(static_cast<size_t>(n), 0.0);
  out.d2.assign(static_cast<size_t>(n) * n, 0.0);
  out.d3.assign(static_cast<size_t>(n) * n * n, 0.0);
  out.value = f.eval(x.data());

  auto set2 = [&](int i, int j, double v) {
    out.d2[static_cast<size_t>(i) * n + j] = v;
    out.d2[static_cast<size_t>(j) * n + i] = v;
  };
  auto set3 = [&](int i, int j, int k, double v) {
    int p[3] = {i, j, k};
    int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                       {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (auto& pr : perms)
      out.d3[(static_cast<size_t>(p[pr[0]]) * n + p[pr[1]]) * n + p[pr[2]]] = v;
  };

  // Exact second derivative via one depth-2 jet pass, reused by both the
  // jets path and the FD third-derivative layer.
  auto jet_d2 = [&](int i, int j, const double* at) {
    std::vector<D2> xs(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k)
      xs[static_cast<size_t>(k)] =
          D2{D1{at[k], k == j ? 1.0 : 0.0}, D1{k == i ? 1.0 : 0.0, 0.0}};
    return f.eval(xs.data()).b.b;
  };

  if (s.kind == DiffKind::jets) {
    for (int i = 0; i < n; ++i) {
      auto xs = detail::seed_vec(x.data(), n, i);
      out.d1[static_cast<size_t>(i)] = f.eval(xs.data()).b;
    }
    if (order >= 2)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) set2(i, j, jet_d2(i, j, x.data()));
    if (order >= 3) {
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          for (int k = j; k < n; ++k) {
            std::vector<D3> xs(static_cast<size_t>(n));
            for (int m = 0; m < n; ++m)
              xs[static_cast<size_t>(m)] =
                  D3{D2{D1{x[static_cast<size_t>(m)], m == k ? 1.0 : 0.0},
                        D1{m == j ? 1.0 : 0.0, 0.0}},
                     D2{D1{m == i ? 1.0 : 0.0, 0.0}, D1{0.0, 0.0}}};
            set3(i, j, k, f.eval(xs.data()).b.b.b);
          }
    }
  } else {
    auto feval = [&](const auto* p) { return f.eval(p); };
    for (int i = 0; i < n; ++i)
      out.d1[static_cast<size_t>(i)] =
          detail::partial1(feval, x.data(), n, i, s, 0);
    if (order >= 2) {
      auto d2_at = [&](int i, int j, double h) {
        std::vector<double> xs(x.begin(), x.end());
        if (i == j) {
          double fc = f.eval(xs.data());
          xs[static_cast<size_t>(i)] += h;
          double fp = f.eval(xs.data());
          xs[static_cast<size_t>(i)] -= 2.0 * h;
          double fm = f.eval(xs.data());
          return (fp - 2.0 * fc + fm) / (h * h);
        }
        double acc = 0.0;
        for (int si = -1; si <= 1; si += 2)
          for (int sj = -1; sj <= 1; sj += 2) {
            std::vector<double> xx(x.begin(), x.end());
            xx[static_cast<size_t>(i)] += si * h;
            xx[static_cast<size_t>(j)] += sj * h;
            acc += si * sj * f.eval(xx.data());
          }
        return acc / (4.0 * h * h);
      };
      const double h2 = detail::fd_step(s, 1);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double v = d2_at(i, j, h2);
          if (s.richardson) v = (4.0 * d2_at(i, j, h2 / 2.0) - v) / 3.0;
          set2(i, j, v);
        }
    }
    if (order >= 3) {
      // One FD layer over exact second-order jets.
      const double h3 = detail::fd_step(s, 0);
      auto d3_at = [&](int i, int j, int k, double h) {
        std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
        xp[static_cast<size_t>(k)] += h;
        xm[static_cast<size_t>(k)] -= h;
        return (jet_d2(i, j, xp.data()) - jet_d2(i, j, xm.data())) / (2.0 * h);
      };
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double v = d3_at(i, j, k, h3);
            if (s.richardson) v = (4.0 * d3_at(i, j, k, h3 / 2.0) - v) / 3.0;
            out.d3[(static_cast<size_t>(i) * n + j) * n + k] = v;
            out.d3[(static_cast<size_t>(j) * n + i) * n + k] = v;
          }
    }
  }

  auto bad = [](double v) { return !std::isfinite(v); };
  bool broken = bad(out.value);
  for (double v : out.d1) broken = broken || bad(v);
  for (double v : out.d2) broken = broken || bad(v);
  for (double v : out.d3) broken = broken || bad(v);
  if (broken)
    throw numerical_domain_error(
        "derive: non-finite value in derivative evaluation");
  return out;
}

}  // namespace cotb
