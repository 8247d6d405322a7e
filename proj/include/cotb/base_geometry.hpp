#pragma once

// Base-manifold geometry: Levi-Civita connection and curvature of g, with
// the raised and covariant-derivative variants the bundle formulas consume.
//
// Index conventions, fixed across the library:
//   Gamma^h_ij            gamma.at(h, i, j)
//   R(d_i, d_j) d_l = R_ijl^s d_s          r.at(i, j, l, s)
//   raised.at(k, j, i, s) = g^{kt} g^{im} R_tjm^s
//   covd.at(m, i, j, l, s) = nabla_m R_ijl^s
//
// Everything is scalar-generic: T ranges over {double, D1, D2} so that the
// same code can be differentiated through by outer jet seeds.

#include <cmath>
#include <span>
#include <vector>

#include "cotb/diff.hpp"
#include "cotb/dual.hpp"
#include "cotb/errors.hpp"
#include "cotb/fields.hpp"
#include "cotb/tensor.hpp"

namespace cotb {

struct Christoffels {
  int n = 0;
  Grid3<double> gamma;
};

struct CurvatureComponents {
  int n = 0;
  Grid4<double> r;
  Grid4<double> raised;
  Grid5<double> covd;
};

namespace detail {

template <class T>
Grid2<T> metric_at(const MetricField& g, const T* x) {
  const int n = g.dim();
  Grid2<T> out(n);
  g.eval(x, out.v.data());
  for (const auto& e : out.v)
    if (!finite_all(e))
      throw numerical_domain_error("metric evaluation not finite");
  return out;
}

// Gauss-Jordan inverse with partial pivoting on the primal part.  Works for
// any scalar level; the pivot threshold guards against degenerate metrics.
template <class T>
Grid2<T> inverse_mat(Grid2<T> m) {
  const int n = m.n;
  double scale = 0.0;
  for (const auto& e : m.v) scale = std::max(scale, std::fabs(primal(e)));
  const double tiny = 1e-13 * (1.0 + scale);
  Grid2<T> inv(n);
  for (int i = 0; i < n; ++i) inv.at(i, i) = T(1.0);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::fabs(primal(m.at(c, c)));
    for (int r = c + 1; r < n; ++r) {
      double a = std::fabs(primal(m.at(r, c)));
      if (a > best) {
        best = a;
        piv = r;
      }
    }
    if (best < tiny)
      throw numerical_domain_error("degenerate matrix in inversion");
    if (piv != c)
      for (int j = 0; j < n; ++j) {
        std::swap(m.at(c, j), m.at(piv, j));
        std::swap(inv.at(c, j), inv.at(piv, j));
      }
    T d = m.at(c, c);
    for (int j = 0; j < n; ++j) {
      m.at(c, j) = m.at(c, j) / d;
      inv.at(c, j) = inv.at(c, j) / d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      T fac = m.at(r, c);
      for (int j = 0; j < n; ++j) {
        m.at(r, j) = m.at(r, j) - fac * m.at(c, j);
        inv.at(r, j) = inv.at(r, j) - fac * inv.at(c, j);
      }
    }
  }
  return inv;
}

// Cholesky success doubles as the positive-definiteness test.
inline bool cholesky_pd(const Grid2<double>& m) {
  const int n = m.n;
  Grid2<double> l(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = m.at(i, j);
      for (int k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
      if (i == j) {
        if (!(s > 0.0)) return false;
        l.at(i, i) = std::sqrt(s);
      } else {
        l.at(i, j) = s / l.at(j, j);
      }
    }
  }
  return true;
}

// Gamma^h_ij = 1/2 g^{hs} (d_i g_sj + d_j g_si - d_s g_ij)
template <class T>
Grid3<T> christoffel_at(const MetricField& g, const T* x,
                        const DiffScheme& s) {
  static_assert(dual_depth_v<T> <= 2, "christoffel depth budget exceeded");
  const int n = g.dim();
  Grid2<T> gm = metric_at(g, x);
  Grid2<T> ginv = inverse_mat(gm);
  Grid3<T> dg = metric_d1(g, x, s);
  Grid3<T> gamma(n);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        T acc{};
        for (int t = 0; t < n; ++t)
          acc += ginv.at(h, t) *
                 (dg.at(i, t, j) + dg.at(j, t, i) - dg.at(t, i, j));
        gamma.at(h, i, j) = 0.5 * acc;
        gamma.at(h, j, i) = gamma.at(h, i, j);
      }
  return gamma;
}

// dgamma.at(k, h, i, j) = d_k Gamma^h_ij
template <class T>
Grid4<T> christoffel_d1(const MetricField& g, const T* x,
                        const DiffScheme& s) {
  static_assert(dual_depth_v<T> <= 1, "christoffel_d1 depth budget exceeded");
  const int n = g.dim();
  Grid4<T> dgamma(n);
  if (s.kind == DiffKind::jets) {
    for (int k = 0; k < n; ++k) {
      auto xs = seed_vec(x, n, k);
      Grid3<Dual<T>> gj = christoffel_at(g, xs.data(), s);
      for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            dgamma.at(k, h, i, j) = gj.at(h, i, j).b;
    }
    return dgamma;
  }
  const double h0 = fd_step(s, 1);
  auto stencil = [&](int k, double hh) {
    std::vector<T> xp(x, x + n), xm(x, x + n);
    xp[static_cast<size_t>(k)] = xp[static_cast<size_t>(k)] + hh;
    xm[static_cast<size_t>(k)] = xm[static_cast<size_t>(k)] - hh;
    Grid3<T> gp = christoffel_at(g, xp.data(), s);
    Grid3<T> gm2 = christoffel_at(g, xm.data(), s);
    Grid3<T> d(n);
    for (size_t e = 0; e < d.v.size(); ++e)
      d.v[e] = (gp.v[e] - gm2.v[e]) / (2.0 * hh);
    return d;
  };
  for (int k = 0; k < n; ++k) {
    Grid3<T> d = stencil(k, h0);
    if (s.richardson) {
      Grid3<T> df = stencil(k, h0 / 2.0);
      for (size_t e = 0; e < d.v.size(); ++e)
        d.v[e] = (4.0 * df.v[e] - d.v[e]) / 3.0;
    }
    for (int hh = 0; hh < n; ++hh)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          dgamma.at(k, hh, i, j) = d.at(hh, i, j);
  }
  return dgamma;
}

// R_ijl^s = d_i Gamma^s_jl - d_j Gamma^s_il
//         + Gamma^s_ih Gamma^h_jl - Gamma^s_jh Gamma^h_il
template <class T>
Grid4<T> curvature_at(const MetricField& g, const T* x, const DiffScheme& s) {
  static_assert(dual_depth_v<T> <= 1, "curvature depth budget exceeded");
  const int n = g.dim();
  Grid3<T> gamma = christoffel_at(g, x, s);
  Grid4<T> dgamma = christoffel_d1(g, x, s);
  Grid4<T> r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int ss = 0; ss < n; ++ss) {
          T acc = dgamma.at(i, ss, j, l) - dgamma.at(j, ss, i, l);
          for (int h = 0; h < n; ++h)
            acc += gamma.at(ss, i, h) * gamma.at(h, j, l) -
                   gamma.at(ss, j, h) * gamma.at(h, i, l);
          r.at(i, j, l, ss) = acc;
        }
  return r;
}

template <class T>
Grid4<T> raise_curvature_with(const Grid2<T>& ginv, const Grid4<T>& r) {
  const int n = r.n;
  Grid4<T> raised(n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (int ss = 0; ss < n; ++ss) {
          T acc{};
          for (int t = 0; t < n; ++t)
            for (int m = 0; m < n; ++m)
              acc += ginv.at(k, t) * ginv.at(i, m) * r.at(t, j, m, ss);
          raised.at(k, j, i, ss) = acc;
        }
  return raised;
}

// nabla_m R_ijl^s = d_m R + Gamma^s_mh R_ijl^h
//                 - Gamma^h_mi R_hjl^s - Gamma^h_mj R_ihl^s - Gamma^h_ml R_ijh^s
inline Grid5<double> covd_curvature_at(const MetricField& g, const double* x,
                                       const DiffScheme& s) {
  const int n = g.dim();
  Grid3<double> gamma = christoffel_at(g, x, s);
  Grid5<double> dr(n);
  if (s.kind == DiffKind::jets) {
    for (int m = 0; m < n; ++m) {
      auto xs = seed_vec(x, n, m);
      Grid4<D1> rj = curvature_at(g, xs.data(), s);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l)
            for (int ss = 0; ss < n; ++ss)
              dr.at(m, i, j, l, ss) = rj.at(i, j, l, ss).b;
    }
  } else {
    // Curvature entries carry FD noise near 1e-7, so the outer difference
    // uses the widened tier-2 spacing.
    const double h0 = fd_step(s, 2);
    auto stencil = [&](int m, double hh) {
      std::vector<double> xp(x, x + n), xm(x, x + n);
      xp[static_cast<size_t>(m)] += hh;
      xm[static_cast<size_t>(m)] -= hh;
      Grid4<double> rp = curvature_at(g, xp.data(), s);
      Grid4<double> rm = curvature_at(g, xm.data(), s);
      Grid4<double> d(n);
      for (size_t e = 0; e < d.v.size(); ++e)
        d.v[e] = (rp.v[e] - rm.v[e]) / (2.0 * hh);
      return d;
    };
    for (int m = 0; m < n; ++m) {
      Grid4<double> d = stencil(m, h0);
      if (s.richardson) {
        Grid4<double> df = stencil(m, h0 / 2.0);
        for (size_t e = 0; e < d.v.size(); ++e)
          d.v[e] = (4.0 * df.v[e] - d.v[e]) / 3.0;
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l)
            for (int ss = 0; ss < n; ++ss)
              dr.at(m, i, j, l, ss) = d.at(i, j, l, ss);
    }
  }
  Grid4<double> r = curvature_at(g, x, s);
  Grid5<double> covd(n);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          for (int ss = 0; ss < n; ++ss) {
            double acc = dr.at(m, i, j, l, ss);
            for (int h = 0; h < n; ++h)
              acc += gamma.at(ss, m, h) * r.at(i, j, l, h) -
                     gamma.at(h, m, i) * r.at(h, j, l, ss) -
                     gamma.at(h, m, j) * r.at(i, h, l, ss) -
                     gamma.at(h, m, l) * r.at(i, j, h, ss);
            covd.at(m, i, j, l, ss) = acc;
          }
  return covd;
}

}  // namespace detail

inline Christoffels christoffel(const MetricField& g, std::span<const double> x,
                                const DiffScheme& s = {}) {
  detail::check_scheme(s);
  if (static_cast<int>(x.size()) != g.dim())
    throw usage_error("christoffel: point dimension mismatch");
  Christoffels out;
  out.n = g.dim();
  out.gamma = detail::christoffel_at(g, x.data(), s);
  return out;
}

inline Grid4<double> raise_curvature(const MetricField& g,
                                     std::span<const double> x,
                                     const Grid4<double>& r,
                                     const DiffScheme& s = {}) {
  detail::check_scheme(s);
  Grid2<double> gm = detail::metric_at(g, x.data());
  Grid2<double> ginv = detail::inverse_mat(gm);
  return detail::raise_curvature_with(ginv, r);
}

// Full curvature package: components, raised variant, covariant derivative.
inline CurvatureComponents curvature(const MetricField& g,
                                     std::span<const double> x,
                                     const DiffScheme& s = {}) {
  detail::check_scheme(s);
  if (static_cast<int>(x.size()) != g.dim())
    throw usage_error("curvature: point dimension mismatch");
  CurvatureComponents out;
  out.n = g.dim();
  out.r = detail::curvature_at(g, x.data(), s);
  Grid2<double> gm = detail::metric_at(g, x.data());
  Grid2<double> ginv = detail::inverse_mat(gm);
  out.raised = detail::raise_curvature_with(ginv, out.r);
  out.covd = detail::covd_curvature_at(g, x.data(), s);
  return out;
}

// max |R_ijl^s - K (delta^s_i g_jl - delta^s_j g_il)|; zero on a space form
// of constant curvature K.
inline double space_form_defect(const MetricField& g, std::span<const double> x,
                                double k, const DiffScheme& s = {}) {
  const int n = g.dim();
  Grid2<double> gm = detail::metric_at(g, x.data());
  Grid4<double> r = detail::curvature_at(g, x.data(), s);
  double defect = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int ss = 0; ss < n; ++ss) {
          double model = k * ((ss == i ? gm.at(j, l) : 0.0) -
                              (ss == j ? gm.at(i, l) : 0.0));
          defect = std::max(defect, std::fabs(r.at(i, j, l, ss) - model));
        }
  return defect;
}

// nabla_k g_ij assembled from an independent plain-FD derivative of g; a
// vanishing result is the metric-compatibility oracle for christoffel().
inline double metric_compat_defect(const MetricField& g,
                                   std::span<const double> x,
                                   const DiffScheme& s = {}) {
  const int n = g.dim();
  Grid3<double> gamma = detail::christoffel_at(g, x.data(), s);
  Grid2<double> gm = detail::metric_at(g, x.data());
  DiffScheme fd = fd_scheme(1e-5, true);
  Grid3<double> dg = detail::metric_d1<double>(g, x.data(), fd);
  double defect = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = dg.at(k, i, j);
        for (int h = 0; h < n; ++h)
          acc -= gamma.at(h, k, i) * gm.at(h, j) +
                 gamma.at(h, k, j) * gm.at(i, h);
        defect = std::max(defect, std::fabs(acc));
      }
  return defect;
}

inline double antisymmetry_defect(const Grid4<double>& r) {
  double d = 0.0;
  const int n = r.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int s = 0; s < n; ++s)
          d = std::max(d, std::fabs(r.at(i, j, l, s) + r.at(j, i, l, s)));
  return d;
}

inline double bianchi1_defect(const Grid4<double>& r) {
  double d = 0.0;
  const int n = r.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int s = 0; s < n; ++s)
          d = std::max(d, std::fabs(r.at(i, j, l, s) + r.at(j, l, i, s) +
                                    r.at(l, i, j, s)));
  return d;
}

inline double bianchi2_defect(const Grid5<double>& covd) {
  double d = 0.0;
  const int n = covd.n;
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          for (int s = 0; s < n; ++s)
            d = std::max(d, std::fabs(covd.at(m, i, j, l, s) +
                                      covd.at(i, j, m, l, s) +
                                      covd.at(j, m, i, l, s)));
  return d;
}

}  // namespace cotb
