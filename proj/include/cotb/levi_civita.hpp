#pragma once

// Levi-Civita connection of the rescaled bundle metric, stored as an
// adapted-frame table
//
//   gamma.at(mu, c, b) = coefficient of E_mu in  nabla_{E_c} E_b,
//
// frame indices 0..2n-1, horizontal block first.  Two independent routes
// produce the table:
//
//  * connection_formula: the closed-form four-case table (base Christoffels,
//    the scaling tensor A, and curvature contractions);
//  * koszul_oracle: the Koszul formula evaluated from metric entries and
//    frame brackets alone, with frame-directional derivatives taken over
//    the chart.
//
// The scaling tensor is A^h_{ji} = (f_j d^h_i + f_i d^h_j - f^h g_ji) / f
// with f_j the chart gradient of the scaling and f^h its raised version.

#include <cmath>
#include <vector>

#include "cotb/base_geometry.hpp"
#include "cotb/cg_metric.hpp"
#include "cotb/cotangent.hpp"
#include "cotb/diff.hpp"
#include "cotb/errors.hpp"
#include "cotb/fields.hpp"
#include "cotb/tensor.hpp"

namespace cotb {

struct ConnectionTable {
  int n = 0;             // base dimension; the table spans 2n frame indices
  Grid3<double> gamma{0};
};

namespace detail {

// value and chart gradient of a scalar field at a T-valued base point
template <class T>
void scalar_jet1(const ScalarField& f, const T* x, int n, const DiffScheme& s,
                 T& value, std::vector<T>& grad) {
  value = f.eval(x);
  grad.assign(static_cast<size_t>(n), T(0.0));
  auto call = [&](const auto* xs) { return f.eval(xs); };
  for (int k = 0; k < n; ++k)
    grad[static_cast<size_t>(k)] = partial1(call, x, n, k, s, 0);
  if (!finite_all(value)) throw numerical_domain_error("scaling not finite");
}

// a.at(h, j, i) = A^h_{ji} = (f_j d^h_i + f_i d^h_j - f^h g_{ji}) / (2f);
// symmetric in (j, i).  The 1/(2f) prefactor is the standard conformal
// correction; the doubled reading (1/f) fails the Koszul cross-check.
template <class T>
Grid3<T> a_tensor_at(const MetricField& g, const ScalarField& f, const T* x,
                     const DiffScheme& s) {
  const int n = g.dim();
  Grid2<T> gm = metric_at(g, x);
  Grid2<T> ginv = inverse_mat(gm);
  T fv;
  std::vector<T> df;
  scalar_jet1(f, x, n, s, fv, df);
  std::vector<T> df_up(static_cast<size_t>(n), T(0.0));
  for (int h = 0; h < n; ++h)
    for (int t = 0; t < n; ++t)
      df_up[static_cast<size_t>(h)] += ginv.at(h, t) * df[static_cast<size_t>(t)];
  Grid3<T> a(n);
  for (int h = 0; h < n; ++h)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        T acc = df[static_cast<size_t>(j)] * T(h == i ? 1.0 : 0.0) +
                df[static_cast<size_t>(i)] * T(h == j ? 1.0 : 0.0) -
                df_up[static_cast<size_t>(h)] * gm.at(j, i);
        a.at(h, j, i) = acc / (T(2.0) * fv);
      }
  return a;
}

// nabla_l A^m_{ij} = d_l A + Gamma^m_lh A^h_ij - Gamma^h_li A^m_hj
//                  - Gamma^h_lj A^m_ih
inline Grid4<double> a_tensor_covd(const MetricField& g, const ScalarField& f,
                                   const double* x, const DiffScheme& s) {
  const int n = g.dim();
  Grid3<double> gamma = christoffel_at(g, x, s);
  Grid3<double> a = a_tensor_at(g, f, x, s);
  Grid4<double> da(n);  // da.at(l, h, j, i) = d_l A^h_{ji}
  if (s.kind == DiffKind::jets) {
    for (int l = 0; l < n; ++l) {
      auto xs = seed_vec(x, n, l);
      Grid3<D1> aj = a_tensor_at(g, f, xs.data(), s);
      for (int h = 0; h < n; ++h)
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) da.at(l, h, j, i) = aj.at(h, j, i).b;
    }
  } else {
    const double h0 = fd_step(s, 1);
    auto stencil = [&](int l, double hh) {
      std::vector<double> xp(x, x + n), xm(x, x + n);
      xp[static_cast<size_t>(l)] += hh;
      xm[static_cast<size_t>(l)] -= hh;
      Grid3<double> ap = a_tensor_at(g, f, xp.data(), s);
      Grid3<double> am = a_tensor_at(g, f, xm.data(), s);
      Grid3<double> d(n);
      for (size_t e = 0; e < d.v.size(); ++e)
        d.v[e] = (ap.v[e] - am.v[e]) / (2.0 * hh);
      return d;
    };
    for (int l = 0; l < n; ++l) {
      Grid3<double> d = stencil(l, h0);
      if (s.richardson) {
        Grid3<double> df = stencil(l, h0 / 2.0);
        for (size_t e = 0; e < d.v.size(); ++e)
          d.v[e] = (4.0 * df.v[e] - d.v[e]) / 3.0;
      }
      for (int h = 0; h < n; ++h)
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) da.at(l, h, j, i) = d.at(h, j, i);
    }
  }
  Grid4<double> out(n);
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double acc = da.at(l, m, i, j);
          for (int h = 0; h < n; ++h)
            acc += gamma.at(m, l, h) * a.at(h, i, j) -
                   gamma.at(h, l, i) * a.at(m, h, j) -
                   gamma.at(h, l, j) * a.at(m, i, h);
          out.at(l, m, i, j) = acc;
        }
  return out;
}

// Closed-form table at a T-valued chart point z = (x | p).
template <class T>
Grid3<T> connection_table_at(const MetricField& g, const ScalarField& f,
                             const T* z, const DiffScheme& s) {
  static_assert(dual_depth_v<T> <= 1, "connection table depth budget");
  const int n = g.dim();
  const T* p = z + n;
  BlockMetricT<T> b = cg_blocks_at(g, f, z);
  Grid3<T> gb = christoffel_at(g, z, s);
  Grid4<T> r = curvature_at(g, z, s);
  Grid4<T> rr = raise_curvature_with(b.ginv, r);
  Grid3<T> a = a_tensor_at(g, f, z, s);

  const T inv2fa = 1.0 / (2.0 * b.f * b.alpha);
  const T inv_a = 1.0 / b.alpha;
  const T inv_a2 = inv_a * inv_a;
  Grid3<T> t(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // nabla_{E_i} E_j
      for (int l = 0; l < n; ++l) {
        t.at(l, i, j) = gb.at(l, i, j) + a.at(l, i, j);
        T acc{};
        for (int ss = 0; ss < n; ++ss) acc += p[ss] * r.at(i, j, l, ss);
        t.at(n + l, i, j) = 0.5 * acc;
      }
      // nabla_{E_i} E_jbar
      for (int l = 0; l < n; ++l) {
        T acc{};
        for (int ss = 0; ss < n; ++ss) acc += p[ss] * rr.at(l, i, j, ss);
        t.at(l, i, n + j) = inv2fa * acc;
        t.at(n + l, i, n + j) = -gb.at(j, i, l);
      }
      // nabla_{E_ibar} E_j
      for (int l = 0; l < n; ++l) {
        T acc{};
        for (int ss = 0; ss < n; ++ss) acc += p[ss] * rr.at(l, j, i, ss);
        t.at(l, n + i, j) = inv2fa * acc;
        t.at(n + l, n + i, j) = T(0.0);
      }
      // nabla_{E_ibar} E_jbar
      const T pi = b.p_up[static_cast<size_t>(i)];
      const T pj = b.p_up[static_cast<size_t>(j)];
      for (int l = 0; l < n; ++l) {
        t.at(l, n + i, n + j) = T(0.0);
        T acc = -inv_a * (pi * T(j == l ? 1.0 : 0.0) +
                          pj * T(i == l ? 1.0 : 0.0));
        acc += (b.alpha + 1.0) * inv_a2 * b.ginv.at(i, j) * p[l];
        acc += inv_a2 * pi * pj * p[l];
        t.at(n + l, n + i, n + j) = acc;
      }
    }
  return t;
}

// E_c-directional derivatives of every frame metric entry:
// out.at(c, b, d) = E_c(G_bd).  Chart gradients of the entries are taken
// first, then contracted with the natural components of E_c.
inline Grid3<double> frame_metric_d1(const MetricField& g,
                                     const ScalarField& f,
                                     const std::vector<double>& z,
                                     const DiffScheme& s) {
  const int n = g.dim();
  const int m = 2 * n;
  Grid3<double> dg(m);  // chart partials: dg.at(B, b, d) = d_B G_bd
  if (s.kind == DiffKind::jets) {
    for (int bdir = 0; bdir < m; ++bdir) {
      auto zs = seed_vec(z.data(), m, bdir);
      BlockMetricT<D1> blk = cg_blocks_at(g, f, zs.data());
      for (int bb = 0; bb < m; ++bb)
        for (int dd = 0; dd < m; ++dd)
          dg.at(bdir, bb, dd) = frame_metric_entry(blk, bb, dd).b;
    }
  } else {
    const double h0 = fd_step(s, 0);
    auto stencil = [&](int bdir, double hh) {
      std::vector<double> zp = z, zm = z;
      zp[static_cast<size_t>(bdir)] += hh;
      zm[static_cast<size_t>(bdir)] -= hh;
      BlockMetricT<double> bp = cg_blocks_at(g, f, zp.data());
      BlockMetricT<double> bm = cg_blocks_at(g, f, zm.data());
      Grid2<double> d(m);
      for (int bb = 0; bb < m; ++bb)
        for (int dd = 0; dd < m; ++dd)
          d.at(bb, dd) = (frame_metric_entry(bp, bb, dd) -
                          frame_metric_entry(bm, bb, dd)) /
                         (2.0 * hh);
      return d;
    };
    for (int bdir = 0; bdir < m; ++bdir) {
      Grid2<double> d = stencil(bdir, h0);
      if (s.richardson) {
        Grid2<double> df = stencil(bdir, h0 / 2.0);
        for (size_t e = 0; e < d.v.size(); ++e)
          d.v[e] = (4.0 * df.v[e] - d.v[e]) / 3.0;
      }
      for (int bb = 0; bb < m; ++bb)
        for (int dd = 0; dd < m; ++dd) dg.at(bdir, bb, dd) = d.at(bb, dd);
    }
  }
  // contract with frame fields
  Grid3<double> out(m);
  for (int c = 0; c < m; ++c) {
    std::vector<double> ec = frame_field_nat(g, c, z.data(), s);
    for (int bb = 0; bb < m; ++bb)
      for (int dd = 0; dd < m; ++dd) {
        double acc = 0.0;
        for (int bdir = 0; bdir < m; ++bdir)
          acc += ec[static_cast<size_t>(bdir)] * dg.at(bdir, bb, dd);
        out.at(c, bb, dd) = acc;
      }
  }
  return out;
}

}  // namespace detail

inline ConnectionTable connection_formula(const MetricField& g,
                                          const ScalarField& f,
                                          const CotangentPoint& pt,
                                          const DiffScheme& s = {}) {
  detail::check_point(g, pt);
  std::vector<double> z = detail::chart_coords(pt);
  ConnectionTable t;
  t.n = g.dim();
  t.gamma = detail::connection_table_at(g, f, z.data(), s);
  return t;
}

// Koszul route:
//   2 G(nabla_{E_c} E_b, E_d) = E_c(G_bd) + E_b(G_dc) - E_d(G_cb)
//     - G(E_c, [E_b, E_d]) + G(E_b, [E_d, E_c]) + G(E_d, [E_c, E_b]).
// Frame brackets use the closed form, which is validated independently
// against chart Jacobians of the frame fields.
inline ConnectionTable koszul_oracle(const MetricField& g,
                                     const ScalarField& f,
                                     const CotangentPoint& pt,
                                     const DiffScheme& s = {}) {
  detail::check_point(g, pt);
  const int n = g.dim();
  const int m = 2 * n;
  std::vector<double> z = detail::chart_coords(pt);
  BundleMetricValue gv = cg_metric_at(g, f, pt);
  Grid2<double> G = gv.dense();
  Grid2<double> Gi = gv.dense_inverse();
  Grid3<double> eg = detail::frame_metric_d1(g, f, z, s);

  // brackets for all ordered pairs, as dense frame components
  std::vector<std::vector<double>> br(static_cast<size_t>(m) * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      BundleVector w = frame_bracket(g, pt, a, b, s);
      std::vector<double> comp(static_cast<size_t>(m), 0.0);
      for (int l = 0; l < n; ++l) {
        comp[static_cast<size_t>(l)] = w.h[static_cast<size_t>(l)];
        comp[static_cast<size_t>(n + l)] = w.v[static_cast<size_t>(l)];
      }
      br[static_cast<size_t>(a) * m + b] = std::move(comp);
    }
  auto g_vec = [&](int a, const std::vector<double>& w) {
    double acc = 0.0;
    for (int e = 0; e < m; ++e) acc += G.at(a, e) * w[static_cast<size_t>(e)];
    return acc;
  };

  ConnectionTable t;
  t.n = n;
  t.gamma = Grid3<double>(m);
  for (int c = 0; c < m; ++c)
    for (int b = 0; b < m; ++b) {
      std::vector<double> k(static_cast<size_t>(m), 0.0);
      for (int d = 0; d < m; ++d) {
        double acc = eg.at(c, b, d) + eg.at(b, d, c) - eg.at(d, c, b);
        acc -= g_vec(c, br[static_cast<size_t>(b) * m + d]);
        acc += g_vec(b, br[static_cast<size_t>(d) * m + c]);
        acc += g_vec(d, br[static_cast<size_t>(c) * m + b]);
        k[static_cast<size_t>(d)] = acc;
      }
      for (int mu = 0; mu < m; ++mu) {
        double acc = 0.0;
        for (int d = 0; d < m; ++d)
          acc += Gi.at(mu, d) * k[static_cast<size_t>(d)];
        t.gamma.at(mu, c, b) = 0.5 * acc;
      }
    }
  return t;
}

inline double connection_tables_diff(const ConnectionTable& a,
                                     const ConnectionTable& b) {
  if (a.n != b.n) throw usage_error("table dimension mismatch");
  return max_abs_diff(a.gamma, b.gamma);
}

// nabla_U W for constant adapted-frame components.
inline BundleVector apply_table(const ConnectionTable& t,
                                const BundleVector& dir,
                                const BundleVector& arg) {
  const int n = t.n;
  const int m = 2 * n;
  auto comp = [n](const BundleVector& v, int a) {
    return a < n ? v.h[static_cast<size_t>(a)] : v.v[static_cast<size_t>(a - n)];
  };
  BundleVector out;
  out.h.assign(static_cast<size_t>(n), 0.0);
  out.v.assign(static_cast<size_t>(n), 0.0);
  for (int mu = 0; mu < m; ++mu) {
    double acc = 0.0;
    for (int c = 0; c < m; ++c)
      for (int b = 0; b < m; ++b)
        acc += t.gamma.at(mu, c, b) * comp(dir, c) * comp(arg, b);
    if (mu < n)
      out.h[static_cast<size_t>(mu)] = acc;
    else
      out.v[static_cast<size_t>(mu - n)] = acc;
  }
  return out;
}

// Torsion defect of a table against the validated frame brackets:
// T^mu_{cb} = gamma^mu_{cb} - gamma^mu_{bc} - C^mu_{cb}.
inline double table_torsion_defect(const MetricField& g, const ScalarField& f,
                                   const CotangentPoint& pt,
                                   const ConnectionTable& t,
                                   const DiffScheme& s = {}) {
  (void)f;
  const int n = t.n;
  const int m = 2 * n;
  double defect = 0.0;
  for (int c = 0; c < m; ++c)
    for (int b = 0; b < m; ++b) {
      BundleVector w = frame_bracket(g, pt, c, b, s);
      for (int mu = 0; mu < m; ++mu) {
        double cmu = mu < n ? w.h[static_cast<size_t>(mu)]
                            : w.v[static_cast<size_t>(mu - n)];
        double val = t.gamma.at(mu, c, b) - t.gamma.at(mu, b, c) - cmu;
        defect = std::max(defect, std::fabs(val));
      }
    }
  return defect;
}

// Metric-compatibility defect of a table:
// E_c(G_bd) - gamma^mu_{cb} G_mud - gamma^mu_{cd} G_bmu.
inline double table_compat_defect(const MetricField& g, const ScalarField& f,
                                  const CotangentPoint& pt,
                                  const ConnectionTable& t,
                                  const DiffScheme& s = {}) {
  const int n = t.n;
  const int m = 2 * n;
  std::vector<double> z = detail::chart_coords(pt);
  BundleMetricValue gv = cg_metric_at(g, f, pt);
  Grid2<double> G = gv.dense();
  Grid3<double> eg = detail::frame_metric_d1(g, f, z, s);
  double defect = 0.0;
  for (int c = 0; c < m; ++c)
    for (int b = 0; b < m; ++b)
      for (int d = 0; d < m; ++d) {
        double acc = eg.at(c, b, d);
        for (int mu = 0; mu < m; ++mu)
          acc -= t.gamma.at(mu, c, b) * G.at(mu, d) +
                 t.gamma.at(mu, c, d) * G.at(b, mu);
        defect = std::max(defect, std::fabs(acc));
      }
  return defect;
}

}  // namespace cotb
