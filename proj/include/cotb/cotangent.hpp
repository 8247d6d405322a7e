#pragma once

// Cotangent-bundle chart layer.  A bundle point is (x, p); the 2n natural
// coordinates are (x^1..x^n, p_1..p_n).  The adapted frame is
//
//   E_j     = d/dx^j + p_a Gamma^a_{hj} d/dp_h      (horizontal, j < n)
//   E_{j+n} = d/dp_j                                 (vertical)
//
// Frame indices run over 0..2n-1 with the horizontal block first.  Closed
// form brackets are exposed next to a first-principles oracle that computes
// the same bracket from natural-chart Jacobians; the mixed-case sign below
// is the one that oracle validates.

#include <cmath>
#include <span>
#include <vector>

#include "cotb/base_geometry.hpp"
#include "cotb/diff.hpp"
#include "cotb/errors.hpp"
#include "cotb/fields.hpp"
#include "cotb/tensor.hpp"

namespace cotb {

struct CotangentPoint {
  std::vector<double> x;
  std::vector<double> p;
};

// Components in the adapted frame: h over E_0..E_{n-1}, v over the vertical
// block.  v holds covariant slots (an E_{j+n} coefficient is a covector
// component).
struct BundleVector {
  std::vector<double> h;
  std::vector<double> v;
};

// Components over the natural chart basis (d/dx^i, d/dp_i).
struct NaturalVector {
  std::vector<double> dx;
  std::vector<double> dp;
};

struct Alpha {
  double r2 = 0.0;    // g^{ij} p_i p_j
  double value = 1.0; // 1 + r2
};

inline bool is_vertical(int a, int n) { return a >= n; }
inline int base_index(int a, int n) { return a < n ? a : a - n; }

namespace detail {

inline void check_point(const MetricField& g, const CotangentPoint& pt) {
  if (static_cast<int>(pt.x.size()) != g.dim() ||
      static_cast<int>(pt.p.size()) != g.dim())
    throw usage_error("cotangent point dimension mismatch");
}

template <class T>
T alpha_of(const Grid2<T>& ginv, const T* p) {
  const int n = ginv.n;
  T r2{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r2 += ginv.at(i, j) * p[i] * p[j];
  return 1.0 + r2;
}

// Natural components of E_a at a T-valued chart point z = (x | p).
template <class T>
std::vector<T> frame_field_nat(const MetricField& g, int a, const T* z,
                               const DiffScheme& s) {
  const int n = g.dim();
  std::vector<T> out(static_cast<size_t>(2 * n), T(0.0));
  if (a >= n) {
    out[static_cast<size_t>(n + (a - n))] = T(1.0);
    return out;
  }
  Grid3<T> gamma = christoffel_at(g, z, s);
  out[static_cast<size_t>(a)] = T(1.0);
  const T* p = z + n;
  for (int h = 0; h < n; ++h) {
    T acc{};
    for (int c = 0; c < n; ++c) acc += p[c] * gamma.at(c, h, a);
    out[static_cast<size_t>(n + h)] = acc;
  }
  return out;
}

// Natural components of the closed-form bracket [E_a, E_b] as a field; used
// by the Jacobi check, which differentiates it over the chart.
template <class T>
std::vector<T> bracket_field_nat(const MetricField& g, int a, int b,
                                 const T* z, const DiffScheme& s) {
  const int n = g.dim();
  std::vector<T> out(static_cast<size_t>(2 * n), T(0.0));
  const T* p = z + n;
  const bool av = a >= n, bv = b >= n;
  if (av && bv) return out;
  if (!av && !bv) {
    Grid4<T> r = curvature_at(g, z, s);
    for (int l = 0; l < n; ++l) {
      T acc{};
      for (int ss = 0; ss < n; ++ss) acc += p[ss] * r.at(a, b, l, ss);
      out[static_cast<size_t>(n + l)] = acc;
    }
    return out;
  }
  // mixed case: [E_i, E_{jbar}] = -Gamma^j_{il} E_{lbar}
  const int i = av ? b : a;
  const int j = av ? a - n : b - n;
  const double sign = av ? 1.0 : -1.0;
  Grid3<T> gamma = christoffel_at(g, z, s);
  for (int l = 0; l < n; ++l)
    out[static_cast<size_t>(n + l)] = sign * gamma.at(j, i, l);
  return out;
}

// jac.at(A, B) = d comp_A / d z^B for a 2n-component natural field given by
// a scalar-generic evaluator fields(z) -> vector of 2n components.
template <class F>
Grid2<double> chart_jacobian(const F& fields, const std::vector<double>& z,
                             const DiffScheme& s, int fd_tier) {
  const int m = static_cast<int>(z.size());
  Grid2<double> jac(m);
  if (s.kind == DiffKind::jets) {
    for (int bcol = 0; bcol < m; ++bcol) {
      auto zs = seed_vec(z.data(), m, bcol);
      std::vector<D1> comps = fields(zs.data());
      for (int arow = 0; arow < m; ++arow)
        jac.at(arow, bcol) = comps[static_cast<size_t>(arow)].b;
    }
    return jac;
  }
  const double h0 = fd_step(s, fd_tier);
  auto stencil = [&](int bcol, double hh) {
    std::vector<double> zp = z, zm = z;
    zp[static_cast<size_t>(bcol)] += hh;
    zm[static_cast<size_t>(bcol)] -= hh;
    std::vector<double> cp = fields(zp.data());
    std::vector<double> cm = fields(zm.data());
    std::vector<double> d(cp.size());
    for (size_t e = 0; e < d.size(); ++e) d[e] = (cp[e] - cm[e]) / (2.0 * hh);
    return d;
  };
  for (int bcol = 0; bcol < m; ++bcol) {
    std::vector<double> d = stencil(bcol, h0);
    if (s.richardson) {
      std::vector<double> df = stencil(bcol, h0 / 2.0);
      for (size_t e = 0; e < d.size(); ++e) d[e] = (4.0 * df[e] - d[e]) / 3.0;
    }
    for (int arow = 0; arow < m; ++arow)
      jac.at(arow, bcol) = d[static_cast<size_t>(arow)];
  }
  return jac;
}

inline std::vector<double> chart_coords(const CotangentPoint& pt) {
  std::vector<double> z(pt.x);
  z.insert(z.end(), pt.p.begin(), pt.p.end());
  return z;
}

}  // namespace detail

inline Alpha alpha_at(const MetricField& g, const CotangentPoint& pt) {
  detail::check_point(g, pt);
  Grid2<double> gm = detail::metric_at(g, pt.x.data());
  Grid2<double> ginv = detail::inverse_mat(gm);
  Alpha a;
  a.value = detail::alpha_of(ginv, pt.p.data());
  a.r2 = a.value - 1.0;
  return a;
}

inline BundleVector vertical_lift(std::span<const double> omega) {
  BundleVector out;
  out.h.assign(omega.size(), 0.0);
  out.v.assign(omega.begin(), omega.end());
  return out;
}

inline BundleVector horizontal_lift(std::span<const double> x_comp) {
  BundleVector out;
  out.h.assign(x_comp.begin(), x_comp.end());
  out.v.assign(x_comp.size(), 0.0);
  return out;
}

// The same lift written over the natural chart basis; the dp slots carry the
// p_a Gamma^a_{hj} X^j correction.
inline NaturalVector horizontal_lift_natural(const MetricField& g,
                                             const CotangentPoint& pt,
                                             std::span<const double> x_comp,
                                             const DiffScheme& s = {}) {
  detail::check_point(g, pt);
  const int n = g.dim();
  Grid3<double> gamma = detail::christoffel_at(g, pt.x.data(), s);
  NaturalVector out;
  out.dx.assign(x_comp.begin(), x_comp.end());
  out.dp.assign(static_cast<size_t>(n), 0.0);
  for (int h = 0; h < n; ++h)
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < n; ++j)
        out.dp[static_cast<size_t>(h)] +=
            pt.p[static_cast<size_t>(a)] * gamma.at(a, h, j) *
            x_comp[static_cast<size_t>(j)];
  return out;
}

// Liouville (canonical vertical) field: p_i E_{ibar}.
inline BundleVector liouville(const CotangentPoint& pt) {
  BundleVector out;
  out.h.assign(pt.p.size(), 0.0);
  out.v = pt.p;
  return out;
}

// Closed-form adapted-frame brackets:
//   [E_i, E_j]       = p_s R_ijl^s E_{lbar}
//   [E_i, E_{jbar}]  = -Gamma^j_{il} E_{lbar}
//   [E_{ibar}, E_{jbar}] = 0
inline BundleVector frame_bracket(const MetricField& g,
                                  const CotangentPoint& pt, int a, int b,
                                  const DiffScheme& s = {}) {
  detail::check_point(g, pt);
  const int n = g.dim();
  if (a < 0 || b < 0 || a >= 2 * n || b >= 2 * n)
    throw usage_error("frame index out of range");
  std::vector<double> z = detail::chart_coords(pt);
  std::vector<double> comps = detail::bracket_field_nat(g, a, b, z.data(), s);
  BundleVector out;
  out.h.assign(static_cast<size_t>(n), 0.0);
  out.v.assign(comps.begin() + n, comps.end());
  return out;
}

// Mixed-case sign variant (+Gamma).  Rejected by the natural-frame oracle;
// kept so reports can quote the defect of the alternate reading.
inline BundleVector frame_bracket_alt_sign(const MetricField& g,
                                           const CotangentPoint& pt, int a,
                                           int b, const DiffScheme& s = {}) {
  BundleVector out = frame_bracket(g, pt, a, b, s);
  const int n = g.dim();
  const bool av = is_vertical(a, n), bv = is_vertical(b, n);
  if (av != bv)
    for (auto& c : out.v) c = -c;
  return out;
}

// First-principles bracket: assemble [E_a, E_b] from natural-chart Jacobians
// of the two frame fields, then convert back to adapted components.
inline BundleVector frame_bracket_oracle(const MetricField& g,
                                         const CotangentPoint& pt, int a,
                                         int b, const DiffScheme& s = {}) {
  detail::check_point(g, pt);
  const int n = g.dim();
  const int m = 2 * n;
  std::vector<double> z = detail::chart_coords(pt);
  auto field_a = [&](const auto* zz) {
    return detail::frame_field_nat(g, a, zz, s);
  };
  auto field_b = [&](const auto* zz) {
    return detail::frame_field_nat(g, b, zz, s);
  };
  std::vector<double> va = field_a(z.data());
  std::vector<double> vb = field_b(z.data());
  Grid2<double> ja = detail::chart_jacobian(field_a, z, s, 1);
  Grid2<double> jb = detail::chart_jacobian(field_b, z, s, 1);
  std::vector<double> w(static_cast<size_t>(m), 0.0);
  for (int arow = 0; arow < m; ++arow)
    for (int bcol = 0; bcol < m; ++bcol)
      w[static_cast<size_t>(arow)] +=
          va[static_cast<size_t>(bcol)] * jb.at(arow, bcol) -
          vb[static_cast<size_t>(bcol)] * ja.at(arow, bcol);
  // natural -> adapted: subtract the horizontal correction from the dp part
  Grid3<double> gamma = detail::christoffel_at(g, pt.x.data(), s);
  BundleVector out;
  out.h.assign(w.begin(), w.begin() + n);
  out.v.assign(static_cast<size_t>(n), 0.0);
  for (int h = 0; h < n; ++h) {
    double corr = 0.0;
    for (int c = 0; c < n; ++c)
      for (int j = 0; j < n; ++j)
        corr += pt.p[static_cast<size_t>(c)] * gamma.at(c, h, j) *
                w[static_cast<size_t>(j)];
    out.v[static_cast<size_t>(h)] = w[static_cast<size_t>(n + h)] - corr;
  }
  return out;
}

// max natural-frame defect of the cyclic double-bracket sum over all frame
// triples; the closed-form brackets must satisfy the Jacobi identity.
inline double jacobi_defect(const MetricField& g, const CotangentPoint& pt,
                            const DiffScheme& s = {}) {
  detail::check_point(g, pt);
  const int n = g.dim();
  const int m = 2 * n;
  std::vector<double> z = detail::chart_coords(pt);

  std::vector<std::vector<double>> frame_vals(static_cast<size_t>(m));
  std::vector<Grid2<double>> frame_jacs(static_cast<size_t>(m));
  for (int a = 0; a < m; ++a) {
    auto field = [&](const auto* zz) {
      return detail::frame_field_nat(g, a, zz, s);
    };
    frame_vals[static_cast<size_t>(a)] = field(z.data());
    frame_jacs[static_cast<size_t>(a)] = detail::chart_jacobian(field, z, s, 1);
  }

  auto double_bracket = [&](int a, int b, int c) {
    // [[E_a, E_b], E_c] with the inner bracket as a chart field
    auto wfield = [&](const auto* zz) {
      return detail::bracket_field_nat(g, a, b, zz, s);
    };
    std::vector<double> w = wfield(z.data());
    Grid2<double> jw = detail::chart_jacobian(wfield, z, s, 2);
    const auto& ec = frame_vals[static_cast<size_t>(c)];
    const auto& jc = frame_jacs[static_cast<size_t>(c)];
    std::vector<double> out(static_cast<size_t>(m), 0.0);
    for (int arow = 0; arow < m; ++arow)
      for (int bcol = 0; bcol < m; ++bcol)
        out[static_cast<size_t>(arow)] +=
            w[static_cast<size_t>(bcol)] * jc.at(arow, bcol) -
            ec[static_cast<size_t>(bcol)] * jw.at(arow, bcol);
    return out;
  };

  double defect = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        std::vector<double> s1 = double_bracket(a, b, c);
        std::vector<double> s2 = double_bracket(b, c, a);
        std::vector<double> s3 = double_bracket(c, a, b);
        for (int e = 0; e < m; ++e)
          defect = std::max(defect,
                            std::fabs(s1[static_cast<size_t>(e)] +
                                      s2[static_cast<size_t>(e)] +
                                      s3[static_cast<size_t>(e)]));
      }
  return defect;
}

}  // namespace cotb
