#pragma once

// Product-type structures on the bundle and their interaction with the
// metric:
//
//  * frame-diagonal endomorphisms (the para-structure J = diag(-1 on the
//    horizontal block, +1 on the vertical one) and the diagonal identity
//    lift diag(+1, -1));
//  * purity of the metric under such a structure;
//  * the twist operator
//      Phi(X, Y, Z) = (MX)(G(Y,Z)) - X(G(MY,Z))
//                   + G((L_Y M)X, Z) + G(Y, (L_Z M)X)
//    evaluated honestly over the chart for frame-constant M, next to its
//    closed form (nonzero only on the two mixed slot patterns, where it
//    contracts the base curvature);
//  * the product-preserving connection (no block-mixing entries), built both
//    from its closed-form cases and from the Levi-Civita table plus a
//    structure potential, with its torsion forms;
//  * the structure-conjugate connection gamma^mu_{cb} -> eps_b eps_mu
//    gamma^mu_{cb} and the induced curvature relation.

#include <cmath>
#include <vector>

#include "cotb/base_geometry.hpp"
#include "cotb/cg_metric.hpp"
#include "cotb/cotangent.hpp"
#include "cotb/curvature_bundle.hpp"
#include "cotb/diff.hpp"
#include "cotb/errors.hpp"
#include "cotb/fields.hpp"
#include "cotb/levi_civita.hpp"
#include "cotb/tensor.hpp"

namespace cotb {

struct FrameEndomorphism {
  int n = 0;            // base dimension; matrix spans 2n frame indices
  Grid2<double> m{0};   // (M E_b) = m.at(a, b) E_a
};

inline FrameEndomorphism para_structure(int n) {
  FrameEndomorphism j;
  j.n = n;
  j.m = Grid2<double>(2 * n);
  for (int i = 0; i < n; ++i) {
    j.m.at(i, i) = -1.0;
    j.m.at(n + i, n + i) = 1.0;
  }
  return j;
}

inline FrameEndomorphism diagonal_lift_structure(int n) {
  FrameEndomorphism j;
  j.n = n;
  j.m = Grid2<double>(2 * n);
  for (int i = 0; i < n; ++i) {
    j.m.at(i, i) = 1.0;
    j.m.at(n + i, n + i) = -1.0;
  }
  return j;
}

namespace detail {

inline double diag_eps(const FrameEndomorphism& j, int a) {
  const int m = 2 * j.n;
  for (int b = 0; b < m; ++b)
    if (b != a && j.m.at(a, b) != 0.0)
      throw usage_error("structure is not frame-diagonal");
  return j.m.at(a, a);
}

}  // namespace detail

// max |G(M E_a, E_b) - G(E_a, M E_b)|; exactly zero for a pure metric.
inline double purity_defect(const BundleMetricValue& gv,
                            const FrameEndomorphism& j) {
  const int m = 2 * gv.n;
  Grid2<double> G = gv.dense();
  double defect = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double acc = 0.0;
      for (int e = 0; e < m; ++e)
        acc += j.m.at(e, a) * G.at(e, b) - j.m.at(e, b) * G.at(a, e);
      defect = std::max(defect, std::fabs(acc));
    }
  return defect;
}

// Honest twist operator for frame-constant M; out.at(a, b, c) = Phi(E_a,
// E_b, E_c).  Lie derivatives reduce to frame brackets because the
// components of M are constant over the chart.
inline Grid3<double> phi_operator(const MetricField& g, const ScalarField& f,
                                  const CotangentPoint& pt,
                                  const FrameEndomorphism& j,
                                  const DiffScheme& s = {}) {
  detail::check_point(g, pt);
  const int n = g.dim();
  const int m = 2 * n;
  std::vector<double> z = detail::chart_coords(pt);
  BundleMetricValue gv = cg_metric_at(g, f, pt);
  Grid2<double> G = gv.dense();
  Grid3<double> eg = detail::frame_metric_d1(g, f, z, s);

  Grid3<double> cc(m);  // bracket coefficients C^a_{cb}
  for (int c = 0; c < m; ++c)
    for (int b = 0; b < m; ++b) {
      BundleVector w = frame_bracket(g, pt, c, b, s);
      for (int a = 0; a < m; ++a)
        cc.at(a, c, b) = a < n ? w.h[static_cast<size_t>(a)]
                               : w.v[static_cast<size_t>(a - n)];
    }

  // [(L_{E_b} M) E_a]^mu = sum_e M^e_a C^mu_{be} - sum_d C^d_{ba} M^mu_d
  auto lie_m = [&](int b, int a, int mu) {
    double acc = 0.0;
    for (int e = 0; e < m; ++e)
      acc += j.m.at(e, a) * cc.at(mu, b, e) - cc.at(e, b, a) * j.m.at(mu, e);
    return acc;
  };

  Grid3<double> out(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        double acc = 0.0;
        for (int e = 0; e < m; ++e)
          acc += j.m.at(e, a) * eg.at(e, b, c) - j.m.at(e, b) * eg.at(a, e, c);
        for (int mu = 0; mu < m; ++mu)
          acc += lie_m(b, a, mu) * G.at(mu, c) + G.at(b, mu) * lie_m(c, a, mu);
        out.at(a, b, c) = acc;
      }
  return out;
}

// Closed form of the twist operator for the para-structure: only the two
// mixed slot patterns survive and carry the base curvature,
//   Phi(E_i, E_{jbar}, E_k) = 2 V^{jl} p_s R_ikl^s,
//   Phi(E_i, E_j, E_{kbar}) = 2 V^{kl} p_s R_ijl^s,
// everything else vanishes.
inline Grid3<double> phi_closed_form(const MetricField& g,
                                     const ScalarField& f,
                                     const CotangentPoint& pt,
                                     const DiffScheme& s = {}) {
  detail::check_point(g, pt);
  const int n = g.dim();
  const int m = 2 * n;
  BundleMetricValue gv = cg_metric_at(g, f, pt);
  Grid4<double> r = detail::curvature_at(g, pt.x.data(), s);
  Grid3<double> out(m);
  auto pr = [&](int i, int k, int l) {
    double acc = 0.0;
    for (int ss = 0; ss < n; ++ss)
      acc += pt.p[static_cast<size_t>(ss)] * r.at(i, k, l, ss);
    return acc;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l) acc += gv.V.at(j, l) * pr(i, k, l);
        out.at(i, n + j, k) = 2.0 * acc;
        double acc2 = 0.0;
        for (int l = 0; l < n; ++l) acc2 += gv.V.at(k, l) * pr(i, j, l);
        out.at(i, j, n + k) = 2.0 * acc2;
      }
  return out;
}

inline double cyclic_sum_defect(const Grid3<double>& phi) {
  const int m = phi.n;
  double defect = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        defect = std::max(defect, std::fabs(phi.at(a, b, c) + phi.at(b, c, a) +
                                            phi.at(c, a, b)));
  return defect;
}

// Cyclic sum of G((nabla_{E_a} M) E_b, E_c) over (a, b, c), for a table and
// a frame-diagonal structure; the component reduction is
// (eps_b - eps_mu) gamma^mu_{ab}.
inline double nabla_structure_cyclic_defect(const BundleMetricValue& gv,
                                            const ConnectionTable& t,
                                            const FrameEndomorphism& j) {
  const int m = 2 * t.n;
  Grid2<double> G = gv.dense();
  std::vector<double> eps(static_cast<size_t>(m));
  for (int a = 0; a < m; ++a)
    eps[static_cast<size_t>(a)] = detail::diag_eps(j, a);
  auto term = [&](int a, int b, int c) {
    double acc = 0.0;
    for (int mu = 0; mu < m; ++mu)
      acc += (eps[static_cast<size_t>(b)] - eps[static_cast<size_t>(mu)]) *
             t.gamma.at(mu, a, b) * G.at(mu, c);
    return acc;
  };
  double defect = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        defect = std::max(defect, std::fabs(term(a, b, c) + term(b, c, a) +
                                            term(c, a, b)));
  return defect;
}

// max |(nabla_{E_a} M) E_b| over the table: zero iff the table preserves the
// two blocks of a frame-diagonal structure.
inline double structure_parallel_defect(const ConnectionTable& t,
                                        const FrameEndomorphism& j) {
  const int m = 2 * t.n;
  std::vector<double> eps(static_cast<size_t>(m));
  for (int a = 0; a < m; ++a)
    eps[static_cast<size_t>(a)] = detail::diag_eps(j, a);
  double defect = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int mu = 0; mu < m; ++mu)
        defect = std::max(
            defect,
            std::fabs((eps[static_cast<size_t>(b)] - eps[static_cast<size_t>(mu)]) *
                      t.gamma.at(mu, a, b)));
  return defect;
}

// Product-preserving connection, closed-form cases.  Relative to the
// Levi-Civita table: the block-mixing entries are removed and the
// horizontal part of nabla_{E_ibar} E_j is tripled.
inline ConnectionTable product_connection(const MetricField& g,
                                          const ScalarField& f,
                                          const CotangentPoint& pt,
                                          const DiffScheme& s = {}) {
  ConnectionTable lc = connection_formula(g, f, pt, s);
  const int n = lc.n;
  ConnectionTable out;
  out.n = n;
  out.gamma = Grid3<double>(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        out.gamma.at(l, i, j) = lc.gamma.at(l, i, j);
        out.gamma.at(n + l, i, n + j) = lc.gamma.at(n + l, i, n + j);
        out.gamma.at(l, n + i, j) = 3.0 * lc.gamma.at(l, n + i, j);
        out.gamma.at(n + l, n + i, n + j) = lc.gamma.at(n + l, n + i, n + j);
      }
  return out;
}

// The same connection via the structure potential
//   S^mu_{ab} = 1/2 ( eps_b gamma^mu_{ba} (eps_a - eps_mu)
//                   + eps_mu gamma^mu_{ba} (eps_a - eps_mu)
//                   - eps_mu gamma^mu_{ab} (eps_b - eps_mu) ),
// subtracted from the Levi-Civita table.
inline ConnectionTable product_connection_via_potential(
    const ConnectionTable& lc, const FrameEndomorphism& j) {
  const int m = 2 * lc.n;
  std::vector<double> eps(static_cast<size_t>(m));
  for (int a = 0; a < m; ++a)
    eps[static_cast<size_t>(a)] = detail::diag_eps(j, a);
  ConnectionTable out;
  out.n = lc.n;
  out.gamma = Grid3<double>(m);
  for (int mu = 0; mu < m; ++mu)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const double ea = eps[static_cast<size_t>(a)];
        const double eb = eps[static_cast<size_t>(b)];
        const double em = eps[static_cast<size_t>(mu)];
        const double sworth =
            0.5 * (eb * lc.gamma.at(mu, b, a) * (ea - em) +
                   em * lc.gamma.at(mu, b, a) * (ea - em) -
                   em * lc.gamma.at(mu, a, b) * (eb - em));
        out.gamma.at(mu, a, b) = lc.gamma.at(mu, a, b) - sworth;
      }
  return out;
}

// Torsion of a table against the validated brackets, as full components:
// out.at(mu, c, b) = gamma^mu_{cb} - gamma^mu_{bc} - C^mu_{cb}.
inline Grid3<double> table_torsion(const MetricField& g,
                                   const CotangentPoint& pt,
                                   const ConnectionTable& t,
                                   const DiffScheme& s = {}) {
  const int n = t.n;
  const int m = 2 * n;
  Grid3<double> out(m);
  for (int c = 0; c < m; ++c)
    for (int b = 0; b < m; ++b) {
      BundleVector w = frame_bracket(g, pt, c, b, s);
      for (int mu = 0; mu < m; ++mu) {
        double cmu = mu < n ? w.h[static_cast<size_t>(mu)]
                            : w.v[static_cast<size_t>(mu - n)];
        out.at(mu, c, b) = t.gamma.at(mu, c, b) - t.gamma.at(mu, b, c) - cmu;
      }
    }
  return out;
}

// Expected torsion of the product connection:
//   T(E_ibar, E_j)    = (3/(2 f alpha)) p_s RR^l_j^{is} E_l,
//   T(E_i, E_j)       = -p_s R_ijl^s E_{lbar},
//   T(E_ibar, E_jbar) = 0.
inline Grid3<double> product_torsion_closed(const MetricField& g,
                                            const ScalarField& f,
                                            const CotangentPoint& pt,
                                            const DiffScheme& s = {}) {
  detail::check_point(g, pt);
  const int n = g.dim();
  const int m = 2 * n;
  std::vector<double> z = detail::chart_coords(pt);
  detail::BlockMetricT<double> blk = detail::cg_blocks_at(g, f, z.data());
  Grid4<double> r = detail::curvature_at(g, pt.x.data(), s);
  Grid4<double> rr = detail::raise_curvature_with(blk.ginv, r);
  const double c_mix = 3.0 / (2.0 * blk.f * blk.alpha);
  Grid3<double> out(m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        double acc = 0.0;
        for (int ss = 0; ss < n; ++ss)
          acc += pt.p[static_cast<size_t>(ss)] * rr.at(l, j, i, ss);
        out.at(l, n + i, j) = c_mix * acc;
        out.at(l, j, n + i) = -c_mix * acc;
        double acc2 = 0.0;
        for (int ss = 0; ss < n; ++ss)
          acc2 += pt.p[static_cast<size_t>(ss)] * r.at(i, j, l, ss);
        out.at(n + l, i, j) = -acc2;
      }
    }
  return out;
}

// Structure-conjugate of a table: gamma^mu_{cb} -> eps_b eps_mu gamma^mu_{cb}.
inline ConnectionTable conjugate_table(const ConnectionTable& t,
                                       const FrameEndomorphism& j) {
  const int m = 2 * t.n;
  std::vector<double> eps(static_cast<size_t>(m));
  for (int a = 0; a < m; ++a)
    eps[static_cast<size_t>(a)] = detail::diag_eps(j, a);
  ConnectionTable out;
  out.n = t.n;
  out.gamma = Grid3<double>(m);
  for (int mu = 0; mu < m; ++mu)
    for (int c = 0; c < m; ++c)
      for (int b = 0; b < m; ++b)
        out.gamma.at(mu, c, b) = eps[static_cast<size_t>(b)] *
                                 eps[static_cast<size_t>(mu)] *
                                 t.gamma.at(mu, c, b);
  return out;
}

// Predicted curvature of the conjugate connection:
// r^mu_{cbd} -> eps_d eps_mu r^mu_{cbd} applied to a reference table.
inline BundleCurvatureTable conjugate_curvature_reference(
    const BundleCurvatureTable& t, const FrameEndomorphism& j) {
  const int m = 2 * t.n;
  std::vector<double> eps(static_cast<size_t>(m));
  for (int a = 0; a < m; ++a)
    eps[static_cast<size_t>(a)] = detail::diag_eps(j, a);
  BundleCurvatureTable out;
  out.n = t.n;
  out.r = Grid4<double>(m);
  for (int mu = 0; mu < m; ++mu)
    for (int c = 0; c < m; ++c)
      for (int b = 0; b < m; ++b)
        for (int d = 0; d < m; ++d)
          out.r.at(mu, c, b, d) = eps[static_cast<size_t>(d)] *
                                  eps[static_cast<size_t>(mu)] *
                                  t.r.at(mu, c, b, d);
  return out;
}

// First-principles curvature of the conjugate connection: conjugate the
// scalar-generic table before it enters the commutator route.
inline BundleCurvatureTable conjugate_curvature_oracle(
    const MetricField& g, const ScalarField& f, const CotangentPoint& pt,
    const FrameEndomorphism& j, const DiffScheme& s = {}) {
  const int n = g.dim();
  const int m = 2 * n;
  std::vector<double> eps(static_cast<size_t>(m));
  for (int a = 0; a < m; ++a)
    eps[static_cast<size_t>(a)] = detail::diag_eps(j, a);
  auto tf = [&](const auto* zz) {
    auto tab = detail::connection_table_at(g, f, zz, s);
    for (int mu = 0; mu < m; ++mu)
      for (int c = 0; c < m; ++c)
        for (int b = 0; b < m; ++b)
          tab.at(mu, c, b) = tab.at(mu, c, b) * (eps[static_cast<size_t>(b)] *
                                                 eps[static_cast<size_t>(mu)]);
    return tab;
  };
  return commutator_curvature(g, pt, s, tf);
}

}  // namespace cotb
