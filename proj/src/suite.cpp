#include "cotb/suite.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "cotb/base_geometry.hpp"
#include "cotb/cg_metric.hpp"
#include "cotb/cotangent.hpp"
#include "cotb/curvature_bundle.hpp"
#include "cotb/errors.hpp"
#include "cotb/levi_civita.hpp"
#include "cotb/norden.hpp"
#include "cotb/report.hpp"
#include "cotb/tensor.hpp"

namespace cotb {
namespace {

// One measured constituent of a cell.  Upper constituents require
// value <= bound; lower ones require value >= bound (the bound is a floor a
// theorem puts under the quantity, e.g. curvature that must not vanish).
struct Sub {
  std::string label;
  double value = 0.0;
  double bound = 0.0;
  bool lower = false;

  bool ok() const { return lower ? value >= bound : value <= bound; }
  double ratio() const {
    if (lower) return ok() ? 0.0 : std::numeric_limits<double>::infinity();
    if (bound > 0.0) return value / bound;
    return value > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
};

std::string sub_note(const Sub& s) {
  return s.label + ": " + format_defect(s.value) +
         (s.lower ? " (required >= " : " (bound ") + format_defect(s.bound) +
         ")";
}

// Headline (max_abs_err, tol) = the constituent with the worst
// defect-to-bound ratio, so pass == (max_abs_err <= tol) holds exactly.  A
// failing lower constituent reports its shortfall against a zero tolerance.
void finalize(CheckReport& cell, const std::vector<Sub>& subs,
              std::vector<std::string> extra_notes) {
  bool pass = true;
  for (const auto& s : subs) pass = pass && s.ok();

  const Sub* head = nullptr;
  double worst = -1.0;
  for (const auto& s : subs) {
    if (!pass && s.ok()) continue;  // headline must be a failing constituent
    if (pass && s.lower) continue;  // prefer a raw defect when everything passes
    double r = s.ratio();
    if (r > worst) {
      worst = r;
      head = &s;
    }
  }
  if (head == nullptr) {
    cell.max_abs_err = 0.0;
    cell.tol = 0.0;
  } else if (head->lower && !head->ok()) {
    cell.max_abs_err = head->bound - head->value;
    cell.tol = 0.0;
  } else {
    cell.max_abs_err = head->value;
    cell.tol = head->bound;
  }
  cell.pass = pass;
  for (const auto& s : subs) cell.notes.push_back(sub_note(s));
  for (auto& n : extra_notes) cell.notes.push_back(std::move(n));
}

double sup_grid3(const Grid3<double>& a) {
  double m = 0.0;
  for (double v : a.v) m = std::max(m, std::fabs(v));
  return m;
}

double sup_grid4(const Grid4<double>& a) {
  double m = 0.0;
  for (double v : a.v) m = std::max(m, std::fabs(v));
  return m;
}

double covector_norm(const CotangentPoint& pt) {
  double s = 0.0;
  for (double v : pt.p) s += v * v;
  return std::sqrt(s);
}

bool zero_covector(const CotangentPoint& pt) {
  for (double v : pt.p)
    if (v != 0.0) return false;
  return true;
}

struct CellCtx {
  const ManifoldSpec& spec;
  const MetricField& g;
  const ScalarField& f;
  const std::vector<CotangentPoint>& pts;
  DiffScheme scheme;
  double ub = 1.0;  // multiplier applied to every upper bound
};

// ---------------------------------------------------------------------------

void check_base_sanity(const CellCtx& cx, std::vector<Sub>& subs,
                       std::vector<std::string>& notes) {
  double sf = 0.0, as = 0.0, b1 = 0.0, b2 = 0.0, mc = 0.0;
  for (const auto& pt : cx.pts) {
    CurvatureComponents cur = curvature(cx.g, pt.x, cx.scheme);
    if (cx.spec.space_form)
      sf = std::max(sf, space_form_defect(cx.g, pt.x, cx.spec.curvature_k,
                                          cx.scheme));
    as = std::max(as, antisymmetry_defect(cur.r));
    b1 = std::max(b1, bianchi1_defect(cur.r));
    b2 = std::max(b2, bianchi2_defect(cur.covd));
    mc = std::max(mc, metric_compat_defect(cx.g, pt.x, cx.scheme));
  }
  if (cx.spec.space_form) {
    char label[80];
    std::snprintf(label, sizeof label,
                  "constant-curvature model defect (K=%+g)",
                  cx.spec.curvature_k);
    subs.push_back({label, sf, 1e-8 * cx.ub});
  } else {
    notes.push_back(
        "no constant-curvature model for this chart; component identities "
        "only");
  }
  subs.push_back({"curvature antisymmetry defect", as, 1e-9 * cx.ub});
  subs.push_back({"first Bianchi identity defect", b1, 1e-9 * cx.ub});
  subs.push_back({"second Bianchi identity defect", b2, 1e-6 * cx.ub});
  subs.push_back(
      {"metric-compatibility defect of the Christoffel symbols", mc,
       1e-6 * cx.ub});
  notes.push_back("base-metric check; the scaling field does not enter");
}

void check_bracket_oracle(const CellCtx& cx, std::vector<Sub>& subs,
                          std::vector<std::string>& notes) {
  const int n = cx.g.dim();
  const int m = 2 * n;
  double agree = 0.0, alt = 0.0, jac = 0.0;
  for (const auto& pt : cx.pts) {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        BundleVector w1 = frame_bracket(cx.g, pt, a, b, cx.scheme);
        BundleVector w2 = frame_bracket_oracle(cx.g, pt, a, b, cx.scheme);
        BundleVector wa = frame_bracket_alt_sign(cx.g, pt, a, b, cx.scheme);
        for (int e = 0; e < n; ++e) {
          const size_t k = static_cast<size_t>(e);
          agree = std::max(agree, std::fabs(w1.h[k] - w2.h[k]));
          agree = std::max(agree, std::fabs(w1.v[k] - w2.v[k]));
          alt = std::max(alt, std::fabs(wa.h[k] - w2.h[k]));
          alt = std::max(alt, std::fabs(wa.v[k] - w2.v[k]));
        }
      }
    jac = std::max(jac, jacobi_defect(cx.g, pt, cx.scheme));
  }
  const double bar = 1e-6 * cx.ub;
  subs.push_back(
      {"closed-form bracket vs chart-Jacobian oracle", agree, bar});
  subs.push_back(
      {"Jacobi identity over double brackets", jac, 1e-5 * cx.ub});
  if (alt > bar)
    notes.push_back("sign-flipped mixed bracket deviates from the oracle by " +
                    format_defect(alt) + "; implemented sign agrees within " +
                    format_defect(agree));
  notes.push_back("bracket check; the scaling field does not enter");
}

void check_connection_oracle(const CellCtx& cx, std::vector<Sub>& subs,
                             std::vector<std::string>& notes) {
  const int n = cx.g.dim();
  double diff = 0.0, tors = 0.0, comp = 0.0, altd = 0.0;
  for (const auto& pt : cx.pts) {
    ConnectionTable t1 = connection_formula(cx.g, cx.f, pt, cx.scheme);
    ConnectionTable t2 = koszul_oracle(cx.g, cx.f, pt, cx.scheme);
    diff = std::max(diff, connection_tables_diff(t1, t2));
    tors = std::max(tors,
                    table_torsion_defect(cx.g, cx.f, pt, t1, cx.scheme));
    comp = std::max(comp,
                    table_compat_defect(cx.g, cx.f, pt, t1, cx.scheme));
    // alternate with the scaling-correction term doubled
    ConnectionTable alt_t = t1;
    Grid3<double> a =
        detail::a_tensor_at(cx.g, cx.f, pt.x.data(), cx.scheme);
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          alt_t.gamma.at(l, i, j) += a.at(l, j, i);
    altd = std::max(altd, connection_tables_diff(alt_t, t2));
  }
  const double bar = 1e-6 * cx.ub;
  subs.push_back({"connection table vs Koszul-route oracle", diff, bar});
  subs.push_back(
      {"torsion-freeness against validated brackets", tors, bar});
  subs.push_back({"metric compatibility of the table", comp, bar});
  if (altd > bar)
    notes.push_back(
        "doubled scaling-correction term departs from the Koszul route by " +
        format_defect(altd) + "; implemented prefactor agrees within " +
        format_defect(diff));
}

void check_curvature_oracle(const CellCtx& cx, std::vector<Sub>& subs,
                            std::vector<std::string>& notes,
                            CheckReport& cell) {
  std::array<double, kFamilyCount> fam{};
  double implemented = 0.0;

  struct Alt {
    CurvatureReadings rd;
    const char* label;
    double defect = 0.0;
  };
  std::array<Alt, 6> alts{};
  alts[0].rd.hhh_deriv_group_over_f = true;
  alts[0].label =
      "alternate reading (covariant-derivative group carrying the "
      "reciprocal-scaling coefficient)";
  alts[1].rd.hhh_a_group_over_f = true;
  alts[1].label =
      "alternate reading (doubled scaling-correction group coefficient)";
  alts[2].rd.vhh_quad_sign = +1.0;
  alts[2].label = "alternate reading (positive quadratic-curvature sign)";
  alts[3].rd.vhh_density_sign = -1.0;
  alts[3].label = "alternate reading (negative trailing density-term sign)";
  alts[4].rd.vhv_mid_l_sign = -1.0;
  alts[4].rd.vhv_mid_j_sign = -1.0;
  alts[4].label =
      "alternate reading (uniform negative signs on the middle linear group)";
  alts[5].rd.vhv_mid_l_sign = +1.0;
  alts[5].rd.vhv_mid_j_sign = +1.0;
  alts[5].label =
      "alternate reading (uniform positive signs on the middle linear group)";

  for (const auto& pt : cx.pts) {
    BundleCurvatureTable oracle = curvature_oracle(cx.g, cx.f, pt, cx.scheme);
    BundleCurvatureTable formula =
        curvature_formula(cx.g, cx.f, pt, cx.scheme);
    std::array<double, kFamilyCount> d = family_max_diff(formula, oracle);
    for (int i = 0; i < kFamilyCount; ++i) {
      fam[static_cast<size_t>(i)] =
          std::max(fam[static_cast<size_t>(i)], d[static_cast<size_t>(i)]);
      implemented = std::max(implemented, d[static_cast<size_t>(i)]);
    }
    for (auto& alt : alts) {
      BundleCurvatureTable at =
          curvature_formula(cx.g, cx.f, pt, cx.scheme, alt.rd);
      alt.defect = std::max(alt.defect, max_abs_diff(at.r, oracle.r));
    }
  }
  const double bar = 1e-5 * cx.ub;
  for (int i = 0; i < kFamilyCount; ++i) {
    const std::string name = family_name(i);
    subs.push_back({"family " + name + " closed form vs commutator oracle",
                    fam[static_cast<size_t>(i)], bar});
    cell.families.emplace_back(name, fam[static_cast<size_t>(i)]);
  }
  for (const auto& alt : alts)
    if (alt.defect > bar)
      notes.push_back(std::string(alt.label) +
                      " fails the commutator oracle by " +
                      format_defect(alt.defect) +
                      "; implemented reading passes at " +
                      format_defect(implemented));
}

void check_purity(const CellCtx& cx, std::vector<Sub>& subs,
                  std::vector<std::string>& notes) {
  const int n = cx.g.dim();
  const FrameEndomorphism j = para_structure(n);
  const FrameEndomorphism di = diagonal_lift_structure(n);
  double dj = 0.0, dd = 0.0;
  for (const auto& pt : cx.pts) {
    BundleMetricValue gv = cg_metric_at(cx.g, cx.f, pt);
    dj = std::max(dj, purity_defect(gv, j));
    dd = std::max(dd, purity_defect(gv, di));
  }
  subs.push_back({"para-structure purity defect", dj, 0.0});
  subs.push_back({"vertical-flip structure purity defect", dd, 0.0});
  notes.push_back(
      "block-diagonal metric and frame-diagonal structures make purity "
      "exact; the bound is zero by design");
}

void check_phi(const CellCtx& cx, std::vector<Sub>& subs,
               std::vector<std::string>& notes) {
  const int n = cx.g.dim();
  const FrameEndomorphism j = para_structure(n);
  double agree = 0.0, flat_mag = 0.0, best = 0.0;
  for (const auto& pt : cx.pts) {
    Grid3<double> op = phi_operator(cx.g, cx.f, pt, j, cx.scheme);
    Grid3<double> cl = phi_closed_form(cx.g, cx.f, pt, cx.scheme);
    agree = std::max(agree, max_abs_diff(op, cl));
    const double mag = sup_grid3(op);
    if (cx.spec.flat_base)
      flat_mag = std::max(flat_mag, mag);
    else if (covector_norm(pt) >= 0.1)
      best = std::max(best, mag);
  }
  subs.push_back({"operator route vs closed form", agree, 1e-7 * cx.ub});
  if (cx.spec.flat_base) {
    subs.push_back({"twist tensor on a flat base", flat_mag, 1e-7 * cx.ub});
  } else {
    subs.push_back({"largest twist magnitude over samples with covector "
                    "norm >= 0.1",
                    best, 1e-3, true});
    notes.push_back(
        "a curved base must twist the structure; the floor certifies the "
        "flatness dichotomy");
  }
}

void check_quasi_kahler(const CellCtx& cx, std::vector<Sub>& subs,
                        std::vector<std::string>& notes) {
  const int n = cx.g.dim();
  const FrameEndomorphism j = para_structure(n);
  double d = 0.0;
  for (const auto& pt : cx.pts)
    d = std::max(d,
                 cyclic_sum_defect(phi_operator(cx.g, cx.f, pt, j, cx.scheme)));
  subs.push_back({"cyclic sum of the twist tensor", d, 1e-7 * cx.ub});
  notes.push_back(
      "the cyclic symmetrization vanishes on every cell, curved bases "
      "included");
}

void check_never_flat(const CellCtx& cx, std::vector<Sub>& subs,
                      std::vector<std::string>& notes) {
  double mn = std::numeric_limits<double>::infinity();
  double at_zero = -1.0;
  for (const auto& pt : cx.pts) {
    BundleCurvatureTable t = curvature_formula(cx.g, cx.f, pt, cx.scheme);
    const double sup = sup_grid4(t.r);
    mn = std::min(mn, sup);
    if (zero_covector(pt)) at_zero = sup;
  }
  subs.push_back({"smallest per-sample sup-norm of the bundle curvature "
                  "table",
                  mn, 0.1, true});
  if (at_zero >= 0.0)
    notes.push_back("zero-covector sample attains " + format_defect(at_zero));
  notes.push_back(
      "the bundle metric is curved even over a flat base; the floor "
      "certifies it at every sample");
}

void check_torsion(const CellCtx& cx, std::vector<Sub>& subs,
                   std::vector<std::string>& notes) {
  const int n = cx.g.dim();
  const FrameEndomorphism j = para_structure(n);
  double match = 0.0, par = 0.0, pot = 0.0, flat_mag = 0.0, best = 0.0;
  for (const auto& pt : cx.pts) {
    ConnectionTable prod = product_connection(cx.g, cx.f, pt, cx.scheme);
    Grid3<double> tor = table_torsion(cx.g, pt, prod, cx.scheme);
    Grid3<double> closed = product_torsion_closed(cx.g, cx.f, pt, cx.scheme);
    match = std::max(match, max_abs_diff(tor, closed));
    par = std::max(par, structure_parallel_defect(prod, j));
    ConnectionTable lc = connection_formula(cx.g, cx.f, pt, cx.scheme);
    pot = std::max(pot, connection_tables_diff(
                            prod, product_connection_via_potential(lc, j)));
    const double mag = sup_grid3(tor);
    if (cx.spec.flat_base)
      flat_mag = std::max(flat_mag, mag);
    else
      best = std::max(best, mag);
  }
  subs.push_back({"assembled torsion vs closed forms", match, 1e-7 * cx.ub});
  subs.push_back({"structure parallelism of the connection", par, 0.0});
  subs.push_back(
      {"half-sum potential route agreement", pot, 1e-7 * cx.ub});
  if (cx.spec.flat_base) {
    subs.push_back({"torsion on a flat base", flat_mag, 1e-8 * cx.ub});
    notes.push_back("the connection is symmetric exactly when the base is "
                    "flat; both closed-form torsion terms carry curvature "
                    "factors");
  } else {
    subs.push_back({"largest torsion magnitude", best, 1e-3, true});
  }
}

void check_metric_connection(const CellCtx& cx, std::vector<Sub>& subs,
                             std::vector<std::string>& notes) {
  const int n = cx.g.dim();
  const FrameEndomorphism j = para_structure(n);
  double comp = 0.0, rel = 0.0;
  for (const auto& pt : cx.pts) {
    ConnectionTable lc = connection_formula(cx.g, cx.f, pt, cx.scheme);
    ConnectionTable conj = conjugate_table(lc, j);
    comp = std::max(comp,
                    table_compat_defect(cx.g, cx.f, pt, conj, cx.scheme));
    BundleCurvatureTable ref = conjugate_curvature_reference(
        curvature_oracle(cx.g, cx.f, pt, cx.scheme), j);
    BundleCurvatureTable orc =
        conjugate_curvature_oracle(cx.g, cx.f, pt, j, cx.scheme);
    rel = std::max(rel, max_abs_diff(ref.r, orc.r));
  }
  subs.push_back(
      {"metric compatibility of the conjugate table", comp, 1e-6 * cx.ub});
  subs.push_back({"conjugate curvature relation", rel, 1e-5 * cx.ub});
  notes.push_back(
      "the conjugate of the torsion-free table preserves the bundle metric; "
      "its curvature is the structure-conjugated curvature");
}

void check_diag_lift(const CellCtx& cx, std::vector<Sub>& subs,
                     std::vector<std::string>& notes) {
  const int n = cx.g.dim();
  const FrameEndomorphism j = para_structure(n);
  const FrameEndomorphism di = diagonal_lift_structure(n);
  double neg = 0.0, flat_mag = 0.0, best = 0.0;
  for (const auto& pt : cx.pts) {
    Grid3<double> pj = phi_operator(cx.g, cx.f, pt, j, cx.scheme);
    Grid3<double> pd = phi_operator(cx.g, cx.f, pt, di, cx.scheme);
    for (size_t e = 0; e < pj.v.size(); ++e)
      neg = std::max(neg, std::fabs(pd.v[e] + pj.v[e]));
    const double mag = sup_grid3(pd);
    if (cx.spec.flat_base)
      flat_mag = std::max(flat_mag, mag);
    else if (covector_norm(pt) >= 0.1)
      best = std::max(best, mag);
  }
  subs.push_back(
      {"mutual negation of the two structure twists", neg, 1e-7 * cx.ub});
  if (cx.spec.flat_base) {
    subs.push_back(
        {"vertical-flip twist on a flat base", flat_mag, 1e-8 * cx.ub});
  } else {
    subs.push_back({"largest vertical-flip twist magnitude over samples "
                    "with covector norm >= 0.1",
                    best, 1e-3, true});
  }
  notes.push_back(
      "the vertical-flip structure is the negative of the para-structure, "
      "so their twist tensors are exact negatives");
}

// ---------------------------------------------------------------------------

std::string scheme_string(const DiffScheme& s) {
  if (s.kind == DiffKind::jets) return "jets";
  char buf[64];
  std::snprintf(buf, sizeof buf, "fd step=%.3e richardson=%s", s.step,
                s.richardson ? "on" : "off");
  return buf;
}

template <class T>
std::vector<T> dedup(std::vector<T> v) {
  std::vector<T> out;
  for (const auto& e : v)
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  return out;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "base_sanity",  "bracket_oracle", "connection_oracle",
      "curvature_oracle", "purity",     "phi",
      "quasi_kahler", "never_flat",     "torsion",
      "metric_connection", "diag_lift"};
  return names;
}

std::string to_string(CheckKind kind) {
  return check_names()[static_cast<size_t>(kind)];
}

CheckKind parse_check(const std::string& name) {
  const auto& names = check_names();
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<CheckKind>(i);
  throw usage_error("unknown check: " + name);
}

SuiteReport run_suite(const SuiteConfig& cfg) {
  detail::check_scheme(cfg.scheme);
  if (cfg.samples < 1) throw usage_error("samples must be >= 1");
  if (!(cfg.tol_scale > 0.0)) throw usage_error("tol-scale must be positive");

  std::vector<CheckKind> checks = dedup(cfg.checks);
  if (checks.empty())
    for (size_t i = 0; i < check_names().size(); ++i)
      checks.push_back(static_cast<CheckKind>(i));
  std::vector<ManifoldKind> manifolds = dedup(cfg.manifolds);
  if (manifolds.empty())
    manifolds = {ManifoldKind::flat, ManifoldKind::sphere,
                 ManifoldKind::hyperbolic, ManifoldKind::polynomial};
  std::vector<ScalingKind> scalings = dedup(cfg.scalings);
  if (scalings.empty())
    scalings = {ScalingKind::one, ScalingKind::exp_linear, ScalingKind::poly};

  struct ManifoldData {
    ManifoldSpec spec;
    std::unique_ptr<MetricField> metric;
    std::vector<CotangentPoint> pts;
  };
  std::vector<ManifoldData> mds;
  for (ManifoldKind mk : manifolds) {
    ManifoldData md;
    const bool sized =
        mk == ManifoldKind::flat || mk == ManifoldKind::polynomial;
    md.spec = catalog_manifold(mk, sized ? cfg.dim : 2);
    md.metric = make_metric(md.spec);
    md.pts = sample_points(md.spec, cfg.samples, cfg.seed, cfg.p_radius);
    mds.push_back(std::move(md));
  }

  SuiteReport rep;
  rep.scheme = scheme_string(cfg.scheme);
  rep.seed = cfg.seed;
  const double ub =
      (cfg.scheme.kind == DiffKind::central_fd ? 100.0 : 1.0) * cfg.tol_scale;

  for (CheckKind ck : checks)
    for (const ManifoldData& md : mds)
      for (ScalingKind sk : scalings) {
        std::unique_ptr<ScalingField> f = make_scaling(sk, md.spec.dim);
        CheckReport cell;
        cell.check = to_string(ck);
        cell.manifold = md.spec.name;
        cell.scaling = to_string(sk);
        cell.samples = static_cast<int>(md.pts.size());
        CellCtx cx{md.spec, *md.metric, *f, md.pts, cfg.scheme, ub};
        std::vector<Sub> subs;
        std::vector<std::string> notes;
        try {
          switch (ck) {
            case CheckKind::base_sanity:
              check_base_sanity(cx, subs, notes);
              break;
            case CheckKind::bracket_oracle:
              check_bracket_oracle(cx, subs, notes);
              break;
            case CheckKind::connection_oracle:
              check_connection_oracle(cx, subs, notes);
              break;
            case CheckKind::curvature_oracle:
              check_curvature_oracle(cx, subs, notes, cell);
              break;
            case CheckKind::purity:
              check_purity(cx, subs, notes);
              break;
            case CheckKind::phi:
              check_phi(cx, subs, notes);
              break;
            case CheckKind::quasi_kahler:
              check_quasi_kahler(cx, subs, notes);
              break;
            case CheckKind::never_flat:
              check_never_flat(cx, subs, notes);
              break;
            case CheckKind::torsion:
              check_torsion(cx, subs, notes);
              break;
            case CheckKind::metric_connection:
              check_metric_connection(cx, subs, notes);
              break;
            case CheckKind::diag_lift:
              check_diag_lift(cx, subs, notes);
              break;
          }
          finalize(cell, subs, std::move(notes));
        } catch (const numerical_domain_error& e) {
          cell.max_abs_err = 1e300;
          cell.tol = 0.0;
          cell.pass = false;
          cell.notes.push_back(std::string("numerical-domain error: ") +
                               e.what());
          rep.domain_error = true;
        }
        rep.cells.push_back(std::move(cell));
      }
  return rep;
}

}  // namespace cotb
