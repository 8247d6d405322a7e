#pragma once

// Verification suite: runs every requested check over every requested
// (manifold, scaling) cell at a deterministic list of random chart points
// and assembles a SuiteReport.
//
// Each check measures one or more defects, each with its own bound; a cell
// passes when every defect sits within its bound.  The reported
// (max_abs_err, tol) pair belongs to the constituent with the worst
// defect-to-bound ratio, so pass == (max_abs_err <= tol) always holds, and
// the notes list every constituent with its value and bound.  Checks that
// require a quantity to be LARGE (curvature that must not vanish, torsion
// that must appear on curved bases) report the shortfall against a zero
// tolerance and put the observed value in the notes.

#include <cstdint>
#include <string>
#include <vector>

#include "cotb/catalog.hpp"
#include "cotb/diff.hpp"
#include "cotb/report.hpp"

namespace cotb {

enum class CheckKind {
  base_sanity,        // base metric: model curvature, Bianchi, compatibility
  bracket_oracle,     // closed-form frame brackets vs chart Jacobians
  connection_oracle,  // connection table vs Koszul route, plus axioms
  curvature_oracle,   // closed-form curvature families vs commutator route
  purity,             // structure-compatibility of the bundle metric
  phi,                // twist tensor: operator route vs closed form, dichotomy
  quasi_kahler,       // cyclic twist sum vanishes on every cell
  never_flat,         // bundle curvature bounded away from zero on flat bases
  torsion,            // almost-product connection torsion closed forms
  metric_connection,  // conjugate table: compatibility and curvature relation
  diag_lift,          // vertical-flip structure: twist negation and dichotomy
};

const std::vector<std::string>& check_names();
CheckKind parse_check(const std::string& name);  // usage_error on miss
std::string to_string(CheckKind kind);

struct SuiteConfig {
  std::vector<CheckKind> checks;        // empty = all, canonical order
  std::vector<ManifoldKind> manifolds;  // empty = all
  std::vector<ScalingKind> scalings;    // empty = all
  int dim = 2;          // flat/polynomial chart dimension (2..4)
  int samples = 20;     // random points per cell (two forced points added)
  uint64_t seed = 2026;
  DiffScheme scheme;    // jets by default
  double tol_scale = 1.0;  // multiplies every upper bound
  double p_radius = 1.5;   // covector sampling radius
};

// Executes every (check x manifold x scaling) cell in the given order.  A
// cell that aborts on a numerical-domain error is reported failed with the
// error text in its notes; nothing is silently skipped.
SuiteReport run_suite(const SuiteConfig& cfg);

}  // namespace cotb
