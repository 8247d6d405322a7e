#pragma once

// Structured verification reports.  One CheckReport describes one suite
// cell (check x manifold x scaling); a SuiteReport is the full run.  The
// serializers are deterministic: identical inputs produce byte-identical
// output, which the determinism checks rely on.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cotb {

inline constexpr const char* kReportVersion = "0.1.0";

// Every cell obeys: pass == (max_abs_err <= tol).  Checks that bound a
// quantity from below report their shortfall (0 when satisfied) against a
// zero tolerance, and the observed value lands in the notes.
struct CheckReport {
  std::string check;
  std::string manifold;
  std::string scaling;
  int samples = 0;
  double max_abs_err = 0.0;
  double tol = 0.0;
  bool pass = false;
  // per-family errors, populated by the bundle-curvature check only
  std::vector<std::pair<std::string, double>> families;
  std::vector<std::string> notes;
};

struct SuiteReport {
  std::string version = kReportVersion;
  std::string scheme;  // derivative scheme descriptor, e.g. "jets"
  uint64_t seed = 0;
  std::vector<CheckReport> cells;
  // true when any cell aborted on a numerical-domain error; drives the
  // process exit status but is not part of the serialized schema
  bool domain_error = false;

  bool all_pass() const {
    for (const auto& c : cells)
      if (!c.pass) return false;
    return true;
  }
};

// JSON with stable field names:
// { version, scheme, seed, cells: [ { check, manifold, scaling, samples,
//   max_abs_err, tol, pass, families?, notes } ] }.
// "families" appears only on cells that carry a per-family breakdown.
std::string to_json(const SuiteReport& r);

// Human-readable fixed-format listing, one block per cell.
std::string to_text(const SuiteReport& r);

// Fixed-format scientific rendering of a defect value, shared by the
// serializers and by note builders so numbers read identically everywhere.
std::string format_defect(double v);

}  // namespace cotb
