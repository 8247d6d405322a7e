#include "cotb/report.hpp"

#include <cstdio>

#include <json.hpp>

namespace cotb {

std::string format_defect(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string to_json(const SuiteReport& r) {
  nlohmann::ordered_json root;
  root["version"] = r.version;
  root["scheme"] = r.scheme;
  root["seed"] = r.seed;
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& c : r.cells) {
    nlohmann::ordered_json cell;
    cell["check"] = c.check;
    cell["manifold"] = c.manifold;
    cell["scaling"] = c.scaling;
    cell["samples"] = c.samples;
    cell["max_abs_err"] = c.max_abs_err;
    cell["tol"] = c.tol;
    cell["pass"] = c.pass;
    if (!c.families.empty()) {
      nlohmann::ordered_json fam;
      for (const auto& [name, err] : c.families) fam[name] = err;
      cell["families"] = fam;
    }
    cell["notes"] = c.notes;
    cells.push_back(std::move(cell));
  }
  root["cells"] = std::move(cells);
  return root.dump(2) + "\n";
}

std::string to_text(const SuiteReport& r) {
  std::string out;
  out += "bundle verification report (version ";
  out += r.version;
  out += ")\n";
  out += "scheme: " + r.scheme + "\n";
  out += "seed:   " + std::to_string(r.seed) + "\n\n";
  int passed = 0;
  for (const auto& c : r.cells) {
    out += c.pass ? "[PASS] " : "[FAIL] ";
    out += c.check + "  manifold=" + c.manifold + "  scaling=" + c.scaling;
    out += "  samples=" + std::to_string(c.samples);
    out += "  max_abs_err=" + format_defect(c.max_abs_err);
    out += "  tol=" + format_defect(c.tol) + "\n";
    for (const auto& [name, err] : c.families)
      out += "       family " + name + ": " + format_defect(err) + "\n";
    for (const auto& note : c.notes) out += "       note: " + note + "\n";
    if (c.pass) ++passed;
  }
  out += "\n" + std::to_string(passed) + "/" + std::to_string(r.cells.size()) +
         " cells passed\n";
  return out;
}

}  // namespace cotb
