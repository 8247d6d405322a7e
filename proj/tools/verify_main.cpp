// Verification CLI for the rescaled cotangent-bundle metric library.
//
//   cotb verify [--manifold NAME]... [--scaling NAME]... [--check NAME]...
//               [--samples N] [--seed S] [--diff jets|fd] [--step H]
//               [--tol-scale X] [--p-radius R] [--dim N]
//               [--format text|json] [--out FILE]
//
// Exit codes: 0 all cells pass, 1 any cell fails, 2 usage error,
// 3 numerical-domain error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cotb/catalog.hpp"
#include "cotb/errors.hpp"
#include "cotb/report.hpp"
#include "cotb/suite.hpp"

namespace {

std::string joined(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cotangent-bundle metric verification"};
  app.require_subcommand(1);
  CLI::App* verify = app.add_subcommand(
      "verify", "run verification checks and emit a report");

  std::vector<std::string> manifolds, scalings, checks;
  int samples = 20;
  int dim = 2;
  std::uint64_t seed = 2026;
  std::string diff = "jets";
  double step = 1e-4;
  double tol_scale = 1.0;
  double p_radius = 1.5;
  std::string format = "text";
  std::string out_path;

  verify->add_option("--manifold", manifolds,
                     "chart to verify (repeatable; default all): " +
                         joined(cotb::manifold_names()));
  verify->add_option("--scaling", scalings,
                     "scaling field (repeatable; default all): " +
                         joined(cotb::scaling_names()));
  verify->add_option("--check", checks,
                     "check to run (repeatable; default all): " +
                         joined(cotb::check_names()));
  verify->add_option("--samples", samples,
                     "random samples per cell; two forced points are added")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "sampler seed")->capture_default_str();
  verify->add_option("--diff", diff, "derivative scheme")
      ->capture_default_str()
      ->check(CLI::IsMember({"jets", "fd"}));
  verify->add_option("--step", step, "finite-difference base step")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify
      ->add_option("--tol-scale", tol_scale,
                   "multiplier on every upper tolerance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify
      ->add_option("--p-radius", p_radius, "covector sampling radius")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify
      ->add_option("--dim", dim,
                   "chart dimension for the flat and polynomial manifolds")
      ->capture_default_str()
      ->check(CLI::Range(2, 4));
  verify->add_option("--format", format, "report format")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--out", out_path, "write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cotb::SuiteConfig cfg;
    for (const auto& name : manifolds)
      cfg.manifolds.push_back(cotb::parse_manifold(name));
    for (const auto& name : scalings)
      cfg.scalings.push_back(cotb::parse_scaling(name));
    for (const auto& name : checks)
      cfg.checks.push_back(cotb::parse_check(name));
    cfg.samples = samples;
    cfg.dim = dim;
    cfg.seed = seed;
    cfg.scheme = diff == "jets" ? cotb::jets_scheme() : cotb::fd_scheme(step);
    cfg.tol_scale = tol_scale;
    cfg.p_radius = p_radius;

    cotb::SuiteReport rep = cotb::run_suite(cfg);
    const std::string rendered =
        format == "json" ? cotb::to_json(rep) : cotb::to_text(rep);
    if (!out_path.empty()) {
      std::ofstream os(out_path, std::ios::binary);
      if (!os) throw cotb::usage_error("cannot open output file: " + out_path);
      os << rendered;
      int passed = 0;
      for (const auto& c : rep.cells) passed += c.pass ? 1 : 0;
      std::cout << "report written to " << out_path << " (" << passed << "/"
                << rep.cells.size() << " cells passed)\n";
    } else {
      std::cout << rendered;
    }
    if (rep.domain_error) return 3;
    return rep.all_pass() ? 0 : 1;
  } catch (const cotb::usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cotb::numerical_domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
