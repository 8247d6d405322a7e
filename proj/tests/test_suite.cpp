#include <doctest.h>

#include <string>

#include <json.hpp>

#include "cotb/errors.hpp"
#include "cotb/report.hpp"
#include "cotb/suite.hpp"

using namespace cotb;

TEST_SUITE("suite") {
  TEST_CASE("check names round-trip and reject unknowns") {
    CHECK(check_names().size() == 11);
    for (const auto& name : check_names())
      CHECK(to_string(parse_check(name)) == name);
    CHECK_THROWS_AS(parse_check("bogus"), usage_error);
  }

  TEST_CASE("runs exactly the requested cells in request order") {
    SuiteConfig cfg;
    cfg.checks = {CheckKind::purity, CheckKind::never_flat};
    cfg.manifolds = {ManifoldKind::flat};
    cfg.scalings = {ScalingKind::one, ScalingKind::poly};
    cfg.samples = 2;
    SuiteReport rep = run_suite(cfg);
    REQUIRE(rep.cells.size() == 4);
    CHECK(rep.cells[0].check == "purity");
    CHECK(rep.cells[0].scaling == "one");
    CHECK(rep.cells[1].scaling == "poly");
    CHECK(rep.cells[2].check == "never_flat");
    CHECK(rep.cells[3].scaling == "poly");
    for (const auto& c : rep.cells) {
      CHECK(c.manifold == "flat");
      CHECK(c.samples == 4);  // two random + two forced points
    }
    CHECK(rep.all_pass());
    CHECK_FALSE(rep.domain_error);
  }

  TEST_CASE("pass flag always matches the reported error and tolerance") {
    SuiteConfig cfg;
    cfg.checks = {CheckKind::base_sanity, CheckKind::bracket_oracle,
                  CheckKind::phi, CheckKind::torsion,
                  CheckKind::metric_connection};
    cfg.manifolds = {ManifoldKind::flat, ManifoldKind::sphere};
    cfg.scalings = {ScalingKind::one, ScalingKind::exp_linear};
    cfg.samples = 3;
    SuiteReport rep = run_suite(cfg);
    REQUIRE(rep.cells.size() == 20);
    for (const auto& c : rep.cells) {
      CHECK(c.pass == (c.max_abs_err <= c.tol));
      CHECK(c.pass);
      CHECK_FALSE(c.notes.empty());
    }
  }

  TEST_CASE("identical configurations give byte-identical reports") {
    SuiteConfig cfg;
    cfg.checks = {CheckKind::connection_oracle, CheckKind::curvature_oracle};
    cfg.manifolds = {ManifoldKind::sphere};
    cfg.scalings = {ScalingKind::exp_linear};
    cfg.samples = 3;
    cfg.seed = 77;
    const std::string a = to_json(run_suite(cfg));
    const std::string b = to_json(run_suite(cfg));
    CHECK(a == b);
    cfg.seed = 78;
    const std::string c = to_json(run_suite(cfg));
    CHECK(a != c);
  }

  TEST_CASE("structured report carries the stable schema") {
    SuiteConfig cfg;
    cfg.checks = {CheckKind::curvature_oracle, CheckKind::purity};
    cfg.manifolds = {ManifoldKind::hyperbolic};
    cfg.scalings = {ScalingKind::poly};
    cfg.samples = 2;
    SuiteReport rep = run_suite(cfg);
    auto root = nlohmann::json::parse(to_json(rep));
    CHECK(root["version"] == kReportVersion);
    CHECK(root["scheme"] == "jets");
    CHECK(root["seed"] == 2026);
    REQUIRE(root["cells"].is_array());
    REQUIRE(root["cells"].size() == 2);
    const auto& curv = root["cells"][0];
    for (const char* key : {"check", "manifold", "scaling", "samples",
                            "max_abs_err", "tol", "pass", "notes"})
      CHECK(curv.contains(key));
    REQUIRE(curv.contains("families"));
    CHECK(curv["families"].size() == 8);
    CHECK(curv["notes"].is_array());
    // purity carries no per-family breakdown, so the key is absent
    CHECK_FALSE(root["cells"][1].contains("families"));
  }

  TEST_CASE("configuration validation") {
    SuiteConfig cfg;
    cfg.checks = {CheckKind::purity};
    cfg.manifolds = {ManifoldKind::flat};
    cfg.scalings = {ScalingKind::one};
    cfg.samples = 0;
    CHECK_THROWS_AS(run_suite(cfg), usage_error);
    cfg.samples = 2;
    cfg.tol_scale = 0.0;
    CHECK_THROWS_AS(run_suite(cfg), usage_error);
    cfg.tol_scale = 1.0;
    cfg.scheme.step = -1.0;
    CHECK_THROWS_AS(run_suite(cfg), usage_error);
  }

  TEST_CASE("duplicate selections collapse to one cell") {
    SuiteConfig cfg;
    cfg.checks = {CheckKind::purity, CheckKind::purity};
    cfg.manifolds = {ManifoldKind::flat, ManifoldKind::flat};
    cfg.scalings = {ScalingKind::one};
    cfg.samples = 2;
    CHECK(run_suite(cfg).cells.size() == 1);
  }

  TEST_CASE("text rendering lists every cell with a verdict") {
    SuiteConfig cfg;
    cfg.checks = {CheckKind::purity, CheckKind::quasi_kahler};
    cfg.manifolds = {ManifoldKind::flat};
    cfg.scalings = {ScalingKind::one};
    cfg.samples = 2;
    const std::string text = to_text(run_suite(cfg));
    size_t count = 0, pos = 0;
    while ((pos = text.find("[PASS]", pos)) != std::string::npos) {
      ++count;
      ++pos;
    }
    CHECK(count == 2);
    CHECK(text.find("2/2 cells passed") != std::string::npos);
  }
}
