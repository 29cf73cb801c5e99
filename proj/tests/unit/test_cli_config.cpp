#include <string>

#include "config.hpp"
#include "diskcurv/errors.hpp"
#include "doctest.h"

using namespace diskcurv;
using diskcurv::app::parse_config;

namespace {

std::string error_of(const std::string& text) {
  try {
    app::validate(parse_config(text, "cfg.json", "."));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("empty object gives the defaults") {
  const app::RunConfig c = parse_config("{}", "cfg.json", ".");
  CHECK(c.n_radial == 48);
  CHECK(c.n_angular == 192);
  CHECK(c.group_kind == GroupKind::cyclic);
  CHECK(c.group_k == 2);
  CHECK(c.k.spec.kind == CurvatureKind::constant);
  CHECK(c.k.spec.base == 1.0);
  CHECK_NOTHROW(app::validate(c));
}

TEST_CASE("curvature entries") {
  const app::RunConfig c = parse_config(
      R"({"K": 0.5, "h": {"kind": "angular-mode", "base": 1, "amplitude": 0.3, "mode": 4},
          "group": {"kind": "dihedral", "k": 2}, "solver": {"rho_strategy": "outer-scan"}})",
      "cfg.json", ".");
  CHECK(c.k.spec.base == 0.5);
  CHECK(c.h.spec.kind == CurvatureKind::angular_mode);
  CHECK(c.h.spec.mode == 4);
  CHECK(c.group_kind == GroupKind::dihedral);
  CHECK(c.solver.rho_strategy == RhoStrategy::outer_scan);
}

TEST_CASE("syntax errors carry line and column") {
  const std::string e = error_of("{\n  \"mesh\": {\"n_radial\": 12,}\n}");
  CHECK(e.rfind("cfg.json:2:", 0) == 0);
}

TEST_CASE("semantic errors carry the JSON pointer") {
  CHECK(error_of(R"({"mesh": {"n_radial": "many"}})").find("/mesh/n_radial: expected an integer") !=
        std::string::npos);
  CHECK(error_of(R"({"mesh": {"radius": 2}})").find("/mesh/radius: unknown key") != std::string::npos);
  CHECK(error_of(R"({"group": {"kind": "cyclic", "k": 5}})").find("not divisible by 5") !=
        std::string::npos);
  CHECK(error_of(R"({"refine": {"levels": 2}})").find("/refine/levels") != std::string::npos);
  CHECK(error_of(R"({"perturb": {"epsilons": [0.1, 0.05]}})").find("strictly increasing") !=
        std::string::npos);
}

}
