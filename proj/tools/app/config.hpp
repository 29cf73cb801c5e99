#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "diskcurv/curvature.hpp"
#include "diskcurv/inequality.hpp"
#include "diskcurv/solver.hpp"
#include "diskcurv/studies.hpp"

namespace diskcurv::app {

// A curvature given either as a formula or as a table file
// (`node_id,value` for K, `boundary_index,value` for h).
struct CurvatureSource {
  CurvatureSpec spec = CurvatureSpec::constant(1.0);
  std::filesystem::path file;
};

struct InequalitySection {
  int n_radial = 48;
  int n_angular = 1536;
  InequalityOptions options;
};

struct RefineSection {
  RefinementTarget target = RefinementTarget::joint;
  MeshLevel coarsest{12, 48};
  int levels = 3;
  std::optional<double> exact_rho;
  bool exact_bubble = false;
};

struct PerturbSection {
  std::vector<double> epsilons = default_epsilon_grid();
  CurvatureSpec bump_k = default_bump();
  CurvatureSpec bump_h = default_bump();
  double gauss_bonnet_tolerance = 1e-4;
};

struct RunConfig {
  std::string source = "<defaults>";
  int n_radial = 48;
  int n_angular = 192;
  GroupKind group_kind = GroupKind::cyclic;
  int group_k = 2;
  CurvatureSource k;
  CurvatureSource h;
  SolveConfig solver;  // group is filled in once the mesh exists
  std::uint64_t seed = 20240611;
  InequalitySection inequalities;
  RefineSection refine;
  PerturbSection perturb;
};

RunConfig default_config();

// Parses a JSON config. Syntax errors report `path:line:column`, semantic
// errors report the JSON pointer of the offending entry. Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::string& source,
                       const std::filesystem::path& base_dir);

// Checks everything that can be checked before the mesh is built.
void validate(const RunConfig& config);

}  // namespace diskcurv::app
