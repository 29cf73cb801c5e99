#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "diskcurv/errors.hpp"
#include "json.hpp"

namespace diskcurv::app {

namespace {

using nlohmann::json;

class Reader {
 public:
  Reader(std::string source, std::filesystem::path base_dir)
      : source_(std::move(source)), base_dir_(std::move(base_dir)) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& what) const {
    throw ConfigError(source_ + ": " + (pointer.empty() ? "/" : pointer) + ": " + what);
  }

  void allow(const json& obj, const std::string& pointer, std::set<std::string> keys) const {
    if (!obj.is_object()) fail(pointer, "expected an object");
    for (const auto& [key, value] : obj.items()) {
      if (!keys.count(key)) fail(pointer + "/" + key, "unknown key");
    }
  }

  double number(const json& obj, const std::string& pointer, const char* key, double fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(pointer + "/" + key, "expected a number");
    return v.get<double>();
  }

  int integer(const json& obj, const std::string& pointer, const char* key, int fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(pointer + "/" + key, "expected an integer");
    return v.get<int>();
  }

  std::uint64_t unsigned_integer(const json& obj, const std::string& pointer, const char* key,
                                 std::uint64_t fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) fail(pointer + "/" + key, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  std::string text(const json& obj, const std::string& pointer, const char* key,
                   const std::string& fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(pointer + "/" + key, "expected a string");
    return v.get<std::string>();
  }

  template <typename F>
  auto guarded(const std::string& pointer, F&& f) const {
    try {
      return f();
    } catch (const ConfigError& e) {
      fail(pointer, e.what());
    }
  }

  CurvatureSpec spec(const json& obj, const std::string& pointer) const {
    allow(obj, pointer,
          {"kind", "value", "base", "amplitude", "mode", "center_radius", "width", "values"});
    const std::string kind_name = text(obj, pointer, "kind", "constant");
    const CurvatureKind kind =
        guarded(pointer + "/kind", [&] { return parse_curvature_kind(kind_name); });
    return guarded(pointer, [&] {
      switch (kind) {
        case CurvatureKind::constant:
          return CurvatureSpec::constant(
              number(obj, pointer, "value", number(obj, pointer, "base", 0.0)));
        case CurvatureKind::radial_bump:
          return CurvatureSpec::radial_bump(
              number(obj, pointer, "base", 0.0), number(obj, pointer, "amplitude", 0.0),
              number(obj, pointer, "center_radius", 0.0), number(obj, pointer, "width", 0.25));
        case CurvatureKind::angular_mode:
          return CurvatureSpec::angular_mode(number(obj, pointer, "base", 0.0),
                                             number(obj, pointer, "amplitude", 0.0),
                                             integer(obj, pointer, "mode", 0));
        case CurvatureKind::tabulated: {
          if (!obj.contains("values") || !obj.at("values").is_array()) {
            fail(pointer + "/values", "tabulated curvature needs a `values` array");
          }
          std::vector<double> values;
          for (std::size_t i = 0; i < obj.at("values").size(); ++i) {
            const json& v = obj.at("values")[i];
            if (!v.is_number()) fail(pointer + "/values/" + std::to_string(i), "expected a number");
            values.push_back(v.get<double>());
          }
          return CurvatureSpec::tabulated(std::move(values));
        }
      }
      fail(pointer, "unsupported curvature kind");
    });
  }

  CurvatureSource source(const json& obj, const std::string& pointer) const {
    CurvatureSource out;
    if (obj.is_number()) {
      out.spec = CurvatureSpec::constant(obj.get<double>());
      return out;
    }
    if (obj.is_object() && obj.contains("file")) {
      allow(obj, pointer, {"file"});
      const std::filesystem::path file = text(obj, pointer, "file", "");
      out.file = file.is_absolute() ? file : base_dir_ / file;
      return out;
    }
    out.spec = spec(obj, pointer);
    return out;
  }

  std::vector<double> numbers(const json& obj, const std::string& pointer, const char* key,
                              std::vector<double> fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& arr = obj.at(key);
    const std::string p = pointer + "/" + key;
    if (!arr.is_array()) fail(p, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number()) fail(p + "/" + std::to_string(i), "expected a number");
      out.push_back(arr[i].get<double>());
    }
    return out;
  }

 private:
  std::string source_;
  std::filesystem::path base_dir_;
};

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

void read_solver(const Reader& r, const json& s, SolveConfig& c) {
  const std::string p = "/solver";
  r.allow(s, p,
          {"rho_strategy", "max_iterations", "gradient_tolerance", "initial_rho", "lbfgs_memory",
           "scan_points", "scan_rounds", "collapse_threshold", "normalization_tolerance",
           "curvature_symmetry_tolerance", "line_search"});
  const std::string strategy = r.text(s, p, "rho_strategy", to_string(c.rho_strategy));
  c.rho_strategy = r.guarded(p + "/rho_strategy", [&] { return parse_rho_strategy(strategy); });
  c.max_iterations = r.integer(s, p, "max_iterations", c.max_iterations);
  c.gradient_tolerance = r.number(s, p, "gradient_tolerance", c.gradient_tolerance);
  c.initial_rho = r.number(s, p, "initial_rho", c.initial_rho);
  c.lbfgs_memory = r.integer(s, p, "lbfgs_memory", c.lbfgs_memory);
  c.scan_points = r.integer(s, p, "scan_points", c.scan_points);
  c.scan_rounds = r.integer(s, p, "scan_rounds", c.scan_rounds);
  c.collapse_threshold = r.number(s, p, "collapse_threshold", c.collapse_threshold);
  c.normalization_tolerance = r.number(s, p, "normalization_tolerance", c.normalization_tolerance);
  c.curvature_symmetry_tolerance =
      r.number(s, p, "curvature_symmetry_tolerance", c.curvature_symmetry_tolerance);
  if (s.contains("line_search")) {
    const json& ls = s.at("line_search");
    const std::string lp = p + "/line_search";
    r.allow(ls, lp, {"shrink", "sufficient_decrease", "max_backtracks"});
    c.line_search.shrink = r.number(ls, lp, "shrink", c.line_search.shrink);
    c.line_search.sufficient_decrease =
        r.number(ls, lp, "sufficient_decrease", c.line_search.sufficient_decrease);
    c.line_search.max_backtracks = r.integer(ls, lp, "max_backtracks", c.line_search.max_backtracks);
  }
}

}  // namespace

RunConfig default_config() { return RunConfig{}; }

RunConfig parse_config(const std::string& text, const std::string& source,
                       const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    const auto column_pos = what.find("column ");
    const auto colon = what.find(": ", column_pos == std::string::npos ? 0 : column_pos);
    if (colon != std::string::npos) what = what.substr(colon + 2);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                      what);
  }

  const Reader r(source, base_dir);
  RunConfig c;
  c.source = source;
  r.allow(root, "",
          {"mesh", "group", "K", "h", "solver", "seed", "inequalities", "refine", "perturb"});

  if (root.contains("mesh")) {
    const json& m = root.at("mesh");
    r.allow(m, "/mesh", {"n_radial", "n_angular"});
    c.n_radial = r.integer(m, "/mesh", "n_radial", c.n_radial);
    c.n_angular = r.integer(m, "/mesh", "n_angular", c.n_angular);
  }
  if (root.contains("group")) {
    const json& g = root.at("group");
    r.allow(g, "/group", {"kind", "k"});
    const std::string kind = r.text(g, "/group", "kind", to_string(c.group_kind));
    c.group_kind = r.guarded("/group/kind", [&] { return parse_group_kind(kind); });
    c.group_k = r.integer(g, "/group", "k", c.group_k);
  }
  if (root.contains("K")) c.k = r.source(root.at("K"), "/K");
  if (root.contains("h")) c.h = r.source(root.at("h"), "/h");
  if (root.contains("solver")) read_solver(r, root.at("solver"), c.solver);
  c.seed = r.unsigned_integer(root, "", "seed", c.seed);
  c.inequalities.options.seed = c.seed;

  if (root.contains("inequalities")) {
    const json& q = root.at("inequalities");
    const std::string p = "/inequalities";
    r.allow(q, p,
            {"n_radial", "n_angular", "random_fields", "lm_tolerance", "identity_tolerance",
             "delta", "epsilon"});
    auto& s = c.inequalities;
    s.n_radial = r.integer(q, p, "n_radial", s.n_radial);
    s.n_angular = r.integer(q, p, "n_angular", s.n_angular);
    s.options.random_fields = r.integer(q, p, "random_fields", s.options.random_fields);
    s.options.lm_tolerance = r.number(q, p, "lm_tolerance", s.options.lm_tolerance);
    s.options.identity_tolerance =
        r.number(q, p, "identity_tolerance", s.options.identity_tolerance);
    s.options.local.delta = r.number(q, p, "delta", s.options.local.delta);
    s.options.local.epsilon = r.number(q, p, "epsilon", s.options.local.epsilon);
  }

  if (root.contains("refine")) {
    const json& q = root.at("refine");
    const std::string p = "/refine";
    r.allow(q, p, {"target", "n_radial", "n_angular", "levels", "exact_rho", "exact_field"});
    auto& s = c.refine;
    const std::string target = r.text(q, p, "target", to_string(s.target));
    s.target = r.guarded(p + "/target", [&] { return parse_refinement_target(target); });
    s.coarsest.n_radial = r.integer(q, p, "n_radial", s.coarsest.n_radial);
    s.coarsest.n_angular = r.integer(q, p, "n_angular", s.coarsest.n_angular);
    s.levels = r.integer(q, p, "levels", s.levels);
    if (q.contains("exact_rho") && !q.at("exact_rho").is_null()) {
      s.exact_rho = r.number(q, p, "exact_rho", 0.0);
    }
    const std::string field = r.text(q, p, "exact_field", "none");
    if (field == "bubble") {
      s.exact_bubble = true;
    } else if (field != "none") {
      r.fail(p + "/exact_field", "expected \"none\" or \"bubble\"");
    }
  }

  if (root.contains("perturb")) {
    const json& q = root.at("perturb");
    const std::string p = "/perturb";
    r.allow(q, p, {"epsilons", "bump_K", "bump_h", "gauss_bonnet_tolerance"});
    auto& s = c.perturb;
    s.epsilons = r.numbers(q, p, "epsilons", s.epsilons);
    if (q.contains("bump_K")) s.bump_k = r.spec(q.at("bump_K"), p + "/bump_K");
    if (q.contains("bump_h")) s.bump_h = r.spec(q.at("bump_h"), p + "/bump_h");
    s.gauss_bonnet_tolerance = r.number(q, p, "gauss_bonnet_tolerance", s.gauss_bonnet_tolerance);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string(), path.parent_path());
}

void validate(const RunConfig& c) {
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(c.source + ": " + what);
  };
  require(c.n_radial >= 2, "/mesh/n_radial must be >= 2");
  require(c.n_angular >= 8, "/mesh/n_angular must be >= 8");
  require(c.group_k >= 1, "/group/k must be >= 1");
  if (c.group_kind != GroupKind::trivial) {
    const int order = c.group_kind == GroupKind::dihedral ? 2 * c.group_k : c.group_k;
    require(c.n_angular % order == 0,
            "/mesh/n_angular=" + std::to_string(c.n_angular) + " is not divisible by " +
                std::to_string(order) + " as required by " + to_string(c.group_kind) + " k=" +
                std::to_string(c.group_k));
  }
  require(c.solver.max_iterations >= 1, "/solver/max_iterations must be positive");
  require(c.solver.gradient_tolerance > 0.0, "/solver/gradient_tolerance must be positive");
  require(c.solver.initial_rho > 0.0 && c.solver.initial_rho < kTwoPi,
          "/solver/initial_rho must lie in (0, 2pi)");
  require(c.solver.scan_points >= 1, "/solver/scan_points must be positive");
  require(c.refine.levels >= 3, "/refine/levels must be >= 3");
  require(c.refine.coarsest.n_radial >= 2 && c.refine.coarsest.n_angular >= 8,
          "/refine mesh is too coarse");
  require(c.inequalities.n_radial >= 2 && c.inequalities.n_angular >= 8,
          "/inequalities mesh is too coarse");
  require(c.inequalities.options.random_fields >= 0,
          "/inequalities/random_fields must be nonnegative");
  require(!c.perturb.epsilons.empty(), "/perturb/epsilons is empty");
  for (std::size_t i = 0; i < c.perturb.epsilons.size(); ++i) {
    require(c.perturb.epsilons[i] >= 0.0 &&
                (i == 0 || c.perturb.epsilons[i] > c.perturb.epsilons[i - 1]),
            "/perturb/epsilons must be nonnegative and strictly increasing");
  }
}

}  // namespace diskcurv::app
