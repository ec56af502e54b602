#include "fracrd/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "fracrd/expression.hpp"
#include "fracrd/io.hpp"

namespace fracrd {

namespace fs = std::filesystem;

namespace {

std::string position_prefix(const std::string& source, std::size_t line, std::size_t column) {
  if (line == 0) return source + ": ";
  return fmt::format("{}:{}:{}: ", source, line, column);
}

}  // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line, std::size_t column,
                         const std::string& what)
    : std::runtime_error(position_prefix(source, line, column) + what), line_(line), column_(column) {}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "quasi_positivity", "mass_control",       "interpolation",         "contraction",
      "stroock_varopoulos", "trajectory_positivity", "no_blow_up", "mass_drift",
      "mass_bound"};
  return names;
}

bool is_structural_check(const std::string& name) {
  return name == "quasi_positivity" || name == "mass_control";
}

namespace {

class Reader {
 public:
  Reader(std::string source, fs::path base_dir) : source_(std::move(source)), base_(std::move(base_dir)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& what, std::size_t extra_column = 0) const {
    const YAML::Mark m = node.Mark();
    if (m.is_null()) throw ConfigError(source_, 0, 0, what);
    throw ConfigError(source_, static_cast<std::size_t>(m.line) + 1,
                      static_cast<std::size_t>(m.column) + 1 + extra_column, what);
  }

  void require_map(const YAML::Node& node, const std::string& what) const {
    if (!node.IsMap()) fail(node, "'" + what + "' must be a mapping");
  }

  void only_keys(const YAML::Node& node, const std::string& section, std::initializer_list<const char*> allowed) const {
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
        fail(kv.first, "unknown key '" + key + "' in section '" + section + "'");
    }
  }

  YAML::Node need(const YAML::Node& parent, const char* key, const std::string& section) const {
    YAML::Node n = parent[key];
    if (!n) fail(parent, "section '" + section + "' is missing '" + key + "'");
    return n;
  }

  std::string text(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) fail(n, "'" + what + "' must be a scalar");
    return n.Scalar();
  }

  double real(const YAML::Node& n, const std::string& what) const {
    const std::string s = text(n, what);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || !std::isfinite(v)) fail(n, "'" + what + "' must be a finite number, got '" + s + "'");
    return v;
  }

  std::uint64_t integer(const YAML::Node& n, const std::string& what, std::uint64_t minimum) const {
    const std::string s = text(n, what);
    std::size_t used = 0;
    unsigned long long v = 0;
    bool ok = !s.empty() && s.front() != '-';
    if (ok) {
      try {
        v = std::stoull(s, &used);
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok || used != s.size()) {
      // Accept integral reals such as 1e6.
      const double d = real(n, what);
      if (d < 0 || d != std::floor(d) || d > 9.0e18) fail(n, "'" + what + "' must be a non-negative integer");
      v = static_cast<unsigned long long>(d);
    }
    if (v < minimum) fail(n, fmt::format("'{}' must be at least {}", what, minimum));
    return v;
  }

  std::vector<double> reals(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence()) fail(n, "'" + what + "' must be a list");
    std::vector<double> out;
    for (const auto& item : n) out.push_back(real(item, what));
    return out;
  }

  std::string resolve(const std::string& path) const {
    fs::path p(path);
    if (p.is_relative() && !base_.empty()) p = base_ / p;
    return p.lexically_normal().string();
  }

  RunSpec read(const YAML::Node& root) const;

 private:
  std::string source_;
  fs::path base_;

  void read_domain(const YAML::Node& n, RunSpec& spec) const;
  void read_species(const YAML::Node& n, RunSpec& spec) const;
  void read_reaction(const YAML::Node& n, RunSpec& spec) const;
  void read_time(const YAML::Node& n, RunSpec& spec) const;
  void read_output(const YAML::Node& n, RunSpec& spec) const;
  void read_checks(const YAML::Node& n, RunSpec& spec) const;
};

void Reader::read_domain(const YAML::Node& n, RunSpec& spec) const {
  require_map(n, "domain");
  only_keys(n, "domain", {"dim", "axes", "bc"});
  const YAML::Node dim_node = need(n, "dim", "domain");
  const auto dim = integer(dim_node, "domain.dim", 1);
  if (dim > 2) fail(dim_node, "'domain.dim' must be 1 or 2");

  const YAML::Node axes = need(n, "axes", "domain");
  if (!axes.IsSequence()) fail(axes, "'domain.axes' must be a list of [lo, hi] pairs");
  if (axes.size() != dim) fail(axes, fmt::format("'domain.axes' has {} entries for dim {}", axes.size(), dim));
  for (const auto& axis : axes) {
    const auto pair = reals(axis, "domain.axes");
    if (pair.size() != 2) fail(axis, "each axis must be a [lo, hi] pair");
    if (!(pair[0] < pair[1])) fail(axis, "axis requires lo < hi");
    spec.axes.push_back({pair[0], pair[1]});
  }
  const YAML::Node bc = need(n, "bc", "domain");
  try {
    spec.bc = boundary_from_string(text(bc, "domain.bc"));
  } catch (const std::invalid_argument& e) {
    fail(bc, e.what());
  }
}

void Reader::read_species(const YAML::Node& n, RunSpec& spec) const {
  if (!n.IsSequence() || n.size() == 0) fail(n, "'species' must be a non-empty list");
  std::set<std::string> names;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const YAML::Node e = n[i];
    require_map(e, "species entry");
    only_keys(e, "species", {"name", "s", "d", "u0", "u0_csv", "column"});
    SpeciesEntry sp;
    sp.name = e["name"] ? text(e["name"], "species.name") : "u" + std::to_string(i + 1);
    if (sp.name.empty() || sp.name.find_first_of(", \t\"") != std::string::npos)
      fail(e, "species name must be non-empty without commas, quotes or spaces");
    if (sp.name == "x" || sp.name == "y") fail(e, "species name '" + sp.name + "' clashes with a coordinate column");
    if (!names.insert(sp.name).second) fail(e, "duplicate species name '" + sp.name + "'");

    const YAML::Node s = need(e, "s", "species");
    sp.s = real(s, "species.s");
    if (!(sp.s > 0.0 && sp.s <= 1.0)) fail(s, "'species.s' must lie in (0, 1]");
    const YAML::Node d = need(e, "d", "species");
    sp.d = real(d, "species.d");
    if (!(sp.d > 0.0)) fail(d, "'species.d' must be positive");

    if (e["u0"] && e["u0_csv"]) fail(e, "give either 'u0' or 'u0_csv', not both");
    if (e["u0"]) {
      if (e["column"]) fail(e["column"], "'column' only applies to 'u0_csv'");
      const YAML::Node u0 = e["u0"];
      sp.u0.expression = text(u0, "species.u0");
      try {
        Expression::parse(sp.u0.expression);
      } catch (const ExpressionError& err) {
        const std::size_t quote = u0.Tag() == "!" ? 1 : 0;  // double/single-quoted scalars
        fail(u0, err.what(), err.column() - 1 + quote);
      }
    } else if (e["u0_csv"]) {
      sp.u0.csv_path = resolve(text(e["u0_csv"], "species.u0_csv"));
      sp.u0.csv_column = e["column"] ? text(e["column"], "species.column") : sp.name;
    } else {
      fail(e, "species entry needs 'u0' or 'u0_csv'");
    }
    spec.species.push_back(std::move(sp));
  }
}

void Reader::read_reaction(const YAML::Node& n, RunSpec& spec) const {
  require_map(n, "reaction");
  only_keys(n, "reaction", {"name", "params", "mass_weights", "mass_kind", "growth"});
  const YAML::Node name = need(n, "name", "reaction");
  spec.reaction = text(name, "reaction.name");
  if (const YAML::Node params = n["params"]) {
    if (!params.IsMap() && !params.IsNull()) fail(params, "'reaction.params' must be a mapping");
    for (const auto& kv : params) spec.params[kv.first.as<std::string>()] = real(kv.second, "reaction.params");
  }
  if (const YAML::Node w = n["mass_weights"]) {
    spec.mass_weights = reals(w, "reaction.mass_weights");
    if (spec.mass_weights->size() != spec.species.size())
      fail(w, fmt::format("'reaction.mass_weights' has {} entries for {} species", spec.mass_weights->size(),
                          spec.species.size()));
    for (double v : *spec.mass_weights)
      if (!(v > 0.0)) fail(w, "mass weights must be strictly positive");
  }
  if (const YAML::Node k = n["mass_kind"]) {
    spec.mass_kind = text(k, "reaction.mass_kind");
    try {
      mass_kind_from_string(*spec.mass_kind);
    } catch (const std::invalid_argument& e) {
      fail(k, e.what());
    }
  }
  if (const YAML::Node g = n["growth"]) {
    spec.growth = real(g, "reaction.growth");
    if (*spec.growth < 0.0) fail(g, "'reaction.growth' must be non-negative");
  }

  std::shared_ptr<const ReactionSystem> sys;
  try {
    sys = build_reaction(spec);
  } catch (const std::invalid_argument& e) {
    fail(name, e.what());
  }
  if (sys->species() != spec.species.size())
    fail(name, fmt::format("reaction '{}' couples {} species but {} are configured", spec.reaction, sys->species(),
                           spec.species.size()));
}

void Reader::read_time(const YAML::Node& n, RunSpec& spec) const {
  require_map(n, "time");
  only_keys(n, "time", {"h_t", "L", "t_final", "steady_tol", "max_steps", "fixed_point_tol", "positivity"});
  const YAML::Node ht = need(n, "h_t", "time");
  spec.h_t = real(ht, "time.h_t");
  if (!(spec.h_t > 0.0)) fail(ht, "'time.h_t' must be positive");
  if (n["L"]) spec.L = integer(n["L"], "time.L", 1);
  if (n["t_final"]) {
    spec.t_final = real(n["t_final"], "time.t_final");
    if (!(*spec.t_final >= 0.0)) fail(n["t_final"], "'time.t_final' must be non-negative");
  }
  if (n["steady_tol"]) {
    spec.steady_tol = real(n["steady_tol"], "time.steady_tol");
    if (!(*spec.steady_tol > 0.0)) fail(n["steady_tol"], "'time.steady_tol' must be positive");
  }
  if (!spec.t_final && !spec.steady_tol) fail(n, "section 'time' needs 't_final', 'steady_tol' or both");
  if (n["max_steps"]) spec.max_steps = integer(n["max_steps"], "time.max_steps", 1);
  if (n["fixed_point_tol"]) {
    spec.fixed_point_tol = real(n["fixed_point_tol"], "time.fixed_point_tol");
    if (!(*spec.fixed_point_tol > 0.0)) fail(n["fixed_point_tol"], "'time.fixed_point_tol' must be positive");
  }
  if (n["positivity"]) {
    try {
      spec.positivity = positivity_from_string(text(n["positivity"], "time.positivity"));
    } catch (const std::invalid_argument& e) {
      fail(n["positivity"], e.what());
    }
  }
}

void Reader::read_output(const YAML::Node& n, RunSpec& spec) const {
  require_map(n, "output");
  only_keys(n, "output", {"dir", "snapshot_times", "stride"});
  if (n["dir"]) spec.output_dir = text(n["dir"], "output.dir");
  if (n["stride"]) spec.stride = integer(n["stride"], "output.stride", 1);
  if (const YAML::Node times = n["snapshot_times"]) {
    spec.snapshot_times = reals(times, "output.snapshot_times");
    for (std::size_t i = 0; i < spec.snapshot_times.size(); ++i) {
      const double t = spec.snapshot_times[i];
      if (t < 0.0) fail(times[i], "snapshot times must be non-negative");
      if (i > 0 && t < spec.snapshot_times[i - 1]) fail(times[i], "snapshot times must be sorted");
      if (spec.t_final && t > *spec.t_final) fail(times[i], "snapshot time beyond t_final");
    }
  }
}

void Reader::read_checks(const YAML::Node& n, RunSpec& spec) const {
  if (n.IsNull()) return;
  if (!n.IsSequence()) fail(n, "'checks' must be a list");
  for (const auto& item : n) {
    CheckSpec c;
    if (item.IsScalar()) {
      c.name = item.Scalar();
    } else if (item.IsMap()) {
      c.name = text(need(item, "name", "checks"), "checks.name");
      for (const auto& kv : item) {
        const auto key = kv.first.as<std::string>();
        if (key != "name") c.options[key] = real(kv.second, "checks." + key);
      }
    } else {
      fail(item, "check entries are names or mappings with a 'name'");
    }
    const auto& known = known_checks();
    if (std::find(known.begin(), known.end(), c.name) == known.end()) fail(item, "unknown check '" + c.name + "'");
    spec.checks.push_back(std::move(c));
  }
}

RunSpec Reader::read(const YAML::Node& root) const {
  if (!root.IsMap()) fail(root, "configuration must be a mapping");
  only_keys(root, "<top level>",
            {"domain", "grid", "species", "reaction", "time", "output", "checks", "seed", "check_samples"});
  RunSpec spec;
  read_domain(need(root, "domain", "<top level>"), spec);

  const YAML::Node grid = need(root, "grid", "<top level>");
  require_map(grid, "grid");
  only_keys(grid, "grid", {"modes"});
  const YAML::Node modes = need(grid, "modes", "grid");
  if (modes.IsScalar()) {
    spec.modes.assign(spec.axes.size(), integer(modes, "grid.modes", 1));
  } else if (modes.IsSequence()) {
    for (const auto& m : modes) spec.modes.push_back(integer(m, "grid.modes", 1));
    if (spec.modes.size() != spec.axes.size())
      fail(modes, fmt::format("'grid.modes' has {} entries for dim {}", spec.modes.size(), spec.axes.size()));
  } else {
    fail(modes, "'grid.modes' must be an integer or a list");
  }

  read_species(need(root, "species", "<top level>"), spec);
  read_reaction(need(root, "reaction", "<top level>"), spec);
  read_time(need(root, "time", "<top level>"), spec);
  if (root["output"]) read_output(root["output"], spec);
  if (root["checks"]) read_checks(root["checks"], spec);
  if (root["seed"]) spec.seed = integer(root["seed"], "seed", 0);
  if (root["check_samples"]) spec.check_samples = integer(root["check_samples"], "check_samples", 1);
  return spec;
}

}  // namespace

RunSpec parse_run_spec(const std::string& text, const std::string& source_name, const fs::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    const auto line = e.mark.is_null() ? 0 : static_cast<std::size_t>(e.mark.line) + 1;
    const auto col = e.mark.is_null() ? 0 : static_cast<std::size_t>(e.mark.column) + 1;
    throw ConfigError(source_name, line, col, e.msg);
  }
  return Reader(source_name, base_dir).read(root);
}

RunSpec load_run_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, 0, "cannot open configuration file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_spec(ss.str(), path.string(), fs::absolute(path).parent_path());
}

nlohmann::json to_json(const RunSpec& spec) {
  using nlohmann::json;
  json axes = json::array();
  for (const auto& a : spec.axes) axes.push_back({a.lo, a.hi});
  json species = json::array();
  for (const auto& sp : spec.species) {
    json e = {{"name", sp.name}, {"s", sp.s}, {"d", sp.d}};
    if (!sp.u0.csv_path.empty()) {
      e["u0_csv"] = sp.u0.csv_path;
      e["column"] = sp.u0.csv_column;
    } else {
      e["u0"] = sp.u0.expression;
    }
    species.push_back(e);
  }
  json reaction = {{"name", spec.reaction}, {"params", json::object()}};
  for (const auto& [k, v] : spec.params) reaction["params"][k] = v;
  if (spec.mass_weights) reaction["mass_weights"] = *spec.mass_weights;
  if (spec.mass_kind) reaction["mass_kind"] = *spec.mass_kind;
  if (spec.growth) reaction["growth"] = *spec.growth;

  json time = {{"h_t", spec.h_t},
               {"L", spec.L},
               {"max_steps", spec.max_steps},
               {"positivity", to_string(spec.positivity)}};
  if (spec.t_final) time["t_final"] = *spec.t_final;
  if (spec.steady_tol) time["steady_tol"] = *spec.steady_tol;
  if (spec.fixed_point_tol) time["fixed_point_tol"] = *spec.fixed_point_tol;

  json checks = json::array();
  for (const auto& c : spec.checks) {
    json e = {{"name", c.name}};
    for (const auto& [k, v] : c.options) e[k] = v;
    checks.push_back(e);
  }
  return {{"domain", {{"dim", spec.axes.size()}, {"axes", axes}, {"bc", std::string(to_string(spec.bc))}}},
          {"grid", {{"modes", spec.modes}}},
          {"species", species},
          {"reaction", reaction},
          {"time", time},
          {"output", {{"dir", spec.output_dir}, {"snapshot_times", spec.snapshot_times}, {"stride", spec.stride}}},
          {"checks", checks},
          {"seed", spec.seed},
          {"check_samples", spec.check_samples}};
}

std::shared_ptr<const ReactionSystem> build_reaction(const RunSpec& spec) {
  auto base = std::make_shared<const ReactionSystem>(make_reaction(spec.reaction, spec.params, spec.species.size()));
  if (!spec.mass_weights && !spec.mass_kind && !spec.growth) return base;
  MassWeights mass = base->mass().value_or(MassWeights{std::vector<double>(base->species(), 1.0), MassKind::M, 0.0});
  if (spec.mass_weights) mass.weights = *spec.mass_weights;
  if (spec.mass_kind) mass.kind = mass_kind_from_string(*spec.mass_kind);
  if (spec.growth) mass.growth = *spec.growth;
  return std::make_shared<const ReactionSystem>(
      base->name(), base->species(), base->params(),
      [base](std::span<const double> r, std::span<double> out) { base->evaluate(r, out); }, mass);
}

SimConfig build_sim_config(const RunSpec& spec, unsigned threads) {
  SimConfig cfg;
  cfg.grid = build_grid(Domain(spec.axes, spec.bc), spec.modes);
  const std::size_t dim = cfg.grid->dim();
  for (const auto& sp : spec.species) {
    ScalarField u0(cfg.grid);
    if (!sp.u0.csv_path.empty()) {
      u0 = field_from_snapshot(cfg.grid, read_snapshot(sp.u0.csv_path), sp.u0.csv_column);
    } else {
      const Expression e = Expression::parse(sp.u0.expression);
      u0 = sample(cfg.grid, [&](std::span<const double> x) { return e.evaluate(x[0], dim > 1 ? x[1] : 0.0); });
    }
    if (!u0.all_finite())
      throw std::invalid_argument("initial data for species '" + sp.name + "' is not finite at every node");
    cfg.species.push_back({sp.name, sp.s, sp.d, std::move(u0)});
  }
  cfg.reaction = build_reaction(spec);
  cfg.h_t = spec.h_t;
  cfg.fixed_point_depth = spec.L;
  cfg.fixed_point_tol = spec.fixed_point_tol;
  cfg.stop.t_final = spec.t_final;
  cfg.stop.steady_tol = spec.steady_tol;
  cfg.stop.max_steps = spec.max_steps;
  cfg.snapshot_times = spec.snapshot_times;
  cfg.record_stride = spec.stride;
  cfg.positivity = spec.positivity;
  cfg.mass_weights = spec.mass_weights;
  cfg.threads = std::max(1u, threads);
  cfg.validate();
  return cfg;
}

ParsedConfig parse_config(const fs::path& path, unsigned threads) {
  ParsedConfig out;
  out.spec = load_run_spec(path);
  out.sim = build_sim_config(out.spec, threads);
  out.checks = out.spec.checks;
  return out;
}

}  // namespace fracrd
