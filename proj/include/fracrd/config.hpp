#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fracrd/grid.hpp"
#include "fracrd/stepper.hpp"

namespace fracrd {

/// Config error with a 1-based position in the source document (0 when unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Initial data: a closed-form expression, or a column of a snapshot CSV.
struct InitialData {
  std::string expression;
  std::string csv_path;
  std::string csv_column;
  bool operator==(const InitialData&) const = default;
};

struct SpeciesEntry {
  std::string name;
  double s = 0.5;
  double d = 1.0;
  InitialData u0;
  bool operator==(const SpeciesEntry&) const = default;
};

/// One requested analysis check with numeric options.
struct CheckSpec {
  std::string name;
  std::map<std::string, double> options;
  bool operator==(const CheckSpec&) const = default;
};

/// Known check names.
const std::vector<std::string>& known_checks();
bool is_structural_check(const std::string& name);

/// Plain-data form of a configuration file.
struct RunSpec {
  std::vector<Interval> axes;
  Boundary bc = Boundary::Dirichlet;
  std::vector<std::size_t> modes;

  std::vector<SpeciesEntry> species;

  std::string reaction;
  std::map<std::string, double> params;
  std::optional<std::vector<double>> mass_weights;
  std::optional<std::string> mass_kind;
  std::optional<double> growth;

  double h_t = 1e-2;
  std::size_t L = 1;
  std::optional<double> t_final;
  std::optional<double> steady_tol;
  std::size_t max_steps = 100'000'000;
  std::optional<double> fixed_point_tol;
  PositivityPolicy positivity = PositivityPolicy::ClampInReaction;

  std::string output_dir = "out";
  std::vector<double> snapshot_times;
  std::size_t stride = 1;

  std::vector<CheckSpec> checks;
  std::uint64_t seed = 0;
  std::size_t check_samples = 1000;

  bool operator==(const RunSpec&) const = default;
};

/// Parses YAML (JSON is accepted as a subset). Relative CSV paths are
/// resolved against `base_dir`. Throws ConfigError.
RunSpec parse_run_spec(const std::string& text, const std::string& source_name = "<string>",
                       const std::filesystem::path& base_dir = {});
RunSpec load_run_spec(const std::filesystem::path& path);

/// Normalised echo; dumping it and re-parsing yields an equal RunSpec.
nlohmann::json to_json(const RunSpec& spec);

/// Reaction named in the RunSpec, with mass weights / kind / growth overrides applied.
std::shared_ptr<const ReactionSystem> build_reaction(const RunSpec& spec);

/// Builds grid, initial fields and reaction. `threads` goes to SimConfig.
SimConfig build_sim_config(const RunSpec& spec, unsigned threads = 1);

struct ParsedConfig {
  RunSpec spec;
  SimConfig sim;
  std::vector<CheckSpec> checks;
};

ParsedConfig parse_config(const std::filesystem::path& path, unsigned threads = 1);

}  // namespace fracrd
