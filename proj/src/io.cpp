#include "fracrd/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "fracrd/errors.hpp"

namespace fracrd {

namespace fs = std::filesystem;

const std::vector<double>& SnapshotTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == name) return columns[c];
  throw std::out_of_range("snapshot has no column '" + name + "'");
}

std::vector<std::string> coordinate_names(std::size_t dim) {
  static const char* names[] = {"x", "y"};
  if (dim < 1 || dim > 2) throw std::invalid_argument("snapshot dimension must be 1 or 2");
  return {names, names + dim};
}

namespace {

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

std::ofstream open_out(const fs::path& path) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace

void write_snapshot(const std::vector<ScalarField>& fields, const std::vector<std::string>& names,
                    const fs::path& path) {
  if (fields.empty()) throw std::invalid_argument("snapshot needs at least one field");
  if (names.size() != fields.size())
    throw std::invalid_argument("snapshot needs one column name per field");
  const Grid& grid = fields.front().grid();
  for (const auto& f : fields)
    if (!f.grid().same_layout(grid)) throw std::invalid_argument("snapshot fields live on different grids");

  fmt::memory_buffer buf;
  auto header = coordinate_names(grid.dim());
  header.insert(header.end(), names.begin(), names.end());
  for (std::size_t c = 0; c < header.size(); ++c) fmt::format_to(std::back_inserter(buf), "{}{}", c ? "," : "", header[c]);
  buf.push_back('\n');
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto x = grid.coordinates(j);
    for (std::size_t a = 0; a < x.size(); ++a) fmt::format_to(std::back_inserter(buf), "{}{:.17g}", a ? "," : "", x[a]);
    for (const auto& f : fields) fmt::format_to(std::back_inserter(buf), ",{:.17g}", f[j]);
    buf.push_back('\n');
  }
  auto out = open_out(path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void write_snapshot(const SimState& state, const std::vector<std::string>& names, const fs::path& path) {
  write_snapshot(state.fields, names, path);
}

void write_snapshot(const SimState& state, const fs::path& path) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < state.fields.size(); ++i) names.push_back("u" + std::to_string(i + 1));
  write_snapshot(state.fields, names, path);
}

SnapshotTable read_snapshot(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open snapshot '" + path.string() + "'");
  SnapshotTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error("snapshot '" + path.string() + "' is empty");
  table.header = split_csv(line);
  table.columns.resize(table.header.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != table.header.size())
      throw Error(fmt::format("{}:{}: expected {} values, found {}", path.string(), line_no,
                              table.header.size(), cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      char* end = nullptr;
      const double v = std::strtod(cells[c].c_str(), &end);
      if (cells[c].empty() || *end != '\0')
        throw Error(fmt::format("{}:{}: malformed number '{}'", path.string(), line_no, cells[c]));
      table.columns[c].push_back(v);
    }
  }
  return table;
}

ScalarField field_from_snapshot(const GridPtr& grid, const SnapshotTable& table, const std::string& column) {
  if (table.rows() != grid->size())
    throw std::invalid_argument(fmt::format("snapshot has {} rows, grid has {} nodes", table.rows(), grid->size()));
  const auto coords = coordinate_names(grid->dim());
  for (std::size_t a = 0; a < coords.size(); ++a) {
    const auto& col = table.column(coords[a]);
    const double tol = 1e-12 * grid->domain().axis(a).length();
    for (std::size_t j = 0; j < grid->size(); ++j)
      if (std::abs(col[j] - grid->coordinates(j)[a]) > tol)
        throw std::invalid_argument(fmt::format("snapshot row {} is not at grid node {} on axis {}", j + 1, j, coords[a]));
  }
  return ScalarField(grid, table.column(column));
}

bool passed(const CheckReport& report) {
  return std::visit(
      [](const auto& r) {
        if constexpr (std::is_same_v<std::decay_t<decltype(r)>, InequalityReport>)
          return r.passed;
        else
          return r.held();
      },
      report);
}

nlohmann::json to_json(const InequalityReport& r) {
  return {{"kind", "inequality"}, {"name", r.name},           {"lhs", r.lhs},
          {"rhs", r.rhs},         {"slack", r.slack},         {"tolerance", r.tolerance},
          {"passed", r.passed}};
}

nlohmann::json to_json(const StructureReport& r) {
  nlohmann::json j = {{"kind", "structure"},
                      {"name", to_string(r.property)},
                      {"samples_tested", r.samples_tested},
                      {"worst_violation", r.worst_violation},
                      {"passed", r.held()}};
  j["witness"] = r.witness ? nlohmann::json(*r.witness) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const CheckReport& report) {
  return std::visit([](const auto& r) { return to_json(r); }, report);
}

nlohmann::json summary_to_json(const RunSummary& s, const std::vector<std::string>& species,
                               const std::vector<CheckReport>& reports, const nlohmann::json& config,
                               const std::vector<SnapshotRecord>& snapshots) {
  nlohmann::json j;
  j["schema"] = 1;
  j["config"] = config;
  j["species"] = species;
  j["status"] = s.status;
  j["message"] = s.message;
  j["blew_up"] = s.blew_up;
  j["steps"] = s.steps;
  j["final_time"] = s.final_time;
  j["initial"] = {{"linf", s.initial_linf}, {"l2", s.initial_l2}, {"mass", s.initial_mass}};
  j["final"] = {{"linf", s.final_linf()}, {"space_time_min", s.space_time_min}};
  j["series"] = {{"step", s.step_indices},
                 {"t", s.times},
                 {"linf", s.linf},
                 {"l2", s.l2},
                 {"min", s.min},
                 {"mass", s.mass},
                 {"steady_residual", s.steady_residual},
                 {"fixed_point_residual", s.fixed_point_residual}};
  j["mass_weights"] = s.mass_weights;
  j["max_fixed_point_residual"] = s.max_fixed_point_residual;
  nlohmann::json snaps = nlohmann::json::array();
  for (const auto& r : snapshots)
    snaps.push_back({{"requested_time", r.requested_time}, {"time", r.time}, {"step", r.step}, {"file", r.file}});
  j["snapshots"] = snaps;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& r : reports) checks.push_back(to_json(r));
  j["checks"] = checks;
  j["wall_clock_seconds"] = s.wall_clock_seconds;
  return j;
}

void write_json(const nlohmann::json& doc, const fs::path& path) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void write_summary(const RunSummary& summary, const std::vector<std::string>& species,
                   const std::vector<CheckReport>& reports, const fs::path& path,
                   const nlohmann::json& config, const std::vector<SnapshotRecord>& snapshots) {
  write_json(summary_to_json(summary, species, reports, config, snapshots), path);
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return nlohmann::json::parse(in);
}

}  // namespace fracrd
