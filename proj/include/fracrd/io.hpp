#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fracrd/analysis.hpp"
#include "fracrd/reactions.hpp"
#include "fracrd/stepper.hpp"

namespace fracrd {

/// Snapshot CSV: coordinate columns (x, then y) followed by one column per
/// species; one row per node in storage order (last axis fastest).
struct SnapshotTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// Throws std::out_of_range when absent.
  const std::vector<double>& column(const std::string& name) const;
};

std::vector<std::string> coordinate_names(std::size_t dim);

void write_snapshot(const std::vector<ScalarField>& fields, const std::vector<std::string>& names,
                    const std::filesystem::path& path);
void write_snapshot(const SimState& state, const std::vector<std::string>& names,
                    const std::filesystem::path& path);
/// Species columns named u1, u2, ...
void write_snapshot(const SimState& state, const std::filesystem::path& path);

SnapshotTable read_snapshot(const std::filesystem::path& path);

/// Extracts `column` as a field on `grid`, checking the coordinate columns
/// against the grid nodes (1e-12 relative to the axis length).
ScalarField field_from_snapshot(const GridPtr& grid, const SnapshotTable& table,
                                const std::string& column);

using CheckReport = std::variant<InequalityReport, StructureReport>;

bool passed(const CheckReport& report);
nlohmann::json to_json(const InequalityReport& report);
nlohmann::json to_json(const StructureReport& report);
nlohmann::json to_json(const CheckReport& report);

struct SnapshotRecord {
  double requested_time = 0.0;
  double time = 0.0;
  std::size_t step = 0;
  std::string file;
};

/// Summary document with "schema": 1. `config` is the normalised config echo
/// (may be null).
nlohmann::json summary_to_json(const RunSummary& summary, const std::vector<std::string>& species,
                               const std::vector<CheckReport>& reports,
                               const nlohmann::json& config = nullptr,
                               const std::vector<SnapshotRecord>& snapshots = {});

void write_summary(const RunSummary& summary, const std::vector<std::string>& species,
                   const std::vector<CheckReport>& reports, const std::filesystem::path& path,
                   const nlohmann::json& config = nullptr,
                   const std::vector<SnapshotRecord>& snapshots = {});

nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace fracrd
