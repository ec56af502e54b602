#include "fracrd/studies.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "fracrd/errors.hpp"
#include "fracrd/io.hpp"
#include "fracrd/spectral.hpp"

namespace fracrd {

std::string to_string(TableId id) { return id == TableId::T1 ? "T1" : "T2"; }

TableId table_from_string(const std::string& name) {
  if (name == "T1" || name == "t1" || name == "1") return TableId::T1;
  if (name == "T2" || name == "t2" || name == "2") return TableId::T2;
  throw std::invalid_argument("unknown table '" + name + "' (expected T1 or T2)");
}

std::string to_string(Budget b) { return b == Budget::Fast ? "fast" : "full"; }

Budget budget_from_string(const std::string& name) {
  if (name == "fast") return Budget::Fast;
  if (name == "full") return Budget::Full;
  throw std::invalid_argument("unknown budget '" + name + "' (expected fast or full)");
}

std::size_t TableCell::modes() const { return static_cast<std::size_t>(std::lround(2.0 / h_x)) - 1; }

std::string TableCell::label() const {
  return fmt::format("{} s=({},{}) d=({},{}) h_x={:g} L={}", to_string(table), s1, s2, d1, d2, h_x, L);
}

namespace {

struct Block {
  double s1, s2, d1, d2;
  double u[4][2];
};

// Rows: (h_x, L) = (1e-2, 1), (5e-3, 2), (2e-3, 2), (1e-3, 3).
constexpr double kRowSpacing[4] = {1e-2, 5e-3, 2e-3, 1e-3};
constexpr std::size_t kRowDepth[4] = {1, 2, 2, 3};

constexpr Block kTable1[2] = {
    {0.25, 0.75, 3, 5,
     {{0.034593927, 0.147334012}, {0.034597215, 0.147343745}, {0.034597791, 0.147345473},
      {0.034597830, 0.147345587}}},
    {0.9, 0.5, 2, 4,
     {{0.032958290, 0.231046944}, {0.032968899, 0.231071583}, {0.032970613, 0.231076136},
      {0.032970734, 0.231076469}}},
};

constexpr Block kTable2[2] = {
    {0.35, 0.8, 1, 3,
     {{0.128912072, 0.215751920}, {0.128930880, 0.215770510}, {0.128934168, 0.215773656},
      {0.128934401, 0.215773860}}},
    {0.8, 0.6, 5, 1,
     {{0.035781626, 0.539477321}, {0.035797500, 0.539571499}, {0.035800230, 0.539588620},
      {0.035800423, 0.539589842}}},
};

}  // namespace

std::vector<TableCell> table_cells(TableId id, Budget budget) {
  const Block* blocks = id == TableId::T1 ? kTable1 : kTable2;
  const std::size_t rows = budget == Budget::Fast ? 1 : 4;
  std::vector<TableCell> cells;
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t r = 0; r < rows; ++r) {
      const Block& blk = blocks[b];
      cells.push_back({id, blk.s1, blk.s2, blk.d1, blk.d2, kRowSpacing[r], kRowDepth[r], blk.u[r][0], blk.u[r][1]});
    }
  return cells;
}

RunSpec table_cell_spec(const TableCell& cell, std::optional<std::size_t> modes) {
  RunSpec spec;
  spec.axes = {{-1.0, 1.0}, {-1.0, 1.0}};
  spec.bc = Boundary::Dirichlet;
  const std::size_t K = modes.value_or(cell.modes());
  spec.modes = {K, K};
  auto u0 = [](double s) { return fmt::format("(1-x)^{}*(1-y)^{}", s, s); };
  spec.species = {{"u1", cell.s1, cell.d1, {u0(cell.s1), "", ""}}, {"u2", cell.s2, cell.d2, {u0(cell.s2), "", ""}}};
  spec.reaction = "brusselator";
  spec.params = {{"a", 2.0}, {"b", 1.0}};
  spec.h_t = 1e-2;
  spec.L = cell.L;
  spec.steady_tol = 1e-10;
  spec.stride = 100;
  spec.checks = {{"trajectory_positivity", {}}, {"no_blow_up", {}}};
  return spec;
}

TableRowResult run_table_cell(const TableCell& cell, const TableOptions& options) {
  TableRowResult row;
  row.cell = cell;
  try {
    const RunSpec spec = table_cell_spec(cell);
    const SimConfig cfg = build_sim_config(spec, options.threads);
    RunResult result = run(cfg);
    row.summary = result.summary;
    row.status = result.summary.status;
    row.message = result.summary.message;
    const auto linf = result.summary.final_linf();
    if (linf.size() == 2) {
      row.u1 = linf[0];
      row.u2 = linf[1];
    }
    row.deviation_u1 = std::abs(row.u1 - cell.reference_u1) / cell.reference_u1;
    row.deviation_u2 = std::abs(row.u2 - cell.reference_u2) / cell.reference_u2;
    row.passed = row.status == "steady" && row.deviation_u1 <= kTableTolerance && row.deviation_u2 <= kTableTolerance;
    if (options.out_dir) {
      const auto dir = *options.out_dir / fmt::format("{}_s{}_{}_d{}_{}_K{}_L{}", to_string(cell.table), cell.s1,
                                                      cell.s2, cell.d1, cell.d2, cell.modes(), cell.L);
      write_snapshot(result.final_state, {"u1", "u2"}, dir / "final.csv");
      write_summary(result.summary, {"u1", "u2"}, {}, dir / "summary.json", to_json(spec));
    }
  } catch (const std::exception& e) {
    row.status = "error";
    row.message = e.what();
    row.passed = false;
  }
  return row;
}

std::vector<TableRowResult> reproduce_table(TableId id, Budget budget, const TableOptions& options) {
  std::vector<TableRowResult> rows;
  for (const auto& cell : table_cells(id, budget)) rows.push_back(run_table_cell(cell, options));
  return rows;
}

std::string format_table(const std::vector<TableRowResult>& rows) {
  std::string out = fmt::format("{:<36} {:>7} {:>13} {:>13} {:>10} {:>13} {:>13} {:>10} {:>7}\n", "configuration",
                                "steps", "ref u1", "u1", "rel dev", "ref u2", "u2", "rel dev", "verdict");
  for (const auto& r : rows) {
    out += fmt::format("{:<36} {:>7} {:>13.9f} {:>13.9f} {:>10.2e} {:>13.9f} {:>13.9f} {:>10.2e} {:>7}\n",
                       r.cell.label(), r.summary.steps, r.cell.reference_u1, r.u1, r.deviation_u1,
                       r.cell.reference_u2, r.u2, r.deviation_u2, r.passed ? "PASS" : "FAIL");
    if (!r.passed && !r.message.empty()) out += "    " + r.status + ": " + r.message + "\n";
  }
  return out;
}

HeatConvergenceStudy heat_convergence(double s, std::size_t K, const std::vector<double>& time_steps,
                                      double t_final, double d) {
  HeatConvergenceStudy study;
  study.s = s;
  study.K = K;
  study.t_final = t_final;
  const GridPtr grid = build_grid(Domain::interval(0.0, std::numbers::pi, Boundary::Dirichlet), {K});
  ScalarField u0 = sample_eigenfunction(grid, {1});
  ScalarField e4 = sample_eigenfunction(grid, {4});
  e4 *= 0.5;
  u0 += e4;
  const ScalarField exact = semigroup_apply(u0, s, d, t_final);

  for (double h_t : time_steps) {
    const auto start = std::chrono::steady_clock::now();
    SimConfig cfg;
    cfg.grid = grid;
    cfg.species.push_back({"u", s, d, u0});
    cfg.reaction = std::make_shared<const ReactionSystem>(zero_reaction(1));
    cfg.h_t = h_t;
    cfg.stop.t_final = t_final;
    cfg.record_stride = 1000000;
    cfg.positivity = PositivityPolicy::None;
    const RunResult result = run(cfg);
    if (!result.summary.ok()) throw Error("heat run failed: " + result.summary.message);
    ScalarField diff = result.final_state.fields[0];
    diff -= exact;
    HeatConvergenceRow row;
    row.h_t = h_t;
    row.error = diff.max_abs();
    if (!study.rows.empty()) row.ratio = study.rows.back().error / row.error;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace fracrd
