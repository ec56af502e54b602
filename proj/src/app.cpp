#include "fracrd/app.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fracrd/analysis.hpp"

namespace fracrd {

namespace {

double option(const CheckSpec& c, const char* key, double fallback) {
  auto it = c.options.find(key);
  return it == c.options.end() ? fallback : it->second;
}

std::string verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

std::string describe(const CheckReport& report) {
  return std::visit(
      [](const auto& r) -> std::string {
        if constexpr (std::is_same_v<std::decay_t<decltype(r)>, InequalityReport>)
          return fmt::format("{} {:<28} lhs={:.6e} rhs={:.6e} slack={:.3e} tol={:.1e}", verdict(r.passed), r.name, r.lhs,
                             r.rhs, r.slack, r.tolerance);
        else
          return fmt::format("{} {:<28} worst_violation={:.6e} samples={}", verdict(r.held()),
                             "structure " + to_string(r.property), r.worst_violation, r.samples_tested);
      },
      report);
}

}  // namespace

std::vector<CheckReport> run_checks(const std::vector<CheckSpec>& checks, const RunSpec& spec, const SimConfig& sim,
                                    const RunResult* result, std::uint64_t seed) {
  std::vector<CheckReport> reports;
  const ReactionSystem& sys = *sim.reaction;
  for (const auto& c : checks) {
    const auto samples = static_cast<std::size_t>(option(c, "samples", static_cast<double>(spec.check_samples)));
    const double box = option(c, "box", 10.0);
    if (c.name == "quasi_positivity") {
      reports.emplace_back(check_quasi_positivity(sys, samples, seed, box));
      continue;
    }
    if (c.name == "mass_control") {
      if (!sys.mass()) throw std::invalid_argument("mass_control check needs mass weights for reaction '" + sys.name() + "'");
      const MassWeights& m = *sys.mass();
      reports.emplace_back(check_mass_control(sys, m.weights, m.kind, samples, seed, option(c, "growth", m.growth), box));
      continue;
    }
    if (!result) continue;
    const RunSummary& sum = result->summary;
    const auto& fields = result->final_state.fields;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto& sp = sim.species[i];
      const std::string tag = "[" + sp.name + "]";
      if (c.name == "interpolation") {
        auto r = interpolation_check(fields[i], option(c, "s1", 0.3), option(c, "s2", 0.7), option(c, "p", 2.0));
        r.name += tag;
        reports.emplace_back(r);
      } else if (c.name == "contraction") {
        auto r = contraction_check(fields[i], option(c, "s", sp.s), option(c, "d", sp.d), option(c, "t", 1.0));
        r.name += tag;
        reports.emplace_back(r);
      } else if (c.name == "stroock_varopoulos") {
        auto r = stroock_varopoulos_check(fields[i], option(c, "s", sp.s), option(c, "q", 2.0));
        r.name += tag;
        reports.emplace_back(r);
      } else if (c.name == "trajectory_positivity") {
        double peak = i < sum.initial_linf.size() ? sum.initial_linf[i] : 0.0;
        if (i < sum.linf.size())
          for (double v : sum.linf[i]) peak = std::max(peak, v);
        const double lowest = i < sum.space_time_min.size() ? sum.space_time_min[i] : 0.0;
        reports.emplace_back(make_inequality("trajectory_positivity" + tag, -lowest, 0.0,
                                             option(c, "tol", 1e-6) * std::max(1.0, peak)));
      }
    }
    if (c.name == "no_blow_up") {
      reports.emplace_back(make_inequality("no_blow_up", sum.blew_up || !sum.ok() ? 1.0 : 0.0, 0.0, 0.0));
    } else if (c.name == "mass_drift") {
      double drift = 0.0;
      for (double m : sum.mass) drift = std::max(drift, std::abs(m - sum.initial_mass));
      const double scale = std::max(std::abs(sum.initial_mass), 1e-300);
      reports.emplace_back(make_inequality("mass_drift", drift / scale, option(c, "tol", 1e-8), 0.0));
    } else if (c.name == "mass_bound") {
      const double growth = option(c, "growth", sys.mass() ? sys.mass()->growth : 0.0);
      double excess = -std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < sum.mass.size(); ++r)
        excess = std::max(excess, sum.mass[r] - sum.initial_mass - growth * sum.times[r]);
      if (sum.mass.empty()) excess = 0.0;
      reports.emplace_back(make_inequality("mass_bound", excess, option(c, "tol", 1e-8), 0.0));
    }
  }
  return reports;
}

int command_run(const std::filesystem::path& config, const CommandOptions& options, std::ostream& out) {
  const ParsedConfig parsed = parse_config(config, options.threads);
  const std::uint64_t seed = options.seed.value_or(parsed.spec.seed);
  const std::filesystem::path dir = options.out_dir.value_or(std::filesystem::path(parsed.spec.output_dir));

  const RunResult result = run(parsed.sim);
  std::vector<std::string> names;
  for (const auto& sp : parsed.sim.species) names.push_back(sp.name);

  std::vector<SnapshotRecord> records;
  for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
    const auto& snap = result.snapshots[i];
    const std::string file = fmt::format("snapshot_{:03d}.csv", i);
    write_snapshot(snap.fields, names, dir / file);
    records.push_back({snap.requested_time, snap.time, snap.step, file});
  }
  write_snapshot(result.final_state, names, dir / "final.csv");
  const auto reports = run_checks(parsed.checks, parsed.spec, parsed.sim, &result, seed);
  write_summary(result.summary, names, reports, dir / "summary.json", to_json(parsed.spec), records);

  out << fmt::format("status {} after {} steps, t = {:.6g}\n", result.summary.status, result.summary.steps,
                     result.summary.final_time);
  if (!result.summary.message.empty()) out << result.summary.message << '\n';
  const auto linf = result.summary.final_linf();
  for (std::size_t i = 0; i < names.size() && i < linf.size(); ++i)
    out << fmt::format("  ||{}||_inf = {:.9f}\n", names[i], linf[i]);
  bool ok = result.summary.ok();
  for (const auto& r : reports) {
    out << describe(r) << '\n';
    ok = ok && passed(r);
  }
  out << "wrote " << (dir / "summary.json").string() << '\n';
  return ok ? 0 : 1;
}

int command_check(const std::filesystem::path& config, const CommandOptions& options, std::ostream& out) {
  const ParsedConfig parsed = parse_config(config, options.threads);
  const std::uint64_t seed = options.seed.value_or(parsed.spec.seed);
  std::vector<CheckSpec> checks;
  for (const auto& c : parsed.checks)
    if (is_structural_check(c.name)) checks.push_back(c);
  if (checks.empty()) {
    checks.push_back({"quasi_positivity", {}});
    if (parsed.sim.reaction->mass()) checks.push_back({"mass_control", {}});
  }
  const auto reports = run_checks(checks, parsed.spec, parsed.sim, nullptr, seed);
  bool ok = true;
  for (const auto& r : reports) {
    out << describe(r) << '\n';
    ok = ok && passed(r);
  }
  if (options.out_dir) {
    nlohmann::json doc = {{"schema", 1}, {"config", to_json(parsed.spec)}, {"seed", seed}, {"checks", nlohmann::json::array()}};
    for (const auto& r : reports) doc["checks"].push_back(to_json(r));
    write_json(doc, *options.out_dir / "checks.json");
  }
  return ok ? 0 : 1;
}

int command_reproduce(TableId table, Budget budget, const CommandOptions& options, std::ostream& out) {
  TableOptions topts;
  topts.threads = options.threads;
  topts.out_dir = options.out_dir;
  bool ok = true;
  std::vector<TableRowResult> rows;
  for (const auto& cell : table_cells(table, budget)) {
    rows.push_back(run_table_cell(cell, topts));
    ok = ok && rows.back().passed;
  }
  out << format_table(rows);
  out << fmt::format("tolerance {:g} relative; {} of {} cells pass\n", kTableTolerance,
                     std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.passed; }), rows.size());
  return ok ? 0 : 1;
}

int command_convergence(const CommandOptions& options, std::ostream& out) {
  bool ok = true;
  nlohmann::json doc = {{"schema", 1}, {"studies", nlohmann::json::array()}};
  for (double s : {0.3, 0.7}) {
    const auto study = heat_convergence(s, 128, {8e-3, 4e-3, 2e-3, 1e-3});
    out << fmt::format("s = {}  K = {}  t = {}\n", s, study.K, study.t_final);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : study.rows) {
      out << fmt::format("  h_t = {:<8g} error = {:.6e}  ratio = {}\n", row.h_t, row.error,
                         row.ratio ? fmt::format("{:.4f}", *row.ratio) : std::string("-"));
      rows.push_back({{"h_t", row.h_t}, {"error", row.error}, {"ratio", row.ratio ? nlohmann::json(*row.ratio) : nullptr}});
      if (row.h_t == 2e-3 && row.ratio) {
        const bool pass = *row.ratio >= 1.7 && *row.ratio <= 2.3;
        out << fmt::format("  {} first-order ratio 4e-3 -> 2e-3 in [1.7, 2.3]\n", verdict(pass));
        ok = ok && pass;
      }
    }
    doc["studies"].push_back({{"s", s}, {"K", study.K}, {"t_final", study.t_final}, {"rows", rows}});
  }
  if (options.out_dir) write_json(doc, *options.out_dir / "convergence.json");
  return ok ? 0 : 1;
}

}  // namespace fracrd
