#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracrd/app.hpp"
#include "fracrd/config.hpp"
#include "fracrd/expression.hpp"
#include "fracrd/io.hpp"
#include "fracrd/studies.hpp"
#include "oracles.hpp"

using namespace fracrd;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(FRACRD_SOURCE_DIR) / "configs";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "fracrd_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMinimal = R"cfg(domain:
  dim: 1
  axes: [[0, 1]]
  bc: neumann
grid:
  modes: 16
species:
  - {name: u1, s: 0.5, d: 1, u0: "1 + 0.5*cos(pi*x)"}
  - {name: u2, s: 0.8, d: 2, u0: "0.5"}
reaction:
  name: brusselator
  params: {a: 2, b: 1}
time:
  h_t: 0.01
  t_final: 0.1
output:
  stride: 3
)cfg";

}  // namespace

TEST_CASE("expressions") {
  CHECK(Expression::parse("(1-x)^0.25*(1-y)^0.25").evaluate(0, 0) == 1.0);
  CHECK(Expression::parse("(1−x)^0.25*(1−y)^0.25").evaluate(0, 0) == 1.0);  // Unicode minus
  CHECK(Expression::parse("(1-x)^0.5").evaluate(0.75) == Approx(0.5));
  CHECK(Expression::parse("-2^2").evaluate(0) == -4.0);
  CHECK(Expression::parse("2^-1").evaluate(0) == 0.5);
  CHECK(Expression::parse("2^3^2").evaluate(0) == 512.0);
  CHECK(Expression::parse("1 - 2 - 3").evaluate(0) == -4.0);
  CHECK(Expression::parse("8/4/2").evaluate(0) == 1.0);
  CHECK(Expression::parse("max(x, y) + abs(-3)").evaluate(1, 2) == 5.0);
  CHECK(Expression::parse("sin(pi/2)*exp(0) + cos(0)").evaluate(0) == Approx(2.0));
  CHECK(Expression::parse("1.5e-1*x").evaluate(2) == Approx(0.3));
  CHECK_THROWS_AS(Expression::parse("1 +"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("(x"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("z + 1"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("max(1)"), ExpressionError);
  try {
    Expression::parse("x + $");
  } catch (const ExpressionError& e) {
    CHECK(e.column() == 5);
  }
}

TEST_CASE("shipped table configuration") {
  const auto parsed = parse_config(kConfigs / "table1_col1.cfg");
  const SimConfig& c = parsed.sim;
  CHECK(c.species.size() == 2);
  CHECK(c.species[0].s == 0.25);
  CHECK(c.species[1].s == 0.75);
  CHECK(c.species[0].d == 3.0);
  CHECK(c.species[1].d == 5.0);
  CHECK(c.grid->bc() == Boundary::Dirichlet);
  CHECK(c.grid->domain().axis(0) == Interval{-1, 1});
  CHECK(c.grid->domain().axis(1) == Interval{-1, 1});
  CHECK(c.grid->modes(0) == 199);
  CHECK(c.reaction->name() == "brusselator");
  CHECK(c.stop.steady_tol == 1e-10);
  CHECK_FALSE(c.stop.t_final.has_value());
  // (1 - x)^s (1 - y)^s at the centre node (0, 0) is 1.
  const std::size_t centre = c.grid->flat_index(std::vector<std::size_t>{99, 99});
  CHECK(c.grid->coordinates(centre)[0] == Approx(0.0).scale(1.0));
  CHECK(c.species[0].u0[centre] == Approx(1.0));
  for (const char* name : {"table1_col2.cfg", "table2_col1.cfg", "table2_col2.cfg", "abg_neumann_mass.cfg",
                           "brusselator_neumann_bound.cfg"})
    CHECK_NOTHROW(parse_config(kConfigs / name));
}

TEST_CASE("configuration errors carry positions") {
  auto error_for = [](const std::string& text) -> std::string {
    try {
      parse_run_spec(text, "cfg");
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  std::string text = kMinimal;

  SUBCASE("no stopping rule") {
    const auto pos = text.find("  t_final: 0.1\n");
    const std::string msg = error_for(text.erase(pos, 15));
    CHECK(msg.find("t_final") != std::string::npos);
    CHECK(msg.find("cfg:14:3:") == 0);
  }
  SUBCASE("unknown reaction") {
    const auto pos = text.find("brusselator");
    const std::string msg = error_for(text.replace(pos, 11, "lotka"));
    CHECK(msg.find("unknown reaction") != std::string::npos);
    CHECK(msg.find("cfg:11:9:") == 0);
  }
  SUBCASE("arity mismatch") {
    const auto pos = text.find("brusselator");
    std::string t = text.replace(pos, 11, "reversible_abg");
    t.replace(t.find("{a: 2, b: 1}"), 12, "{alpha: 1, beta: 1, gamma: 2}");
    const std::string msg = error_for(t);
    CHECK(msg.find("3 species but 2") != std::string::npos);
  }
  SUBCASE("syntax error") {
    const std::string msg = error_for("domain: [1, 2\n");
    CHECK(msg.find("cfg:") == 0);
    CHECK_FALSE(msg.empty());
  }
  SUBCASE("bad expression points into the string") {
    const auto pos = text.find("\"0.5\"");
    const std::string msg = error_for(text.replace(pos, 5, "\"0.5 * q\""));
    CHECK(msg.find("cfg:9:") == 0);
    CHECK(msg.find("unknown identifier 'q'") != std::string::npos);
  }
  SUBCASE("value checks") {
    CHECK(error_for(std::string(kMinimal).replace(text.find("s: 0.5"), 6, "s: 1.5")).find("(0, 1]") != std::string::npos);
    CHECK(error_for(std::string(kMinimal).replace(text.find("h_t: 0.01"), 9, "h_t: -1")).find("positive") != std::string::npos);
    CHECK(error_for(std::string(kMinimal).replace(text.find("modes: 16"), 9, "modes: 0")).find("at least 1") != std::string::npos);
    CHECK(error_for(std::string(kMinimal) + "bogus: 1\n").find("unknown key 'bogus'") != std::string::npos);
    CHECK(error_for(std::string(kMinimal) + "checks: [telepathy]\n").find("unknown check") != std::string::npos);
    CHECK(error_for(std::string(kMinimal).replace(text.find("stride: 3"), 9, "snapshot_times: [0.05, 0.01]"))
              .find("sorted") != std::string::npos);
  }
}

TEST_CASE("config echo re-parses to an equal RunSpec") {
  const RunSpec spec = load_run_spec(kConfigs / "table1_col1.cfg");
  const RunSpec again = parse_run_spec(to_json(spec).dump(2), "echo");
  CHECK(again == spec);
  const RunSpec mass = load_run_spec(kConfigs / "abg_neumann_mass.cfg");
  CHECK(parse_run_spec(to_json(mass).dump(), "echo") == mass);
  RunSpec odd = parse_run_spec(kMinimal);
  odd.mass_weights = std::vector<double>{0.1, 1.0 / 3.0};
  odd.growth = 2.0;
  odd.fixed_point_tol = 1e-11;
  odd.checks = {{"interpolation", {{"s1", 0.25}, {"s2", 0.75}}}};
  CHECK(parse_run_spec(to_json(odd).dump(), "echo") == odd);
}

TEST_CASE("snapshot layout") {
  const fs::path dir = scratch("snapshots");
  SUBCASE("1D, K = 3") {
    auto g = build_grid(Domain::interval(0, 4, Boundary::Dirichlet), {3});
    ScalarField u(g);
    u[0] = 1;
    u[1] = 2;
    u[2] = 3;
    write_snapshot({u}, {"u"}, dir / "a.csv");
    const auto table = read_snapshot(dir / "a.csv");
    CHECK(table.header == std::vector<std::string>{"x", "u"});
    CHECK(table.rows() == 3);
    CHECK(table.column("x") == std::vector<double>{1, 2, 3});
    CHECK(table.column("u") == std::vector<double>{1, 2, 3});
  }
  SUBCASE("2D, K = 2 x 2 ordered with y fastest") {
    auto g = build_grid(Domain::box({0, 3}, {0, 3}, Boundary::Dirichlet), {2, 2});
    SimState st;
    st.fields = {ScalarField(g)};
    write_snapshot(st, dir / "b.csv");
    const auto table = read_snapshot(dir / "b.csv");
    CHECK(table.header == std::vector<std::string>{"x", "y", "u1"});
    CHECK(table.column("x") == std::vector<double>{1, 1, 2, 2});
    CHECK(table.column("y") == std::vector<double>{1, 2, 1, 2});
  }
  SUBCASE("values carry 17 significant digits and round-trip as initial data") {
    auto g = build_grid(Domain::box({-1, 1}, {0, 2}, Boundary::Neumann), {7, 5});
    const auto u = oracle::random_field(g, 77);
    write_snapshot({u}, {"v"}, dir / "c.csv");
    const auto back = field_from_snapshot(g, read_snapshot(dir / "c.csv"), "v");
    for (std::size_t j = 0; j < u.size(); ++j) CHECK(back[j] == u[j]);

    // Loaded through a configuration file.
    const std::string cfg = std::string(R"(domain: {dim: 2, axes: [[-1, 1], [0, 2]], bc: neumann}
grid: {modes: [7, 5]}
species: [{name: v, s: 0.5, d: 1, u0_csv: c.csv}]
reaction: {name: zero}
time: {h_t: 0.1, t_final: 0.1}
)");
    std::ofstream(dir / "cfg.yaml") << cfg;
    const auto parsed = parse_config(dir / "cfg.yaml");
    for (std::size_t j = 0; j < u.size(); ++j) CHECK(parsed.sim.species[0].u0[j] == u[j]);
  }
  SUBCASE("mismatched snapshots are rejected") {
    auto g = build_grid(Domain::interval(0, 1, Boundary::Dirichlet), {4});
    write_snapshot({ScalarField(g)}, {"u"}, dir / "d.csv");
    auto other = build_grid(Domain::interval(0, 1, Boundary::Neumann), {4});
    CHECK_THROWS_AS(field_from_snapshot(other, read_snapshot(dir / "d.csv"), "u"), std::invalid_argument);
    CHECK_THROWS_AS(field_from_snapshot(g, read_snapshot(dir / "d.csv"), "w"), std::out_of_range);
    std::ofstream(dir / "e.csv") << "x,u\n0.5,abc\n";
    CHECK_THROWS(read_snapshot(dir / "e.csv"));
    CHECK_THROWS(read_snapshot(dir / "missing.csv"));
  }
}

TEST_CASE("summary documents") {
  const fs::path dir = scratch("summary");
  SUBCASE("empty check list") {
    RunSummary s;
    s.status = "completed";
    write_summary(s, {"u"}, {}, dir / "s.json");
    const auto j = read_json(dir / "s.json");
    CHECK(j["schema"] == 1);
    CHECK(j["checks"].is_array());
    CHECK(j["checks"].empty());
  }
  SUBCASE("series length follows the stride") {
    const RunSpec spec = parse_run_spec(kMinimal);
    const SimConfig cfg = build_sim_config(spec);
    const auto res = run(cfg);
    std::vector<CheckReport> reports = {make_inequality("demo", 1, 2, 0), check_quasi_positivity(*cfg.reaction, 10, 1)};
    write_summary(res.summary, {"u1", "u2"}, reports, dir / "r.json", to_json(spec));
    const auto j = read_json(dir / "r.json");
    const std::size_t steps = j["steps"];
    CHECK(steps == 10);
    const std::size_t expected = steps / 3 + (steps % 3 ? 1 : 0);
    CHECK(j["series"]["t"].size() == expected);
    CHECK(j["series"]["linf"][0].size() == expected);
    CHECK(j["series"]["mass"].size() == expected);
    CHECK(j["final"]["linf"][0] == res.summary.final_linf()[0]);
    CHECK(j["checks"].size() == 2);
    CHECK(j["checks"][0]["name"] == "demo");
    CHECK(j["checks"][1]["kind"] == "structure");
    CHECK(parse_run_spec(j["config"].dump()) == spec);
  }
}

TEST_CASE("identical configurations give bit-identical outputs") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  std::ofstream(a / "run.yaml") << kMinimal << "  snapshot_times: [0, 0.05]\n";
  std::ostringstream sink;
  CHECK(command_run(a / "run.yaml", {a / "out", std::nullopt, 1}, sink) == 0);
  CHECK(command_run(a / "run.yaml", {b / "out", std::nullopt, 1}, sink) == 0);
  for (const char* f : {"final.csv", "snapshot_000.csv", "snapshot_001.csv"})
    CHECK(slurp(a / "out" / f) == slurp(b / "out" / f));
  auto ja = read_json(a / "out" / "summary.json");
  auto jb = read_json(b / "out" / "summary.json");
  ja.erase("wall_clock_seconds");
  jb.erase("wall_clock_seconds");
  CHECK(ja == jb);
  CHECK(ja["snapshots"].size() == 2);
}

TEST_CASE("check and run commands report verdicts through the exit code") {
  const fs::path dir = scratch("commands");
  std::ostringstream out;
  CHECK(command_check(kConfigs / "table1_col1.cfg", {dir, 5, 1}, out) == 0);
  const auto j = read_json(dir / "checks.json");
  CHECK(j["checks"].size() == 2);
  CHECK(j["seed"] == 5);

  // M is violated by the Brusselator: the check command must fail.
  std::string text = std::string(kMinimal) + "checks: [quasi_positivity, mass_control]\n";
  text.replace(text.find("params: {a: 2, b: 1}"), 20, "params: {a: 2, b: 1}\n  mass_kind: M");
  std::ofstream(dir / "m.yaml") << text;
  CHECK(command_check(dir / "m.yaml", {}, out) == 1);

  std::string traj = std::string(kMinimal) + "checks: [trajectory_positivity, no_blow_up, mass_bound]\n";
  std::ofstream(dir / "t.yaml") << traj;
  CHECK(command_run(dir / "t.yaml", {dir / "t", std::nullopt, 1}, out) == 0);
  CHECK(read_json(dir / "t" / "summary.json")["checks"].size() == 4);
}

TEST_CASE("table definitions") {
  const auto fast1 = table_cells(TableId::T1, Budget::Fast);
  REQUIRE(fast1.size() == 2);
  CHECK(fast1[0].reference_u1 == 0.034593927);
  CHECK(fast1[0].reference_u2 == 0.147334012);
  CHECK(fast1[0].modes() == 199);
  CHECK(fast1[0].L == 1);
  CHECK(fast1[1].s1 == 0.9);
  CHECK(fast1[1].reference_u1 == 0.032958290);
  CHECK(fast1[1].reference_u2 == 0.231046944);
  const auto fast2 = table_cells(TableId::T2, Budget::Fast);
  CHECK(fast2[0].reference_u1 == 0.128912072);
  CHECK(fast2[0].reference_u2 == 0.215751920);
  CHECK(fast2[1].reference_u2 == 0.539477321);
  const auto full = table_cells(TableId::T2, Budget::Full);
  REQUIRE(full.size() == 8);
  CHECK(full[3].modes() == 1999);
  CHECK(full[3].L == 3);
  CHECK(full[1].modes() == 399);
  CHECK(full[2].modes() == 999);
  const RunSpec spec = table_cell_spec(fast1[0]);
  const RunSpec shipped = load_run_spec(kConfigs / "table1_col1.cfg");
  CHECK(spec.species.size() == shipped.species.size());
  for (std::size_t i = 0; i < spec.species.size(); ++i) {
    CHECK(spec.species[i].s == shipped.species[i].s);
    CHECK(spec.species[i].d == shipped.species[i].d);
    CHECK(Expression::parse(spec.species[i].u0.expression).evaluate(0.3, -0.2) ==
          Expression::parse(shipped.species[i].u0.expression).evaluate(0.3, -0.2));
  }
  CHECK(spec.modes == shipped.modes);
  CHECK(spec.h_t == shipped.h_t);
  CHECK(spec.steady_tol == shipped.steady_tol);
  CHECK(spec.species[0].u0.expression == "(1-x)^0.25*(1-y)^0.25");
  CHECK(table_from_string("T2") == TableId::T2);
  CHECK_THROWS_AS(table_from_string("T3"), std::invalid_argument);
  CHECK(budget_from_string("full") == Budget::Full);
}

TEST_CASE("heat convergence study reports first-order ratios") {
  const auto study = heat_convergence(0.5, 32, {4e-3, 2e-3});
  REQUIRE(study.rows.size() == 2);
  REQUIRE(study.rows[1].ratio.has_value());
  CHECK(*study.rows[1].ratio == Approx(2.0).epsilon(0.15));
}
