#include "fracrd/stepper.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <stdexcept>
#include <string>

#include "fracrd/errors.hpp"
#include "fracrd/norms.hpp"

namespace fracrd {

std::string to_string(PositivityPolicy p) {
  switch (p) {
    case PositivityPolicy::None: return "none";
    case PositivityPolicy::ClampInReaction: return "clamp_in_reaction";
    case PositivityPolicy::ClampState: return "clamp_state";
  }
  return "?";
}

PositivityPolicy positivity_from_string(const std::string& name) {
  if (name == "none") return PositivityPolicy::None;
  if (name == "clamp_in_reaction") return PositivityPolicy::ClampInReaction;
  if (name == "clamp_state") return PositivityPolicy::ClampState;
  throw std::invalid_argument("unknown positivity policy '" + name + "'");
}

void SimConfig::validate() const {
  if (!grid) throw std::invalid_argument("configuration has no grid");
  if (!reaction) throw std::invalid_argument("configuration has no reaction system");
  if (species.empty()) throw std::invalid_argument("configuration has no species");
  if (species.size() != reaction->species())
    throw std::invalid_argument("configuration has " + std::to_string(species.size()) +
                                " species but reaction '" + reaction->name() + "' has " +
                                std::to_string(reaction->species()));
  for (const auto& sp : species) {
    if (!(sp.s > 0.0 && sp.s <= 1.0))
      throw std::invalid_argument("species '" + sp.name + "': s must lie in (0, 1]");
    if (!(sp.d > 0.0)) throw std::invalid_argument("species '" + sp.name + "': d must be positive");
    if (!sp.u0.grid_ptr() || !sp.u0.grid().same_layout(*grid))
      throw std::invalid_argument("species '" + sp.name + "': initial field is not on the grid");
    if (!sp.u0.all_finite())
      throw std::invalid_argument("species '" + sp.name + "': initial field is not finite");
  }
  if (!sources.empty() && sources.size() != species.size())
    throw std::invalid_argument("sources must be empty or given per species");
  if (!(h_t > 0.0) || !std::isfinite(h_t)) throw std::invalid_argument("h_t must be positive");
  if (fixed_point_depth < 1) throw std::invalid_argument("fixed-point depth L must be at least 1");
  if (!stop.t_final && !stop.steady_tol)
    throw std::invalid_argument("one of t_final or steady_tol is required");
  if (stop.t_final && !(*stop.t_final >= 0.0)) throw std::invalid_argument("t_final must be >= 0");
  if (stop.steady_tol && !(*stop.steady_tol > 0.0))
    throw std::invalid_argument("steady_tol must be positive");
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    throw std::invalid_argument("snapshot_times must be sorted");
  for (double t : snapshot_times) {
    if (t < 0.0 || (stop.t_final && t > *stop.t_final))
      throw std::invalid_argument("snapshot time " + std::to_string(t) + " outside [0, t_final]");
  }
  if (record_stride < 1) throw std::invalid_argument("record stride must be at least 1");
  if (mass_weights && mass_weights->size() != species.size())
    throw std::invalid_argument("mass weights do not match species count");
}

std::vector<double> RunSummary::final_linf() const {
  std::vector<double> out;
  for (const auto& series : linf) out.push_back(series.empty() ? 0.0 : series.back());
  return out;
}

Stepper::Stepper(SimConfig config) : config_(std::move(config)) {
  config_.validate();
  basis_ = basis_for(config_.grid);
  const std::size_t m = config_.species.size();
  for (const auto& sp : config_.species) {
    auto lambda_s = basis_->fractional_eigenvalues(sp.s);
    for (double& v : lambda_s) v = 1.0 + sp.d * v * config_.h_t;
    denominators_.push_back(std::move(lambda_s));
  }
  for (std::size_t i = 0; i < m; ++i) {
    iterate_.emplace_back(config_.grid);
    next_.emplace_back(config_.grid);
    reaction_.emplace_back(config_.grid);
    reaction_hat_.emplace_back(config_.grid);
    next_hat_.emplace_back(config_.grid);
  }
  if (!config_.sources.empty()) {
    for (std::size_t j = 0; j < config_.grid->size(); ++j)
      node_coordinates_.push_back(config_.grid->coordinates(j));
  }
}

SimState Stepper::initial_state() const {
  SimState state;
  for (const auto& sp : config_.species) {
    state.fields.push_back(sp.u0);
    state.coeffs.push_back(basis_->forward(sp.u0));
  }
  return state;
}

void Stepper::evaluate_reaction(double t_next) {
  const std::size_t m = config_.species.size();
  const std::size_t n = config_.grid->size();
  const bool clamp = config_.positivity == PositivityPolicy::ClampInReaction;
  std::vector<double> r(m), f(m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const double v = iterate_[i][j];
      r[i] = clamp ? std::max(v, 0.0) : v;
    }
    config_.reaction->evaluate(r, f);
    for (std::size_t i = 0; i < m; ++i) reaction_[i][j] = f[i];
  }
  if (config_.sources.empty()) return;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& src = config_.sources[i];
    if (!src) continue;
    for (std::size_t j = 0; j < n; ++j) reaction_[i][j] += src(t_next, node_coordinates_[j]);
  }
}

void Stepper::update_species(std::size_t i, const SimState& state) {
  basis_->forward(reaction_[i], reaction_hat_[i]);
  const auto& denom = denominators_[i];
  const auto& u_hat = state.coeffs[i];
  auto& out = next_hat_[i];
  const double h_t = config_.h_t;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (u_hat[k] + h_t * reaction_hat_[i][k]) / denom[k];
  basis_->inverse(out, next_[i]);
}

StepInfo Stepper::advance(SimState& state) {
  const std::size_t m = config_.species.size();
  const std::size_t step_no = state.step_index + 1;
  const double t_next = static_cast<double>(step_no) * config_.h_t;
  StepInfo info;

  for (std::size_t i = 0; i < m; ++i) iterate_[i] = state.fields[i];

  for (std::size_t l = 1; l <= config_.fixed_point_depth; ++l) {
    evaluate_reaction(t_next);
    if (config_.threads > 1 && m > 1) {
      std::vector<std::future<void>> jobs;
      for (std::size_t i = 1; i < m; ++i)
        jobs.push_back(std::async(std::launch::async, [this, i, &state] { update_species(i, state); }));
      update_species(0, state);
      for (auto& j : jobs) j.get();
    } else {
      for (std::size_t i = 0; i < m; ++i) update_species(i, state);
    }

    double change = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!next_[i].all_finite())
        throw BlowUpError(step_no, i,
                          "non-finite values in species '" + config_.species[i].name + "' at step " +
                              std::to_string(step_no));
      for (std::size_t j = 0; j < next_[i].size(); ++j)
        change = std::max(change, std::abs(next_[i][j] - iterate_[i][j]));
    }
    info.iteration_changes.push_back(change);
    std::swap(iterate_, next_);
    if (config_.fixed_point_tol && change < *config_.fixed_point_tol) break;
  }

  const auto& changes = info.iteration_changes;
  info.fixed_point_change = changes.back();
  if (changes.size() >= 2 && changes.front() > 0.0 && changes.back() > 10.0 * changes.front())
    throw FixedPointDivergence(step_no, changes.front(), changes.back(),
                               "fixed-point iteration diverged at step " + std::to_string(step_no));

  if (config_.positivity == PositivityPolicy::ClampState) {
    for (std::size_t i = 0; i < m; ++i) {
      for (double& v : iterate_[i].values()) v = std::max(v, 0.0);
      basis_->forward(iterate_[i], next_hat_[i]);
    }
  }

  double residual = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < iterate_[i].size(); ++j)
      residual = std::max(residual, std::abs(iterate_[i][j] - state.fields[i][j]));
  info.steady_residual = residual / config_.h_t;

  for (std::size_t i = 0; i < m; ++i) {
    std::swap(state.fields[i], iterate_[i]);
    std::swap(state.coeffs[i], next_hat_[i]);
  }
  state.t = t_next;
  state.step_index = step_no;
  return info;
}

SimState step(const SimState& state, const SimConfig& config) {
  Stepper stepper(config);
  if (state.fields.size() != config.species.size() || state.coeffs.size() != config.species.size())
    throw std::invalid_argument("state does not match configuration");
  for (std::size_t i = 0; i < state.fields.size(); ++i) {
    if (!state.fields[i].grid().same_layout(*config.grid) ||
        !state.coeffs[i].grid().same_layout(*config.grid))
      throw std::invalid_argument("state is not on the configured grid");
  }
  SimState next = state;
  stepper.advance(next);
  return next;
}

double steady_state_residual(const SimState& prev, const SimState& next, double h_t) {
  if (prev.fields.size() != next.fields.size())
    throw std::invalid_argument("states have different species counts");
  if (!(h_t > 0.0)) throw std::invalid_argument("h_t must be positive");
  double residual = 0.0;
  for (std::size_t i = 0; i < prev.fields.size(); ++i) {
    const auto& a = prev.fields[i];
    const auto& b = next.fields[i];
    if (!a.grid().same_layout(b.grid())) throw std::invalid_argument("state shape mismatch");
    for (std::size_t j = 0; j < a.size(); ++j) residual = std::max(residual, std::abs(b[j] - a[j]));
  }
  return residual / h_t;
}

namespace {

double weighted_mass(const std::vector<ScalarField>& fields, const std::vector<double>& weights) {
  double total = 0.0;
  for (std::size_t i = 0; i < fields.size(); ++i) total += weights[i] * mean(fields[i]);
  return total;
}

}  // namespace

RunResult run(const SimConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  Stepper stepper(config);
  const SimConfig& cfg = stepper.config();
  const std::size_t m = cfg.species.size();

  RunResult result;
  RunSummary& sum = result.summary;
  SimState state = stepper.initial_state();

  if (cfg.mass_weights)
    sum.mass_weights = *cfg.mass_weights;
  else if (cfg.reaction->mass())
    sum.mass_weights = cfg.reaction->mass()->weights;
  const bool track_mass = !sum.mass_weights.empty();

  sum.linf.resize(m);
  sum.l2.resize(m);
  sum.min.resize(m);
  sum.space_time_min.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    sum.initial_linf.push_back(state.fields[i].max_abs());
    sum.initial_l2.push_back(lp_norm(state.fields[i], 2.0).value);
    sum.space_time_min[i] = state.fields[i].min();
  }
  if (track_mass) sum.initial_mass = weighted_mass(state.fields, sum.mass_weights);

  std::size_t next_snapshot = 0;
  const double half_step = 0.5 * cfg.h_t;
  auto take_snapshots = [&](bool final_state) {
    while (next_snapshot < cfg.snapshot_times.size()) {
      const double want = cfg.snapshot_times[next_snapshot];
      if (!final_state && want - state.t > half_step) break;
      result.snapshots.push_back({want, state.t, state.step_index, state.fields});
      ++next_snapshot;
    }
  };

  StepInfo last;
  std::size_t last_recorded = 0;
  auto record = [&] {
    sum.step_indices.push_back(state.step_index);
    sum.times.push_back(state.t);
    for (std::size_t i = 0; i < m; ++i) {
      sum.linf[i].push_back(state.fields[i].max_abs());
      sum.l2[i].push_back(lp_norm(state.fields[i], 2.0).value);
      sum.min[i].push_back(state.fields[i].min());
    }
    if (track_mass) sum.mass.push_back(weighted_mass(state.fields, sum.mass_weights));
    sum.steady_residual.push_back(last.steady_residual);
    sum.fixed_point_residual.push_back(last.fixed_point_change);
    last_recorded = state.step_index;
  };

  take_snapshots(false);
  const double t_stop = cfg.stop.t_final ? *cfg.stop.t_final * (1.0 - 1e-12) : kInfinity;
  try {
    while (true) {
      if (state.t >= t_stop) {
        sum.status = "completed";
        break;
      }
      if (state.step_index >= cfg.stop.max_steps) {
        sum.status = "max_steps";
        sum.message = "step limit reached before the stopping criterion";
        break;
      }
      last = stepper.advance(state);
      sum.max_fixed_point_residual = std::max(sum.max_fixed_point_residual, last.fixed_point_change);
      for (std::size_t i = 0; i < m; ++i)
        sum.space_time_min[i] = std::min(sum.space_time_min[i], state.fields[i].min());
      take_snapshots(false);
      if (state.step_index % cfg.record_stride == 0) record();
      if (cfg.stop.steady_tol && last.steady_residual < *cfg.stop.steady_tol) {
        sum.status = "steady";
        break;
      }
    }
  } catch (const BlowUpError& e) {
    sum.status = "blow_up";
    sum.blew_up = true;
    sum.message = e.what();
  } catch (const FixedPointDivergence& e) {
    sum.status = "fixed_point_divergence";
    sum.message = e.what();
  }

  if (state.step_index > 0 && last_recorded != state.step_index) record();
  // Snapshots scheduled past a steady stop are served from the final state.
  if (sum.ok()) take_snapshots(true);

  sum.steps = state.step_index;
  sum.final_time = state.t;
  sum.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  result.final_state = std::move(state);
  return result;
}

}  // namespace fracrd
