#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracrd/field.hpp"
#include "fracrd/reactions.hpp"
#include "fracrd/spectral.hpp"

namespace fracrd {

/// What the stepper does about negative undershoot produced by spectral
/// truncation.
enum class PositivityPolicy {
  None,             ///< evaluate f on the raw iterate
  ClampInReaction,  ///< evaluate f on max(u, 0); the state itself is untouched
  ClampState,       ///< clamp the state to max(u, 0) after every step
};

std::string to_string(PositivityPolicy p);
PositivityPolicy positivity_from_string(const std::string& name);

struct SpeciesSpec {
  std::string name;
  double s = 0.5;  ///< fractional order in (0, 1]
  double d = 1.0;  ///< diffusivity
  ScalarField u0;
};

/// Space-time source added to f_i, evaluated at the new time level t_{n+1}.
using SourceTerm = std::function<double(double t, std::span<const double> x)>;

struct StopRule {
  std::optional<double> t_final;
  /// Stop once the steady-state residual falls below this value.
  std::optional<double> steady_tol;
  std::size_t max_steps = 100'000'000;
};

struct SimConfig {
  GridPtr grid;
  std::vector<SpeciesSpec> species;
  std::shared_ptr<const ReactionSystem> reaction;
  /// Empty, or one (possibly empty) source per species.
  std::vector<SourceTerm> sources;
  double h_t = 1e-2;
  /// Exact number of fixed-point iterations L per step.
  std::size_t fixed_point_depth = 1;
  /// Optional early exit once the iterate change drops below this value.
  std::optional<double> fixed_point_tol;
  StopRule stop;
  std::vector<double> snapshot_times;
  /// Norm series are recorded every `record_stride` steps (and at the last step).
  std::size_t record_stride = 1;
  PositivityPolicy positivity = PositivityPolicy::ClampInReaction;
  /// Weights for the mass series; defaults to the reaction's declared weights.
  std::optional<std::vector<double>> mass_weights;
  /// Worker threads for per-species transforms within a step.
  unsigned threads = 1;

  /// Throws std::invalid_argument on any violated cross-field invariant.
  void validate() const;
  std::size_t species_count() const { return species.size(); }
};

struct SimState {
  double t = 0.0;
  std::vector<ScalarField> fields;
  std::vector<ModeCoeffs> coeffs;
  std::size_t step_index = 0;
};

struct StepInfo {
  /// max_i ||u_i^{n+1} - u_i^n||_inf / h_t
  double steady_residual = 0.0;
  /// Iterate change of the last fixed-point iteration, max over species.
  double fixed_point_change = 0.0;
  std::vector<double> iteration_changes;
};

/// Per-run time series. Entry r of every series belongs to step_indices[r];
/// records are taken at every multiple of the stride and at the final step.
struct RunSummary {
  std::string status = "running";  ///< completed | steady | max_steps | blow_up | fixed_point_divergence
  std::string message;
  double final_time = 0.0;
  std::size_t steps = 0;
  bool blew_up = false;

  std::vector<double> initial_linf;
  std::vector<double> initial_l2;
  double initial_mass = 0.0;

  std::vector<std::size_t> step_indices;
  std::vector<double> times;
  std::vector<std::vector<double>> linf;  ///< [species][record]
  std::vector<std::vector<double>> l2;
  std::vector<std::vector<double>> min;
  std::vector<double> mass;  ///< empty when no weights apply
  std::vector<double> steady_residual;
  std::vector<double> fixed_point_residual;

  std::vector<double> mass_weights;
  /// Minimum over every node and every step including t = 0, per species.
  std::vector<double> space_time_min;
  double max_fixed_point_residual = 0.0;
  double wall_clock_seconds = 0.0;

  std::vector<double> final_linf() const;
  bool ok() const { return status == "completed" || status == "steady"; }
};

struct Snapshot {
  double requested_time = 0.0;
  double time = 0.0;
  std::size_t step = 0;
  std::vector<ScalarField> fields;
};

struct RunResult {
  RunSummary summary;
  std::vector<Snapshot> snapshots;
  SimState final_state;
};

/// Backward Euler in time, exact per-mode diffusion solve, L-deep fixed
/// point on the reaction:
///   u_k^{n+1,l} = (u_k^n + h_t f_k(u^{n+1,l-1})) / (1 + d lambda_k^s h_t)
/// with u^{n+1,0} = u^n.
class Stepper {
 public:
  explicit Stepper(SimConfig config);

  const SimConfig& config() const { return config_; }
  const SpectralBasis& basis() const { return *basis_; }

  SimState initial_state() const;

  /// Advances state by one step in place. Throws BlowUpError or
  /// FixedPointDivergence; state is left unchanged when it throws.
  StepInfo advance(SimState& state);

 private:
  SimConfig config_;
  std::shared_ptr<const SpectralBasis> basis_;
  std::vector<std::vector<double>> denominators_;

  // Work buffers reused across steps.
  std::vector<ScalarField> iterate_;
  std::vector<ScalarField> next_;
  std::vector<ScalarField> reaction_;
  std::vector<ModeCoeffs> reaction_hat_;
  std::vector<ModeCoeffs> next_hat_;
  std::vector<std::vector<double>> node_coordinates_;

  void evaluate_reaction(double t_next);
  void update_species(std::size_t i, const SimState& state);
};

/// One step from `state` (the free-function form; builds a Stepper).
SimState step(const SimState& state, const SimConfig& config);

/// Runs until t_final or the steady tolerance is reached. Errors during
/// stepping end the run early and are reported through summary.status.
RunResult run(const SimConfig& config);

/// max over species of ||next - prev||_inf / h_t.
double steady_state_residual(const SimState& prev, const SimState& next, double h_t);

}  // namespace fracrd
