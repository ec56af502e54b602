#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fracrd {

/// Which mass-control hypothesis a weight vector is declared to satisfy:
/// M is sum a_i f_i <= 0, Mprime allows linear growth.
enum class MassKind { M, Mprime };

std::string to_string(MassKind kind);
MassKind mass_kind_from_string(const std::string& name);

struct MassWeights {
  std::vector<double> weights;
  MassKind kind = MassKind::M;
  /// Linear-growth constant C used when kind == Mprime.
  double growth = 0.0;
};

/// Pointwise reaction vector field f : R^m -> R^m.
///
/// Immutable once constructed and safe to share between threads.
class ReactionSystem {
 public:
  using Eval = std::function<void(std::span<const double> r, std::span<double> out)>;

  ReactionSystem(std::string name, std::size_t species, std::map<std::string, double> params,
                 Eval eval, std::optional<MassWeights> mass = std::nullopt);

  const std::string& name() const { return name_; }
  std::size_t species() const { return m_; }
  const std::map<std::string, double>& params() const { return params_; }
  double param(const std::string& key) const;
  const std::optional<MassWeights>& mass() const { return mass_; }

  /// Unchecked evaluation; out must have species() entries.
  void evaluate(std::span<const double> r, std::span<double> out) const { eval_(r, out); }

 private:
  std::string name_;
  std::size_t m_;
  std::map<std::string, double> params_;
  Eval eval_;
  std::optional<MassWeights> mass_;
};

/// How far below zero a base may fall before a non-integer power refuses it.
/// Smaller undershoots are evaluated on max(u, 0).
inline constexpr double kUndershootLimit = 1e-6;

/// u^p for reaction terms. Integer p is evaluated directly; otherwise the
/// base is clamped to zero when it undershoots by at most kUndershootLimit
/// and std::domain_error is thrown beyond that.
double reaction_power(double base, double exponent);

/// f1 = -u1 u2^2 + b u2, f2 = u1 u2^2 - (b + 1) u2 + a; weights (1, 1) of kind Mprime with C = a.
ReactionSystem brusselator(double a, double b);

/// Reversible reaction with g = u3^gamma - u1^alpha u2^beta and
/// f = (alpha g, beta g, -gamma g); weights (beta gamma, alpha gamma, 2 alpha beta) of kind M.
ReactionSystem reversible_abg(double alpha, double beta, double gamma);

/// f = 0 for m species.
ReactionSystem zero_reaction(std::size_t species);

/// f_i = c_i, independent of the state.
ReactionSystem constant_reaction(std::vector<double> values);

/// f_i = -rate * u_i.
ReactionSystem linear_decay(std::size_t species, double rate);

struct Monomial {
  double coefficient = 0.0;
  std::vector<double> exponents;
};

/// f_i = sum over terms[i] of coefficient * prod_j u_j^exponent_j.
ReactionSystem polynomial_system(std::string name, std::vector<std::vector<Monomial>> terms,
                                 std::optional<MassWeights> mass = std::nullopt);

/// Builds a system by registered name ("brusselator", "reversible_abg",
/// "zero", "linear_decay", "constant") from named parameters.
ReactionSystem make_reaction(const std::string& name, const std::map<std::string, double>& params,
                             std::size_t species_hint = 0);

/// Checked evaluation: rejects non-finite input and arity mismatch.
std::vector<double> eval_reaction(const ReactionSystem& sys, std::span<const double> r);

enum class StructuralProperty { P, M, Mprime };

std::string to_string(StructuralProperty p);

struct StructureReport {
  StructuralProperty property = StructuralProperty::P;
  std::size_t samples_tested = 0;
  /// Largest sampled violation; <= 0 means the property held on all samples.
  double worst_violation = 0.0;
  std::optional<std::vector<double>> witness;

  bool held() const { return worst_violation <= 0.0; }
};

inline constexpr double kDefaultSamplingBox = 10.0;

/// Samples r uniformly in [0, box]^m and, for each species i, evaluates
/// -f_i at r with r_i zeroed.
StructureReport check_quasi_positivity(const ReactionSystem& sys, std::size_t n_samples,
                                       std::uint64_t seed, double box = kDefaultSamplingBox);

/// Kind M: worst of sum a_i f_i(r). Kind Mprime: worst of
/// sum a_i f_i(r) - growth * (1 + sum r_i). Samples include every
/// coordinate face (one component zeroed) besides the interior point.
StructureReport check_mass_control(const ReactionSystem& sys, std::span<const double> weights,
                                   MassKind kind, std::size_t n_samples, std::uint64_t seed,
                                   double growth = 0.0, double box = kDefaultSamplingBox);

}  // namespace fracrd
