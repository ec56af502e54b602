#include "fracrd/reactions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace fracrd {

std::string to_string(MassKind kind) { return kind == MassKind::M ? "M" : "Mprime"; }

MassKind mass_kind_from_string(const std::string& name) {
  if (name == "M") return MassKind::M;
  if (name == "Mprime" || name == "M'") return MassKind::Mprime;
  throw std::invalid_argument("unknown mass-control kind '" + name + "'");
}

std::string to_string(StructuralProperty p) {
  switch (p) {
    case StructuralProperty::P: return "P";
    case StructuralProperty::M: return "M";
    case StructuralProperty::Mprime: return "Mprime";
  }
  return "?";
}

ReactionSystem::ReactionSystem(std::string name, std::size_t species,
                               std::map<std::string, double> params, Eval eval,
                               std::optional<MassWeights> mass)
    : name_(std::move(name)), m_(species), params_(std::move(params)), eval_(std::move(eval)),
      mass_(std::move(mass)) {
  if (m_ < 1) throw std::invalid_argument("a reaction system needs at least one species");
  if (!eval_) throw std::invalid_argument("reaction system without evaluator");
  if (mass_) {
    if (mass_->weights.size() != m_)
      throw std::invalid_argument("mass weights do not match species count");
    for (double w : mass_->weights)
      if (!(w > 0.0)) throw std::invalid_argument("mass weights must be strictly positive");
  }
}

double ReactionSystem::param(const std::string& key) const {
  auto it = params_.find(key);
  if (it == params_.end()) throw std::out_of_range("reaction '" + name_ + "' has no parameter " + key);
  return it->second;
}

double reaction_power(double base, double exponent) {
  if (exponent == std::floor(exponent)) return std::pow(base, exponent);
  if (base < 0.0) {
    if (base < -kUndershootLimit)
      throw std::domain_error("non-integer power of negative value " + std::to_string(base));
    return 0.0;
  }
  return std::pow(base, exponent);
}

ReactionSystem brusselator(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("brusselator needs a > 0 and b > 0");
  auto eval = [a, b](std::span<const double> r, std::span<double> out) {
    const double u1 = r[0];
    const double u2 = r[1];
    const double cubic = u1 * u2 * u2;
    out[0] = -cubic + b * u2;
    out[1] = cubic - (b + 1.0) * u2 + a;
  };
  return ReactionSystem("brusselator", 2, {{"a", a}, {"b", b}}, eval,
                        MassWeights{{1.0, 1.0}, MassKind::Mprime, a});
}

ReactionSystem reversible_abg(double alpha, double beta, double gamma) {
  if (!(alpha >= 1.0) || !(beta >= 1.0) || !(gamma >= 1.0))
    throw std::invalid_argument("reversible_abg needs alpha, beta, gamma >= 1");
  auto eval = [alpha, beta, gamma](std::span<const double> r, std::span<double> out) {
    const double g = reaction_power(r[2], gamma) -
                     reaction_power(r[0], alpha) * reaction_power(r[1], beta);
    out[0] = alpha * g;
    out[1] = beta * g;
    out[2] = -gamma * g;
  };
  return ReactionSystem("reversible_abg", 3, {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}},
                        eval,
                        MassWeights{{beta * gamma, alpha * gamma, 2.0 * alpha * beta}, MassKind::M, 0.0});
}

ReactionSystem zero_reaction(std::size_t species) {
  std::vector<double> ones(species, 1.0);
  return ReactionSystem("zero", species, {},
                        [](std::span<const double>, std::span<double> out) {
                          std::fill(out.begin(), out.end(), 0.0);
                        },
                        MassWeights{ones, MassKind::M, 0.0});
}

ReactionSystem constant_reaction(std::vector<double> values) {
  std::map<std::string, double> params;
  for (std::size_t i = 0; i < values.size(); ++i) params["c" + std::to_string(i + 1)] = values[i];
  const std::size_t m = values.size();
  return ReactionSystem("constant", m, std::move(params),
                        [values = std::move(values)](std::span<const double>, std::span<double> out) {
                          std::copy(values.begin(), values.end(), out.begin());
                        });
}

ReactionSystem linear_decay(std::size_t species, double rate) {
  std::vector<double> ones(species, 1.0);
  std::optional<MassWeights> mass;
  if (rate >= 0.0) mass = MassWeights{ones, MassKind::M, 0.0};
  return ReactionSystem("linear_decay", species, {{"rate", rate}},
                        [rate](std::span<const double> r, std::span<double> out) {
                          for (std::size_t i = 0; i < out.size(); ++i) out[i] = -rate * r[i];
                        },
                        std::move(mass));
}

ReactionSystem polynomial_system(std::string name, std::vector<std::vector<Monomial>> terms,
                                 std::optional<MassWeights> mass) {
  const std::size_t m = terms.size();
  for (const auto& species_terms : terms)
    for (const auto& t : species_terms)
      if (t.exponents.size() != m)
        throw std::invalid_argument("monomial exponent count must equal the species count");
  auto eval = [terms = std::move(terms)](std::span<const double> r, std::span<double> out) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      double acc = 0.0;
      for (const auto& t : terms[i]) {
        double v = t.coefficient;
        for (std::size_t j = 0; j < t.exponents.size(); ++j)
          if (t.exponents[j] != 0.0) v *= reaction_power(r[j], t.exponents[j]);
        acc += v;
      }
      out[i] = acc;
    }
  };
  return ReactionSystem(std::move(name), m, {}, std::move(eval), std::move(mass));
}

ReactionSystem make_reaction(const std::string& name, const std::map<std::string, double>& params,
                             std::size_t species_hint) {
  auto get = [&](const std::string& key) {
    auto it = params.find(key);
    if (it == params.end())
      throw std::invalid_argument("reaction '" + name + "' requires parameter '" + key + "'");
    return it->second;
  };
  auto require_only = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : params) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
        throw std::invalid_argument("reaction '" + name + "' has no parameter '" + key + "'");
    }
  };
  if (name == "brusselator") {
    require_only({"a", "b"});
    return brusselator(get("a"), get("b"));
  }
  if (name == "reversible_abg") {
    require_only({"alpha", "beta", "gamma"});
    return reversible_abg(get("alpha"), get("beta"), get("gamma"));
  }
  if (name == "zero") {
    require_only({});
    return zero_reaction(species_hint == 0 ? 1 : species_hint);
  }
  if (name == "linear_decay") {
    require_only({"rate"});
    return linear_decay(species_hint == 0 ? 1 : species_hint, get("rate"));
  }
  if (name == "constant") {
    std::vector<double> values;
    for (std::size_t i = 1;; ++i) {
      auto it = params.find("c" + std::to_string(i));
      if (it == params.end()) break;
      values.push_back(it->second);
    }
    if (values.empty() || values.size() != params.size())
      throw std::invalid_argument("reaction 'constant' expects parameters c1, c2, ...");
    return constant_reaction(std::move(values));
  }
  throw std::invalid_argument("unknown reaction '" + name + "'");
}

std::vector<double> eval_reaction(const ReactionSystem& sys, std::span<const double> r) {
  if (r.size() != sys.species())
    throw std::invalid_argument("state has " + std::to_string(r.size()) + " components, reaction '" +
                                sys.name() + "' expects " + std::to_string(sys.species()));
  for (double v : r)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite reaction input");
  std::vector<double> out(sys.species());
  sys.evaluate(r, out);
  return out;
}

StructureReport check_quasi_positivity(const ReactionSystem& sys, std::size_t n_samples,
                                       std::uint64_t seed, double box) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be at least 1");
  const std::size_t m = sys.species();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, box);

  StructureReport report;
  report.property = StructuralProperty::P;
  report.worst_violation = -std::numeric_limits<double>::infinity();
  std::vector<double> r(m), f(m);
  for (std::size_t n = 0; n < n_samples; ++n) {
    for (auto& v : r) v = dist(rng);
    for (std::size_t i = 0; i < m; ++i) {
      const double saved = r[i];
      r[i] = 0.0;
      sys.evaluate(r, f);
      const double violation = -f[i];
      if (violation > report.worst_violation) {
        report.worst_violation = violation;
        report.witness = r;
      }
      r[i] = saved;
    }
    ++report.samples_tested;
  }
  if (report.held()) report.witness.reset();
  return report;
}

StructureReport check_mass_control(const ReactionSystem& sys, std::span<const double> weights,
                                   MassKind kind, std::size_t n_samples, std::uint64_t seed,
                                   double growth, double box) {
  const std::size_t m = sys.species();
  if (weights.size() != m)
    throw std::invalid_argument("weight vector has " + std::to_string(weights.size()) +
                                " entries for " + std::to_string(m) + " species");
  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("mass weights must be strictly positive");
  if (n_samples < 1) throw std::invalid_argument("n_samples must be at least 1");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, box);

  StructureReport report;
  report.property = kind == MassKind::M ? StructuralProperty::M : StructuralProperty::Mprime;
  report.worst_violation = -std::numeric_limits<double>::infinity();
  std::vector<double> r(m), f(m);

  auto probe = [&](const std::vector<double>& point) {
    sys.evaluate(point, f);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += weights[i] * f[i];
    if (kind == MassKind::Mprime) {
      double total = 1.0;
      for (double v : point) total += v;
      sum -= growth * total;
    }
    if (sum > report.worst_violation) {
      report.worst_violation = sum;
      report.witness = point;
    }
  };

  for (std::size_t n = 0; n < n_samples; ++n) {
    for (auto& v : r) v = dist(rng);
    probe(r);
    for (std::size_t i = 0; i < m; ++i) {
      const double saved = r[i];
      r[i] = 0.0;
      probe(r);
      r[i] = saved;
    }
    ++report.samples_tested;
  }
  if (report.held()) report.witness.reset();
  return report;
}

}  // namespace fracrd
