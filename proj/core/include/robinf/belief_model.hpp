#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "robinf/random.hpp"

namespace robinf {

enum class VariableRole { hypothesis, evidence, latent };

/// Thrown by marginal() when the conditioning event has no mass.
class ZeroConditioningMass : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Full assignment of every variable; bit k holds the value of variable k.
struct WorldState {
  std::uint32_t bits = 0;

  bool value(std::size_t variable) const noexcept { return (bits >> variable) & 1u; }
  friend bool operator==(WorldState, WorldState) = default;
};

/// Assignment of the evidence variables only; bit i holds the value of the
/// i-th evidence variable in Topology::evidence() order.
struct EvidentialState {
  std::uint32_t bits = 0;

  bool value(std::size_t evidence_slot) const noexcept {
    return (bits >> evidence_slot) & 1u;
  }
  friend bool operator==(EvidentialState, EvidentialState) = default;
};

/// Binary variables in chain order. Variable 0 is the hypothesis; the
/// remaining variables are evidence or latent.
class Topology {
 public:
  explicit Topology(std::vector<VariableRole> roles);

  /// H plus four evidence items A-D.
  static Topology prototypical();
  /// Same five-node chain with A latent; evidence is {B, C, D}.
  static Topology hierarchical();

  std::size_t variable_count() const noexcept { return roles_.size(); }
  std::size_t world_state_count() const noexcept { return std::size_t{1} << roles_.size(); }
  std::size_t evidential_state_count() const noexcept {
    return std::size_t{1} << evidence_.size();
  }
  static constexpr std::size_t hypothesis() noexcept { return 0; }

  VariableRole role(std::size_t variable) const { return roles_.at(variable); }
  std::span<const std::size_t> evidence() const noexcept { return evidence_; }

  EvidentialState evidential_state_of(WorldState state) const noexcept;

  /// Single-letter label used in dumps: H, A, B, ...
  static char label(std::size_t variable) noexcept;

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  std::vector<VariableRole> roles_;
  std::vector<std::size_t> evidence_;
};

/// Conditional probability tables for the chain X0, X1|X0, X2|X0 X1, ...
///
/// Table k holds P(X_k = T | context) for the 2^k assignments of
/// X_0..X_{k-1}; the context index uses bit j for X_j, so the context of a
/// world state s is simply s & (2^k - 1).
class ChainParameters {
 public:
  explicit ChainParameters(std::vector<std::vector<double>> tables);

  /// Every entry equal to `value`.
  static ChainParameters constant(std::size_t variables, double value);

  std::size_t variable_count() const noexcept { return tables_.size(); }
  std::size_t entry_count() const noexcept;

  double at(std::size_t variable, std::size_t context) const {
    return tables_.at(variable).at(context);
  }
  std::span<const double> table(std::size_t variable) const { return tables_.at(variable); }

  /// Entries flattened in chain order (H first, then A's two contexts, ...).
  std::vector<double> flatten() const;

  /// Returns a copy whose entries are `fn(entry)` applied in flatten() order.
  template <typename Fn>
  ChainParameters transformed(Fn&& fn) const {
    auto tables = tables_;
    for (auto& table : tables)
      for (auto& entry : table) entry = fn(entry);
    return ChainParameters(std::move(tables));
  }

  friend bool operator==(const ChainParameters&, const ChainParameters&) = default;

 private:
  std::vector<std::vector<double>> tables_;
};

/// Partial assignment used for marginal queries. An empty event is the
/// sure event.
struct Event {
  std::uint32_t mask = 0;
  std::uint32_t values = 0;

  Event& set(std::size_t variable, bool value) {
    mask |= 1u << variable;
    if (value)
      values |= 1u << variable;
    else
      values &= ~(1u << variable);
    return *this;
  }
  bool holds(WorldState state) const noexcept { return (state.bits & mask) == values; }
  Event conjoined(const Event& other) const noexcept;
  bool contradicts(const Event& other) const noexcept {
    return ((mask & other.mask) & (values ^ other.values)) != 0;
  }
};

/// Dense table of 2^n world-state masses.
class JointDistribution {
 public:
  explicit JointDistribution(std::vector<double> masses);

  std::size_t variable_count() const noexcept { return variables_; }
  std::span<const double> masses() const noexcept { return masses_; }
  double mass(WorldState state) const { return masses_.at(state.bits); }

  double probability(const Event& event) const noexcept;

  /// Recovers the chain parameters; contexts with zero mass get 0.5.
  ChainParameters to_chain() const;

  /// CSV with one row per world state: the state bits (H first) and mass.
  void write_csv(std::ostream& out) const;

 private:
  std::size_t variables_;
  std::vector<double> masses_;
};

/// Per evidential state, P(e, H=T) and P(e, H=F). Every metric and the
/// Proper Bayes procedure are computed from this split.
struct HypothesisSplit {
  std::vector<double> with_hypothesis;
  std::vector<double> without_hypothesis;

  std::size_t size() const noexcept { return with_hypothesis.size(); }
  double state_mass(std::size_t e) const noexcept {
    return with_hypothesis[e] + without_hypothesis[e];
  }
};

ChainParameters sample_true_model(RandomStream& rng, const Topology& topology);

JointDistribution to_joint(const ChainParameters& params);

/// P(target | given). Throws ZeroConditioningMass when P(given) <= 0.
double marginal(const JointDistribution& joint, const Event& target, const Event& given = {});

HypothesisSplit split_by_hypothesis(const JointDistribution& joint, const Topology& topology);

/// P(H=T | e) for every evidential state; states without mass are empty.
std::vector<std::optional<double>> posterior_table(const JointDistribution& joint,
                                                   const Topology& topology);

/// Event fixing every evidence variable to the values in `state`.
Event evidence_event(const Topology& topology, EvidentialState state);

}  // namespace robinf
