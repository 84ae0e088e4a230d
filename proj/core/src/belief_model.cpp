#include "robinf/belief_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <string>

namespace robinf {
namespace {

constexpr std::size_t kMaxVariables = 20;

}  // namespace

Topology::Topology(std::vector<VariableRole> roles) : roles_(std::move(roles)) {
  if (roles_.empty() || roles_.size() > kMaxVariables)
    throw std::invalid_argument("topology must have between 1 and 20 variables");
  if (roles_.front() != VariableRole::hypothesis)
    throw std::invalid_argument("variable 0 must be the hypothesis");
  if (std::count(roles_.begin(), roles_.end(), VariableRole::hypothesis) != 1)
    throw std::invalid_argument("topology must have exactly one hypothesis variable");
  for (std::size_t v = 0; v < roles_.size(); ++v)
    if (roles_[v] == VariableRole::evidence) evidence_.push_back(v);
  if (evidence_.empty()) throw std::invalid_argument("topology has no evidence variables");
}

Topology Topology::prototypical() {
  using enum VariableRole;
  return Topology({hypothesis, evidence, evidence, evidence, evidence});
}

Topology Topology::hierarchical() {
  using enum VariableRole;
  return Topology({hypothesis, latent, evidence, evidence, evidence});
}

EvidentialState Topology::evidential_state_of(WorldState state) const noexcept {
  EvidentialState e;
  for (std::size_t slot = 0; slot < evidence_.size(); ++slot)
    if (state.value(evidence_[slot])) e.bits |= 1u << slot;
  return e;
}

char Topology::label(std::size_t variable) noexcept {
  return variable == 0 ? 'H' : static_cast<char>('A' + variable - 1);
}

ChainParameters::ChainParameters(std::vector<std::vector<double>> tables)
    : tables_(std::move(tables)) {
  if (tables_.empty() || tables_.size() > kMaxVariables)
    throw std::invalid_argument("chain must have between 1 and 20 variables");
  for (std::size_t k = 0; k < tables_.size(); ++k) {
    if (tables_[k].size() != (std::size_t{1} << k))
      throw std::invalid_argument("chain table " + std::to_string(k) + " must have " +
                                  std::to_string(std::size_t{1} << k) + " entries");
    for (double p : tables_[k])
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("chain entries must be probabilities");
  }
}

ChainParameters ChainParameters::constant(std::size_t variables, double value) {
  std::vector<std::vector<double>> tables;
  for (std::size_t k = 0; k < variables; ++k)
    tables.emplace_back(std::size_t{1} << k, value);
  return ChainParameters(std::move(tables));
}

std::size_t ChainParameters::entry_count() const noexcept {
  return (std::size_t{1} << tables_.size()) - 1;
}

std::vector<double> ChainParameters::flatten() const {
  std::vector<double> out;
  out.reserve(entry_count());
  for (const auto& table : tables_) out.insert(out.end(), table.begin(), table.end());
  return out;
}

Event Event::conjoined(const Event& other) const noexcept {
  return Event{mask | other.mask, values | other.values};
}

JointDistribution::JointDistribution(std::vector<double> masses)
    : variables_(0), masses_(std::move(masses)) {
  if (masses_.empty() || !std::has_single_bit(masses_.size()) ||
      masses_.size() > (std::size_t{1} << kMaxVariables))
    throw std::invalid_argument("joint distribution size must be a power of two");
  variables_ = static_cast<std::size_t>(std::countr_zero(masses_.size()));
  for (double m : masses_)
    if (!(m >= 0.0)) throw std::invalid_argument("joint masses must be nonnegative");
}

double JointDistribution::probability(const Event& event) const noexcept {
  double total = 0.0;
  for (std::uint32_t s = 0; s < masses_.size(); ++s)
    if (event.holds(WorldState{s})) total += masses_[s];
  return total;
}

ChainParameters JointDistribution::to_chain() const {
  std::vector<std::vector<double>> tables;
  for (std::size_t k = 0; k < variables_; ++k) {
    const std::uint32_t context_mask = (1u << k) - 1;
    std::vector<double> with(std::size_t{1} << k, 0.0);
    std::vector<double> total(std::size_t{1} << k, 0.0);
    for (std::uint32_t s = 0; s < masses_.size(); ++s) {
      total[s & context_mask] += masses_[s];
      if ((s >> k) & 1u) with[s & context_mask] += masses_[s];
    }
    std::vector<double> table(total.size());
    for (std::size_t c = 0; c < table.size(); ++c)
      table[c] = total[c] > 0.0 ? std::clamp(with[c] / total[c], 0.0, 1.0) : 0.5;
    tables.push_back(std::move(table));
  }
  return ChainParameters(std::move(tables));
}

void JointDistribution::write_csv(std::ostream& out) const {
  for (std::size_t v = 0; v < variables_; ++v) out << Topology::label(v) << ',';
  out << "mass\n";
  const auto old_precision = out.precision(17);
  for (std::uint32_t s = 0; s < masses_.size(); ++s) {
    for (std::size_t v = 0; v < variables_; ++v) out << (((s >> v) & 1u) ? 'T' : 'F') << ',';
    out << masses_[s] << '\n';
  }
  out.precision(old_precision);
}

ChainParameters sample_true_model(RandomStream& rng, const Topology& topology) {
  std::vector<std::vector<double>> tables;
  for (std::size_t k = 0; k < topology.variable_count(); ++k) {
    std::vector<double> table(std::size_t{1} << k);
    for (double& p : table) p = rng.uniform_open();
    tables.push_back(std::move(table));
  }
  return ChainParameters(std::move(tables));
}

JointDistribution to_joint(const ChainParameters& params) {
  const std::size_t n = params.variable_count();
  std::vector<double> masses(std::size_t{1} << n);
  for (std::uint32_t s = 0; s < masses.size(); ++s) {
    double m = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double p = params.at(k, s & ((1u << k) - 1));
      m *= ((s >> k) & 1u) ? p : 1.0 - p;
    }
    masses[s] = m;
  }
  return JointDistribution(std::move(masses));
}

double marginal(const JointDistribution& joint, const Event& target, const Event& given) {
  const double given_mass = joint.probability(given);
  if (!(given_mass > 0.0))
    throw ZeroConditioningMass("conditioning event has zero probability");
  if (target.contradicts(given)) return 0.0;
  return joint.probability(target.conjoined(given)) / given_mass;
}

HypothesisSplit split_by_hypothesis(const JointDistribution& joint, const Topology& topology) {
  if (joint.variable_count() != topology.variable_count())
    throw std::invalid_argument("joint and topology disagree on variable count");
  HypothesisSplit split;
  split.with_hypothesis.assign(topology.evidential_state_count(), 0.0);
  split.without_hypothesis.assign(topology.evidential_state_count(), 0.0);
  const auto masses = joint.masses();
  for (std::uint32_t s = 0; s < masses.size(); ++s) {
    const WorldState state{s};
    const auto e = topology.evidential_state_of(state).bits;
    if (state.value(Topology::hypothesis()))
      split.with_hypothesis[e] += masses[s];
    else
      split.without_hypothesis[e] += masses[s];
  }
  return split;
}

std::vector<std::optional<double>> posterior_table(const JointDistribution& joint,
                                                   const Topology& topology) {
  const auto split = split_by_hypothesis(joint, topology);
  std::vector<std::optional<double>> table(split.size());
  for (std::size_t e = 0; e < split.size(); ++e) {
    const double mass = split.state_mass(e);
    if (mass > 0.0) table[e] = split.with_hypothesis[e] / mass;
  }
  return table;
}

Event evidence_event(const Topology& topology, EvidentialState state) {
  Event event;
  const auto evidence = topology.evidence();
  for (std::size_t slot = 0; slot < evidence.size(); ++slot)
    event.set(evidence[slot], state.value(slot));
  return event;
}

}  // namespace robinf
