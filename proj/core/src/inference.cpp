#include "robinf/inference.hpp"

#include <stdexcept>

namespace robinf {
namespace {

constexpr double kStrongLow = 2.0 / 3.0;
constexpr double kStrongHigh = 3.0 / 2.0;

struct ProcedureName {
  ProcedureId id;
  std::string_view key;
  std::string_view display;
};

constexpr std::array kProcedureNames{
    ProcedureName{ProcedureId::simple_linear, "simple_linear", "Simple Linear"},
    ProcedureName{ProcedureId::strong_linear, "strong_linear", "Strong Linear"},
    ProcedureName{ProcedureId::naive_bayes, "naive_bayes", "Naive Bayes"},
    ProcedureName{ProcedureId::strong_naive_bayes, "strong_naive_bayes", "Strong Bayes"},
    ProcedureName{ProcedureId::proper_bayes, "proper_bayes", "Proper Bayes"},
};

// +1 above `high`, -1 below `low`, 0 otherwise (including equality).
int vote(double value, double low, double high) noexcept {
  if (value > high) return 1;
  if (value < low) return -1;
  return 0;
}

double observed(double p_true, bool value) noexcept { return value ? p_true : 1.0 - p_true; }

bool inside_deadband(double ratio) noexcept { return kStrongLow < ratio && ratio < kStrongHigh; }

RelativeBeliefTable linear(ProcedureId id, const ProcedureInputs& in, double prior_low,
                           double prior_high, double lr_low, double lr_high) {
  RelativeBeliefTable out{id, std::vector<double>(in.state_count())};
  const int prior_vote = vote(in.prior, prior_low, prior_high);
  for (std::uint32_t e = 0; e < out.rb.size(); ++e) {
    int sl = prior_vote;
    for (std::size_t item = 0; item < in.item_count(); ++item)
      sl += vote(in.likelihood_ratio(item, EvidentialState{e}), lr_low, lr_high);
    // Normalization is fixed at (SL+5)/10 regardless of item count.
    out.rb[e] = (sl + 5) / 10.0;
  }
  return out;
}

RelativeBeliefTable product_rule(ProcedureId id, const ProcedureInputs& in,
                                 const std::vector<bool>& keep_everywhere,
                                 bool drop_observed_in_deadband) {
  RelativeBeliefTable out{id, std::vector<double>(in.state_count())};
  for (std::uint32_t e = 0; e < out.rb.size(); ++e) {
    const EvidentialState state{e};
    double with_h = in.prior;
    double without_h = 1.0 - in.prior;
    for (std::size_t item = 0; item < in.item_count(); ++item) {
      if (!keep_everywhere[item]) continue;
      if (drop_observed_in_deadband && inside_deadband(in.likelihood_ratio(item, state))) continue;
      with_h *= observed(in.likelihood_given_true[item], state.value(item));
      without_h *= observed(in.likelihood_given_false[item], state.value(item));
    }
    out.rb[e] = with_h / (with_h + without_h);
  }
  return out;
}

}  // namespace

std::string_view to_string(ProcedureId id) noexcept {
  for (const auto& name : kProcedureNames)
    if (name.id == id) return name.key;
  return "unknown";
}

std::string_view display_name(ProcedureId id) noexcept {
  for (const auto& name : kProcedureNames)
    if (name.id == id) return name.display;
  return "Unknown";
}

std::optional<ProcedureId> parse_procedure(std::string_view text) noexcept {
  for (const auto& name : kProcedureNames)
    if (name.key == text) return name.id;
  return std::nullopt;
}

std::string_view to_string(StrongNaiveDrop mode) noexcept {
  return mode == StrongNaiveDrop::per_item ? "per-item" : "per-observed-value";
}

std::optional<StrongNaiveDrop> parse_strong_naive_drop(std::string_view text) noexcept {
  if (text == "per-observed-value") return StrongNaiveDrop::per_observed_value;
  if (text == "per-item") return StrongNaiveDrop::per_item;
  return std::nullopt;
}

double ProcedureInputs::likelihood_ratio(std::size_t item, EvidentialState state) const noexcept {
  const bool value = state.value(item);
  return observed(likelihood_given_true[item], value) /
         observed(likelihood_given_false[item], value);
}

ProcedureInputs procedure_inputs(const BeliefModel& model, const Topology& topology) {
  if (model.direct) {
    const auto& direct = *model.direct;
    if (direct.likelihood_given_true.size() != topology.evidence().size() ||
        direct.likelihood_given_false.size() != topology.evidence().size())
      throw std::invalid_argument("direct inputs do not match the topology's evidence set");
    return ProcedureInputs{direct.prior, direct.likelihood_given_true,
                           direct.likelihood_given_false};
  }

  const auto joint = to_joint(model.chain);
  const auto hyp = Topology::hypothesis();
  const Event h_true = Event{}.set(hyp, true);
  const Event h_false = Event{}.set(hyp, false);

  ProcedureInputs in;
  in.prior = joint.probability(h_true);
  for (auto variable : topology.evidence()) {
    const Event x_true = Event{}.set(variable, true);
    in.likelihood_given_true.push_back(marginal(joint, x_true, h_true));
    in.likelihood_given_false.push_back(marginal(joint, x_true, h_false));
  }
  return in;
}

RelativeBeliefTable proper_bayes(const BeliefModel& model, const Topology& topology) {
  // Latent variables are summed out by the split.
  const auto split = split_by_hypothesis(to_joint(model.chain), topology);
  RelativeBeliefTable out{ProcedureId::proper_bayes, std::vector<double>(split.size())};
  for (std::size_t e = 0; e < split.size(); ++e)
    out.rb[e] = split.with_hypothesis[e] / split.state_mass(e);
  return out;
}

RelativeBeliefTable naive_bayes(const ProcedureInputs& inputs) {
  return product_rule(ProcedureId::naive_bayes, inputs,
                      std::vector<bool>(inputs.item_count(), true), false);
}

RelativeBeliefTable strong_naive_bayes(const ProcedureInputs& inputs, StrongNaiveDrop mode) {
  if (mode == StrongNaiveDrop::per_observed_value)
    return product_rule(ProcedureId::strong_naive_bayes, inputs,
                        std::vector<bool>(inputs.item_count(), true), true);

  std::vector<bool> keep(inputs.item_count());
  for (std::size_t item = 0; item < keep.size(); ++item)
    keep[item] = !inside_deadband(inputs.likelihood_given_true[item] /
                                  inputs.likelihood_given_false[item]);
  return product_rule(ProcedureId::strong_naive_bayes, inputs, keep, false);
}

RelativeBeliefTable simple_linear(const ProcedureInputs& inputs) {
  return linear(ProcedureId::simple_linear, inputs, 0.5, 0.5, 1.0, 1.0);
}

RelativeBeliefTable strong_linear(const ProcedureInputs& inputs) {
  return linear(ProcedureId::strong_linear, inputs, 0.3, 0.7, kStrongLow, kStrongHigh);
}

RelativeBeliefTable evaluate(ProcedureId id, const BeliefModel& model, const Topology& topology,
                             const ProcedureOptions& options) {
  if (id == ProcedureId::proper_bayes) return proper_bayes(model, topology);
  const auto inputs = procedure_inputs(model, topology);
  switch (id) {
    case ProcedureId::simple_linear: return simple_linear(inputs);
    case ProcedureId::strong_linear: return strong_linear(inputs);
    case ProcedureId::naive_bayes: return naive_bayes(inputs);
    case ProcedureId::strong_naive_bayes:
      return strong_naive_bayes(inputs, options.strong_naive_drop);
    case ProcedureId::proper_bayes: break;
  }
  throw std::invalid_argument("unknown procedure");
}

}  // namespace robinf
