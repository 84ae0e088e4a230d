#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "robinf/belief_model.hpp"
#include "robinf/noise_models.hpp"

namespace robinf {

/// The five point-valued procedures, in table column order.
enum class ProcedureId { simple_linear, strong_linear, naive_bayes, strong_naive_bayes, proper_bayes };

inline constexpr std::array kAllProcedures{
    ProcedureId::simple_linear, ProcedureId::strong_linear, ProcedureId::naive_bayes,
    ProcedureId::strong_naive_bayes, ProcedureId::proper_bayes};

/// Stable identifier used on the command line and in CSV companion columns.
std::string_view to_string(ProcedureId id) noexcept;
/// Column header used in rendered tables ("Strong Bayes" for strong_naive_bayes).
std::string_view display_name(ProcedureId id) noexcept;
std::optional<ProcedureId> parse_procedure(std::string_view text) noexcept;

/// How Strong Naive Bayes decides to drop an evidence item.
enum class StrongNaiveDrop {
  per_observed_value,  ///< test the likelihood ratio of the value seen in each state
  per_item,            ///< test B(x=T|H=T)/B(x=T|H=F) once; drop the item everywhere
};

std::string_view to_string(StrongNaiveDrop mode) noexcept;
std::optional<StrongNaiveDrop> parse_strong_naive_drop(std::string_view text) noexcept;

/// Prior and per-item likelihoods shared by Naive Bayes, Strong Naive Bayes
/// and both linear procedures.
struct ProcedureInputs {
  double prior = 0.5;
  std::vector<double> likelihood_given_true;   ///< B(x=T | H=T)
  std::vector<double> likelihood_given_false;  ///< B(x=T | H=F)

  std::size_t item_count() const noexcept { return likelihood_given_true.size(); }
  std::size_t state_count() const noexcept { return std::size_t{1} << item_count(); }

  /// B(x=v | H=T) / B(x=v | H=F) for the value v that `state` assigns to item.
  double likelihood_ratio(std::size_t item, EvidentialState state) const noexcept;
};

/// Inputs marginalized from the belief chain, or the direct assessments when
/// the model carries them.
ProcedureInputs procedure_inputs(const BeliefModel& model, const Topology& topology);

struct RelativeBeliefTable {
  ProcedureId procedure;
  std::vector<double> rb;  ///< indexed by EvidentialState::bits
};

struct ProcedureOptions {
  StrongNaiveDrop strong_naive_drop = StrongNaiveDrop::per_observed_value;
};

RelativeBeliefTable proper_bayes(const BeliefModel& model, const Topology& topology);

RelativeBeliefTable naive_bayes(const ProcedureInputs& inputs);
RelativeBeliefTable strong_naive_bayes(const ProcedureInputs& inputs,
                                       StrongNaiveDrop mode = StrongNaiveDrop::per_observed_value);
RelativeBeliefTable simple_linear(const ProcedureInputs& inputs);
RelativeBeliefTable strong_linear(const ProcedureInputs& inputs);

/// Runs one procedure against a belief model.
RelativeBeliefTable evaluate(ProcedureId id, const BeliefModel& model, const Topology& topology,
                             const ProcedureOptions& options = {});

}  // namespace robinf
