#pragma once

#include <optional>
#include <vector>

#include "robinf/belief_model.hpp"
#include "robinf/random.hpp"

namespace robinf {

inline constexpr double kBeliefFloor = 0.00001;
inline constexpr double kBeliefCeiling = 0.99999;

/// Full width of the uniform error window around a true probability.
class ErrorRange {
 public:
  explicit ErrorRange(double width);
  double width() const noexcept { return width_; }

 private:
  double width_;
};

enum class Regime { marginalized, direct, frequency };

/// Directly assessed inputs for the simple procedures. Likelihoods are
/// B(x=T | H=T) and B(x=T | H=F) per evidence item, in Topology::evidence()
/// order.
struct DirectInputs {
  double prior = 0.5;
  std::vector<double> likelihood_given_true;
  std::vector<double> likelihood_given_false;
};

struct BeliefModel {
  Regime regime = Regime::marginalized;
  ChainParameters chain;
  std::optional<DirectInputs> direct;
};

/// Draws uniformly from [max(floor, p - w/2), min(ceiling, p + w/2)].
/// A zero-width window returns p itself.
double perturb_value(double p, ErrorRange range, RandomStream& rng);

/// Every chain entry perturbed independently, in flatten() order.
ChainParameters perturb_chain(const ChainParameters& chain, ErrorRange range, RandomStream& rng);

BeliefModel perturb_marginalized(const ChainParameters& truth, ErrorRange range,
                                 RandomStream& rng);

/// Direct assessment: the chain (for Proper Bayes), the prior and each
/// likelihood pair are computed exactly from the true joint and perturbed
/// independently. Draw order: chain, prior, B(x=T|H=T) per item,
/// B(x=T|H=F) per item.
BeliefModel perturb_direct(const ChainParameters& truth, const Topology& topology,
                           ErrorRange range, RandomStream& rng);

struct FrequencyDraw {
  BeliefModel belief;
  ChainParameters effective_truth;
};

/// Belief-primary regime: the stated beliefs are given and the effective
/// truth of each entry is drawn from the window around it.
FrequencyDraw perturb_frequency(const ChainParameters& belief_chain, ErrorRange range,
                                RandomStream& rng);

}  // namespace robinf
