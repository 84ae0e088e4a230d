#include "robinf/noise_models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robinf {

ErrorRange::ErrorRange(double width) : width_(width) {
  if (!(width >= 0.0) || !std::isfinite(width))
    throw std::invalid_argument("error range must be a finite nonnegative number");
}

double perturb_value(double p, ErrorRange range, RandomStream& rng) {
  const double u = rng.uniform();
  if (range.width() == 0.0) return p;
  const double half = range.width() / 2.0;
  // Clamping both ends keeps lo <= hi even for p outside [floor, ceiling].
  const double lo = std::clamp(p - half, kBeliefFloor, kBeliefCeiling);
  const double hi = std::clamp(p + half, kBeliefFloor, kBeliefCeiling);
  return std::clamp(lo + (hi - lo) * u, kBeliefFloor, kBeliefCeiling);
}

ChainParameters perturb_chain(const ChainParameters& chain, ErrorRange range,
                              RandomStream& rng) {
  return chain.transformed([&](double p) { return perturb_value(p, range, rng); });
}

BeliefModel perturb_marginalized(const ChainParameters& truth, ErrorRange range,
                                 RandomStream& rng) {
  return BeliefModel{Regime::marginalized, perturb_chain(truth, range, rng), std::nullopt};
}

BeliefModel perturb_direct(const ChainParameters& truth, const Topology& topology,
                           ErrorRange range, RandomStream& rng) {
  BeliefModel model{Regime::direct, perturb_chain(truth, range, rng), DirectInputs{}};

  const auto joint = to_joint(truth);
  const auto hyp = Topology::hypothesis();
  const Event h_true = Event{}.set(hyp, true);
  const Event h_false = Event{}.set(hyp, false);

  auto& direct = *model.direct;
  direct.prior = perturb_value(joint.probability(h_true), range, rng);
  for (auto variable : topology.evidence()) {
    const double p = marginal(joint, Event{}.set(variable, true), h_true);
    direct.likelihood_given_true.push_back(perturb_value(p, range, rng));
  }
  for (auto variable : topology.evidence()) {
    const double p = marginal(joint, Event{}.set(variable, true), h_false);
    direct.likelihood_given_false.push_back(perturb_value(p, range, rng));
  }
  return model;
}

FrequencyDraw perturb_frequency(const ChainParameters& belief_chain, ErrorRange range,
                                RandomStream& rng) {
  auto truth = perturb_chain(belief_chain, range, rng);
  return FrequencyDraw{BeliefModel{Regime::frequency, belief_chain, std::nullopt},
                       std::move(truth)};
}

}  // namespace robinf
