#include "robinf/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace robinf {
namespace {

constexpr double kMinSpread = 1e-12;

void check_sizes(std::span<const double> rb, const HypothesisSplit& truth) {
  if (rb.size() != truth.size())
    throw std::invalid_argument("relative belief table does not match the evidential states");
}

struct ConditionalMoments {
  double mean = 0.0;
  double variance = 0.0;
};

std::optional<ConditionalMoments> moments(std::span<const double> rb,
                                          const std::vector<double>& weight) {
  double total = 0.0;
  double first = 0.0;
  for (std::size_t e = 0; e < rb.size(); ++e) {
    total += weight[e];
    first += weight[e] * rb[e];
  }
  if (!(total > 0.0)) return std::nullopt;
  const double mean = first / total;
  double second = 0.0;
  for (std::size_t e = 0; e < rb.size(); ++e) second += weight[e] * (rb[e] - mean) * (rb[e] - mean);
  return ConditionalMoments{mean, second / total};
}

}  // namespace

DecisionThresholds::DecisionThresholds(double lower, double upper)
    : lower_(lower), upper_(upper) {
  if (!(0.0 < lower && lower < upper && upper < 1.0))
    throw std::invalid_argument("thresholds must satisfy 0 < lower < upper < 1");
}

std::string_view to_string(DprimePooling pooling) noexcept {
  return pooling == DprimePooling::average_of_sds ? "average-of-sds" : "pooled";
}

std::optional<DprimePooling> parse_dprime_pooling(std::string_view text) noexcept {
  if (text == "pooled") return DprimePooling::pooled;
  if (text == "average-of-sds") return DprimePooling::average_of_sds;
  return std::nullopt;
}

double expected_mse(std::span<const double> rb, const HypothesisSplit& truth) {
  check_sizes(rb, truth);
  double total = 0.0;
  for (std::size_t e = 0; e < rb.size(); ++e) {
    const double miss = 1.0 - rb[e];
    total += truth.with_hypothesis[e] * miss * miss + truth.without_hypothesis[e] * rb[e] * rb[e];
  }
  return total;
}

double min_possible_mse(const HypothesisSplit& truth) {
  double total = 0.0;
  for (std::size_t e = 0; e < truth.size(); ++e) {
    const double mass = truth.state_mass(e);
    if (mass > 0.0) total += truth.with_hypothesis[e] * truth.without_hypothesis[e] / mass;
  }
  return total;
}

DecisionRates pe_pc(std::span<const double> rb, const HypothesisSplit& truth,
                    const DecisionThresholds& thresholds) {
  check_sizes(rb, truth);
  DecisionRates rates;
  for (std::size_t e = 0; e < rb.size(); ++e) {
    if (rb[e] > thresholds.upper()) {
      rates.pe += truth.without_hypothesis[e];
      rates.pc += truth.with_hypothesis[e];
    } else if (rb[e] < thresholds.lower()) {
      rates.pe += truth.with_hypothesis[e];
      rates.pc += truth.without_hypothesis[e];
    }
  }
  return rates;
}

std::optional<double> relative_error(const DecisionRates& rates) noexcept {
  const double decided = rates.pe + rates.pc;
  if (!(decided > 0.0)) return std::nullopt;
  return rates.pe / decided;
}

std::optional<double> dprime(std::span<const double> rb, const HypothesisSplit& truth,
                             DprimePooling pooling) {
  check_sizes(rb, truth);
  const auto given_true = moments(rb, truth.with_hypothesis);
  const auto given_false = moments(rb, truth.without_hypothesis);
  if (!given_true || !given_false) return std::nullopt;
  const double sd = pooling == DprimePooling::pooled
                        ? std::sqrt((given_true->variance + given_false->variance) / 2.0)
                        : (std::sqrt(given_true->variance) + std::sqrt(given_false->variance)) / 2.0;
  // Constant tables leave rounding-level spread; treat as no spread.
  if (!(sd > kMinSpread)) return std::nullopt;
  return (given_true->mean - given_false->mean) / sd;
}

std::optional<double> dprime_from_rates(const DecisionRates& rates) {
  const double hit = 1.0 - rates.pe;
  if (!(hit > 0.0 && hit < 1.0 && rates.pc > 0.0 && rates.pc < 1.0)) return std::nullopt;
  const boost::math::normal standard;
  return boost::math::quantile(standard, hit) + boost::math::quantile(standard, rates.pc);
}

MetricRecord evaluate_metrics(std::span<const double> rb, const HypothesisSplit& truth,
                              const DecisionThresholds& thresholds, DprimePooling pooling) {
  MetricRecord record;
  record.mse = expected_mse(rb, truth);
  record.min_mse = min_possible_mse(truth);
  const auto rates = pe_pc(rb, truth, thresholds);
  record.pe = rates.pe;
  record.pc = rates.pc;
  record.re = relative_error(rates);
  record.dprime = dprime(rb, truth, pooling);
  return record;
}

}  // namespace robinf
