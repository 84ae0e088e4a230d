#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "robinf/belief_model.hpp"

namespace robinf {

/// Declare H=T when rb > upper, H=F when rb < lower; otherwise no decision.
class DecisionThresholds {
 public:
  DecisionThresholds() = default;
  /// Requires 0 < lower < upper < 1.
  DecisionThresholds(double lower, double upper);

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double lower_ = 0.35;
  double upper_ = 0.65;
};

enum class DprimePooling {
  pooled,          ///< sqrt((var_T + var_F) / 2)
  average_of_sds,  ///< (sd_T + sd_F) / 2
};

std::string_view to_string(DprimePooling pooling) noexcept;
std::optional<DprimePooling> parse_dprime_pooling(std::string_view text) noexcept;

struct DecisionRates {
  double pe = 0.0;  ///< mass of wrong declarations
  double pc = 0.0;  ///< mass of correct declarations
};

struct MetricRecord {
  double mse = 0.0;
  double min_mse = 0.0;
  std::optional<double> re;
  double pe = 0.0;
  double pc = 0.0;
  std::optional<double> dprime;
};

/// Exact expected Brier score of `rb` against the true split.
double expected_mse(std::span<const double> rb, const HypothesisSplit& truth);

/// Brier score of the true posterior itself: sum of P(e) p (1 - p).
double min_possible_mse(const HypothesisSplit& truth);

// The printed formulas read
//   Pe = P(RB(H=T) > U | H=F)*P(H=F) + P(RB(H=F) < L | H=T)*P(H=T)
//   Pc = P(RB(H=F) > U | H=F)*P(H=F) + P(RB(H=T) < L | H=T)*P(H=T)
// whose second Pc term counts an error event. We use the signal-detection
// reading instead: declarations are rb > U (say T) and rb < L (say F), Pe is
// the true mass of wrong declarations and Pc of correct ones.
DecisionRates pe_pc(std::span<const double> rb, const HypothesisSplit& truth,
                    const DecisionThresholds& thresholds);

/// Pe / (Pe + Pc); empty when no decision is ever made.
std::optional<double> relative_error(const DecisionRates& rates) noexcept;

/// (E[rb | H=T] - E[rb | H=F]) / sd under the true joint; empty when the
/// normalizing sd is zero or H has zero mass on either side.
std::optional<double> dprime(std::span<const double> rb, const HypothesisSplit& truth,
                             DprimePooling pooling = DprimePooling::pooled);

/// Signal-detection estimate z(1 - Pe) + z(Pc); empty when either argument
/// of z lies outside (0, 1).
std::optional<double> dprime_from_rates(const DecisionRates& rates);

MetricRecord evaluate_metrics(std::span<const double> rb, const HypothesisSplit& truth,
                              const DecisionThresholds& thresholds,
                              DprimePooling pooling = DprimePooling::pooled);

}  // namespace robinf
