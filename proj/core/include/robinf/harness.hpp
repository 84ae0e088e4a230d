#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "robinf/belief_model.hpp"
#include "robinf/inference.hpp"
#include "robinf/metrics.hpp"
#include "robinf/noise_models.hpp"
#include "robinf/random.hpp"

namespace robinf {

enum class Scenario { prototypical, direct, frequency, hierarchical };

std::string_view to_string(Scenario scenario) noexcept;
std::optional<Scenario> parse_scenario(std::string_view text) noexcept;

/// Which estimator fills the d' table.
enum class DprimeMethod {
  zscore,   ///< z(1 - mean Pe) + z(mean Pc) over the cases of a row
  moments,  ///< mean over cases of the per-case moment d'
};

/// Which estimator fills the RE table.
enum class ReAggregation {
  ratio_of_means,  ///< mean Pe / (mean Pe + mean Pc)
  case_mean,       ///< mean over cases of Pe / (Pe + Pc), undefined cases excluded
};

std::string_view to_string(DprimeMethod method) noexcept;
std::optional<DprimeMethod> parse_dprime_method(std::string_view text) noexcept;
std::string_view to_string(ReAggregation aggregation) noexcept;
std::optional<ReAggregation> parse_re_aggregation(std::string_view text) noexcept;

enum class Metric { mse, min_mse, re, pe, pc, dprime };

std::string_view to_string(Metric metric) noexcept;
std::optional<Metric> parse_metric(std::string_view text) noexcept;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::prototypical;
  std::size_t cases = 1000;
  std::vector<double> ranges;
  DecisionThresholds thresholds;
  std::uint64_t master_seed = 1;
  std::vector<ProcedureId> procedures{kAllProcedures.begin(), kAllProcedures.end()};
  DprimePooling dprime_pooling = DprimePooling::pooled;
  StrongNaiveDrop strong_naive_drop = StrongNaiveDrop::per_observed_value;
  DprimeMethod dprime_method = DprimeMethod::zscore;
  ReAggregation re_aggregation = ReAggregation::ratio_of_means;
  /// Reuse the same case streams at every range.
  bool paired_cases = false;
  /// Worker threads; 0 means hardware concurrency. Results never depend on it.
  unsigned threads = 0;

  /// Defaults for a scenario, including its range ladder.
  static ScenarioConfig defaults(Scenario scenario);

  /// Throws ConfigError.
  void validate() const;
};

/// 0.0-2.0 step 0.2 for prototypical/direct, step 0.5 for the others.
std::vector<double> default_ranges(Scenario scenario);

/// Inclusive ladder start, start+step, ..., stop. Throws ConfigError on a
/// nonpositive step or stop < start.
std::vector<double> range_ladder(double start, double stop, double step);

Topology topology_for(Scenario scenario);

/// Per-case stream: key = master seed, counter words = (case, range, scenario).
RandomStream case_stream(std::uint64_t master_seed, Scenario scenario, std::size_t range_index,
                         std::size_t case_index);

struct CaseDraw {
  ChainParameters truth;  ///< effective truth in the frequency regime
  BeliefModel belief;
};

/// One true model and its belief counterpart for the scenario's regime.
CaseDraw draw_case(Scenario scenario, ErrorRange range, RandomStream& rng);

struct CaseEvaluation {
  CaseDraw draw;
  HypothesisSplit truth;
  std::vector<RelativeBeliefTable> tables;  ///< parallel to config.procedures
  std::vector<MetricRecord> records;        ///< parallel to config.procedures
  double min_mse = 0.0;

  const MetricRecord& record(ProcedureId id) const;
  const RelativeBeliefTable& table(ProcedureId id) const;
};

/// Evaluates one case drawn from `rng` at the given range.
CaseEvaluation evaluate_case(const ScenarioConfig& config, double range, RandomStream& rng);

/// Deterministic in (config.scenario, range, case index, master seed).
CaseEvaluation run_case(const ScenarioConfig& config, std::size_t range_index,
                        std::size_t case_index);

/// Mean (or ratio/transform estimate) over cases with its standard error.
struct Estimate {
  double value = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  std::size_t excluded = 0;
};

struct CellSummary {
  ProcedureId procedure = ProcedureId::proper_bayes;
  Estimate mse;
  Estimate pe;
  Estimate pc;
  Estimate decision_mass;  ///< Pe + Pc
  Estimate re_ratio;
  Estimate re_case_mean;
  Estimate dprime_zscore;
  Estimate dprime_moments;
};

struct RangeRow {
  double range = 0.0;
  Estimate min_mse;
  std::vector<CellSummary> cells;  ///< parallel to config.procedures

  const CellSummary& cell(ProcedureId id) const;
};

struct SweepResult {
  ScenarioConfig config;
  std::vector<RangeRow> rows;

  /// The estimate a table shows for `metric`, honoring the config's
  /// RE aggregation and d' method. min_mse ignores `id`.
  const Estimate& estimate(std::size_t row, ProcedureId id, Metric metric) const;
};

SweepResult run_sweep(const ScenarioConfig& config);

/// Reduces per-case records (index = case) into a row; exposed so that
/// partial runs can be pooled.
RangeRow summarize_row(const ScenarioConfig& config, double range,
                       const std::vector<std::vector<MetricRecord>>& records,
                       const std::vector<double>& min_mse);

struct Histogram {
  ProcedureId procedure = ProcedureId::proper_bayes;
  double bin_width = 0.05;
  std::vector<double> given_true;   ///< rb mass per bin conditioned on H=T
  std::vector<double> given_false;  ///< rb mass per bin conditioned on H=F
  /// Exact pooled moments of rb (not binned), for cross-checks.
  double mean_given_true = 0.0;
  double mean_given_false = 0.0;
  double variance_given_true = 0.0;
  double variance_given_false = 0.0;

  std::size_t bin_count() const noexcept { return given_true.size(); }
  static std::size_t bin_of(double rb, std::size_t bins) noexcept;
};

/// Probability-weighted rb histograms pooled over all cases at one range,
/// one per configured procedure.
std::vector<Histogram> emit_histogram_data(const ScenarioConfig& config, std::size_t range_index,
                                           double bin_width = 0.05);

}  // namespace robinf
