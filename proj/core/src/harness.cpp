#include "robinf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include <boost/math/distributions/normal.hpp>

namespace robinf {
namespace {

template <typename T>
struct Named {
  T value;
  std::string_view key;
};

constexpr std::array kScenarioNames{
    Named<Scenario>{Scenario::prototypical, "prototypical"},
    Named<Scenario>{Scenario::direct, "direct"},
    Named<Scenario>{Scenario::frequency, "frequency"},
    Named<Scenario>{Scenario::hierarchical, "hierarchical"},
};

constexpr std::array kMetricNames{
    Named<Metric>{Metric::mse, "mse"}, Named<Metric>{Metric::min_mse, "min_mse"},
    Named<Metric>{Metric::re, "re"},   Named<Metric>{Metric::pe, "pe"},
    Named<Metric>{Metric::pc, "pc"},   Named<Metric>{Metric::dprime, "dprime"},
};

template <typename T, std::size_t N>
std::string_view key_of(const std::array<Named<T>, N>& names, T value) noexcept {
  for (const auto& n : names)
    if (n.value == value) return n.key;
  return "unknown";
}

template <typename T, std::size_t N>
std::optional<T> value_of(const std::array<Named<T>, N>& names, std::string_view key) noexcept {
  for (const auto& n : names)
    if (n.key == key) return n.value;
  return std::nullopt;
}

// Sample mean and standard error, skipping NaN entries.
Estimate summarize(const std::vector<double>& values) {
  Estimate out;
  double sum = 0.0;
  for (double v : values) {
    if (std::isnan(v)) {
      ++out.excluded;
      continue;
    }
    sum += v;
    ++out.used;
  }
  if (out.used == 0) return out;
  out.value = sum / static_cast<double>(out.used);
  if (out.used > 1) {
    double ss = 0.0;
    for (double v : values)
      if (!std::isnan(v)) ss += (v - out.value) * (v - out.value);
    out.std_error = std::sqrt(ss / static_cast<double>(out.used - 1) / static_cast<double>(out.used));
  }
  return out;
}

// Standard error of a smooth function of means, from its per-case
// linearization (delta method).
double linearized_error(const std::vector<double>& terms) {
  return summarize(terms).std_error;
}

double normal_density_at_quantile(double p) {
  const boost::math::normal standard;
  return boost::math::pdf(standard, boost::math::quantile(standard, p));
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs fn(job) for job in [0, jobs) on a small thread pool.
template <typename Fn>
void parallel_for(std::size_t jobs, unsigned threads, Fn&& fn) {
  const unsigned workers = worker_count(threads, jobs);
  if (workers <= 1) {
    for (std::size_t job = 0; job < jobs; ++job) fn(job);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t job = next++; job < jobs; job = next++) fn(job);
    });
}

}  // namespace

std::string_view to_string(Scenario scenario) noexcept { return key_of(kScenarioNames, scenario); }

std::optional<Scenario> parse_scenario(std::string_view text) noexcept {
  return value_of(kScenarioNames, text);
}

std::string_view to_string(DprimeMethod method) noexcept {
  return method == DprimeMethod::moments ? "moments" : "zscore";
}

std::optional<DprimeMethod> parse_dprime_method(std::string_view text) noexcept {
  if (text == "zscore") return DprimeMethod::zscore;
  if (text == "moments") return DprimeMethod::moments;
  return std::nullopt;
}

std::string_view to_string(ReAggregation aggregation) noexcept {
  return aggregation == ReAggregation::case_mean ? "case-mean" : "ratio";
}

std::optional<ReAggregation> parse_re_aggregation(std::string_view text) noexcept {
  if (text == "ratio") return ReAggregation::ratio_of_means;
  if (text == "case-mean") return ReAggregation::case_mean;
  return std::nullopt;
}

std::string_view to_string(Metric metric) noexcept { return key_of(kMetricNames, metric); }

std::optional<Metric> parse_metric(std::string_view text) noexcept {
  return value_of(kMetricNames, text);
}

std::vector<double> range_ladder(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("range step must be positive");
  if (!(start >= 0.0) || !(stop >= start))
    throw ConfigError("range ladder needs 0 <= start <= stop");
  const auto steps = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> ladder;
  for (std::size_t i = 0; i <= steps; ++i) {
    // Round to 12 decimals so 0.6 prints and compares as 0.6.
    const double r = start + static_cast<double>(i) * step;
    ladder.push_back(std::round(r * 1e12) / 1e12);
  }
  return ladder;
}

std::vector<double> default_ranges(Scenario scenario) {
  const bool fine = scenario == Scenario::prototypical || scenario == Scenario::direct;
  return range_ladder(0.0, 2.0, fine ? 0.2 : 0.5);
}

ScenarioConfig ScenarioConfig::defaults(Scenario scenario) {
  ScenarioConfig config;
  config.scenario = scenario;
  config.ranges = default_ranges(scenario);
  return config;
}

void ScenarioConfig::validate() const {
  if (cases < 1) throw ConfigError("cases must be at least 1");
  if (ranges.empty()) throw ConfigError("at least one error range is required");
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (!(ranges[i] >= 0.0) || !std::isfinite(ranges[i]))
      throw ConfigError("error ranges must be finite and nonnegative");
    if (i > 0 && !(ranges[i] > ranges[i - 1]))
      throw ConfigError("error ranges must be strictly increasing");
  }
  if (procedures.empty()) throw ConfigError("at least one procedure is required");
  for (std::size_t i = 0; i < procedures.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (procedures[i] == procedures[j])
        throw ConfigError("procedure listed twice: " + std::string(robinf::to_string(procedures[i])));
}

Topology topology_for(Scenario scenario) {
  return scenario == Scenario::hierarchical ? Topology::hierarchical() : Topology::prototypical();
}

RandomStream case_stream(std::uint64_t master_seed, Scenario scenario, std::size_t range_index,
                         std::size_t case_index) {
  return RandomStream(master_seed, static_cast<std::uint32_t>(case_index),
                      static_cast<std::uint32_t>(range_index),
                      static_cast<std::uint32_t>(scenario) + 1);
}

CaseDraw draw_case(Scenario scenario, ErrorRange range, RandomStream& rng) {
  const auto topology = topology_for(scenario);
  auto sampled = sample_true_model(rng, topology);
  switch (scenario) {
    case Scenario::prototypical:
    case Scenario::hierarchical: {
      auto belief = perturb_marginalized(sampled, range, rng);
      return CaseDraw{std::move(sampled), std::move(belief)};
    }
    case Scenario::direct: {
      auto belief = perturb_direct(sampled, topology, range, rng);
      return CaseDraw{std::move(sampled), std::move(belief)};
    }
    case Scenario::frequency: {
      auto draw = perturb_frequency(sampled, range, rng);
      return CaseDraw{std::move(draw.effective_truth), std::move(draw.belief)};
    }
  }
  throw std::invalid_argument("unknown scenario");
}

const MetricRecord& CaseEvaluation::record(ProcedureId id) const {
  for (std::size_t i = 0; i < tables.size(); ++i)
    if (tables[i].procedure == id) return records[i];
  throw std::out_of_range("procedure not evaluated in this case");
}

const RelativeBeliefTable& CaseEvaluation::table(ProcedureId id) const {
  for (const auto& t : tables)
    if (t.procedure == id) return t;
  throw std::out_of_range("procedure not evaluated in this case");
}

CaseEvaluation evaluate_case(const ScenarioConfig& config, double range, RandomStream& rng) {
  const auto topology = topology_for(config.scenario);
  auto draw = draw_case(config.scenario, ErrorRange(range), rng);
  auto truth = split_by_hypothesis(to_joint(draw.truth), topology);

  CaseEvaluation eval{std::move(draw), std::move(truth), {}, {}, 0.0};
  eval.min_mse = min_possible_mse(eval.truth);
  const ProcedureOptions options{config.strong_naive_drop};
  for (auto id : config.procedures) {
    eval.tables.push_back(evaluate(id, eval.draw.belief, topology, options));
    eval.records.push_back(
        evaluate_metrics(eval.tables.back().rb, eval.truth, config.thresholds, config.dprime_pooling));
  }
  return eval;
}

CaseEvaluation run_case(const ScenarioConfig& config, std::size_t range_index,
                        std::size_t case_index) {
  auto rng = case_stream(config.master_seed, config.scenario,
                         config.paired_cases ? 0 : range_index, case_index);
  return evaluate_case(config, config.ranges.at(range_index), rng);
}

const CellSummary& RangeRow::cell(ProcedureId id) const {
  for (const auto& c : cells)
    if (c.procedure == id) return c;
  throw std::out_of_range("procedure not present in sweep");
}

const Estimate& SweepResult::estimate(std::size_t row, ProcedureId id, Metric metric) const {
  const auto& r = rows.at(row);
  if (metric == Metric::min_mse) return r.min_mse;
  const auto& c = r.cell(id);
  switch (metric) {
    case Metric::mse: return c.mse;
    case Metric::pe: return c.pe;
    case Metric::pc: return c.pc;
    case Metric::re:
      return config.re_aggregation == ReAggregation::ratio_of_means ? c.re_ratio : c.re_case_mean;
    case Metric::dprime:
      return config.dprime_method == DprimeMethod::zscore ? c.dprime_zscore : c.dprime_moments;
    case Metric::min_mse: break;
  }
  return r.min_mse;
}

RangeRow summarize_row(const ScenarioConfig& config, double range,
                       const std::vector<std::vector<MetricRecord>>& records,
                       const std::vector<double>& min_mse) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  RangeRow row;
  row.range = range;
  row.min_mse = summarize(min_mse);
  const std::size_t n = records.size();

  for (std::size_t p = 0; p < config.procedures.size(); ++p) {
    std::vector<double> mse(n), pe(n), pc(n), mass(n), re(n), dm(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& rec = records[i][p];
      mse[i] = rec.mse;
      pe[i] = rec.pe;
      pc[i] = rec.pc;
      mass[i] = rec.pe + rec.pc;
      re[i] = rec.re.value_or(nan);
      dm[i] = rec.dprime.value_or(nan);
    }
    CellSummary cell;
    cell.procedure = config.procedures[p];
    cell.mse = summarize(mse);
    cell.pe = summarize(pe);
    cell.pc = summarize(pc);
    cell.decision_mass = summarize(mass);
    cell.re_case_mean = summarize(re);
    cell.dprime_moments = summarize(dm);

    const double mean_pe = cell.pe.value;
    const double mean_pc = cell.pc.value;
    const DecisionRates pooled{mean_pe, mean_pc};

    if (const auto ratio = relative_error(pooled)) {
      cell.re_ratio.value = *ratio;
      cell.re_ratio.used = n;
      std::vector<double> terms(n);
      for (std::size_t i = 0; i < n; ++i)
        terms[i] = (pe[i] - *ratio * mass[i]) / (mean_pe + mean_pc);
      cell.re_ratio.std_error = linearized_error(terms);
    } else {
      cell.re_ratio.excluded = n;
    }

    if (const auto z = dprime_from_rates(pooled)) {
      cell.dprime_zscore.value = *z;
      cell.dprime_zscore.used = n;
      const double d_pe = -1.0 / normal_density_at_quantile(1.0 - mean_pe);
      const double d_pc = 1.0 / normal_density_at_quantile(mean_pc);
      std::vector<double> terms(n);
      for (std::size_t i = 0; i < n; ++i) terms[i] = d_pe * pe[i] + d_pc * pc[i];
      cell.dprime_zscore.std_error = linearized_error(terms);
    } else {
      cell.dprime_zscore.excluded = n;
    }
    row.cells.push_back(cell);
  }
  return row;
}

SweepResult run_sweep(const ScenarioConfig& config) {
  config.validate();
  const std::size_t ranges = config.ranges.size();
  const std::size_t cases = config.cases;

  std::vector<std::vector<std::vector<MetricRecord>>> records(
      ranges, std::vector<std::vector<MetricRecord>>(cases));
  std::vector<std::vector<double>> min_mse(ranges, std::vector<double>(cases));

  parallel_for(ranges * cases, config.threads, [&](std::size_t job) {
    const std::size_t r = job / cases;
    const std::size_t c = job % cases;
    auto eval = run_case(config, r, c);
    records[r][c] = std::move(eval.records);
    min_mse[r][c] = eval.min_mse;
  });

  SweepResult result{config, {}};
  for (std::size_t r = 0; r < ranges; ++r)
    result.rows.push_back(summarize_row(config, config.ranges[r], records[r], min_mse[r]));
  return result;
}

std::size_t Histogram::bin_of(double rb, std::size_t bins) noexcept {
  // The small offset keeps grid values such as 0.6 in the bin they open.
  const auto raw = static_cast<std::size_t>(std::max(0.0, std::floor(rb * static_cast<double>(bins) + 1e-9)));
  return std::min(raw, bins - 1);
}

std::vector<Histogram> emit_histogram_data(const ScenarioConfig& config, std::size_t range_index,
                                           double bin_width) {
  config.validate();
  if (!(bin_width > 0.0 && bin_width <= 1.0)) throw ConfigError("bin width must be in (0, 1]");
  const auto bins = static_cast<std::size_t>(std::llround(1.0 / bin_width));
  if (std::abs(static_cast<double>(bins) * bin_width - 1.0) > 1e-9)
    throw ConfigError("bin width must divide [0, 1] evenly");

  std::vector<std::optional<CaseEvaluation>> slots(config.cases);
  parallel_for(config.cases, config.threads,
               [&](std::size_t c) { slots[c].emplace(run_case(config, range_index, c)); });
  std::vector<CaseEvaluation> evals;
  evals.reserve(slots.size());
  for (auto& slot : slots) evals.push_back(std::move(*slot));

  std::vector<Histogram> out;
  for (std::size_t p = 0; p < config.procedures.size(); ++p) {
    Histogram h;
    h.procedure = config.procedures[p];
    h.bin_width = bin_width;
    h.given_true.assign(bins, 0.0);
    h.given_false.assign(bins, 0.0);
    double total_true = 0.0, total_false = 0.0;
    double sum_true = 0.0, sum_false = 0.0;
    for (const auto& eval : evals) {
      const auto& rb = eval.tables[p].rb;
      for (std::size_t e = 0; e < rb.size(); ++e) {
        const auto bin = Histogram::bin_of(rb[e], bins);
        h.given_true[bin] += eval.truth.with_hypothesis[e];
        h.given_false[bin] += eval.truth.without_hypothesis[e];
        total_true += eval.truth.with_hypothesis[e];
        total_false += eval.truth.without_hypothesis[e];
        sum_true += eval.truth.with_hypothesis[e] * rb[e];
        sum_false += eval.truth.without_hypothesis[e] * rb[e];
      }
    }
    h.mean_given_true = sum_true / total_true;
    h.mean_given_false = sum_false / total_false;
    double var_true = 0.0, var_false = 0.0;
    for (const auto& eval : evals) {
      const auto& rb = eval.tables[p].rb;
      for (std::size_t e = 0; e < rb.size(); ++e) {
        var_true += eval.truth.with_hypothesis[e] * (rb[e] - h.mean_given_true) * (rb[e] - h.mean_given_true);
        var_false += eval.truth.without_hypothesis[e] * (rb[e] - h.mean_given_false) * (rb[e] - h.mean_given_false);
      }
    }
    h.variance_given_true = var_true / total_true;
    h.variance_given_false = var_false / total_false;
    for (auto& m : h.given_true) m /= total_true;
    for (auto& m : h.given_false) m /= total_false;
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace robinf
