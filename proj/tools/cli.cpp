#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace robinf::cli {
namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_number(const std::string& text, const std::string& flag) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(value)) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw UsageError(flag + ": '" + text + "' is not a number");
  }
}

std::string join_ranges(const std::vector<double>& ranges) {
  std::string out;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (i > 0) out += ',';
    out += exact_text(ranges[i]);
  }
  return out;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string_view command_name(Command command) {
  switch (command) {
    case Command::simulate: return "simulate";
    case Command::histogram: return "histogram";
    case Command::case_dump: return "case";
  }
  return "simulate";
}

json config_json(const ScenarioConfig& config) {
  json procedures = json::array();
  for (auto id : config.procedures) procedures.push_back(std::string(to_string(id)));
  return json{
      {"scenario", std::string(to_string(config.scenario))},
      {"cases", config.cases},
      {"ranges", config.ranges},
      {"lower", config.thresholds.lower()},
      {"upper", config.thresholds.upper()},
      {"seed", config.master_seed},
      {"procedures", procedures},
      {"dprime_pooling", std::string(to_string(config.dprime_pooling))},
      {"dprime_method", std::string(to_string(config.dprime_method))},
      {"re_aggregation", std::string(to_string(config.re_aggregation))},
      {"strong_naive_drop", std::string(to_string(config.strong_naive_drop))},
      {"paired_cases", config.paired_cases},
  };
}

json record_json(const MetricRecord& record) {
  auto optional = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return json{{"mse", record.mse},      {"min_mse", record.min_mse}, {"re", optional(record.re)},
              {"pe", record.pe},        {"pc", record.pc},           {"dprime", optional(record.dprime)}};
}

std::filesystem::path prepare_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ReportError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

void write_manifest(const Request& request, std::vector<std::filesystem::path>& outputs) {
  const auto config_path = request.out_dir / (std::string(command_name(request.command)) + "_config.txt");
  write_text_file(config_path, config_file_text(request));
  outputs.push_back(config_path);

  const auto manifest_path =
      request.out_dir / (std::string(command_name(request.command)) + "_manifest.json");
  json files = json::array();
  for (const auto& p : outputs) files.push_back(p.filename().string());
  files.push_back(manifest_path.filename().string());
  json manifest{{"tool", "robinf"},
                {"version", kVersion},
                {"command", std::string(command_name(request.command))},
                {"timestamp", timestamp_utc()},
                {"config", config_json(request.config)},
                {"outputs", files}};
  if (request.command == Command::histogram)
    manifest["range"] = request.config.ranges.at(request.range_index);
  write_text_file(manifest_path, manifest.dump(2) + "\n");
  outputs.push_back(manifest_path);
}

}  // namespace

std::vector<double> parse_ranges(const std::string& text) {
  const auto colon = split(text, ':');
  if (colon.size() == 3) {
    const double start = parse_number(colon[0], "--ranges");
    const double stop = parse_number(colon[1], "--ranges");
    const double step = parse_number(colon[2], "--ranges");
    try {
      return range_ladder(start, stop, step);
    } catch (const ConfigError& e) {
      throw UsageError(std::string("--ranges: ") + e.what());
    }
  }
  if (colon.size() != 1) throw UsageError("--ranges: expected start:stop:step or a comma list");
  std::vector<double> ranges;
  for (const auto& part : split(text, ',')) ranges.push_back(parse_number(part, "--ranges"));
  return ranges;
}

Request parse_command_line(const std::vector<std::string>& args) {
  CLI::App app{"Robustness of inference procedures under calibration error", "robinf"};
  app.set_config("--config", "", "key=value configuration file; flags override its values");
  app.require_subcommand(1);

  std::string scenario = "prototypical";
  std::size_t cases = 1000;
  std::string ranges;
  std::uint64_t seed = 1;
  std::optional<double> upper, lower;
  std::string thresholds;
  std::vector<std::string> procedures;
  std::string format = "both";
  std::string out_dir;
  bool paired = false;
  std::string pooling = "pooled";
  std::string drop = "per-observed-value";
  std::string dprime_method = "zscore";
  std::string re_aggregation = "ratio";
  unsigned threads = 0;
  double range = 0.0;
  std::size_t case_index = 0;

  app.add_option("--scenario", scenario, "prototypical | direct | frequency | hierarchical");
  app.add_option("--cases", cases, "cases per error range");
  app.add_option("--ranges", ranges, "error ranges: start:stop:step or a comma list");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--upper", upper, "upper decision threshold U");
  app.add_option("--lower", lower, "lower decision threshold L");
  app.add_option("--thresholds", thresholds, "lower,upper decision thresholds");
  app.add_option("--procedures", procedures, "comma list of procedure identifiers")->delimiter(',');
  app.add_option("--format", format, "csv | markdown | both");
  app.add_option("--out-dir", out_dir, std::string("output directory (default $") + kOutDirEnv + " or ./results)");
  app.add_flag("--paired-cases", paired, "reuse the same case streams at every range");
  app.add_option("--dprime-pooling", pooling, "pooled | average-of-sds");
  app.add_option("--dprime-method", dprime_method, "zscore | moments");
  app.add_option("--re-aggregation", re_aggregation, "ratio | case-mean");
  app.add_option("--strong-naive-drop", drop, "per-observed-value | per-item");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.add_option("--range", range, "error range for histogram/case");
  app.add_option("--case-index", case_index, "case index for case");

  auto* simulate = app.add_subcommand("simulate", "run a sweep and write result tables")->fallthrough();
  auto* histogram = app.add_subcommand("histogram", "write relative-belief histograms")->fallthrough();
  auto* case_cmd = app.add_subcommand("case", "dump one case as JSON")->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  Request request;
  request.command = simulate->parsed()    ? Command::simulate
                    : histogram->parsed() ? Command::histogram
                                          : Command::case_dump;
  (void)case_cmd;

  const auto parsed_scenario = parse_scenario(scenario);
  if (!parsed_scenario) throw UsageError("--scenario: unknown scenario '" + scenario + "'");
  auto& config = request.config;
  config = ScenarioConfig::defaults(*parsed_scenario);
  config.cases = cases;
  config.master_seed = seed;
  config.paired_cases = paired;
  config.threads = threads;
  if (!ranges.empty()) config.ranges = parse_ranges(ranges);

  if (!thresholds.empty() && (upper || lower))
    throw UsageError("--thresholds cannot be combined with --upper/--lower");
  double low = config.thresholds.lower();
  double high = config.thresholds.upper();
  if (!thresholds.empty()) {
    const auto parts = split(thresholds, ',');
    if (parts.size() != 2) throw UsageError("--thresholds: expected lower,upper");
    low = parse_number(parts[0], "--thresholds");
    high = parse_number(parts[1], "--thresholds");
    if (!(low < high))
      throw UsageError("--thresholds: values must be listed lower,upper (got " + thresholds +
                       "); use --lower/--upper to avoid ambiguity");
  }
  if (lower) low = *lower;
  if (upper) high = *upper;
  try {
    config.thresholds = DecisionThresholds(low, high);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(thresholds.empty() ? "--lower/--upper: " : "--thresholds: ") + e.what());
  }

  if (!procedures.empty()) {
    config.procedures.clear();
    for (const auto& name : procedures) {
      const auto id = parse_procedure(name);
      if (!id) throw UsageError("--procedures: unknown procedure '" + name + "'");
      config.procedures.push_back(*id);
    }
  }

  const auto parsed_pooling = parse_dprime_pooling(pooling);
  if (!parsed_pooling) throw UsageError("--dprime-pooling: unknown value '" + pooling + "'");
  config.dprime_pooling = *parsed_pooling;
  const auto parsed_method = parse_dprime_method(dprime_method);
  if (!parsed_method) throw UsageError("--dprime-method: unknown value '" + dprime_method + "'");
  config.dprime_method = *parsed_method;
  const auto parsed_re = parse_re_aggregation(re_aggregation);
  if (!parsed_re) throw UsageError("--re-aggregation: unknown value '" + re_aggregation + "'");
  config.re_aggregation = *parsed_re;
  const auto parsed_drop = parse_strong_naive_drop(drop);
  if (!parsed_drop) throw UsageError("--strong-naive-drop: unknown value '" + drop + "'");
  config.strong_naive_drop = *parsed_drop;

  if (format == "csv")
    request.formats = {TableFormat::csv};
  else if (format == "markdown")
    request.formats = {TableFormat::markdown};
  else if (format != "both")
    throw UsageError("--format: expected csv, markdown or both");

  if (!out_dir.empty())
    request.out_dir = out_dir;
  else if (const char* env = std::getenv(kOutDirEnv); env && *env)
    request.out_dir = env;

  if (request.command != Command::simulate) {
    if (app.count("--range") == 0)
      throw UsageError("--range is required for " + std::string(command_name(request.command)));
    if (!(range >= 0.0)) throw UsageError("--range: must be nonnegative");
    // Reuse the ladder index when the range is on it, so streams match the sweep.
    auto it = std::find_if(config.ranges.begin(), config.ranges.end(),
                           [&](double r) { return std::abs(r - range) < 1e-9; });
    if (it == config.ranges.end()) {
      config.ranges = {range};
      request.range_index = 0;
    } else {
      request.range_index = static_cast<std::size_t>(it - config.ranges.begin());
    }
    request.case_index = case_index;
    if (request.command == Command::case_dump && case_index >= config.cases)
      throw UsageError("--case-index: must be below --cases");
  }

  try {
    config.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  return request;
}

std::string config_file_text(const Request& request) {
  const auto& config = request.config;
  std::ostringstream out;
  out << "# robinf " << kVersion << " configuration\n";
  out << "scenario=" << to_string(config.scenario) << '\n';
  out << "cases=" << config.cases << '\n';
  out << "ranges=\"" << join_ranges(config.ranges) << "\"\n";
  out << "seed=" << config.master_seed << '\n';
  out << "lower=" << exact_text(config.thresholds.lower()) << '\n';
  out << "upper=" << exact_text(config.thresholds.upper()) << '\n';
  out << "procedures=\"";
  for (std::size_t i = 0; i < config.procedures.size(); ++i)
    out << (i ? "," : "") << to_string(config.procedures[i]);
  out << "\"\n";
  out << "dprime-pooling=" << to_string(config.dprime_pooling) << '\n';
  out << "dprime-method=" << to_string(config.dprime_method) << '\n';
  out << "re-aggregation=" << to_string(config.re_aggregation) << '\n';
  out << "strong-naive-drop=" << to_string(config.strong_naive_drop) << '\n';
  out << "paired-cases=" << (config.paired_cases ? "true" : "false") << '\n';
  if (request.command != Command::simulate)
    out << "range=" << exact_text(config.ranges.at(request.range_index)) << '\n';
  if (request.command == Command::case_dump) out << "case-index=" << request.case_index << '\n';
  return out.str();
}

std::vector<std::filesystem::path> execute(const Request& request, std::ostream& out) {
  const auto& config = request.config;
  std::vector<std::filesystem::path> outputs;

  switch (request.command) {
    case Command::simulate: {
      prepare_out_dir(request.out_dir);
      const auto result = run_sweep(config);
      for (auto metric : {Metric::mse, Metric::dprime, Metric::re, Metric::pe, Metric::pc})
        for (auto format : request.formats)
          outputs.push_back(write_table(result, metric, format, request.out_dir));
      write_manifest(request, outputs);
      for (const auto& p : outputs) out << p.string() << '\n';
      break;
    }
    case Command::histogram: {
      prepare_out_dir(request.out_dir);
      const auto histograms = emit_histogram_data(config, request.range_index);
      outputs = write_histograms(histograms, config.scenario, config.ranges.at(request.range_index),
                                 request.out_dir);
      write_manifest(request, outputs);
      for (const auto& p : outputs) out << p.string() << '\n';
      break;
    }
    case Command::case_dump: {
      const auto eval = run_case(config, request.range_index, request.case_index);
      const auto topology = topology_for(config.scenario);
      json procedures = json::object();
      for (std::size_t i = 0; i < eval.tables.size(); ++i)
        procedures[std::string(to_string(eval.tables[i].procedure))] =
            json{{"rb", eval.tables[i].rb}, {"metrics", record_json(eval.records[i])}};
      json evidence = json::array();
      for (auto v : topology.evidence()) evidence.push_back(std::string(1, Topology::label(v)));
      json direct = nullptr;
      if (eval.draw.belief.direct)
        direct = json{{"prior", eval.draw.belief.direct->prior},
                      {"likelihood_given_true", eval.draw.belief.direct->likelihood_given_true},
                      {"likelihood_given_false", eval.draw.belief.direct->likelihood_given_false}};
      json dump{{"config", config_json(config)},
                {"range", config.ranges.at(request.range_index)},
                {"case_index", request.case_index},
                {"evidence", evidence},
                {"true_chain", eval.draw.truth.flatten()},
                {"belief_chain", eval.draw.belief.chain.flatten()},
                {"direct_inputs", direct},
                {"state_mass_h_true", eval.truth.with_hypothesis},
                {"state_mass_h_false", eval.truth.without_hypothesis},
                {"min_mse", eval.min_mse},
                {"procedures", procedures}};
      out << dump.dump(2) << '\n';
      break;
    }
  }
  return outputs;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Request request;
  try {
    request = parse_command_line(args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
  try {
    execute(request, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace robinf::cli
