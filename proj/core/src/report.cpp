#include "robinf/report.hpp"

#include <array>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace robinf {
namespace {

void append_row(std::ostringstream& out, const std::vector<std::string>& cells, char sep,
                bool markdown) {
  if (markdown) out << "| ";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out << (markdown ? " | " : std::string(1, sep));
    out << cells[i];
  }
  if (markdown) out << " |";
  out << '\n';
}

std::string range_label(double range) { return fixed_text(range, 3); }

}  // namespace

std::string exact_text(double value) {
  if (std::isnan(value)) return "NA";
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return "NA";
  return std::string(buf.data(), end);
}

std::string fixed_text(double value, int decimals) {
  if (std::isnan(value)) return "NA";
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                       std::chars_format::fixed, decimals);
  if (ec != std::errc{}) return "NA";
  std::string text(buf.data(), end);
  if (text.starts_with('-') && text.find_first_not_of("-0.") == std::string::npos)
    text.erase(0, 1);
  return text;
}

int display_decimals(Metric metric) noexcept { return metric == Metric::dprime ? 2 : 3; }

std::string format_table(const SweepResult& result, Metric metric, TableFormat format) {
  const auto& procedures = result.config.procedures;
  const bool markdown = format == TableFormat::markdown;
  const bool with_minimum = metric == Metric::mse;
  const int decimals = display_decimals(metric);

  std::vector<std::string> header{markdown ? "Error Range" : "error_range"};
  for (auto id : procedures) header.emplace_back(display_name(id));
  if (with_minimum) header.emplace_back("Minimum Possible");
  if (!markdown) {
    for (auto id : procedures) {
      const std::string key(to_string(id));
      header.push_back(key + "_value");
      header.push_back(key + "_se");
      header.push_back(key + "_excluded");
    }
    if (with_minimum) {
      header.emplace_back("min_mse_value");
      header.emplace_back("min_mse_se");
    }
  }

  std::ostringstream out;
  if (markdown)
    out << "### " << to_string(metric) << " (" << to_string(result.config.scenario) << ", "
        << result.config.cases << " cases, seed " << result.config.master_seed << ")\n\n";
  append_row(out, header, ',', markdown);
  if (markdown) {
    std::vector<std::string> rule(header.size(), "---");
    append_row(out, rule, ',', true);
  }

  for (std::size_t r = 0; r < result.rows.size(); ++r) {
    std::vector<std::string> cells{range_label(result.rows[r].range)};
    for (auto id : procedures) cells.push_back(fixed_text(result.estimate(r, id, metric).value, decimals));
    if (with_minimum) cells.push_back(fixed_text(result.rows[r].min_mse.value, decimals));
    if (!markdown) {
      for (auto id : procedures) {
        const auto& est = result.estimate(r, id, metric);
        cells.push_back(exact_text(est.value));
        cells.push_back(exact_text(est.std_error));
        cells.push_back(std::to_string(est.excluded));
      }
      if (with_minimum) {
        cells.push_back(exact_text(result.rows[r].min_mse.value));
        cells.push_back(exact_text(result.rows[r].min_mse.std_error));
      }
    }
    append_row(out, cells, ',', markdown);
  }
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ReportError("cannot open " + path.string() + ": " + std::strerror(errno));
  file << contents;
  file.flush();
  if (!file) throw ReportError("cannot write " + path.string() + ": " + std::strerror(errno));
}

std::filesystem::path write_table(const SweepResult& result, Metric metric, TableFormat format,
                                  const std::filesystem::path& dir) {
  auto path = dir / (std::string(to_string(result.config.scenario)) + "_" +
                     std::string(to_string(metric)) +
                     (format == TableFormat::csv ? ".csv" : ".md"));
  write_text_file(path, format_table(result, metric, format));
  return path;
}

std::string format_histogram(const Histogram& histogram) {
  std::ostringstream out;
  out << "bin_low,bin_high,mass_given_H_true,mass_given_H_false\n";
  for (std::size_t b = 0; b < histogram.bin_count(); ++b) {
    out << fixed_text(static_cast<double>(b) * histogram.bin_width, 2) << ','
        << fixed_text(static_cast<double>(b + 1) * histogram.bin_width, 2) << ','
        << exact_text(histogram.given_true[b]) << ',' << exact_text(histogram.given_false[b])
        << '\n';
  }
  return out.str();
}

std::vector<std::filesystem::path> write_histograms(const std::vector<Histogram>& histograms,
                                                    Scenario scenario, double range,
                                                    const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> paths;
  for (const auto& h : histograms) {
    auto path = dir / (std::string(to_string(scenario)) + "_hist_r" + fixed_text(range, 3) + "_" +
                       std::string(to_string(h.procedure)) + ".csv");
    write_text_file(path, format_histogram(h));
    paths.push_back(std::move(path));
  }
  return paths;
}

}  // namespace robinf
