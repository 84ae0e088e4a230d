#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "robinf/harness.hpp"

namespace robinf {

enum class TableFormat { csv, markdown };

/// I/O failure while writing a report; the message names the path.
class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decimal places shown for a metric: 2 for d', 3 otherwise.
int display_decimals(Metric metric) noexcept;

/// One row per error range and one column per configured procedure, in
/// table order. The MSE table gains a "Minimum Possible" column. CSV adds
/// full-precision value, standard error and exclusion-count columns.
std::string format_table(const SweepResult& result, Metric metric, TableFormat format);

/// Writes format_table() to `<dir>/<scenario>_<metric>.{csv,md}`.
std::filesystem::path write_table(const SweepResult& result, Metric metric, TableFormat format,
                                  const std::filesystem::path& dir);

/// bin_low,bin_high,mass_given_H_true,mass_given_H_false
std::string format_histogram(const Histogram& histogram);

/// Writes one CSV per histogram as `<dir>/<scenario>_hist_r<range>_<procedure>.csv`.
std::vector<std::filesystem::path> write_histograms(const std::vector<Histogram>& histograms,
                                                    Scenario scenario, double range,
                                                    const std::filesystem::path& dir);

/// Writes `contents` to `path`, throwing ReportError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

/// Shortest decimal text that round-trips the double; "NA" for NaN.
std::string exact_text(double value);
/// Fixed-point text with `decimals` places; "NA" for NaN.
std::string fixed_text(double value, int decimals);

}  // namespace robinf
