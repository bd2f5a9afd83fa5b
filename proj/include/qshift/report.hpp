#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace qshift {

/// Column-named table of doubles.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
  void add(std::vector<double> row);
  std::vector<double> values(const std::string& name) const;
  /// Values of `name` in rows where `key` equals `key_value`.
  std::vector<double> values_where(const std::string& name, const std::string& key, double key_value) const;
  void write_csv(std::ostream& out) const;
  nlohmann::json to_json() const;
};

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1)
  std::size_t n = 0;

  double standard_error() const;
};

Summary summarize(std::span<const double> values);

/// One declared tolerance and its outcome. Uninformative verdicts pass vacuously.
struct Verdict {
  std::string name;
  double observed = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool passed = false;
  bool informative = true;
  std::string note;

  static Verdict at_most(std::string name, double observed, double bound);
  static Verdict at_least(std::string name, double observed, double bound);
  static Verdict between(std::string name, double observed, double lo, double hi);
  /// |observed - target| <= tolerance * |target|
  static Verdict relative(std::string name, double observed, double target, double tolerance);
  static Verdict uninformative(std::string name, double observed, std::string why);
};

/// Result of a harness run: config echo, per-trial records, summary rows
/// derived from those records, and verdicts against declared tolerances.
struct ExperimentReport {
  std::string experiment;
  nlohmann::json config = nlohmann::json::object();
  Table trials;
  Table summary;
  std::vector<Verdict> verdicts;
  std::vector<std::string> warnings;

  bool all_passed() const;
  nlohmann::json to_json() const;
};

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(const std::string& name);

/// Writes <experiment>.json (config, summary, verdicts) plus, for csv, the
/// summary as <experiment>.csv and the records as <experiment>_trials.csv.
void write_report(const ExperimentReport& report, const std::filesystem::path& out_dir, ReportFormat format);

/// Human-readable verdict lines.
void print_verdicts(std::ostream& out, const ExperimentReport& report);

nlohmann::json distance_to_json(double d);

}  // namespace qshift
