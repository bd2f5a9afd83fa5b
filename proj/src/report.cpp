#include "qshift/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "qshift/image_io.hpp"

namespace qshift {

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column named " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

void Table::add(std::vector<double> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("row width does not match the header");
  rows.push_back(std::move(row));
}

std::vector<double> Table::values(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[c]);
  return out;
}

std::vector<double> Table::values_where(const std::string& name, const std::string& key, double key_value) const {
  const std::size_t c = column(name), k = column(key);
  std::vector<double> out;
  for (const auto& row : rows)
    if (row[k] == key_value) out.push_back(row[c]);
  return out;
}

void Table::write_csv(std::ostream& out) const {
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n' << std::setprecision(17);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "");
      if (std::isinf(row[c]))
        out << (row[c] > 0 ? "inf" : "-inf");
      else
        out << row[c];
    }
    out << '\n';
  }
}

nlohmann::json Table::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t c = 0; c < columns.size(); ++c) obj[columns[c]] = distance_to_json(row[c]);
    rows_json.push_back(std::move(obj));
  }
  return rows_json;
}

double Summary::standard_error() const { return n ? sd / std::sqrt(static_cast<double>(n)) : 0.0; }

Summary summarize(std::span<const double> values) {
  Summary s;
  s.n = values.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

Verdict Verdict::at_most(std::string name, double observed, double bound) {
  return between(std::move(name), observed, -std::numeric_limits<double>::infinity(), bound);
}

Verdict Verdict::at_least(std::string name, double observed, double bound) {
  return between(std::move(name), observed, bound, std::numeric_limits<double>::infinity());
}

Verdict Verdict::between(std::string name, double observed, double lo, double hi) {
  Verdict v;
  v.name = std::move(name);
  v.observed = observed;
  v.lower = lo;
  v.upper = hi;
  v.passed = observed >= lo && observed <= hi;
  return v;
}

Verdict Verdict::relative(std::string name, double observed, double target, double tolerance) {
  const double slack = tolerance * std::abs(target);
  return between(std::move(name), observed, target - slack, target + slack);
}

Verdict Verdict::uninformative(std::string name, double observed, std::string why) {
  Verdict v;
  v.name = std::move(name);
  v.observed = observed;
  v.passed = true;
  v.informative = false;
  v.note = std::move(why);
  return v;
}

bool ExperimentReport::all_passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

nlohmann::json distance_to_json(double d) {
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  if (std::isnan(d)) return nullptr;
  return d;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json verdicts_json = nlohmann::json::array();
  for (const Verdict& v : verdicts)
    verdicts_json.push_back({{"name", v.name},
                             {"observed", distance_to_json(v.observed)},
                             {"lower", distance_to_json(v.lower)},
                             {"upper", distance_to_json(v.upper)},
                             {"passed", v.passed},
                             {"informative", v.informative},
                             {"note", v.note}});
  return {{"experiment", experiment}, {"config", config},     {"summary", summary.to_json()},
          {"verdicts", verdicts_json}, {"warnings", warnings}, {"all_passed", all_passed()},
          {"num_trials", trials.rows.size()}};
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw std::invalid_argument("unknown report format: " + name);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

void write_report(const ExperimentReport& report, const std::filesystem::path& out_dir, ReportFormat format) {
  std::filesystem::create_directories(out_dir);
  nlohmann::json j = report.to_json();
  if (format == ReportFormat::json) j["trials"] = report.trials.to_json();
  open_for_write(out_dir / (report.experiment + ".json")) << j.dump(2) << '\n';
  if (format == ReportFormat::csv) {
    auto summary = open_for_write(out_dir / (report.experiment + ".csv"));
    report.summary.write_csv(summary);
    auto trials = open_for_write(out_dir / (report.experiment + "_trials.csv"));
    report.trials.write_csv(trials);
  }
}

void print_verdicts(std::ostream& out, const ExperimentReport& report) {
  for (const std::string& w : report.warnings) out << "warning: " << w << '\n';
  for (const Verdict& v : report.verdicts) {
    out << (v.informative ? (v.passed ? "PASS " : "FAIL ") : "SKIP ") << v.name << ": observed " << v.observed;
    if (v.informative) out << " in [" << v.lower << ", " << v.upper << "]";
    if (!v.note.empty()) out << " (" << v.note << ")";
    out << '\n';
  }
}

}  // namespace qshift
