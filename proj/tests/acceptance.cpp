// Acceptance suite: one PASS/FAIL line per criterion.
// Exit status is 0 iff the set of failing criteria equals --expected-failures.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qshift/density.hpp"
#include "qshift/experiments.hpp"
#include "qshift/graph.hpp"
#include "qshift/synthetic.hpp"
#include "qshift/theory.hpp"

using namespace qshift;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

// Folds the verdicts of one or more reports into a single outcome.
void absorb(Outcome& out, const ExperimentReport& r, const std::string& tag) {
  for (const Verdict& v : r.verdicts) {
    if (!v.informative) continue;
    if (!v.passed) {
      out.passed = false;
      out.detail += " [" + tag + " " + v.name + " = " + fmt(v.observed) + " not in [" + fmt(v.lower) + ", " +
                    fmt(v.upper) + "]]";
    }
  }
}

Outcome criterion_components() {
  const Shape s{20, 30};
  const std::vector<std::pair<int, double>> configs{{3, 2.5}, {3, 3.7}, {3, kInfinity}};
  int agree = 0, total = 0;
  for (const auto& [kw, dm] : configs)
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const DensityField f = uniform_field(s, seed);
      const int components = connected_components(build_graph_simplified(f, kw, dm)).num_labels;
      agree += components == local_maxima(f, kw, dm, Region::whole(s)).count;
      ++total;
    }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " fields agree"};
}

Outcome criterion_expected_maxima() {
  const Shape s{30, 30};
  const Region r = Region::whole(s);
  Outcome out;
  for (const double dm : {10.0, 18.0, 40.0}) {
    std::vector<double> counts;
    for (std::uint64_t seed = 0; seed < 2000; ++seed)
      counts.push_back(local_maxima(uniform_field(s, seed ^ (std::uint64_t(dm) << 32)), 15, dm, r).count);
    const Summary sum = summarize(counts);
    const double expected = theory::expected_local_maxima_exact(r, s, 15, dm);
    const double z = std::abs(sum.mean - expected) / sum.standard_error();
    out.passed &= z <= 3.0;
    out.detail += " dm=" + fmt(dm) + ": mean " + fmt(sum.mean) + " vs " + fmt(expected) + " (" + fmt(z, 2) + " SE)";
  }
  return out;
}

Outcome criterion_evolution() {
  Outcome out;
  for (const double dm : {10.0, 18.0, kInfinity}) {
    EvolutionConfig config;
    config.max_distance = dm;
    config.n_tolerance = 0.15;
    config.k_tolerance = 0.25;
    const ExperimentReport r = run_evolution(config);
    const std::string tag = "dm=" + fmt(dm);
    out.detail += " " + tag + " N/K/pred:";
    for (const auto& row : r.summary.rows)
      out.detail += " " + fmt(row[r.summary.column("N_emp")], 3) + "/" + fmt(row[r.summary.column("K_emp")], 3) +
                    "/" + fmt(row[r.summary.column("N_exact_pred")], 3);
    absorb(out, r, tag);
  }
  return out;
}

Outcome criterion_homogeneity() {
  double worst = 0.0;
  for (const double dm : {5.0, 10.0, 18.0, 25.0, 40.0})
    for (const double kappa : {0.5, 2.0, 3.0}) {
      const double base = theory::expected_local_maxima_asymptotic(200, 300, 15, dm).expected_local_maxima;
      const double scaled =
          theory::expected_local_maxima_asymptotic(200, 300, kappa * 15, kappa * dm).expected_local_maxima;
      worst = std::max(worst, std::abs(scaled * kappa * kappa - base) / base);
    }
  return {worst <= 1e-14, "worst relative error " + fmt(worst, 3) + " over disk, rounded and square cases"};
}

ScaleConfig scale_config(std::vector<double> factors, std::map<double, std::pair<double, double>> bounds) {
  ScaleConfig config;
  config.segment.params = Hyperparams{5.0, kInfinity, 1.0, 1e-5, 0};
  config.factors = std::move(factors);
  config.expectations = std::move(bounds);
  return config;
}

Outcome scale_outcome(const ExperimentReport& r, const std::string& key) {
  Outcome out;
  for (const auto& row : r.summary.rows)
    out.detail += " " + key + "=" + fmt(row[r.summary.column(key)]) + ": mean ratio " +
                  fmt(row[r.summary.column("mean_ratio")]);
  absorb(out, r, key);
  return out;
}

const std::vector<NamedImage>& flat_set() {
  static const std::vector<NamedImage> images = synthetic_flat_set(256, 20, 0.5, 0);
  return images;
}

Outcome criterion_scale_size() {
  return scale_outcome(run_scale_size(flat_set(), scale_config({2.0, 3.0}, {{2.0, {3.0, 5.0}}, {3.0, {6.0, 12.0}}})),
                       "rho");
}

Outcome criterion_scale_params() {
  return scale_outcome(
      run_scale_params(flat_set(), scale_config({2.0, 0.5}, {{2.0, {3.0, 4.5}}, {0.5, {0.18, 0.35}}})), "kappa");
}

Outcome criterion_bicolor() {
  Outcome out;
  for (const double sigma : {0.1, 0.2}) {
    BicolorCheckConfig config;
    config.sigma = sigma;
    config.min_frequency = 0.99;
    const ExperimentReport r = run_bicolor_check(config);
    const auto freq = r.summary.values("frequency");
    out.detail += " sigma=" + fmt(sigma) + ": min frequency " + fmt(*std::min_element(freq.begin(), freq.end())) +
                  " (bound " + fmt(1 - 16 * sigma * sigma) + ")";
    absorb(out, r, "sigma=" + fmt(sigma));
  }
  return out;
}

Outcome criterion_pq() {
  PqCheckConfig config;
  config.epsilons = {0.5, 1.0};
  const ExperimentReport r = run_pq_check(config);
  Outcome out;
  for (const Verdict& v : r.verdicts) out.detail += " " + v.name + " = " + fmt(v.observed) + " <= " + fmt(v.upper);
  absorb(out, r, "pq");
  return out;
}

Outcome criterion_bounds() {
  int failures = 0;
  for (int k = 0; k < 10000; ++k) {
    const double t = 0.04 * k / 9999.0, t2 = t * t;
    const double p1 = theory::psi1(t), p2 = theory::psi2(t);
    failures += !(p1 >= 4 * t2 && p1 <= 6 * t2 && p2 >= t2 && p2 <= 1.5 * t2 && std::abs(2 * p2 - p1) <= 3 * t2);
  }
  const int psi_failures = failures;
  for (int ks = 5; ks <= 20; ++ks) {
    const int kw = kernel_width_for(ks);
    const Shape s{2 * kw + 1, 2 * kw + 1};
    const double delta = delta_sum(kw, kw, s, ks, kw);
    failures += !(delta >= (2.0 * ks + 1) * (2.0 * ks + 1) && delta <= (5.0 * ks + 2) * (5.0 * ks + 2) / 4);
  }
  for (int d = 1; d <= 100; ++d)
    failures += std::abs(double(theory::lattice_count(d, d)) - kPi * d * d) > 2 * std::sqrt(2.0) * kPi * d;
  double worst_b = 0.0;
  for (int a = 0; a < 100; ++a)
    for (int b = 0; b < 100; ++b) {
      const double s = 0.5 + 60.0 * a / 99.0;
      const double d = s * (1.0 + (std::sqrt(2.0) - 1.0) * b / 99.0);
      const double err = std::abs(theory::rounded_square_area(s, d) - theory::rounded_square_approx(s, d));
      worst_b = std::max(worst_b, err / (d * d));
    }
  failures += worst_b > 0.16;
  double worst_limit = 0.0;
  for (const double s : {0.5, 1.0, 3.0, 15.0, 60.0}) {
    worst_limit = std::max(worst_limit, std::abs(theory::rounded_square_area(s, s) / (kPi * s * s) - 1));
    worst_limit = std::max(worst_limit, std::abs(theory::rounded_square_area(s, std::sqrt(2.0) * s) / (4 * s * s) - 1));
  }
  failures += worst_limit > 1e-9;
  return {failures == 0, std::to_string(failures) + " violations (psi " + std::to_string(psi_failures) +
                             "), worst |B - approx| / d^2 = " + fmt(worst_b) + ", worst limit error " +
                             fmt(worst_limit, 2)};
}

Outcome criterion_moments() {
  const ExperimentReport r = run_flat_moments(FlatMomentsConfig{});
  Outcome out;
  for (const Verdict& v : r.verdicts)
    out.detail += " " + v.name + " = " + fmt(v.observed, 6) + " in [" + fmt(v.lower, 6) + ", " + fmt(v.upper, 6) + "]";
  absorb(out, r, "moments");
  return out;
}

std::set<int> parse_ids(const std::string& list) {
  std::set<int> ids;
  std::stringstream in(list);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) ids.insert(std::stoi(item));
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string expected_list, only_list;
  app.add_option("--expected-failures", expected_list, "Comma separated criteria known to fail");
  app.add_option("--only", only_list, "Comma separated criteria to run");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> expected = parse_ids(expected_list), only = parse_ids(only_list);

  const std::vector<Criterion> criteria{
      {1, "simplified components equal local maxima", 10, criterion_components},
      {2, "expected local maxima on uniform fields", 60, criterion_expected_maxima},
      {3, "flat model maxima and superpixel counts", 300, criterion_evolution},
      {4, "homogeneity of the asymptotic predictor", 1, criterion_homogeneity},
      {5, "downsampling ratio on flat images", 120, criterion_scale_size},
      {6, "hyperparameter scaling ratio on flat images", 120, criterion_scale_params},
      {7, "bicolor boundary ordering", 60, criterion_bicolor},
      {8, "P versus Q tail", 60, criterion_pq},
      {9, "numeric bounds suite", 10, criterion_bounds},
      {10, "flat model moments of P", 60, criterion_moments},
  };

  std::set<int> failed;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string(" error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) {
      out.passed = false;
      out.detail += " [over the " + fmt(c.budget_seconds) + " s budget]";
    }
    if (!out.passed) failed.insert(c.id);
    std::printf("%s criterion %d (%s): %s [%.1f s]%s\n", out.passed ? "PASS" : "FAIL", c.id, c.name.c_str(),
                out.detail.c_str(), seconds, !out.passed && expected.contains(c.id) ? " (expected failure)" : "");
    std::fflush(stdout);
  }

  std::set<int> expected_run;
  for (const int id : expected)
    if (only.empty() || only.contains(id)) expected_run.insert(id);
  if (failed != expected_run) {
    std::printf("failing set differs from the expected failures\n");
    return 1;
  }
  std::printf("%zu criteria failed, all expected\n", failed.size());
  return 0;
}
