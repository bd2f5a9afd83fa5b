#include "qshift/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "qshift/color.hpp"
#include "qshift/image_io.hpp"
#include "qshift/synthetic.hpp"
#include "qshift/theory.hpp"

namespace qshift {

Variant parse_variant(const std::string& name) {
  if (name == "original") return Variant::original;
  if (name == "simplified") return Variant::simplified;
  throw std::invalid_argument("unknown variant: " + name);
}

std::string to_string(Variant variant) { return variant == Variant::original ? "original" : "simplified"; }

Segmentation segment(const Image& image, const SegmentConfig& config) {
  config.params.validate();
  Segmentation out;
  out.density = density_P(image, config.params);
  out.graph = config.variant == Variant::original
                  ? build_graph_original(image, out.density, config.params, config.options)
                  : build_graph_simplified(out.density, config.params.kernel_width(), config.params.max_distance);
  out.labels = connected_components(out.graph);
  return out;
}

nlohmann::json params_to_json(const SegmentConfig& config) {
  const Hyperparams& hp = config.params;
  return {{"ks", hp.kernel_size},
          {"kw", hp.kernel_width()},
          {"dm", distance_to_json(hp.max_distance)},
          {"ratio", hp.ratio},
          {"sigma0", hp.sigma0},
          {"seed", hp.seed},
          {"variant", to_string(config.variant)},
          {"compat_squared_dm", config.options.squared_threshold},
          {"cut_after_argmin", config.options.cut_after_argmin}};
}

nlohmann::json segment_summary(const Segmentation& result, const SegmentConfig& config) {
  return {{"num_superpixels", result.labels.num_labels},
          {"H", result.labels.labels.shape().height},
          {"W", result.labels.labels.shape().width},
          {"params", params_to_json(config)}};
}

std::pair<double, double> rescale_hyperparams(double ks, double dm, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  return {rho * ks, std::isinf(dm) ? dm : rho * dm};
}

namespace {

void check_flat_hypotheses(ExperimentReport& report, double ks, double sigma) {
  if (ks < 5.0) report.warnings.push_back("hypothesis ks >= 5 not met");
  if (sigma > ks / 5.0) report.warnings.push_back("hypothesis sigma <= ks/5 not met");
}

}  // namespace

ExperimentReport run_evolution(const EvolutionConfig& config) {
  if (config.trials < 0) throw std::invalid_argument("trials must be non-negative");
  if (!std::is_sorted(config.sizes.begin(), config.sizes.end()) ||
      std::adjacent_find(config.sizes.begin(), config.sizes.end()) != config.sizes.end())
    throw std::invalid_argument("sizes must be strictly increasing");
  Hyperparams hp{config.kernel_size, config.max_distance, 1.0, config.sigma0, config.seed};
  hp.validate();
  const int kw = hp.kernel_width();

  ExperimentReport report;
  report.experiment = "evolution";
  report.config = {{"sigma", config.sigma},   {"ks", config.kernel_size}, {"kw", kw},
                   {"dm", distance_to_json(config.max_distance)},       {"sizes", config.sizes},
                   {"trials", config.trials}, {"seed", config.seed},    {"sigma0", config.sigma0},
                   {"margin", 2 * kw}};
  if (config.n_tolerance) report.config["n_tolerance"] = *config.n_tolerance;
  if (config.k_tolerance) report.config["k_tolerance"] = *config.k_tolerance;
  check_flat_hypotheses(report, config.kernel_size, config.sigma);

  report.trials.columns = {"size", "trial", "seed", "N", "K"};
  report.summary.columns = {"size", "N_emp", "N_sd", "K_emp", "K_sd", "N_exact_pred", "N_asymp_pred"};

  for (const int size : config.sizes) {
    const Shape shape{size, size};
    const Region region = Region::interior(shape, 2 * kw);
    if (region.empty())
      throw std::invalid_argument("side " + std::to_string(size) + " leaves an empty region after the 2kw margin");
  }

  std::uint64_t trial_index = 0;
  for (const int size : config.sizes) {
    const Shape shape{size, size};
    const Region region = Region::interior(shape, 2 * kw);
    for (int t = 0; t < config.trials; ++t, ++trial_index) {
      const std::uint64_t seed = trial_seed(config.seed, trial_index);
      const Image image = flat_image(FlatModel{size, size, config.color, config.sigma, seed});
      const DensityField q = density_Q(image, config.kernel_size, config.sigma, config.color);
      const int n = local_maxima(q, kw, config.max_distance, region).count;
      Hyperparams trial_hp = hp;
      trial_hp.seed = seed;
      const DensityField p = density_P(image, trial_hp);
      const LabelMap labels = connected_components(build_graph_original(image, p, trial_hp));
      const int k = count_superpixels(labels, region);
      report.trials.add({static_cast<double>(size), static_cast<double>(t), static_cast<double>(seed),
                         static_cast<double>(n), static_cast<double>(k)});
    }

    const auto n_values = report.trials.values_where("N", "size", size);
    const auto k_values = report.trials.values_where("K", "size", size);
    const Summary n_sum = summarize(n_values), k_sum = summarize(k_values);
    const double exact = theory::expected_local_maxima_exact(region, shape, kw, config.max_distance);
    const double asymp =
        theory::expected_local_maxima_asymptotic(region.height, region.width, kw, config.max_distance)
            .expected_local_maxima;
    const bool has_trials = config.trials > 0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    report.summary.add({static_cast<double>(size), has_trials ? n_sum.mean : nan, has_trials ? n_sum.sd : nan,
                        has_trials ? k_sum.mean : nan, has_trials ? k_sum.sd : nan, exact, asymp});

    if (!has_trials || size < config.min_checked_size) continue;
    const std::string tag = "size " + std::to_string(size);
    if (config.n_tolerance)
      report.verdicts.push_back(Verdict::relative(tag + ": mean N vs exact prediction", n_sum.mean, exact,
                                                  *config.n_tolerance));
    if (config.k_tolerance)
      report.verdicts.push_back(
          Verdict::relative(tag + ": mean K vs mean N", k_sum.mean, n_sum.mean, *config.k_tolerance));
  }
  return report;
}

std::vector<NamedImage> synthetic_flat_set(int side, int count, double sigma, std::uint64_t seed, Color color) {
  std::vector<NamedImage> out;
  for (int index = 0; index < count; ++index) {
    const std::uint64_t s = trial_seed(seed, static_cast<std::uint64_t>(index));
    out.push_back({"flat-" + std::to_string(index), flat_image(FlatModel{side, side, color, sigma, s})});
  }
  return out;
}

std::vector<NamedImage> load_ppm_directory(const std::string& dir) {
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  std::vector<NamedImage> out;
  for (const auto& p : paths) out.push_back({p.filename().string(), rgb_to_cielab(load_ppm(p))});
  return out;
}

namespace {

enum class ScaleKind { size, params };

ExperimentReport run_scale(const std::vector<NamedImage>& images, const ScaleConfig& config, ScaleKind kind) {
  const bool by_size = kind == ScaleKind::size;
  const std::string factor_name = by_size ? "rho" : "kappa";
  for (const double f : config.factors) {
    if (by_size && !(f >= 1.0)) throw std::invalid_argument("rho must be >= 1");
    if (!by_size && !(f > 0.0)) throw std::invalid_argument("kappa must be positive");
  }

  ExperimentReport report;
  report.experiment = by_size ? "scale_size" : "scale_params";
  report.config = {{"params", params_to_json(config.segment)},
                   {factor_name, config.factors},
                   {"images", images.size()},
                   {"downsampling", "box"}};
  report.trials.columns = {"image", factor_name, "n_orig", "n_new", "ratio"};
  report.summary.columns = {factor_name, "mean_ratio", "sd_ratio", "count"};

  for (std::size_t index = 0; index < images.size(); ++index) {
    const Image& image = images[index].image;
    std::vector<double> usable;
    for (const double f : config.factors) {
      if (by_size && (image.height() < 2 * f || image.width() < 2 * f)) {
        std::ostringstream msg;
        msg << images[index].name << ": smaller than 2 rho = " << 2 * f << " pixels per side, skipped";
        report.warnings.push_back(msg.str());
      } else {
        usable.push_back(f);
      }
    }
    if (usable.empty()) continue;
    const int n_orig = segment(image, config.segment).labels.num_labels;
    for (const double f : usable) {
      int n_new = 0;
      if (f == 1.0) {
        n_new = n_orig;
      } else if (by_size) {
        n_new = segment(downsample_box(image, f), config.segment).labels.num_labels;
      } else {
        SegmentConfig scaled = config.segment;
        std::tie(scaled.params.kernel_size, scaled.params.max_distance) =
            rescale_hyperparams(scaled.params.kernel_size, scaled.params.max_distance, f);
        n_new = segment(image, scaled).labels.num_labels;
      }
      report.trials.add({static_cast<double>(index), f, static_cast<double>(n_orig), static_cast<double>(n_new),
                         static_cast<double>(n_orig) / n_new});
    }
  }

  for (const double f : config.factors) {
    const auto ratios = report.trials.values_where("ratio", factor_name, f);
    const Summary s = summarize(ratios);
    report.summary.add({f, s.n ? s.mean : std::numeric_limits<double>::quiet_NaN(),
                        s.n ? s.sd : std::numeric_limits<double>::quiet_NaN(), static_cast<double>(s.n)});
    const auto it = config.expectations.find(f);
    if (it == config.expectations.end()) continue;
    std::ostringstream name;
    name << factor_name << "=" << f << ": mean n_orig/n_new";
    if (s.n == 0)
      report.verdicts.push_back(Verdict::uninformative(name.str(), 0.0, "no usable images"));
    else
      report.verdicts.push_back(Verdict::between(name.str(), s.mean, it->second.first, it->second.second));
  }
  return report;
}

}  // namespace

ExperimentReport run_scale_size(const std::vector<NamedImage>& images, const ScaleConfig& config) {
  return run_scale(images, config, ScaleKind::size);
}

ExperimentReport run_scale_params(const std::vector<NamedImage>& images, const ScaleConfig& config) {
  return run_scale(images, config, ScaleKind::params);
}

ExperimentReport run_bicolor_check(const BicolorCheckConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be positive");
  const Hyperparams hp{config.kernel_size, kInfinity, 1.0, config.sigma0, config.seed};
  hp.validate();
  const int kw = hp.kernel_width();
  // Left patch covers columns [0, 2kw], right patch [2kw+1, 3kw]; row kw and
  // every tested pixel keep a full window.
  const int left_columns = 2 * kw + 1;
  const int height = 2 * kw + 1, width = 3 * kw + 1, row = kw;
  const int last_left = left_columns - 1;

  ExperimentReport report;
  report.experiment = "bicolor_check";
  report.config = {{"ks", config.kernel_size}, {"kw", kw},           {"sigma", config.sigma},
                   {"color_gap", config.color_gap}, {"trials", config.trials}, {"seed", config.seed},
                   {"sigma0", config.sigma0}, {"height", height},    {"width", width},
                   {"left_columns", left_columns}, {"row", row},
                   {"hypotheses", {{"ks_at_least_5", config.kernel_size >= 5.0},
                                   {"sigma_at_most_ks_over_5", config.sigma <= config.kernel_size / 5.0},
                                   {"gap_at_least_3ks", config.color_gap >= 3.0 * config.kernel_size}}}};
  if (config.min_frequency) report.config["min_frequency"] = *config.min_frequency;
  check_flat_hypotheses(report, config.kernel_size, config.sigma);
  if (config.color_gap < 3.0 * config.kernel_size) report.warnings.push_back("hypothesis gap >= 3 ks not met");

  std::vector<int> columns;
  for (int j = last_left - kw; j < last_left; ++j) columns.push_back(j);

  report.trials.columns = {"trial", "seed"};
  for (const int j : columns) report.trials.columns.push_back("increase_" + std::to_string(j));
  report.summary.columns = {"j", "frequency", "bound", "expected_gap"};

  const DensityKernel kernel(hp);
  const Color left{50.0, 0.0, 0.0};
  const Color right{50.0 + config.color_gap, 0.0, 0.0};
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = trial_seed(config.seed, static_cast<std::uint64_t>(t));
    const Image image = bicolor_image(BicolorModel{height, width, left_columns, left, right, config.sigma, seed});
    const NoiseModel noise{seed, config.sigma0};
    std::vector<double> row_values{static_cast<double>(t), static_cast<double>(seed)};
    double previous = kernel.at(image, noise, row, columns.front());
    for (const int j : columns) {
      const double next = kernel.at(image, noise, row, j + 1);
      row_values.push_back(previous > next ? 1.0 : 0.0);
      previous = next;
    }
    report.trials.add(std::move(row_values));
  }

  const double bound = 1.0 - 16.0 * config.sigma * config.sigma;
  const Shape shape{height, width};
  for (const int j : columns) {
    const auto hits = report.trials.values("increase_" + std::to_string(j));
    const double freq = summarize(hits).mean;
    const double gap =
        theory::expected_density_bicolor(row, j, left_columns, shape, config.kernel_size, config.sigma,
                                         config.color_gap) -
        theory::expected_density_bicolor(row, j + 1, left_columns, shape, config.kernel_size, config.sigma,
                                         config.color_gap);
    report.summary.add({static_cast<double>(j), freq, bound, gap});
    const std::string name = "pair (" + std::to_string(j) + "," + std::to_string(j + 1) + ")";
    if (config.color_gap == 0.0) {
      report.verdicts.push_back(Verdict::uninformative(name, freq, "no boundary: colors coincide"));
      continue;
    }
    if (bound <= 0.0)
      report.verdicts.push_back(Verdict::uninformative(name + " vs 1 - 16 sigma^2", freq, "bound is vacuous"));
    else
      report.verdicts.push_back(Verdict::at_least(name + " vs 1 - 16 sigma^2", freq, bound));
    if (!config.min_frequency) continue;
    if (gap >= 1.5 * config.kernel_size)
      report.verdicts.push_back(Verdict::at_least(name + " vs declared floor", freq, *config.min_frequency));
    else
      report.verdicts.push_back(
          Verdict::uninformative(name + " vs declared floor", freq, "expected gap below 3 ks / 2"));
  }
  return report;
}

ExperimentReport run_pq_check(const PqCheckConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be positive");
  const Hyperparams hp{config.kernel_size, kInfinity, 1.0, config.sigma0, config.seed};
  hp.validate();
  const int kw = hp.kernel_width();
  const int side = 2 * kw + 1;

  ExperimentReport report;
  report.experiment = "pq_check";
  report.config = {{"ks", config.kernel_size}, {"kw", kw},         {"sigma", config.sigma},
                   {"epsilons", config.epsilons}, {"trials", config.trials}, {"seed", config.seed},
                   {"sigma0", config.sigma0},  {"side", side},     {"pixel", {kw, kw}}};
  check_flat_hypotheses(report, config.kernel_size, config.sigma);
  report.trials.columns = {"trial", "seed", "P", "Q", "abs_diff"};
  report.summary.columns = {"epsilon", "frequency", "bound"};

  const DensityKernel kernel(hp);
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = trial_seed(config.seed, static_cast<std::uint64_t>(t));
    const Image image = flat_image(FlatModel{side, side, config.color, config.sigma, seed});
    const double p = kernel.at(image, NoiseModel{seed, config.sigma0}, kw, kw);
    const double q = density_Q_at(image, config.kernel_size, config.sigma, config.color, kw, kw);
    report.trials.add({static_cast<double>(t), static_cast<double>(seed), p, q, std::abs(p - q)});
  }

  const auto diffs = report.trials.values("abs_diff");
  for (const double eps : config.epsilons) {
    if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
    const double freq =
        static_cast<double>(std::count_if(diffs.begin(), diffs.end(), [&](double d) { return d > eps; })) /
        static_cast<double>(diffs.size());
    const double bound = 71.0 * config.sigma * config.sigma / (eps * eps);
    report.summary.add({eps, freq, bound});
    std::ostringstream name;
    name << "eps=" << eps << ": exceedance vs 71 sigma^2/eps^2";
    if (bound >= 1.0)
      report.verdicts.push_back(Verdict::uninformative(name.str(), freq, "uninformative: bound >= 1"));
    else
      report.verdicts.push_back(Verdict::at_most(name.str(), freq, bound));
  }
  return report;
}

ExperimentReport run_flat_moments(const FlatMomentsConfig& config) {
  if (config.trials < 2) throw std::invalid_argument("trials must be at least 2");
  const Hyperparams hp{config.kernel_size, kInfinity, 1.0, config.sigma0, config.seed};
  hp.validate();
  const int kw = hp.kernel_width();
  const int side = 2 * kw + 1;
  const Shape shape{side, side};

  ExperimentReport report;
  report.experiment = "flat_moments";
  report.config = {{"ks", config.kernel_size}, {"kw", kw},         {"sigma", config.sigma},
                   {"trials", config.trials}, {"seed", config.seed}, {"sigma0", config.sigma0},
                   {"side", side},            {"pixel", {kw, kw}}, {"standard_errors", config.standard_errors}};
  check_flat_hypotheses(report, config.kernel_size, config.sigma);
  report.trials.columns = {"trial", "seed", "P"};

  const DensityKernel kernel(hp);
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = trial_seed(config.seed, static_cast<std::uint64_t>(t));
    const Image image = flat_image(FlatModel{side, side, config.color, config.sigma, seed});
    report.trials.add({static_cast<double>(t), static_cast<double>(seed),
                       kernel.at(image, NoiseModel{seed, config.sigma0}, kw, kw)});
  }

  const auto values = report.trials.values("P");
  const Summary s = summarize(values);
  const double n = static_cast<double>(s.n);
  const double variance = s.sd * s.sd;
  double m4 = 0.0;
  for (const double v : values) m4 += std::pow(v - s.mean, 4);
  m4 /= n;
  const double variance_se = std::sqrt(std::max(0.0, m4 - variance * variance) / n);

  const double mean_pred = theory::expected_density_flat(kw, kw, shape, config.kernel_size, config.sigma);
  const double var_pred =
      theory::variance_density_flat(kw, kw, shape, config.kernel_size, config.sigma, config.sigma0);
  const double delta = delta_sum(kw, kw, shape, config.kernel_size, kw);
  const double s4 = std::pow(config.sigma, 4);
  const double lower = s4 * delta * delta / std::pow(config.kernel_size, 4);
  const double upper = 107.0 * s4;

  report.summary.columns = {"mean", "mean_se", "mean_pred", "variance", "variance_se", "variance_pred"};
  report.summary.add({s.mean, s.standard_error(), mean_pred, variance, variance_se, var_pred});
  const double k = config.standard_errors;
  report.verdicts.push_back(Verdict::between("mean vs C2 Delta", s.mean, mean_pred - k * s.standard_error(),
                                             mean_pred + k * s.standard_error()));
  report.verdicts.push_back(
      Verdict::between("variance vs psi formula", variance, var_pred - k * variance_se, var_pred + k * variance_se));
  report.verdicts.push_back(Verdict::between("variance within closed-form bounds", variance, lower, upper));
  return report;
}

}  // namespace qshift
