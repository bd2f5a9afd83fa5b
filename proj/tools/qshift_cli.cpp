#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qshift/color.hpp"
#include "qshift/experiments.hpp"
#include "qshift/image_io.hpp"
#include "qshift/synthetic.hpp"
#include "qshift/theory.hpp"

namespace fs = std::filesystem;
using namespace qshift;

namespace {

double parse_distance(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "infinity") return kInfinity;
  std::size_t used = 0;
  const double value = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad distance: " + text);
  return value;
}

Color parse_color(const std::string& text) {
  Color c{};
  std::istringstream in(text);
  std::string part;
  for (int k = 0; k < 3; ++k) {
    if (!std::getline(in, part, ',')) throw std::invalid_argument("color needs three comma-separated values");
    c[k] = std::stod(part);
  }
  return c;
}

// "factor:lo:hi"
std::pair<double, std::pair<double, double>> parse_expectation(const std::string& text) {
  std::istringstream in(text);
  std::string a, b, c;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c))
    throw std::invalid_argument("expectation must look like factor:lo:hi");
  return {std::stod(a), {std::stod(b), std::stod(c)}};
}

struct CommonParams {
  double ks = 5.0;
  std::string dm = "10";
  double ratio = 1.0;
  double sigma0 = 1e-5;
  std::uint64_t seed = 0;
  std::string variant = "original";
  bool compat_squared_dm = false;
  bool cut_after_argmin = false;

  void add_to(CLI::App* app) {
    app->add_option("--ks", ks, "Kernel size")->capture_default_str();
    app->add_option("--dm", dm, "Max distance (number or inf)")->capture_default_str();
    app->add_option("--ratio", ratio, "Color/position ratio")->capture_default_str();
    app->add_option("--sigma0", sigma0, "Tie-break noise level")->capture_default_str();
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
    app->add_option("--variant", variant, "original or simplified")->capture_default_str();
    app->add_flag("--compat-squared-dm", compat_squared_dm, "Compare squared distances against dm");
    app->add_flag("--cut-after-argmin", cut_after_argmin, "Apply the dm cut after choosing the nearest candidate");
  }

  SegmentConfig config() const {
    SegmentConfig c;
    c.params = Hyperparams{ks, parse_distance(dm), ratio, sigma0, seed};
    c.params.validate();
    c.variant = parse_variant(variant);
    c.options.squared_threshold = compat_squared_dm;
    c.options.cut_after_argmin = cut_after_argmin;
    return c;
  }
};

struct ReportOutput {
  std::string out_dir = "results";
  std::string format = "csv";

  void add_to(CLI::App* app) {
    app->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  }

  int emit(const ExperimentReport& report) const {
    write_report(report, out_dir, parse_report_format(format));
    print_verdicts(std::cout, report);
    std::cout << (report.all_passed() ? "all tolerances passed" : "some tolerances failed") << '\n';
    return report.all_passed() ? 0 : 1;
  }
};

struct ImageSourceOptions {
  std::string images_dir;
  int synthetic_side = 256;
  int synthetic_count = 20;
  double synthetic_sigma = 0.5;

  void add_to(CLI::App* app) {
    app->add_option("--images", images_dir, "Directory of PPM images (default: synthetic flat images)");
    app->add_option("--synthetic-side", synthetic_side, "Side of synthetic flat images")->capture_default_str();
    app->add_option("--synthetic-count", synthetic_count, "Number of synthetic images")->capture_default_str();
    app->add_option("--synthetic-sigma", synthetic_sigma, "Noise of synthetic images")->capture_default_str();
  }

  std::vector<NamedImage> load(std::uint64_t seed) const {
    if (!images_dir.empty()) return load_ppm_directory(images_dir);
    return synthetic_flat_set(synthetic_side, synthetic_count, synthetic_sigma, seed);
  }
};

void write_synthetic(const Image& image, const fs::path& out, bool csv) {
  if (csv) {
    std::ofstream file(out);
    if (!file) throw IoError("cannot write " + out.string());
    write_image_csv(file, image);
  } else {
    save_ppm(cielab_to_rgb(image), out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quickshift superpixels and their statistics"};
  app.require_subcommand(1);
  int exit_code = 0;

  // segment
  CommonParams seg_params;
  std::string seg_input, seg_out = "labels.csv", seg_labels_format = "csv", seg_summary, seg_density, seg_graph;
  auto* seg = app.add_subcommand("segment", "Segment a PPM image");
  seg->add_option("image", seg_input, "Input P6 image")->required();
  seg_params.add_to(seg);
  seg->add_option("--out", seg_out, "Label map output")->capture_default_str();
  seg->add_option("--labels-format", seg_labels_format, "csv or pgm16")
      ->check(CLI::IsMember({"csv", "pgm16"}))
      ->capture_default_str();
  seg->add_option("--summary", seg_summary, "Summary JSON path (default: stdout)");
  seg->add_option("--density-out", seg_density, "Write the density field as CSV");
  seg->add_option("--graph-out", seg_graph, "Write the parent graph as CSV");
  seg->callback([&] {
    const SegmentConfig config = seg_params.config();
    const Image image = rgb_to_cielab(load_ppm(seg_input));
    const Segmentation result = segment(image, config);
    save_labels(result.labels, seg_out, parse_label_format(seg_labels_format));
    if (!seg_density.empty()) {
      std::ofstream out(seg_density);
      write_field_csv(out, result.density);
    }
    if (!seg_graph.empty()) {
      std::ofstream out(seg_graph);
      write_graph_csv(out, result.graph);
    }
    const std::string summary = segment_summary(result, config).dump(2);
    if (seg_summary.empty())
      std::cout << summary << '\n';
    else
      std::ofstream(seg_summary) << summary << '\n';
  });

  // evolution
  EvolutionConfig evo;
  std::string evo_dm = "10";
  double evo_n_tol = -1.0, evo_k_tol = -1.0;
  ReportOutput evo_out;
  auto* evolution = app.add_subcommand("evolution", "Local maxima and superpixels versus image size");
  evolution->add_option("--sigma", evo.sigma, "Flat-model noise")->capture_default_str();
  evolution->add_option("--ks", evo.kernel_size, "Kernel size")->capture_default_str();
  evolution->add_option("--dm", evo_dm, "Max distance (number or inf)")->capture_default_str();
  evolution->add_option("--sizes", evo.sizes, "Increasing side lengths")->delimiter(',');
  evolution->add_option("--trials", evo.trials, "Trials per size")->capture_default_str();
  evolution->add_option("--seed", evo.seed, "Random seed")->capture_default_str();
  evolution->add_option("--sigma0", evo.sigma0, "Tie-break noise level")->capture_default_str();
  evolution->add_option("--n-tolerance", evo_n_tol, "Relative tolerance of mean N against the exact prediction");
  evolution->add_option("--k-tolerance", evo_k_tol, "Relative tolerance of mean K against mean N");
  evo_out.add_to(evolution);
  evolution->callback([&] {
    evo.max_distance = parse_distance(evo_dm);
    if (evo_n_tol >= 0) evo.n_tolerance = evo_n_tol;
    if (evo_k_tol >= 0) evo.k_tolerance = evo_k_tol;
    exit_code = evo_out.emit(run_evolution(evo));
  });

  // scale-size / scale-params
  CommonParams scale_params;
  ImageSourceOptions scale_images;
  std::vector<double> rhos{2.0};
  std::vector<double> kappas{2.0};
  std::vector<std::string> expectations;
  ReportOutput scale_out;
  auto* scale_size = app.add_subcommand("scale-size", "Superpixel count ratio after downsampling by rho");
  scale_params.add_to(scale_size);
  scale_images.add_to(scale_size);
  scale_size->add_option("--rho", rhos, "Downsampling factors")->delimiter(',');
  scale_size->add_option("--expect", expectations, "Declared bounds factor:lo:hi on the mean ratio");
  scale_out.add_to(scale_size);
  auto* scale_par = app.add_subcommand("scale-params", "Superpixel count ratio after scaling (ks, dm) by kappa");
  scale_params.add_to(scale_par);
  scale_images.add_to(scale_par);
  scale_par->add_option("--kappa", kappas, "Hyperparameter factors")->delimiter(',');
  scale_par->add_option("--expect", expectations, "Declared bounds factor:lo:hi on the mean ratio");
  scale_out.add_to(scale_par);
  auto run_scale = [&](bool by_size) {
    ScaleConfig config;
    config.segment = scale_params.config();
    config.factors = by_size ? rhos : kappas;
    for (const auto& e : expectations) config.expectations.insert(parse_expectation(e));
    const auto images = scale_images.load(scale_params.seed);
    exit_code = scale_out.emit(by_size ? run_scale_size(images, config) : run_scale_params(images, config));
  };
  scale_size->callback([&] { run_scale(true); });
  scale_par->callback([&] { run_scale(false); });

  // bicolor-check
  BicolorCheckConfig bic;
  double bic_floor = -1.0;
  ReportOutput bic_out;
  auto* bicolor = app.add_subcommand("bicolor-check", "Density increase toward a color boundary");
  bicolor->add_option("--ks", bic.kernel_size, "Kernel size")->capture_default_str();
  bicolor->add_option("--sigma", bic.sigma, "Pixel noise")->capture_default_str();
  bicolor->add_option("--gap", bic.color_gap, "Distance between the two colors")->capture_default_str();
  bicolor->add_option("--trials", bic.trials, "Number of trials")->capture_default_str();
  bicolor->add_option("--seed", bic.seed, "Random seed")->capture_default_str();
  bicolor->add_option("--sigma0", bic.sigma0, "Tie-break noise level")->capture_default_str();
  bicolor->add_option("--min-frequency", bic_floor, "Extra declared floor on every frequency");
  bic_out.add_to(bicolor);
  bicolor->callback([&] {
    if (bic_floor >= 0) bic.min_frequency = bic_floor;
    exit_code = bic_out.emit(run_bicolor_check(bic));
  });

  // pq-check
  PqCheckConfig pq;
  ReportOutput pq_out;
  auto* pqc = app.add_subcommand("pq-check", "Tail of |P - Q| at an interior pixel");
  pqc->add_option("--ks", pq.kernel_size, "Kernel size")->capture_default_str();
  pqc->add_option("--sigma", pq.sigma, "Pixel noise")->capture_default_str();
  pqc->add_option("--eps", pq.epsilons, "Thresholds")->delimiter(',');
  pqc->add_option("--trials", pq.trials, "Number of trials")->capture_default_str();
  pqc->add_option("--seed", pq.seed, "Random seed")->capture_default_str();
  pqc->add_option("--sigma0", pq.sigma0, "Tie-break noise level")->capture_default_str();
  pq_out.add_to(pqc);
  pqc->callback([&] { exit_code = pq_out.emit(run_pq_check(pq)); });

  // flat-moments
  FlatMomentsConfig fm;
  ReportOutput fm_out;
  auto* flat = app.add_subcommand("flat-moments", "Mean and variance of P on a flat image");
  flat->add_option("--ks", fm.kernel_size, "Kernel size")->capture_default_str();
  flat->add_option("--sigma", fm.sigma, "Pixel noise")->capture_default_str();
  flat->add_option("--trials", fm.trials, "Number of trials")->capture_default_str();
  flat->add_option("--seed", fm.seed, "Random seed")->capture_default_str();
  flat->add_option("--sigma0", fm.sigma0, "Tie-break noise level")->capture_default_str();
  fm_out.add_to(flat);
  flat->callback([&] { exit_code = fm_out.emit(run_flat_moments(fm)); });

  // predict
  double pr_ks = 5.0;
  std::string pr_dm = "10", pr_method = "exact-lattice";
  int pr_h = 100, pr_w = 100, pr_margin = -1;
  auto* predict = app.add_subcommand("predict", "Expected number of local maxima");
  predict->add_option("--ks", pr_ks, "Kernel size")->capture_default_str();
  predict->add_option("--dm", pr_dm, "Max distance (number or inf)")->capture_default_str();
  predict->add_option("--height", pr_h, "Image height")->capture_default_str();
  predict->add_option("--width", pr_w, "Image width")->capture_default_str();
  predict->add_option("--margin", pr_margin, "Region margin (default 2 kw)");
  predict->add_option("--method", pr_method, "exact-lattice or asymptotic")
      ->check(CLI::IsMember({"exact-lattice", "asymptotic"}))
      ->capture_default_str();
  predict->callback([&] {
    const int kw = kernel_width_for(pr_ks);
    const double dm = parse_distance(pr_dm);
    const Shape shape{pr_h, pr_w};
    const Region region = Region::interior(shape, pr_margin >= 0 ? pr_margin : 2 * kw);
    const theory::Prediction p =
        pr_method == "exact-lattice" ? theory::predict_exact(region, shape, kw, dm)
                                     : theory::expected_local_maxima_asymptotic(region.height, region.width, kw, dm);
    std::cout << theory::to_json(p).dump(2) << '\n';
  });

  // rescale
  double rs_ks = 5.0, rs_rho = 2.0;
  std::string rs_dm = "10";
  auto* rescale = app.add_subcommand("rescale", "Scale (ks, dm) by rho");
  rescale->add_option("--ks", rs_ks, "Kernel size")->capture_default_str();
  rescale->add_option("--dm", rs_dm, "Max distance (number or inf)")->capture_default_str();
  rescale->add_option("--rho", rs_rho, "Scale factor")->capture_default_str();
  rescale->callback([&] {
    const auto [ks, dm] = rescale_hyperparams(rs_ks, parse_distance(rs_dm), rs_rho);
    std::cout << nlohmann::json{{"ks", ks}, {"dm", distance_to_json(dm)}}.dump() << '\n';
  });

  // synth-flat / synth-bicolor
  int sy_h = 64, sy_w = 64, sy_j0 = 32;
  double sy_sigma = 0.5;
  std::uint64_t sy_seed = 0;
  std::string sy_color = "50,0,0", sy_color2 = "65,0,0", sy_out = "synthetic.ppm";
  bool sy_csv = false;
  auto add_synth = [&](CLI::App* cmd) {
    cmd->add_option("--height", sy_h, "Height")->capture_default_str();
    cmd->add_option("--width", sy_w, "Width")->capture_default_str();
    cmd->add_option("--sigma", sy_sigma, "Pixel noise")->capture_default_str();
    cmd->add_option("--seed", sy_seed, "Random seed")->capture_default_str();
    cmd->add_option("--out", sy_out, "Output path")->capture_default_str();
    cmd->add_flag("--csv", sy_csv, "Write raw CIELAB CSV instead of PPM");
  };
  auto* synth_flat = app.add_subcommand("synth-flat", "Generate a flat noisy image");
  add_synth(synth_flat);
  synth_flat->add_option("--color", sy_color, "CIELAB color L,a,b")->capture_default_str();
  synth_flat->callback([&] {
    write_synthetic(flat_image(FlatModel{sy_h, sy_w, parse_color(sy_color), sy_sigma, sy_seed}), sy_out, sy_csv);
  });
  auto* synth_bicolor = app.add_subcommand("synth-bicolor", "Generate a two-patch noisy image");
  add_synth(synth_bicolor);
  synth_bicolor->add_option("--color", sy_color, "Left CIELAB color")->capture_default_str();
  synth_bicolor->add_option("--color2", sy_color2, "Right CIELAB color")->capture_default_str();
  synth_bicolor->add_option("--left-columns", sy_j0, "Number of columns in the left patch")->capture_default_str();
  synth_bicolor->callback([&] {
    write_synthetic(bicolor_image(BicolorModel{sy_h, sy_w, sy_j0, parse_color(sy_color), parse_color(sy_color2),
                                               sy_sigma, sy_seed}),
                    sy_out, sy_csv);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return exit_code;
}
