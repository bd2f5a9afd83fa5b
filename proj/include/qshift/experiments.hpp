#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qshift/density.hpp"
#include "qshift/graph.hpp"
#include "qshift/image.hpp"
#include "qshift/report.hpp"

namespace qshift {

enum class Variant { original, simplified };

Variant parse_variant(const std::string& name);
std::string to_string(Variant variant);

struct SegmentConfig {
  Hyperparams params;
  Variant variant = Variant::original;
  OriginalGraphOptions options;
};

struct Segmentation {
  DensityField density;
  ParentGraph graph;
  LabelMap labels;
};

/// Density, parent graph and labels for a CIELAB image.
Segmentation segment(const Image& image, const SegmentConfig& config);

nlohmann::json params_to_json(const SegmentConfig& config);
/// {num_superpixels, H, W, params}
nlohmann::json segment_summary(const Segmentation& result, const SegmentConfig& config);

/// (rho ks, rho dm); an infinite dm stays infinite.
std::pair<double, double> rescale_hyperparams(double ks, double dm, double rho);

/// Per-trial seed used by every harness loop.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) { return seed ^ trial; }

struct EvolutionConfig {
  double sigma = 0.01;
  double kernel_size = 5.0;
  double max_distance = 10.0;
  std::vector<int> sizes{100, 150, 200};
  int trials = 10;
  std::uint64_t seed = 0;
  double sigma0 = 1e-5;
  Color color{50.0, 0.0, 0.0};
  /// |mean N - exact prediction| <= n_tolerance * prediction, checked for sides >= min_checked_size.
  std::optional<double> n_tolerance;
  /// |mean K - mean N| <= k_tolerance * mean N.
  std::optional<double> k_tolerance;
  int min_checked_size = 100;
};

/// Local maxima of the main term Q (N) and superpixels of the original
/// construction on P (K) over the region at margin 2 kw, per side length.
ExperimentReport run_evolution(const EvolutionConfig& config);

struct NamedImage {
  std::string name;
  Image image;
};

/// `count` flat side x side images with seeds seed ^ index.
std::vector<NamedImage> synthetic_flat_set(int side, int count, double sigma, std::uint64_t seed,
                                           Color color = {50.0, 0.0, 0.0});
/// Every *.ppm in a directory, sorted by name, converted to CIELAB.
std::vector<NamedImage> load_ppm_directory(const std::string& dir);

struct ScaleConfig {
  SegmentConfig segment;
  std::vector<double> factors;
  /// Declared bounds on the mean ratio per factor.
  std::map<double, std::pair<double, double>> expectations;
};

/// n_orig / n_new where n_new segments the image box-downsampled by rho.
ExperimentReport run_scale_size(const std::vector<NamedImage>& images, const ScaleConfig& config);
/// n_orig / n_new where n_new uses hyperparameters (kappa ks, kappa dm).
ExperimentReport run_scale_params(const std::vector<NamedImage>& images, const ScaleConfig& config);

struct BicolorCheckConfig {
  double kernel_size = 5.0;
  double sigma = 0.2;
  double color_gap = 15.0;
  int trials = 10000;
  std::uint64_t seed = 0;
  double sigma0 = 1e-5;
  /// Optional extra floor on the frequency of pairs whose expected gap is at least 3 ks / 2.
  std::optional<double> min_frequency;
};

/// Frequency of P(i, j) > P(i, j + 1) for left-patch pairs within kw of the boundary.
ExperimentReport run_bicolor_check(const BicolorCheckConfig& config);

struct PqCheckConfig {
  double kernel_size = 5.0;
  double sigma = 0.05;
  std::vector<double> epsilons{0.3, 0.5, 1.0};
  int trials = 10000;
  std::uint64_t seed = 0;
  double sigma0 = 1e-5;
  Color color{50.0, 0.0, 0.0};
};

/// Frequency of |P - Q| > eps at an interior pixel of a flat image against 71 sigma^2 / eps^2.
ExperimentReport run_pq_check(const PqCheckConfig& config);

struct FlatMomentsConfig {
  double kernel_size = 5.0;
  double sigma = 0.5;
  int trials = 10000;
  std::uint64_t seed = 0;
  double sigma0 = 1e-5;
  double standard_errors = 4.0;
  Color color{50.0, 0.0, 0.0};
};

/// Sample mean and variance of P at an interior pixel against the closed forms.
ExperimentReport run_flat_moments(const FlatMomentsConfig& config);

}  // namespace qshift
