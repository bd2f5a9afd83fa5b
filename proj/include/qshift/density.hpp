#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "qshift/image.hpp"
#include "qshift/rng.hpp"

namespace qshift {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Window radius used for a kernel size: ceil(3 * ks).
int kernel_width_for(double kernel_size);

/// Quickshift hyperparameters. `max_distance` may be kInfinity (no cutoff).
struct Hyperparams {
  double kernel_size = 5.0;
  double max_distance = 10.0;
  double ratio = 1.0;
  double sigma0 = 1e-5;
  std::uint64_t seed = 0;

  int kernel_width() const { return kernel_width_for(kernel_size); }
  NoiseModel noise() const { return NoiseModel{seed, sigma0}; }
  /// Throws std::invalid_argument on a non-positive kernel size or distance, negative ratio or sigma0.
  void validate() const;
};

/// In-bounds points of the Chebyshev ball of radius kw around (i, j), row-major.
std::vector<Pixel> window(int i, int j, Shape shape, int kw);

/// exp(-((i-u)^2 + (j-v)^2) / (2 ks^2))
double spatial_weight(int i, int j, int u, int v, double ks);

/// Sum of spatial weights over the (clipped) window around (i, j).
double delta_sum(int i, int j, Shape shape, double ks, int kw);
/// Same, alongside the sum of squared weights.
struct DeltaSums {
  double sum = 0.0;
  double sum_sq = 0.0;
};
DeltaSums delta_sums(int i, int j, Shape shape, double ks, int kw);
DensityField delta_field(Shape shape, double ks, int kw);

/// (ks^2 / (ks^2 + p sigma^2))^(3/2)
double norm_constant(double p, double ks, double sigma);

/// Kernel density estimate over the joint (position, color) space. Colors are
/// multiplied by hp.ratio first. Pixels are independent, so the loop is split
/// across OpenMP threads; each pixel sums its window in a fixed order and the
/// result is bit-identical for every thread count.
DensityField density_P(const Image& image, const Hyperparams& hp, const NoiseModel& noise);
DensityField density_P(const Image& image, const Hyperparams& hp);

/// Single-pixel evaluation of density_P, bit-identical to the field entry.
double density_at(const Image& image, const Hyperparams& hp, const NoiseModel& noise, int i, int j);

/// Precomputed spatial weights for repeated single-pixel evaluations.
class DensityKernel {
 public:
  explicit DensityKernel(const Hyperparams& hp);

  double at(const Image& image, const NoiseModel& noise, int i, int j) const;
  const Hyperparams& params() const { return hp_; }

 private:
  Hyperparams hp_;
  int kw_;
  double inv_two_ks2_;
  std::vector<double> table_;
};

/// Main term: C1 exp(-|xi_ij - c|^2 / (2(ks^2 + sigma^2))) Delta_ij. No noise.
DensityField density_Q(const Image& image, double ks, double sigma, const Color& c);
double density_Q_at(const Image& image, double ks, double sigma, const Color& c, int i, int j);

/// Hajek projection of P onto the individual pixel values of a flat patch of color c.
DensityField hajek_projection(const Image& image, double ks, double sigma, const Color& c);

/// Mean color over a region, used as the patch color when it is not known.
Color mean_color(const Image& image, const Region& region);

}  // namespace qshift
