#pragma once

#include <cstdint>

#include "qshift/density.hpp"
#include "qshift/image.hpp"

namespace qshift {

/// i.i.d. N(c, sigma^2 I3) pixels. The hypothesis sigma <= ks/5 is not enforced here.
struct FlatModel {
  int height = 0;
  int width = 0;
  Color color{50.0, 0.0, 0.0};
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Two flat patches split by a vertical boundary. Columns [0, left_columns)
/// are drawn around `left`, columns [left_columns, width) around `right`.
struct BicolorModel {
  int height = 0;
  int width = 0;
  int left_columns = 0;
  Color left{50.0, 0.0, 0.0};
  Color right{50.0, 0.0, 0.0};
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Per-pixel noise depends on (seed, i, j) only, so a window is exactly the crop of the full image.
Image flat_image(const FlatModel& model);
Image flat_image(const FlatModel& model, const Region& window);
Image bicolor_image(const BicolorModel& model);
Image bicolor_image(const BicolorModel& model, const Region& window);

/// i.i.d. uniform(0,1) field, for graph property checks.
DensityField uniform_field(Shape shape, std::uint64_t seed);

/// Area-average (box) downsampling to round(H/rho) x round(W/rho).
Image downsample_box(const Image& image, double rho);

}  // namespace qshift
