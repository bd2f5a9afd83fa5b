#include "qshift/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qshift/rng.hpp"

namespace qshift {

namespace {

template <class ColorAt>
Image noisy_image(std::uint64_t seed, double sigma, const Region& window, ColorAt color_at) {
  const CounterRng rng(seed, static_cast<std::uint64_t>(Stream::pixel_noise));
  Image out(Shape{window.height, window.width});
  for (int r = 0; r < window.height; ++r)
    for (int c = 0; c < window.width; ++c) {
      const int i = window.top + r, j = window.left + c;
      Color value = color_at(j);
      for (int k = 0; k < 3; ++k)
        value[k] += sigma * rng.gaussian(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j),
                                         static_cast<std::uint64_t>(k));
      out.set_pixel(r, c, value);
    }
  return out;
}

void check_window(Shape shape, const Region& window) {
  if (shape.height < 1 || shape.width < 1) throw std::invalid_argument("model dimensions must be positive");
  if (window.empty() || !window.fits(shape)) throw std::invalid_argument("window outside the model image");
}

}  // namespace

Image flat_image(const FlatModel& model) {
  return flat_image(model, Region::whole(Shape{model.height, model.width}));
}

Image flat_image(const FlatModel& model, const Region& window) {
  check_window(Shape{model.height, model.width}, window);
  if (!(model.sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  return noisy_image(model.seed, model.sigma, window, [&](int) { return model.color; });
}

Image bicolor_image(const BicolorModel& model) {
  return bicolor_image(model, Region::whole(Shape{model.height, model.width}));
}

Image bicolor_image(const BicolorModel& model, const Region& window) {
  check_window(Shape{model.height, model.width}, window);
  if (model.left_columns < 1 || model.left_columns >= model.width)
    throw std::invalid_argument("boundary column must satisfy 1 <= j0 < width");
  if (!(model.sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  return noisy_image(model.seed, model.sigma, window,
                     [&](int j) { return j < model.left_columns ? model.left : model.right; });
}

DensityField uniform_field(Shape shape, std::uint64_t seed) {
  const CounterRng rng(seed, static_cast<std::uint64_t>(Stream::uniform_field));
  DensityField out(shape);
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j)
      out(i, j) = rng.uniform(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j), 0);
  return out;
}

namespace {

struct Tap {
  int source;
  double weight;
};

// Source pixels overlapping each output cell, weighted by overlap length.
std::vector<std::vector<Tap>> box_taps(int in, int out) {
  const double scale = static_cast<double>(in) / out;
  std::vector<std::vector<Tap>> taps(out);
  for (int p = 0; p < out; ++p) {
    const double lo = p * scale, hi = (p + 1) * scale;
    for (int s = static_cast<int>(std::floor(lo)); s < std::min(in, static_cast<int>(std::ceil(hi))); ++s) {
      const double w = std::min(hi, s + 1.0) - std::max(lo, static_cast<double>(s));
      if (w > 0.0) taps[p].push_back({s, w / scale});
    }
  }
  return taps;
}

}  // namespace

Image downsample_box(const Image& image, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  const int out_h = std::max(1, static_cast<int>(std::lround(image.height() / rho)));
  const int out_w = std::max(1, static_cast<int>(std::lround(image.width() / rho)));
  if (out_h == image.height() && out_w == image.width()) return image;
  const auto row_taps = box_taps(image.height(), out_h);
  const auto col_taps = box_taps(image.width(), out_w);
  Image out(Shape{out_h, out_w});
  for (int p = 0; p < out_h; ++p)
    for (int q = 0; q < out_w; ++q) {
      Color acc{0.0, 0.0, 0.0};
      for (const Tap& r : row_taps[p])
        for (const Tap& c : col_taps[q]) {
          const Color v = image.pixel(r.source, c.source);
          for (int k = 0; k < 3; ++k) acc[k] += r.weight * c.weight * v[k];
        }
      out.set_pixel(p, q, acc);
    }
  return out;
}

}  // namespace qshift
