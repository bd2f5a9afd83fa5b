#include "qshift/image.hpp"

#include <algorithm>
#include <cmath>

namespace qshift {

namespace {

void require_positive(Shape shape) {
  if (shape.height < 1 || shape.width < 1) throw std::invalid_argument("image dimensions must be positive");
}

void require_finite(const Color& c) {
  for (double v : c)
    if (!std::isfinite(v)) throw std::invalid_argument("image channels must be finite");
}

}  // namespace

RgbImage::RgbImage(Shape shape) : shape_(shape), bytes_(3 * shape.size(), 0) { require_positive(shape); }

RgbImage::RgbImage(Shape shape, std::vector<std::uint8_t> bytes) : shape_(shape), bytes_(std::move(bytes)) {
  require_positive(shape);
  if (bytes_.size() != 3 * shape.size()) throw std::invalid_argument("RGB payload does not match dimensions");
}

std::array<std::uint8_t, 3> RgbImage::pixel(int i, int j) const {
  const std::uint8_t* p = &bytes_[3 * shape_.index(i, j)];
  return {p[0], p[1], p[2]};
}

void RgbImage::set_pixel(int i, int j, std::array<std::uint8_t, 3> rgb) {
  std::copy(rgb.begin(), rgb.end(), bytes_.begin() + 3 * shape_.index(i, j));
}

Image::Image(Shape shape, Color fill) : shape_(shape), data_(3 * shape.size()) {
  require_positive(shape);
  require_finite(fill);
  for (std::size_t k = 0; k < shape.size(); ++k) std::copy(fill.begin(), fill.end(), data_.begin() + 3 * k);
}

Image::Image(Shape shape, std::vector<double> interleaved) : shape_(shape), data_(std::move(interleaved)) {
  require_positive(shape);
  if (data_.size() != 3 * shape.size()) throw std::invalid_argument("image payload does not match dimensions");
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); }))
    throw std::invalid_argument("image channels must be finite");
}

void Image::set_pixel(int i, int j, const Color& c) {
  require_finite(c);
  std::copy(c.begin(), c.end(), data_.begin() + 3 * shape_.index(i, j));
}

Image Image::scaled(double factor) const {
  Image out = *this;
  for (double& v : out.data_) v *= factor;
  return out;
}

Image Image::crop(int top, int left, int height, int width) const {
  if (!Region{top, left, height, width}.fits(shape_) || height < 1 || width < 1)
    throw std::out_of_range("crop window outside image");
  Image out(Shape{height, width});
  for (int i = 0; i < height; ++i)
    for (int j = 0; j < width; ++j) out.set_pixel(i, j, pixel(top + i, left + j));
  return out;
}

Region Region::interior(Shape s, int margin) {
  Region r{margin, margin, s.height - 2 * margin, s.width - 2 * margin};
  if (r.empty()) return Region{margin, margin, 0, 0};
  return r;
}

}  // namespace qshift
