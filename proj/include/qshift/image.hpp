#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace qshift {

/// Grid dimensions in pixels. Row index i runs over [0, height), column j over [0, width).
struct Shape {
  int height = 0;
  int width = 0;

  std::size_t size() const { return static_cast<std::size_t>(height) * static_cast<std::size_t>(width); }
  bool contains(int i, int j) const { return i >= 0 && i < height && j >= 0 && j < width; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * width + j; }

  friend bool operator==(const Shape&, const Shape&) = default;
};

struct Pixel {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

/// Dense row-major grid of scalars.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(Shape shape, T fill = T{}) : shape_(shape), data_(shape.size(), fill) {
    if (shape.height < 1 || shape.width < 1) throw std::invalid_argument("grid dimensions must be positive");
  }
  Grid(Shape shape, std::vector<T> values) : shape_(shape), data_(std::move(values)) {
    if (shape.height < 1 || shape.width < 1) throw std::invalid_argument("grid dimensions must be positive");
    if (data_.size() != shape.size()) throw std::invalid_argument("grid payload does not match dimensions");
  }

  Shape shape() const { return shape_; }
  int height() const { return shape_.height; }
  int width() const { return shape_.width; }

  T& operator()(int i, int j) { return data_[shape_.index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[shape_.index(i, j)]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Shape shape_{};
  std::vector<T> data_;
};

/// Per-pixel scalar field: a density estimate P, its main term Q, or its projection.
using DensityField = Grid<double>;

/// 8-bit RGB image as read from a PPM file.
class RgbImage {
 public:
  RgbImage() = default;
  explicit RgbImage(Shape shape);
  RgbImage(Shape shape, std::vector<std::uint8_t> bytes);

  Shape shape() const { return shape_; }
  int height() const { return shape_.height; }
  int width() const { return shape_.width; }

  std::array<std::uint8_t, 3> pixel(int i, int j) const;
  void set_pixel(int i, int j, std::array<std::uint8_t, 3> rgb);

  std::span<const std::uint8_t> bytes() const { return bytes_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  Shape shape_{};
  std::vector<std::uint8_t> bytes_;
};

using Color = std::array<double, 3>;

/// H x W image with three finite floating channels per pixel (CIELAB in practice).
class Image {
 public:
  Image() = default;
  explicit Image(Shape shape, Color fill = {0.0, 0.0, 0.0});
  Image(Shape shape, std::vector<double> interleaved);

  Shape shape() const { return shape_; }
  int height() const { return shape_.height; }
  int width() const { return shape_.width; }

  Color pixel(int i, int j) const {
    const double* p = &data_[3 * shape_.index(i, j)];
    return {p[0], p[1], p[2]};
  }
  void set_pixel(int i, int j, const Color& c);

  /// Interleaved channel storage, 3 values per pixel in row-major order.
  std::span<const double> channels() const { return data_; }

  /// Every channel multiplied by `factor` (the quickshift color ratio).
  Image scaled(double factor) const;
  Image crop(int top, int left, int height, int width) const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  Shape shape_{};
  std::vector<double> data_;
};

/// Axis-aligned rectangle of pixels.
struct Region {
  int top = 0;
  int left = 0;
  int height = 0;
  int width = 0;

  static Region whole(Shape s) { return {0, 0, s.height, s.width}; }
  /// The rectangle left after removing a band of `margin` pixels along every border. Empty if nothing remains.
  static Region interior(Shape s, int margin);

  bool empty() const { return height <= 0 || width <= 0; }
  std::size_t area() const { return empty() ? 0 : static_cast<std::size_t>(height) * width; }
  bool contains(int i, int j) const { return i >= top && i < top + height && j >= left && j < left + width; }
  bool fits(Shape s) const {
    return top >= 0 && left >= 0 && height >= 0 && width >= 0 && top + height <= s.height && left + width <= s.width;
  }

  friend bool operator==(const Region&, const Region&) = default;
};

/// Superpixel labels; ids form the contiguous range [0, num_labels).
struct LabelMap {
  Grid<std::int32_t> labels;
  int num_labels = 0;
};

}  // namespace qshift
