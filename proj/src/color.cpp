#include "qshift/color.hpp"

#include <algorithm>
#include <cmath>

namespace qshift {

namespace {

constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

constexpr double kXyzToRgb[3][3] = {
    {3.2404542, -1.5371385, -0.4985314},
    {-0.9692660, 1.8760108, 0.0415560},
    {0.0556434, -0.2040259, 1.0572252},
};

constexpr double kWhite[3] = {
    kRgbToXyz[0][0] + kRgbToXyz[0][1] + kRgbToXyz[0][2],
    kRgbToXyz[1][0] + kRgbToXyz[1][1] + kRgbToXyz[1][2],
    kRgbToXyz[2][0] + kRgbToXyz[2][1] + kRgbToXyz[2][2],
};

constexpr double kEpsilon = 216.0 / 24389.0;  // (6/29)^3
constexpr double kKappa = 24389.0 / 27.0;

double srgb_decode(double c) { return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4); }

double srgb_encode(double c) { return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055; }

double lab_f(double t) { return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0; }

double lab_f_inv(double f) {
  const double f3 = f * f * f;
  return f3 > kEpsilon ? f3 : (116.0 * f - 16.0) / kKappa;
}

}  // namespace

Color srgb_to_cielab(std::array<std::uint8_t, 3> rgb) {
  double linear[3];
  for (int k = 0; k < 3; ++k) linear[k] = srgb_decode(rgb[k] / 255.0);
  double f[3];
  for (int r = 0; r < 3; ++r) {
    const double xyz = kRgbToXyz[r][0] * linear[0] + kRgbToXyz[r][1] * linear[1] + kRgbToXyz[r][2] * linear[2];
    f[r] = lab_f(xyz / kWhite[r]);
  }
  return {116.0 * f[1] - 16.0, 500.0 * (f[0] - f[1]), 200.0 * (f[1] - f[2])};
}

std::array<std::uint8_t, 3> cielab_to_srgb(const Color& lab) {
  const double fy = (lab[0] + 16.0) / 116.0;
  const double f[3] = {fy + lab[1] / 500.0, fy, fy - lab[2] / 200.0};
  double xyz[3];
  for (int r = 0; r < 3; ++r) xyz[r] = lab_f_inv(f[r]) * kWhite[r];
  std::array<std::uint8_t, 3> out{};
  for (int k = 0; k < 3; ++k) {
    const double linear = kXyzToRgb[k][0] * xyz[0] + kXyzToRgb[k][1] * xyz[1] + kXyzToRgb[k][2] * xyz[2];
    const double encoded = srgb_encode(std::clamp(linear, 0.0, 1.0));
    out[k] = static_cast<std::uint8_t>(std::lround(std::clamp(encoded, 0.0, 1.0) * 255.0));
  }
  return out;
}

Image rgb_to_cielab(const RgbImage& image) {
  Image out(image.shape());
  for (int i = 0; i < image.height(); ++i)
    for (int j = 0; j < image.width(); ++j) out.set_pixel(i, j, srgb_to_cielab(image.pixel(i, j)));
  return out;
}

RgbImage cielab_to_rgb(const Image& image) {
  RgbImage out(image.shape());
  for (int i = 0; i < image.height(); ++i)
    for (int j = 0; j < image.width(); ++j) out.set_pixel(i, j, cielab_to_srgb(image.pixel(i, j)));
  return out;
}

}  // namespace qshift
