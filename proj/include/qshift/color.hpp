#pragma once

#include <array>
#include <cstdint>

#include "qshift/image.hpp"

namespace qshift {

// sRGB primaries, D65 white, standard piecewise sRGB transfer curve.
// The reference white is the image of RGB (1,1,1) under the XYZ matrix, so
// every gray level lands exactly on the a = b = 0 axis up to rounding.

Color srgb_to_cielab(std::array<std::uint8_t, 3> rgb);
/// Inverse conversion, clamped and rounded to 8 bits.
std::array<std::uint8_t, 3> cielab_to_srgb(const Color& lab);

Image rgb_to_cielab(const RgbImage& image);
RgbImage cielab_to_rgb(const Image& image);

}  // namespace qshift
