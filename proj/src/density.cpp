#include "qshift/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qshift {

int kernel_width_for(double kernel_size) {
  if (!(kernel_size > 0.0)) throw std::invalid_argument("kernel size must be positive");
  // Absorb representation error so that e.g. ks = 5/3 gives kw = 5, not 6.
  return std::max(1, static_cast<int>(std::ceil(3.0 * kernel_size - 1e-9)));
}

void Hyperparams::validate() const {
  if (!(kernel_size > 0.0) || !std::isfinite(kernel_size)) throw std::invalid_argument("kernel size must be positive");
  if (!(max_distance > 0.0)) throw std::invalid_argument("max distance must be positive (or inf)");
  if (!(ratio >= 0.0) || !std::isfinite(ratio)) throw std::invalid_argument("ratio must be non-negative");
  if (!(sigma0 >= 0.0) || !std::isfinite(sigma0)) throw std::invalid_argument("sigma0 must be non-negative");
}

std::vector<Pixel> window(int i, int j, Shape shape, int kw) {
  std::vector<Pixel> out;
  for (int u = std::max(0, i - kw); u <= std::min(shape.height - 1, i + kw); ++u)
    for (int v = std::max(0, j - kw); v <= std::min(shape.width - 1, j + kw); ++v) out.push_back({u, v});
  return out;
}

double spatial_weight(int i, int j, int u, int v, double ks) {
  const double di = i - u;
  const double dj = j - v;
  return std::exp((-di * di - dj * dj) / (2.0 * ks * ks));
}

DeltaSums delta_sums(int i, int j, Shape shape, double ks, int kw) {
  DeltaSums s;
  for (int u = std::max(0, i - kw); u <= std::min(shape.height - 1, i + kw); ++u)
    for (int v = std::max(0, j - kw); v <= std::min(shape.width - 1, j + kw); ++v) {
      const double w = spatial_weight(i, j, u, v, ks);
      s.sum += w;
      s.sum_sq += w * w;
    }
  return s;
}

double delta_sum(int i, int j, Shape shape, double ks, int kw) { return delta_sums(i, j, shape, ks, kw).sum; }

DensityField delta_field(Shape shape, double ks, int kw) {
  // The clipped window is a rectangle, so the weight sum factors into a row part and a column part.
  auto axis_sums = [&](int n) {
    std::vector<double> sums(n);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int u = std::max(0, i - kw); u <= std::min(n - 1, i + kw); ++u) s += spatial_weight(i, 0, u, 0, ks);
      sums[i] = s;
    }
    return sums;
  };
  const auto rows = axis_sums(shape.height);
  const auto cols = axis_sums(shape.width);
  DensityField out(shape);
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j) out(i, j) = rows[i] * cols[j];
  return out;
}

double norm_constant(double p, double ks, double sigma) {
  const double k2 = ks * ks;
  return std::pow(k2 / (k2 + p * sigma * sigma), 1.5);
}

namespace {

// Spatial weights for offsets in [-kw, kw]^2, row-major.
std::vector<double> spatial_table(double ks, int kw) {
  const int side = 2 * kw + 1;
  std::vector<double> table(static_cast<std::size_t>(side) * side);
  for (int du = -kw; du <= kw; ++du)
    for (int dv = -kw; dv <= kw; ++dv) table[(du + kw) * side + (dv + kw)] = spatial_weight(0, 0, du, dv, ks);
  return table;
}

// Shared by the field and single-pixel entry points so both agree bit for bit.
double window_density(const double* lab, Shape shape, const std::vector<double>& table, int kw, double inv_two_ks2,
                      int i, int j) {
  const int side = 2 * kw + 1;
  const double* center = lab + 3 * shape.index(i, j);
  double sum = 0.0;
  const int u0 = std::max(0, i - kw), u1 = std::min(shape.height - 1, i + kw);
  const int v0 = std::max(0, j - kw), v1 = std::min(shape.width - 1, j + kw);
  for (int u = u0; u <= u1; ++u) {
    const double* row = lab + 3 * shape.index(u, 0);
    const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(u - i + kw) * side + kw - j;
    for (int v = v0; v <= v1; ++v) {
      const double* x = row + 3 * v;
      const double d0 = center[0] - x[0];
      const double d1 = center[1] - x[1];
      const double d2 = center[2] - x[2];
      sum += table[base + v] * std::exp(-(d0 * d0 + d1 * d1 + d2 * d2) * inv_two_ks2);
    }
  }
  return sum;
}

}  // namespace

DensityField density_P(const Image& image, const Hyperparams& hp, const NoiseModel& noise) {
  hp.validate();
  const int kw = hp.kernel_width();
  const Shape shape = image.shape();
  const Image scaled = image.scaled(hp.ratio);
  const double* lab = scaled.channels().data();
  const auto table = spatial_table(hp.kernel_size, kw);
  const double inv_two_ks2 = 1.0 / (2.0 * hp.kernel_size * hp.kernel_size);

  DensityField out(shape);
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j)
      out(i, j) = window_density(lab, shape, table, kw, inv_two_ks2, i, j) + noise.draw(i, j);
  return out;
}

DensityField density_P(const Image& image, const Hyperparams& hp) { return density_P(image, hp, hp.noise()); }

DensityKernel::DensityKernel(const Hyperparams& hp)
    : hp_(hp),
      kw_(hp.kernel_width()),
      inv_two_ks2_(1.0 / (2.0 * hp.kernel_size * hp.kernel_size)),
      table_(spatial_table(hp.kernel_size, kw_)) {
  hp.validate();
}

double DensityKernel::at(const Image& image, const NoiseModel& noise, int i, int j) const {
  const Shape shape = image.shape();
  if (!shape.contains(i, j)) throw std::out_of_range("pixel outside image");
  if (hp_.ratio == 1.0)
    return window_density(image.channels().data(), shape, table_, kw_, inv_two_ks2_, i, j) + noise.draw(i, j);
  // Only the window is needed; scale that crop rather than the whole image.
  const int top = std::max(0, i - kw_), left = std::max(0, j - kw_);
  const int bottom = std::min(shape.height - 1, i + kw_), right = std::min(shape.width - 1, j + kw_);
  const Image crop = image.crop(top, left, bottom - top + 1, right - left + 1).scaled(hp_.ratio);
  return window_density(crop.channels().data(), crop.shape(), table_, kw_, inv_two_ks2_, i - top, j - left) +
         noise.draw(i, j);
}

double density_at(const Image& image, const Hyperparams& hp, const NoiseModel& noise, int i, int j) {
  return DensityKernel(hp).at(image, noise, i, j);
}

namespace {

double squared_distance(const Color& a, const Color& b) {
  const double d0 = a[0] - b[0], d1 = a[1] - b[1], d2 = a[2] - b[2];
  return d0 * d0 + d1 * d1 + d2 * d2;
}

}  // namespace

double density_Q_at(const Image& image, double ks, double sigma, const Color& c, int i, int j) {
  const int kw = kernel_width_for(ks);
  const double spread = 2.0 * (ks * ks + sigma * sigma);
  return norm_constant(1.0, ks, sigma) * std::exp(-squared_distance(image.pixel(i, j), c) / spread) *
         delta_sum(i, j, image.shape(), ks, kw);
}

DensityField density_Q(const Image& image, double ks, double sigma, const Color& c) {
  const Shape shape = image.shape();
  const int kw = kernel_width_for(ks);
  const double c1 = norm_constant(1.0, ks, sigma);
  const double spread = 2.0 * (ks * ks + sigma * sigma);
  DensityField out = delta_field(shape, ks, kw);
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j) out(i, j) *= c1 * std::exp(-squared_distance(image.pixel(i, j), c) / spread);
  return out;
}

DensityField hajek_projection(const Image& image, double ks, double sigma, const Color& c) {
  const Shape shape = image.shape();
  const int kw = kernel_width_for(ks);
  const double k2 = ks * ks, s2 = sigma * sigma;
  const double c1 = norm_constant(1.0, ks, sigma);
  const double centering = std::pow((k2 + s2) / (k2 + 2.0 * s2), 1.5);
  const double spread = 2.0 * (k2 + s2);

  DensityField centered(shape);
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j)
      centered(i, j) = std::exp(-squared_distance(image.pixel(i, j), c) / spread) - centering;

  const DensityField q = density_Q(image, ks, sigma, c);
  const auto table = spatial_table(ks, kw);
  const int side = 2 * kw + 1;
  DensityField out(shape);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j) {
      double rest = 0.0;
      for (int u = std::max(0, i - kw); u <= std::min(shape.height - 1, i + kw); ++u)
        for (int v = std::max(0, j - kw); v <= std::min(shape.width - 1, j + kw); ++v)
          if (u != i || v != j) rest += centered(u, v) * table[(u - i + kw) * side + (v - j + kw)];
      out(i, j) = q(i, j) + c1 * rest;
    }
  return out;
}

Color mean_color(const Image& image, const Region& region) {
  if (region.empty() || !region.fits(image.shape())) throw std::invalid_argument("region must be non-empty and inside the image");
  Color sum{0.0, 0.0, 0.0};
  for (int i = region.top; i < region.top + region.height; ++i)
    for (int j = region.left; j < region.left + region.width; ++j) {
      const Color p = image.pixel(i, j);
      for (int k = 0; k < 3; ++k) sum[k] += p[k];
    }
  const double n = static_cast<double>(region.area());
  return {sum[0] / n, sum[1] / n, sum[2] / n};
}

}  // namespace qshift
