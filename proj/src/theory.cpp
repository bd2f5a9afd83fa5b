#include "qshift/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qshift/density.hpp"

namespace qshift::theory {

namespace {

// a^(-x) - b^(-y) evaluated as e^(ly) expm1(lx - ly); stays accurate as t -> 0
// where both powers approach 1 and a direct difference cancels.
double power_gap(double log_first, double log_second) {
  return std::exp(log_second) * std::expm1(log_first - log_second);
}

void require_nonnegative(double t) {
  if (!(t >= 0.0)) throw std::domain_error("psi functions need t >= 0");
}

}  // namespace

double psi1(double t) {
  require_nonnegative(t);
  return power_gap(-1.5 * std::log1p(4.0 * t), -3.0 * std::log1p(2.0 * t));
}

double psi2(double t) {
  require_nonnegative(t);
  return power_gap(-1.5 * (std::log1p(t) + std::log1p(3.0 * t)), -3.0 * std::log1p(2.0 * t));
}

double circle_segment_area(double s, double d) {
  if (!(s > 0.0) || s > d) throw std::domain_error("circle segment needs 0 < s <= d");
  const double h = std::sqrt(d * d - s * s);
  return d * d * std::atan(h / s) - s * h;
}

double rounded_square_area(double s, double d) {
  // Accept a relative hair beyond sqrt(2) s so that d = sqrt(2) * s computed in floating point is legal.
  if (!(s > 0.0) || d < s || d > std::sqrt(2.0) * s * (1.0 + 1e-12))
    throw std::domain_error("rounded square needs s <= d <= sqrt(2) s");
  return std::numbers::pi * d * d - 4.0 * circle_segment_area(s, std::min(d, std::sqrt(2.0) * s));
}

double rounded_square_approx(double s, double d) { return std::numbers::pi * (3.0 * s * d - s * s - d * d); }

long long lattice_count(int kw, double dm, std::optional<OffsetBounds> bounds) {
  const OffsetBounds b = bounds.value_or(OffsetBounds{-kw, kw, -kw, kw});
  long long count = 0;
  for (int a = std::max(-kw, b.row_min); a <= std::min(kw, b.row_max); ++a)
    for (int c = std::max(-kw, b.col_min); c <= std::min(kw, b.col_max); ++c) count += within_distance(a, c, dm);
  return count;
}

double expected_local_maxima_exact(const Region& region, Shape shape, int kw, double dm) {
  if (region.empty()) return 0.0;
  if (!region.fits(shape)) throw std::invalid_argument("region outside image");
  // Interior pixels all share the unclipped count.
  const double interior = 1.0 / static_cast<double>(lattice_count(kw, dm));
  double sum = 0.0;
  for (int i = region.top; i < region.top + region.height; ++i)
    for (int j = region.left; j < region.left + region.width; ++j) {
      const bool clipped = i < kw || j < kw || i + kw >= shape.height || j + kw >= shape.width;
      sum += clipped ? 1.0 / static_cast<double>(lattice_count(kw, dm, OffsetBounds::at(i, j, shape))) : interior;
    }
  return sum;
}

namespace {

Prediction make_prediction(double h, double w, double kw, double dm, double area) {
  Prediction p;
  p.expected_local_maxima = h * w / area;
  p.method = PredictionMethod::asymptotic;
  p.shape_case = lookout_shape(kw, dm);
  p.kernel_width = kw;
  p.max_distance = dm;
  p.height = h;
  p.width = w;
  return p;
}

}  // namespace

Prediction expected_local_maxima_asymptotic(double h, double w, double kw, double dm) {
  switch (lookout_shape(kw, dm)) {
    case LookoutShape::disk:
      return make_prediction(h, w, kw, dm, std::numbers::pi * dm * dm);
    case LookoutShape::rounded_square:
      return make_prediction(h, w, kw, dm, rounded_square_approx(kw, dm));
    case LookoutShape::square:
      break;
  }
  return make_prediction(h, w, kw, dm, 4.0 * kw * kw);
}

Prediction expected_local_maxima_area(double h, double w, double kw, double dm) {
  if (lookout_shape(kw, dm) == LookoutShape::rounded_square)
    return make_prediction(h, w, kw, dm, rounded_square_area(kw, dm));
  return expected_local_maxima_asymptotic(h, w, kw, dm);
}

Prediction predict_exact(const Region& region, Shape shape, int kw, double dm) {
  Prediction p = make_prediction(region.height, region.width, kw, dm, 1.0);
  p.expected_local_maxima = expected_local_maxima_exact(region, shape, kw, dm);
  p.method = PredictionMethod::exact_lattice;
  return p;
}

nlohmann::json to_json(const Prediction& p) {
  return {
      {"expected", p.expected_local_maxima},
      {"method", p.method == PredictionMethod::exact_lattice ? "exact-lattice" : "asymptotic"},
      {"case", to_string(p.shape_case)},
      {"k_w", p.kernel_width},
      {"d_m", std::isinf(p.max_distance) ? nlohmann::json("inf") : nlohmann::json(p.max_distance)},
      {"h", p.height},
      {"w", p.width},
  };
}

double expected_density_flat(int i, int j, Shape shape, double ks, double sigma) {
  return norm_constant(2.0, ks, sigma) * delta_sum(i, j, shape, ks, kernel_width_for(ks));
}

double expected_density_flat_exact(int i, int j, Shape shape, double ks, double sigma) {
  return 1.0 + norm_constant(2.0, ks, sigma) * (delta_sum(i, j, shape, ks, kernel_width_for(ks)) - 1.0);
}

double variance_density_flat(int i, int j, Shape shape, double ks, double sigma, double sigma0) {
  const DeltaSums d = delta_sums(i, j, shape, ks, kernel_width_for(ks));
  const double t = sigma * sigma / (ks * ks);
  return psi2(t) * (d.sum * d.sum - d.sum_sq) + psi1(t) * d.sum_sq + sigma0 * sigma0;
}

double variance_density_flat_exact(int i, int j, Shape shape, double ks, double sigma, double sigma0) {
  const DeltaSums d = delta_sums(i, j, shape, ks, kernel_width_for(ks));
  const double t = sigma * sigma / (ks * ks);
  const double rest = d.sum - 1.0, rest_sq = d.sum_sq - 1.0;
  return psi2(t) * (rest * rest - rest_sq) + psi1(t) * rest_sq + sigma0 * sigma0;
}

double expected_density_bicolor(int i, int j, int left_columns, Shape shape, double ks, double sigma,
                                double color_gap) {
  if (left_columns < 1 || left_columns >= shape.width) throw std::invalid_argument("boundary column out of range");
  if (!shape.contains(i, j) || j >= left_columns) throw std::invalid_argument("pixel must lie on the left patch");
  const int kw = kernel_width_for(ks);
  double left = 0.0, right = 0.0;
  for (int u = std::max(0, i - kw); u <= std::min(shape.height - 1, i + kw); ++u)
    for (int v = std::max(0, j - kw); v <= std::min(shape.width - 1, j + kw); ++v)
      (v < left_columns ? left : right) += spatial_weight(i, j, u, v, ks);
  const double cross = std::exp(-color_gap * color_gap / (2.0 * (ks * ks + 2.0 * sigma * sigma)));
  return norm_constant(2.0, ks, sigma) * (left + cross * right);
}

}  // namespace qshift::theory
