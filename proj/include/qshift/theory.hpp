#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qshift/graph.hpp"
#include "qshift/image.hpp"

namespace qshift::theory {

/// psi1(t) = (1+4t)^(-3/2) - (1+2t)^(-3)
double psi1(double t);
/// psi2(t) = (1+t)^(-3/2) (1+3t)^(-3/2) - (1+2t)^(-3)
double psi2(double t);

/// Area cut from a disk of radius d by a chord at distance s from the center. Requires 0 < s <= d.
double circle_segment_area(double s, double d);
/// Area of the disk of radius d intersected with the square of half side s. Requires s <= d <= sqrt(2) s.
double rounded_square_area(double s, double d);
/// The closed-form stand-in pi (3sd - s^2 - d^2) for rounded_square_area.
double rounded_square_approx(double s, double d);

/// Inclusive bounds on the offsets (a, b) allowed by the image borders.
struct OffsetBounds {
  int row_min, row_max, col_min, col_max;

  static OffsetBounds at(int i, int j, Shape shape) {
    return {-i, shape.height - 1 - i, -j, shape.width - 1 - j};
  }
};

/// Integer offsets with max(|a|,|b|) <= kw and a^2 + b^2 <= dm^2, optionally clipped. Includes (0,0).
long long lattice_count(int kw, double dm, std::optional<OffsetBounds> bounds = std::nullopt);

/// Exact expected number of local maxima of an i.i.d. field with a density:
/// the sum over the region of 1 / |E_ij|, border-aware.
double expected_local_maxima_exact(const Region& region, Shape shape, int kw, double dm);

enum class PredictionMethod { exact_lattice, asymptotic };

struct Prediction {
  double expected_local_maxima = 0.0;
  PredictionMethod method = PredictionMethod::asymptotic;
  LookoutShape shape_case = LookoutShape::square;
  double kernel_width = 0.0;
  double max_distance = 0.0;
  double height = 0.0;
  double width = 0.0;
};

/// Leading term for an h x w region far from the borders:
/// hw / (pi dm^2), hw / (pi (3 kw dm - kw^2 - dm^2)) or hw / (4 kw^2).
Prediction expected_local_maxima_asymptotic(double h, double w, double kw, double dm);
/// Same three cases with the exact rounded-square area in the middle case.
Prediction expected_local_maxima_area(double h, double w, double kw, double dm);

/// expected_local_maxima_exact packaged as a Prediction (method exact-lattice).
Prediction predict_exact(const Region& region, Shape shape, int kw, double dm);

nlohmann::json to_json(const Prediction& p);

/// Flat model mean C2 * Delta_ij, counting the center term like every other term.
double expected_density_flat(int i, int j, Shape shape, double ks, double sigma);
/// Flat model mean with the center term held at its true value 1: 1 + C2 (Delta_ij - 1).
double expected_density_flat_exact(int i, int j, Shape shape, double ks, double sigma);
/// psi2(t) (Delta^2 - sum delta^2) + psi1(t) sum delta^2 + sigma0^2, t = sigma^2/ks^2.
double variance_density_flat(int i, int j, Shape shape, double ks, double sigma, double sigma0 = 0.0);
/// Flat model variance with a constant center term: the sums above taken over the window minus (i, j).
double variance_density_flat_exact(int i, int j, Shape shape, double ks, double sigma, double sigma0 = 0.0);

/// Expected density at a left-patch pixel of the bicolor model. `left_columns`
/// is the number of columns drawn around c1, so the boundary sits between
/// columns left_columns - 1 and left_columns.
double expected_density_bicolor(int i, int j, int left_columns, Shape shape, double ks, double sigma,
                                double color_gap);

}  // namespace qshift::theory
