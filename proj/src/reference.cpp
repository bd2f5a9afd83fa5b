#include "qshift/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace qshift::reference {

DensityField density_P(const Image& image, const Hyperparams& hp, const NoiseModel& noise) {
  hp.validate();
  const Shape shape = image.shape();
  const int kw = hp.kernel_width();
  const double two_ks2 = 2.0 * hp.kernel_size * hp.kernel_size;
  DensityField out(shape);
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j) {
      const Color a = image.pixel(i, j);
      double sum = 0.0;
      for (const Pixel& q : window(i, j, shape, kw)) {
        const Color b = image.pixel(q.row, q.col);
        double color2 = 0.0;
        for (int k = 0; k < 3; ++k) {
          const double d = hp.ratio * a[k] - hp.ratio * b[k];
          color2 += d * d;
        }
        const double di = i - q.row, dj = j - q.col;
        sum += std::exp((-di * di - dj * dj - color2) / two_ks2);
      }
      out(i, j) = sum + noise.draw(i, j);
    }
  return out;
}

ParentGraph build_graph_original(const Image& image, const DensityField& density, const Hyperparams& hp,
                                 OriginalGraphOptions options) {
  hp.validate();
  if (image.shape() != density.shape()) throw std::invalid_argument("image and density field dimensions differ");
  const Shape shape = image.shape();
  const int kw = hp.kernel_width();
  const double dm = hp.max_distance;
  ParentGraph graph(shape);
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j) {
      const Color a = image.pixel(i, j);
      double best = kInfinity;
      bool found = false;
      Pixel best_pixel{};
      // Row-major scan with strict improvement keeps the smallest index on ties.
      for (const Pixel& q : window(i, j, shape, kw)) {
        if (!(density(i, j) < density(q.row, q.col))) continue;
        const Color b = image.pixel(q.row, q.col);
        double d2 = 0.0;
        for (int k = 0; k < 3; ++k) {
          const double d = hp.ratio * a[k] - hp.ratio * b[k];
          d2 += d * d;
        }
        const double di = i - q.row, dj = j - q.col;
        d2 += di * di + dj * dj;
        const double dist = options.squared_threshold ? d2 : std::sqrt(d2);
        if (!options.cut_after_argmin && !(dist <= dm)) continue;
        if (d2 < best) {
          best = d2;
          best_pixel = q;
          found = true;
        }
      }
      if (found && options.cut_after_argmin) {
        const double dist = options.squared_threshold ? best : std::sqrt(best);
        found = dist <= dm;
      }
      if (found) graph.set_parent(i, j, best_pixel);
    }
  return graph;
}

ParentGraph build_graph_simplified(const DensityField& field, int kw, double dm) {
  const Shape shape = field.shape();
  ParentGraph graph(shape);
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j) {
      double best = kInfinity;
      bool found = false;
      Pixel best_pixel{};
      for (const Pixel& q : neighborhood_E(i, j, shape, kw, dm)) {
        if (!(field(i, j) < field(q.row, q.col))) continue;
        const double di = i - q.row, dj = j - q.col;
        const double d = std::sqrt(di * di + dj * dj);
        if (d < best) {
          best = d;
          best_pixel = q;
          found = true;
        }
      }
      if (found) graph.set_parent(i, j, best_pixel);
    }
  return graph;
}

int count_local_maxima(const DensityField& field, int kw, double dm, const Region& region) {
  const Shape shape = field.shape();
  int count = 0;
  for (int i = region.top; i < region.top + region.height; ++i)
    for (int j = region.left; j < region.left + region.width; ++j) {
      bool strict = true;
      for (const Pixel& q : neighborhood_E(i, j, shape, kw, dm))
        if ((q.row != i || q.col != j) && !(field(i, j) > field(q.row, q.col))) strict = false;
      count += strict;
    }
  return count;
}

}  // namespace qshift::reference
