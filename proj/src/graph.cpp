#include "qshift/graph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace qshift {

std::string to_string(LookoutShape shape) {
  switch (shape) {
    case LookoutShape::disk:
      return "disk";
    case LookoutShape::rounded_square:
      return "rounded-square";
    case LookoutShape::square:
      return "square";
  }
  return "unknown";
}

LookoutShape lookout_shape(double kw, double dm) {
  if (dm <= kw) return LookoutShape::disk;
  if (dm <= std::sqrt(2.0) * kw) return LookoutShape::rounded_square;
  return LookoutShape::square;
}

std::vector<Pixel> neighborhood_E(int i, int j, Shape shape, int kw, double dm) {
  std::vector<Pixel> out;
  for (int u = std::max(0, i - kw); u <= std::min(shape.height - 1, i + kw); ++u)
    for (int v = std::max(0, j - kw); v <= std::min(shape.width - 1, j + kw); ++v)
      if (within_distance(u - i, v - j, dm)) out.push_back({u, v});
  return out;
}

std::vector<Offset> lookout_offsets(int kw, double dm) {
  std::vector<Offset> out;
  for (int di = -kw; di <= kw; ++di)
    for (int dj = -kw; dj <= kw; ++dj)
      if (within_distance(di, dj, dm)) out.push_back({di, dj, di * di + dj * dj});
  std::sort(out.begin(), out.end(), [](const Offset& a, const Offset& b) {
    return std::tie(a.dist2, a.di, a.dj) < std::tie(b.dist2, b.di, b.dj);
  });
  return out;
}

std::optional<Pixel> ParentGraph::parent(int i, int j) const {
  const std::int32_t p = parent_[shape_.index(i, j)];
  if (p == kRoot) return std::nullopt;
  return Pixel{p / shape_.width, p % shape_.width};
}

int ParentGraph::num_roots() const { return static_cast<int>(std::count(parent_.begin(), parent_.end(), kRoot)); }

ParentGraph build_graph_original(const Image& image, const DensityField& density, const Hyperparams& hp,
                                 OriginalGraphOptions options) {
  hp.validate();
  if (image.shape() != density.shape()) throw std::invalid_argument("image and density field dimensions differ");
  const Shape shape = image.shape();
  const int kw = hp.kernel_width();
  const double dm = hp.max_distance;
  const double cut = options.squared_threshold ? dm : dm * dm;
  const bool restrict_first = !options.cut_after_argmin;
  const Image scaled = image.scaled(hp.ratio);
  const double* lab = scaled.channels().data();
  // Sorted by spatial distance: the 5-D distance is never below it, so the scan can stop early.
  std::vector<Offset> offsets = lookout_offsets(kw, kInfinity);
  offsets.erase(offsets.begin());

  ParentGraph graph(shape);
  auto& links = graph.links();
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < shape.height; ++i) {
    for (int j = 0; j < shape.width; ++j) {
      const double here = density(i, j);
      const double* center = lab + 3 * shape.index(i, j);
      double best = kInfinity;
      std::int64_t best_index = -1;
      for (const Offset& o : offsets) {
        if (o.dist2 > best) break;
        if (restrict_first && o.dist2 > cut) break;
        const int u = i + o.di, v = j + o.dj;
        if (!shape.contains(u, v) || !(density(u, v) > here)) continue;
        const double* x = lab + 3 * shape.index(u, v);
        const double c0 = center[0] - x[0], c1 = center[1] - x[1], c2 = center[2] - x[2];
        const double d2 = o.dist2 + (c0 * c0 + c1 * c1 + c2 * c2);
        if (restrict_first && d2 > cut) continue;
        const auto index = static_cast<std::int64_t>(shape.index(u, v));
        if (d2 < best || (d2 == best && index < best_index)) {
          best = d2;
          best_index = index;
        }
      }
      if (best_index >= 0 && !(options.cut_after_argmin && best > cut))
        links[shape.index(i, j)] = static_cast<std::int32_t>(best_index);
    }
  }
  return graph;
}

ParentGraph build_graph_simplified(const DensityField& field, int kw, double dm) {
  if (kw < 0) throw std::invalid_argument("kernel width must be non-negative");
  const Shape shape = field.shape();
  std::vector<Offset> offsets = lookout_offsets(kw, dm);
  offsets.erase(offsets.begin());

  ParentGraph graph(shape);
  auto& links = graph.links();
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j) {
      const double here = field(i, j);
      for (const Offset& o : offsets) {
        const int u = i + o.di, v = j + o.dj;
        if (shape.contains(u, v) && field(u, v) > here) {
          links[shape.index(i, j)] = static_cast<std::int32_t>(shape.index(u, v));
          break;
        }
      }
    }
  return graph;
}

MaximaCount local_maxima(const DensityField& field, int kw, double dm, const Region& region) {
  const Shape shape = field.shape();
  if (!region.fits(shape)) throw std::invalid_argument("region outside field");
  std::vector<Offset> offsets = lookout_offsets(kw, dm);
  offsets.erase(offsets.begin());

  std::vector<std::uint8_t> is_max(region.area(), 0);
#pragma omp parallel for schedule(dynamic, 4)
  for (int r = 0; r < region.height; ++r)
    for (int c = 0; c < region.width; ++c) {
      const int i = region.top + r, j = region.left + c;
      const double here = field(i, j);
      bool strict = true;
      for (const Offset& o : offsets) {
        const int u = i + o.di, v = j + o.dj;
        if (shape.contains(u, v) && !(here > field(u, v))) {
          strict = false;
          break;
        }
      }
      is_max[static_cast<std::size_t>(r) * region.width + c] = strict;
    }

  MaximaCount out;
  for (int r = 0; r < region.height; ++r)
    for (int c = 0; c < region.width; ++c)
      if (is_max[static_cast<std::size_t>(r) * region.width + c]) out.maxima.push_back({region.top + r, region.left + c});
  out.count = static_cast<int>(out.maxima.size());
  return out;
}

LabelMap connected_components(const ParentGraph& graph) {
  const Shape shape = graph.shape();
  const auto& links = graph.links();
  const std::size_t n = shape.size();
  constexpr std::int32_t kUnknown = -1;

  std::vector<std::int32_t> label(n, kUnknown);
  std::int32_t next = 0;
  for (std::size_t p = 0; p < n; ++p)
    if (links[p] == ParentGraph::kRoot) label[p] = next++;

  std::vector<std::size_t> path;
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t q = p;
    path.clear();
    while (label[q] == kUnknown) {
      path.push_back(q);
      q = static_cast<std::size_t>(links[q]);
      if (path.size() > n) throw std::logic_error("parent graph contains a cycle");
    }
    for (std::size_t r : path) label[r] = label[q];
  }
  return LabelMap{Grid<std::int32_t>(shape, std::move(label)), next};
}

int count_superpixels(const LabelMap& labels, const Region& region) {
  if (!region.fits(labels.labels.shape())) throw std::invalid_argument("region outside label map");
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(labels.num_labels), 0);
  int count = 0;
  for (int i = region.top; i < region.top + region.height; ++i)
    for (int j = region.left; j < region.left + region.width; ++j) {
      auto& s = seen[static_cast<std::size_t>(labels.labels(i, j))];
      if (!s) {
        s = 1;
        ++count;
      }
    }
  return count;
}

bool is_acyclic(const ParentGraph& graph) {
  const auto& links = graph.links();
  const std::size_t n = links.size();
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t q = p;
    std::size_t steps = 0;
    while (links[q] != ParentGraph::kRoot) {
      q = static_cast<std::size_t>(links[q]);
      if (++steps > n) return false;
    }
  }
  return true;
}

void write_graph_csv(std::ostream& out, const ParentGraph& graph) {
  const Shape shape = graph.shape();
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j) {
      const auto p = graph.parent(i, j);
      out << i << ',' << j << ',' << (p ? p->row : -1) << ',' << (p ? p->col : -1) << '\n';
    }
}

}  // namespace qshift
