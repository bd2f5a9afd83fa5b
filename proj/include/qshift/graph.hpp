#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qshift/density.hpp"
#include "qshift/image.hpp"

namespace qshift {

enum class LookoutShape { disk, rounded_square, square };

std::string to_string(LookoutShape shape);

/// Shape of E = C ∩ D for window radius kw and cutoff dm.
LookoutShape lookout_shape(double kw, double dm);

struct NeighborhoodSpec {
  int kernel_width = 0;
  double max_distance = kInfinity;

  LookoutShape shape() const { return lookout_shape(kernel_width, max_distance); }
};

/// True iff the offset (di, dj) lies within Euclidean distance dm. All lookout
/// membership tests in the library go through this predicate.
inline bool within_distance(int di, int dj, double dm) {
  return static_cast<double>(di * di + dj * dj) <= dm * dm;
}

/// In-bounds points with Chebyshev distance <= kw and Euclidean distance <= dm, row-major.
std::vector<Pixel> neighborhood_E(int i, int j, Shape shape, int kw, double dm);

/// Offsets of the (unclipped) lookout set, ordered by squared distance and then
/// row-major, i.e. the order in which a nearest-higher search visits them.
struct Offset {
  int di;
  int dj;
  int dist2;
};
std::vector<Offset> lookout_offsets(int kw, double dm);

/// Forest of parent links. Roots have no parent.
class ParentGraph {
 public:
  static constexpr std::int32_t kRoot = -1;

  ParentGraph() = default;
  explicit ParentGraph(Shape shape) : shape_(shape), parent_(shape.size(), kRoot) {}

  Shape shape() const { return shape_; }
  std::optional<Pixel> parent(int i, int j) const;
  void set_parent(int i, int j, Pixel p) { parent_[shape_.index(i, j)] = static_cast<std::int32_t>(shape_.index(p.row, p.col)); }
  bool is_root(int i, int j) const { return parent_[shape_.index(i, j)] == kRoot; }
  int num_roots() const;

  /// Linear parent indices, kRoot for roots.
  const std::vector<std::int32_t>& links() const { return parent_; }
  std::vector<std::int32_t>& links() { return parent_; }

  friend bool operator==(const ParentGraph&, const ParentGraph&) = default;

 private:
  Shape shape_{};
  std::vector<std::int32_t> parent_;
};

/// Alternatives for the distance cutoff of the original construction.
struct OriginalGraphOptions {
  /// Compare the squared 5-D distance against dm, as in the skimage-style pseudocode.
  bool squared_threshold = false;
  /// Pick the nearest higher neighbor in the whole window first, then drop the
  /// link if it is too long. The default restricts candidates before the argmin.
  bool cut_after_argmin = false;
};

/// Original quickshift: link each pixel to the nearest (in position + ratio*color)
/// window neighbor with strictly higher density, subject to the dm cutoff.
/// Equal distances resolve to the smallest row-major index.
ParentGraph build_graph_original(const Image& image, const DensityField& density, const Hyperparams& hp,
                                 OriginalGraphOptions options = {});

/// Simplified quickshift: link each pixel to the spatially closest element of E
/// with strictly higher value. Ties resolve to the smallest row-major index.
ParentGraph build_graph_simplified(const DensityField& field, int kw, double dm);

struct MaximaCount {
  int count = 0;
  std::vector<Pixel> maxima;
};

/// Pixels of `region` whose value strictly exceeds every other value in their lookout set.
MaximaCount local_maxima(const DensityField& field, int kw, double dm, const Region& region);

/// Pixels sharing a root share a label; labels follow the row-major order of roots.
LabelMap connected_components(const ParentGraph& graph);

/// Number of distinct labels present in `region`.
int count_superpixels(const LabelMap& labels, const Region& region);

/// Follows parents from every pixel; false if any walk exceeds H*W steps.
bool is_acyclic(const ParentGraph& graph);

/// CSV rows "i,j,pu,pv", roots written as "i,j,-1,-1".
void write_graph_csv(std::ostream& out, const ParentGraph& graph);

}  // namespace qshift
