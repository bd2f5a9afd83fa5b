#include <doctest.h>

#include <cmath>
#include <omp.h>
#include <set>
#include <sstream>

#include "qshift/graph.hpp"
#include "qshift/reference.hpp"
#include "qshift/rng.hpp"
#include "qshift/synthetic.hpp"

using namespace qshift;

namespace {

DensityField field_of(Shape s, std::vector<double> values) { return DensityField(s, std::move(values)); }

// Literal Alg. 3: scan the whole image, keep the spatially nearest strictly higher point of E.
ParentGraph simplified_oracle(const DensityField& a, int kw, double dm) {
  const Shape s = a.shape();
  ParentGraph g(s);
  for (int i = 0; i < s.height; ++i)
    for (int j = 0; j < s.width; ++j) {
      double best = INFINITY;
      Pixel parent{-1, -1};
      for (int u = 0; u < s.height; ++u)
        for (int v = 0; v < s.width; ++v) {
          const int di = u - i, dj = v - j;
          if (std::max(std::abs(di), std::abs(dj)) > kw) continue;
          if (std::sqrt(double(di * di + dj * dj)) > dm) continue;
          if (!(a(u, v) > a(i, j))) continue;
          const double d = std::sqrt(double(di * di + dj * dj));
          if (d < best) {  // row-major scan keeps the first of equal distances
            best = d;
            parent = {u, v};
          }
        }
      if (parent.row >= 0) g.set_parent(i, j, parent);
    }
  return g;
}

int maxima_oracle(const DensityField& a, int kw, double dm, const Region& r) {
  int count = 0;
  for (int i = r.top; i < r.top + r.height; ++i)
    for (int j = r.left; j < r.left + r.width; ++j) {
      bool is_max = true;
      for (int u = 0; u < a.height() && is_max; ++u)
        for (int v = 0; v < a.width(); ++v) {
          if ((u == i && v == j) || std::max(std::abs(u - i), std::abs(v - j)) > kw) continue;
          if ((u - i) * (u - i) + (v - j) * (v - j) > dm * dm) continue;
          if (!(a(i, j) > a(u, v))) {
            is_max = false;
            break;
          }
        }
      count += is_max;
    }
  return count;
}

struct Config {
  int kw;
  double dm;
};

// One config per lookout shape.
const Config kConfigs[] = {{3, 2.5}, {3, 3.7}, {3, kInfinity}};

Region random_region(Shape s, std::uint64_t seed) {
  const CounterRng rng(seed, 77);
  const int top = static_cast<int>(rng.uniform(0, 0, 0) * s.height);
  const int left = static_cast<int>(rng.uniform(0, 0, 1) * s.width);
  const int h = 1 + static_cast<int>(rng.uniform(0, 0, 2) * (s.height - top));
  const int w = 1 + static_cast<int>(rng.uniform(0, 0, 3) * (s.width - left));
  return {top, left, std::min(h, s.height - top), std::min(w, s.width - left)};
}

}  // namespace

TEST_CASE("lookout shape cases") {
  CHECK(lookout_shape(15, 10) == LookoutShape::disk);
  CHECK(lookout_shape(15, 15) == LookoutShape::disk);
  CHECK(lookout_shape(15, 18) == LookoutShape::rounded_square);
  CHECK(lookout_shape(15, 15 * std::sqrt(2.0)) == LookoutShape::rounded_square);
  CHECK(lookout_shape(15, 40) == LookoutShape::square);
  CHECK(lookout_shape(15, kInfinity) == LookoutShape::square);
  CHECK(to_string(LookoutShape::rounded_square) == "rounded-square");
  CHECK(NeighborhoodSpec{3, 2.0}.shape() == LookoutShape::disk);
}

TEST_CASE("neighborhood E") {
  const Shape s{11, 11};
  CHECK(neighborhood_E(5, 5, s, 3, kInfinity) == window(5, 5, s, 3));
  CHECK(neighborhood_E(5, 5, s, 3, 2.0).size() == 13);
  CHECK(neighborhood_E(5, 5, s, 3, 4.0).size() == 45);
  const auto e = neighborhood_E(0, 0, s, 3, 2.0);
  CHECK(e.size() == 6);
  CHECK(std::find(e.begin(), e.end(), Pixel{0, 0}) != e.end());
  const auto offsets = lookout_offsets(3, 2.0);
  CHECK(offsets.size() == 13);
  CHECK(offsets.front().dist2 == 0);
  for (std::size_t k = 1; k < offsets.size(); ++k) CHECK(offsets[k - 1].dist2 <= offsets[k].dist2);
}

TEST_CASE("original graph: hand traces") {
  const Image img(Shape{1, 3}, Color{10.0, 0.0, 0.0});
  const DensityField p = field_of(Shape{1, 3}, {1, 2, 3});
  Hyperparams hp{1.0, kInfinity, 0.0, 0.0};
  const ParentGraph g = build_graph_original(img, p, hp);
  CHECK(g.parent(0, 0) == Pixel{0, 1});
  CHECK(g.parent(0, 1) == Pixel{0, 2});
  CHECK(g.is_root(0, 2));
  hp.max_distance = 0.5;
  CHECK(build_graph_original(img, p, hp).num_roots() == 3);

  const DensityField flat(Shape{4, 4}, 7.0);
  CHECK(build_graph_original(Image(Shape{4, 4}), flat, Hyperparams{1.0, kInfinity, 1.0, 0.0}).num_roots() == 16);
  CHECK_THROWS_AS(build_graph_original(Image(Shape{2, 2}), flat, hp), std::invalid_argument);
}

TEST_CASE("original graph: color term and compatibility threshold") {
  // Two higher neighbors at spatial distance 1; the one with the closer color wins.
  Image img(Shape{1, 3}, Color{10.0, 0.0, 0.0});
  img.set_pixel(0, 0, {13.0, 0.0, 0.0});
  const DensityField p = field_of(Shape{1, 3}, {5, 1, 5});
  const Hyperparams hp{1.0, kInfinity, 1.0, 0.0};
  CHECK(build_graph_original(img, p, hp).parent(0, 1) == Pixel{0, 2});

  // Spatial distance 2 against dm = 3: kept unsquared (2 <= 3), cut when squared (4 > 3).
  const Image gray(Shape{1, 3}, Color{10.0, 0.0, 0.0});
  const DensityField q = field_of(Shape{1, 3}, {1, 0, 2});
  const Hyperparams far{1.0, 3.0, 0.0, 0.0};
  CHECK(build_graph_original(gray, q, far).parent(0, 0) == Pixel{0, 2});
  CHECK(build_graph_original(gray, q, far, {.squared_threshold = true}).is_root(0, 0));
}

TEST_CASE("original graph: equidistant candidates resolve to the smaller index") {
  const Image img(Shape{3, 3}, Color{10.0, 0.0, 0.0});
  const DensityField p = field_of(Shape{3, 3}, {0, 5, 0, 5, 1, 5, 0, 5, 0});
  const ParentGraph g = build_graph_original(img, p, Hyperparams{1.0, kInfinity, 0.0, 0.0});
  CHECK(g.parent(1, 1) == Pixel{0, 1});
  const ParentGraph s = build_graph_simplified(p, 1, kInfinity);
  CHECK(s.parent(1, 1) == Pixel{0, 1});
}

TEST_CASE("simplified graph: hand traces") {
  const DensityField ramp = field_of(Shape{3, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  const ParentGraph g = build_graph_simplified(ramp, 3, kInfinity);
  CHECK(g.num_roots() == 1);
  CHECK(g.is_root(2, 2));
  CHECK(g.parent(0, 0) == Pixel{0, 1});

  const DensityField peak = field_of(Shape{3, 3}, {1, 1, 1, 1, 2, 1, 1, 1, 1});
  const ParentGraph h = build_graph_simplified(peak, 1, kInfinity);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != 1 || j != 1) CHECK(h.parent(i, j) == Pixel{1, 1});

  CHECK(build_graph_simplified(DensityField(Shape{3, 4}, 2.0), 2, kInfinity).num_roots() == 12);
}

TEST_CASE("local maxima") {
  const DensityField ramp = field_of(Shape{3, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  const auto m = local_maxima(ramp, 3, kInfinity, Region::whole(ramp.shape()));
  CHECK(m.count == 1);
  CHECK(m.maxima == std::vector<Pixel>{{2, 2}});
  CHECK(local_maxima(DensityField(Shape{4, 4}, 1.0), 2, kInfinity, Region::whole(Shape{4, 4})).count == 0);
  CHECK(local_maxima(DensityField(Shape{1, 1}, 1.0), 2, kInfinity, Region::whole(Shape{1, 1})).count == 1);
}

TEST_CASE("connected components") {
  ParentGraph roots(Shape{2, 2});
  CHECK(connected_components(roots).num_labels == 4);

  const DensityField chain = field_of(Shape{1, 3}, {1, 2, 3});
  const LabelMap one = connected_components(build_graph_simplified(chain, 2, kInfinity));
  CHECK(one.num_labels == 1);

  ParentGraph two(Shape{1, 4});
  two.set_parent(0, 0, {0, 1});
  two.set_parent(0, 3, {0, 2});
  const LabelMap labels = connected_components(two);
  CHECK(labels.num_labels == 2);
  CHECK(labels.labels(0, 0) == 0);
  CHECK(labels.labels(0, 1) == 0);
  CHECK(labels.labels(0, 2) == 1);
  CHECK(labels.labels(0, 3) == 1);
}

TEST_CASE("superpixel counts per region") {
  const DensityField f = uniform_field(Shape{12, 15}, 3);
  const LabelMap labels = connected_components(build_graph_simplified(f, 2, 2.5));
  CHECK(count_superpixels(labels, Region::whole(f.shape())) == labels.num_labels);
  CHECK(count_superpixels(labels, Region{4, 4, 1, 1}) == 1);
}

TEST_CASE("region with no maximum crossed by three components") {
  // Peaks at (1,0), (0,2), (1,4) sit just outside R = row 1, columns 1..3.
  const DensityField f = field_of(Shape{3, 5}, {0, 0, 10, 0, 0, 10, 5, 5, 5, 10, 0, 0, 0, 0, 0});
  const Region r{1, 1, 1, 3};
  const LabelMap labels = connected_components(build_graph_simplified(f, 1, 1.0));
  CHECK(local_maxima(f, 1, 1.0, r).count == 0);
  CHECK(count_superpixels(labels, r) == 3);
}

TEST_CASE("simplified graph matches the literal construction") {
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    for (const Config c : kConfigs) {
      const DensityField f = uniform_field(Shape{9, 13}, seed);
      CHECK(build_graph_simplified(f, c.kw, c.dm) == simplified_oracle(f, c.kw, c.dm));
      CHECK(local_maxima(f, c.kw, c.dm, Region::whole(f.shape())).count ==
            maxima_oracle(f, c.kw, c.dm, Region::whole(f.shape())));
    }
}

TEST_CASE("properties on random fields") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const DensityField f = uniform_field(Shape{20, 30}, seed);
    for (const Config c : kConfigs) {
      const ParentGraph g = build_graph_simplified(f, c.kw, c.dm);
      const LabelMap labels = connected_components(g);
      // One component per local maximum of the whole image.
      CHECK(labels.num_labels == local_maxima(f, c.kw, c.dm, Region::whole(f.shape())).count);
      CHECK(is_acyclic(g));
      // Parents are higher and within dm.
      for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 30; ++j)
          if (const auto p = g.parent(i, j)) {
            CHECK(f(p->row, p->col) > f(i, j));
            CHECK(std::hypot(p->row - i, p->col - j) <= c.dm);
          }
      const Region r = random_region(f.shape(), seed * 3 + static_cast<std::uint64_t>(c.kw));
      CHECK(local_maxima(f, c.kw, c.dm, r).count <= count_superpixels(labels, r));
    }
  }
}

TEST_CASE("monotone transforms leave the simplified graph unchanged") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const DensityField f = uniform_field(Shape{15, 15}, seed);
    DensityField affine = f, cube = f;
    for (int i = 0; i < 15; ++i)
      for (int j = 0; j < 15; ++j) {
        affine(i, j) = 2 * f(i, j) + 7;
        cube(i, j) = f(i, j) * f(i, j) * f(i, j);
      }
    for (const Config c : kConfigs) {
      const ParentGraph g = build_graph_simplified(f, c.kw, c.dm);
      CHECK(build_graph_simplified(affine, c.kw, c.dm) == g);
      CHECK(build_graph_simplified(cube, c.kw, c.dm) == g);
    }
  }
}

TEST_CASE("original graph: edges respect dm, point uphill, no cycles") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Image img = flat_image(FlatModel{18, 22, {50.0, 0.0, 0.0}, 2.0, seed});
    for (const double dm : {2.0, 4.5, kInfinity}) {
      const Hyperparams hp{1.5, dm, 0.8, 1e-5, seed};
      const DensityField p = density_P(img, hp);
      const ParentGraph g = build_graph_original(img, p, hp);
      CHECK(is_acyclic(g));
      for (int i = 0; i < 18; ++i)
        for (int j = 0; j < 22; ++j)
          if (const auto q = g.parent(i, j)) {
            CHECK(p(q->row, q->col) > p(i, j));
            CHECK(std::hypot(q->row - i, q->col - j) <= dm);
          }
      // Cutting before or after the argmin is the same rule: the cut is monotone in the minimized distance.
      CHECK(build_graph_original(img, p, hp, {.cut_after_argmin = true}) == g);
      CHECK(reference::build_graph_original(img, p, hp) == g);
      CHECK(reference::build_graph_original(img, p, hp, {.squared_threshold = true}) ==
            build_graph_original(img, p, hp, {.squared_threshold = true}));
    }
  }
}

TEST_CASE("original and simplified coincide without color and cutoff") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DensityField f = uniform_field(Shape{14, 17}, seed);
    const Image img = flat_image(FlatModel{14, 17, {50.0, 0.0, 0.0}, 5.0, seed + 100});
    const Hyperparams hp{1.0, kInfinity, 0.0, 0.0};
    CHECK(build_graph_original(img, f, hp) == build_graph_simplified(f, hp.kernel_width(), kInfinity));
  }
}

TEST_CASE("serial and parallel graph kernels agree") {
  const DensityField f = uniform_field(Shape{25, 31}, 5);
  for (const Config c : kConfigs) {
    const ParentGraph g = build_graph_simplified(f, c.kw, c.dm);
    CHECK(reference::build_graph_simplified(f, c.kw, c.dm) == g);
    const Region r{3, 4, 15, 20};
    CHECK(reference::count_local_maxima(f, c.kw, c.dm, r) == local_maxima(f, c.kw, c.dm, r).count);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(3);
    CHECK(build_graph_simplified(f, c.kw, c.dm) == g);
    omp_set_num_threads(saved);
  }
}

TEST_CASE("graph csv") {
  const DensityField chain = field_of(Shape{1, 3}, {1, 2, 3});
  std::ostringstream out;
  write_graph_csv(out, build_graph_simplified(chain, 2, kInfinity));
  CHECK(out.str() == "0,0,0,1\n0,1,0,2\n0,2,-1,-1\n");
}
