#include <doctest.h>

#include <cmath>
#include <map>

#include "quadswe/faces.hpp"

using namespace quadswe;

namespace {

QuadtreeGrid uniform_grid(int m, Rect r = {0, 0, 1, 1}) {
  std::vector<std::array<double, 2>> seeds;
  const int n = 1 << m;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      seeds.push_back({r.x0 + (i + 0.5) * r.width / n, r.y0 + (j + 0.5) * r.height / n});
  return QuadtreeGrid::generate_from_seeds(r, seeds, m);
}

}  // namespace

TEST_CASE("uniform 4x4: 24 interior + 16 boundary faces") {
  QuadtreeGrid g = uniform_grid(2);
  FaceSet fs = build_faces(g);
  CHECK(fs.num_interior_faces() == 24);
  CHECK(fs.num_boundary_faces() == 16);
  CHECK(fs.subfaces.size() == 40);
}

TEST_CASE("coarse cell against two fine neighbours carries two sub-faces") {
  QuadtreeGrid g({0, 0, 1, 1}, 3);
  g.refine_cell({1, 0, 0});
  g.refine_cell({1, 0, 1});
  FaceSet fs = build_faces(g);

  // the face between (1,1,0) and its two left neighbours
  const int coarse = g.leaf_index({1, 1, 0});
  int found = 0;
  for (const Face& f : fs.faces) {
    if (f.axis != 0 || f.count != 2) continue;
    const SubFace& a = fs.subfaces[f.first];
    const SubFace& b = fs.subfaces[f.first + 1];
    if (a.right != coarse) continue;
    ++found;
    CHECK(a.frac_right == 0.5);
    CHECK(b.frac_right == 0.5);
    CHECK(a.frac_left == 1.0);
    CHECK(b.frac_left == 1.0);
    // quadrature points at the quarter heights of the coarse edge
    CHECK(a.mid_x == 0.5);
    CHECK(a.mid_y == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(b.mid_y == doctest::Approx(0.375).epsilon(1e-15));
  }
  CHECK(found == 1);
}

TEST_CASE("each interior interface appears exactly once") {
  QuadtreeGrid g = QuadtreeGrid::generate_from_seeds({0, 0, 1, 1}, {{0.1, 0.9}, {0.8, 0.2}}, 5);
  g.regularize();
  FaceSet fs = build_faces(g);
  std::map<std::tuple<int, long, long, long>, int> seen;  // axis, x, y-lo, y-hi on vertex lattice
  for (const SubFace& sf : fs.subfaces) {
    if (sf.is_boundary()) continue;
    auto key = sf.axis == 0 ? std::make_tuple(0, long(sf.v1x), long(sf.v1y), long(sf.v2y))
                            : std::make_tuple(1, long(sf.v1y), long(sf.v1x), long(sf.v2x));
    seen[key]++;
  }
  for (const auto& [k, cnt] : seen) CHECK(cnt == 1);
}

TEST_CASE("sub-face fractions on every cell side sum to one") {
  QuadtreeGrid g = QuadtreeGrid::generate_from_seeds({0, 0, 2, 1}, {{0.3, 0.3}, {1.7, 0.8}}, 5);
  g.regularize();
  FaceSet fs = build_faces(g);
  for (int i = 0; i < g.num_leaves(); ++i) {
    double total[4] = {0, 0, 0, 0};
    for (int k = fs.cell_face_offset[i]; k < fs.cell_face_offset[i + 1]; ++k) {
      const CellFace& cf = fs.cell_faces[k];
      const SubFace& sf = fs.subfaces[cf.sf];
      const double frac = (cf.side == Side::right || cf.side == Side::top) ? sf.frac_left : sf.frac_right;
      total[int(cf.side)] += frac;
    }
    for (int s = 0; s < 4; ++s) CHECK(total[s] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("build_faces rejects unbalanced grids") {
  QuadtreeGrid g({0, 0, 1, 1}, 3);
  g.refine_cell({1, 0, 0});
  g.refine_cell({2, 1, 0});
  REQUIRE_FALSE(g.is_balanced());
  CHECK_THROWS(build_faces(g));
}

TEST_CASE("masked neighbour becomes a wall boundary face") {
  QuadtreeGrid g = uniform_grid(2, {0, 0, 1, 1});
  g.apply_mask([](double x, double) { return x < 0.5; });  // right half inactive
  FaceSet fs = build_faces(g);
  int walls = 0;
  for (const SubFace& sf : fs.subfaces) {
    CHECK((sf.left < 0 || g.active(sf.left)));
    CHECK((sf.right < 0 || g.active(sf.right)));
    if (sf.boundary == BoundaryLoc::mask_wall) {
      ++walls;
      CHECK(sf.axis == 0);
      CHECK(sf.mid_x == 0.5);
    }
  }
  CHECK(walls == 4);
  // masked cells contribute no faces at all
  for (const SubFace& sf : fs.subfaces) {
    if (sf.left >= 0) CHECK(g.active(sf.left));
    if (sf.right >= 0) CHECK(g.active(sf.right));
  }
}

TEST_CASE("sub-face endpoints agree with the quadrature midpoint") {
  QuadtreeGrid g = QuadtreeGrid::generate_from_seeds({0, 0, 2, 2}, {{0.2, 0.2}}, 4);
  g.regularize();
  FaceSet fs = build_faces(g);
  for (const SubFace& sf : fs.subfaces) {
    const double x1 = g.vertex_x(sf.v1x), x2 = g.vertex_x(sf.v2x);
    const double y1 = g.vertex_y(sf.v1y), y2 = g.vertex_y(sf.v2y);
    CHECK(0.5 * (x1 + x2) == doctest::Approx(sf.mid_x).epsilon(1e-15));
    CHECK(0.5 * (y1 + y2) == doctest::Approx(sf.mid_y).epsilon(1e-15));
    const double len = sf.axis == 0 ? y2 - y1 : x2 - x1;
    CHECK(len == doctest::Approx(sf.len).epsilon(1e-15));
  }
}
