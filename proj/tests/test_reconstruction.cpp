#include <doctest.h>

#include <cmath>
#include <random>

#include "quadswe/reconstruction.hpp"

using namespace quadswe;

namespace {

struct Patch {
  QuadtreeGrid grid;
  FaceSet faces;
  BathymetryData bathy;
};

// level-2 grid inside an m=3 tree with the two west-column cells at rows
// 0 and 1 split: cell (2,1,0) then has two finer left neighbours and a
// same-level right neighbour
Patch config_b_patch(const BottomField& bottom) {
  std::vector<QuadtreeGrid::LeveledSeed> ls;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) ls.push_back({(i + 0.5) / 4.0, (j + 0.5) / 4.0, 2});
  QuadtreeGrid g = QuadtreeGrid::generate_leveled({0, 0, 1, 1}, ls, 3);
  g.refine_cell({2, 0, 0});
  g.refine_cell({2, 0, 1});
  REQUIRE(g.is_balanced());
  FaceSet fs = build_faces(g);
  BathymetryData b = build_bathymetry(g, bottom, &fs);
  return {std::move(g), std::move(fs), std::move(b)};
}

const BottomField kFlat{[](double, double) { return 0.0; }, true};

GridState const_state(const QuadtreeGrid& g, double w, double hu = 0.0, double hv = 0.0,
                      double grav = 1.0) {
  GridState s = GridState::zeros(g.num_leaves(), grav);
  for (int i = 0; i < g.num_leaves(); ++i) {
    s.w[i] = w;
    s.hu[i] = hu;
    s.hv[i] = hv;
  }
  return s;
}

}  // namespace

TEST_CASE("minmod definition and errors") {
  const double a[] = {1, 2, 3};
  CHECK(minmod({a, 3}) == 1.0);
  const double b[] = {-1, -4};
  CHECK(minmod({b, 2}) == -1.0);
  const double c[] = {1, -1, 2};
  CHECK(minmod({c, 3}) == 0.0);
  const double z[] = {0.0, 5.0};
  CHECK(minmod({z, 2}) == 0.0);
  CHECK_THROWS_AS(minmod({}), std::invalid_argument);
}

TEST_CASE("minmod: scale equivariance and boundedness") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    double v[4];
    const int n = 1 + int(rng() % 4);
    for (int k = 0; k < n; ++k) v[k] = U(rng);
    const double r = minmod({v, size_t(n)});
    double lo = v[0], hi = v[0];
    for (int k = 0; k < n; ++k) {
      lo = std::min(lo, v[k]);
      hi = std::max(hi, v[k]);
    }
    CHECK(((r == 0.0) || (lo <= r && r <= hi)));

    const double scale = 0.5 + std::abs(U(rng));
    double vs[4];
    for (int k = 0; k < n; ++k) vs[k] = scale * v[k];
    CHECK(minmod({vs, size_t(n)}) == doctest::Approx(scale * r).epsilon(1e-14));
  }
}

TEST_CASE("slopes vanish on constant data") {
  Patch p = config_b_patch(kFlat);
  GridState s = const_state(p.grid, 1.0);
  SlopeSet sl = compute_slopes(p.grid, p.faces, s, p.bathy, BoundarySpec::all(BcKind::zero_order));
  for (int i = 0; i < p.grid.num_leaves(); ++i) {
    CHECK(sl.sx[i].w == 0.0);
    CHECK(sl.sy[i].w == 0.0);
    CHECK(sl.sx[i].hu == 0.0);
    CHECK(sl.sy[i].hv == 0.0);
  }
}

TEST_CASE("slopes reproduce linear data on a uniform interior") {
  std::vector<QuadtreeGrid::LeveledSeed> ls;
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) ls.push_back({(i + 0.5) / 8.0, (j + 0.5) / 8.0, 3});
  QuadtreeGrid g = QuadtreeGrid::generate_leveled({0, 0, 1, 1}, ls, 3);
  FaceSet fs = build_faces(g);
  BathymetryData b = build_bathymetry(g, kFlat, &fs);
  GridState s = GridState::zeros(g.num_leaves(), 1.0);
  for (int i = 0; i < g.num_leaves(); ++i) s.w[i] = g.center_x(g.leaves()[i]) + 5.0;
  SlopeSet sl = compute_slopes(g, fs, s, b, BoundarySpec::all(BcKind::zero_order));
  for (int i = 0; i < g.num_leaves(); ++i) {
    const CellRef& c = g.leaves()[i];
    const bool interior = c.ix > 0 && c.ix < 7 && c.iy > 0 && c.iy < 7;
    if (!interior) continue;
    CHECK(sl.sx[i].w == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(sl.sy[i].w == doctest::Approx(0.0));
  }
}

TEST_CASE("slope stencil across a level jump matches the three-quotient formula") {
  Patch p = config_b_patch(kFlat);
  GridState s = const_state(p.grid, 0.0);
  const int me = p.grid.leaf_index({2, 1, 0});
  const int nb_low = p.grid.leaf_index({3, 1, 0});
  const int nb_up = p.grid.leaf_index({3, 1, 1});
  const int nb_right = p.grid.leaf_index({2, 2, 0});
  const double wI = 0.42, wII = 0.17, wme = 0.3, wr = 0.55;
  s.w[nb_low] = wI;
  s.w[nb_up] = wII;
  s.w[me] = wme;
  s.w[nb_right] = wr;

  SlopeSet sl = compute_slopes(p.grid, p.faces, s, p.bathy, BoundarySpec::all(BcKind::zero_order));

  const double dx = p.grid.dx(2);
  const double q1 = (wme - wI) / (0.75 * dx);
  const double q2 = (wme - wII) / (0.75 * dx);
  const double q3 = (wr - wme) / dx;
  const double args[] = {q1, q2, q3};
  CHECK(sl.sx[me].w == doctest::Approx(minmod({args, 3})).epsilon(1e-14));
}

TEST_CASE("slope stencil against a coarser neighbour uses the 3/2-cell distance") {
  Patch p = config_b_patch(kFlat);
  GridState s = const_state(p.grid, 0.0);
  const int fine = p.grid.leaf_index({3, 1, 0});   // has coarser right neighbour (2,1,0)
  const int coarse = p.grid.leaf_index({2, 1, 0});
  const int left = p.grid.leaf_index({3, 0, 0});
  s.w[fine] = 0.2;
  s.w[coarse] = 0.8;
  s.w[left] = 0.05;
  SlopeSet sl = compute_slopes(p.grid, p.faces, s, p.bathy, BoundarySpec::all(BcKind::zero_order));
  const double dxf = p.grid.dx(3);
  const double q_right = (0.8 - 0.2) / (1.5 * dxf);
  const double q_left = (0.2 - 0.05) / dxf;
  const double args[] = {q_left, q_right};
  CHECK(sl.sx[fine].w == doctest::Approx(minmod({args, 2})).epsilon(1e-14));
}

TEST_CASE("zero-order boundaries zero out the normal slope") {
  Patch p = config_b_patch(kFlat);
  GridState s = const_state(p.grid, 0.0);
  for (int i = 0; i < p.grid.num_leaves(); ++i) s.w[i] = p.grid.center_x(p.grid.leaves()[i]);
  SlopeSet sl = compute_slopes(p.grid, p.faces, s, p.bathy, BoundarySpec::all(BcKind::zero_order));
  const int corner = p.grid.leaf_index({2, 3, 0});  // touches the right boundary
  CHECK(sl.sx[corner].w == 0.0);
}

TEST_CASE("positivity correction: dry lake over affine bottom pins corners to B") {
  BottomField affine{[](double x, double y) { return 0.25 * x + 0.5 * y; }, true};
  Patch p = config_b_patch(affine);
  GridState s = GridState::zeros(p.grid.num_leaves(), 1.0);
  for (int i = 0; i < p.grid.num_leaves(); ++i) s.w[i] = p.bathy.center(i);  // zero depth
  SlopeSet sl = compute_slopes(p.grid, p.faces, s, p.bathy, BoundarySpec::all(BcKind::zero_order));
  for (int i = 0; i < p.grid.num_leaves(); ++i) {
    for (int c = 0; c < 4; ++c)
      CHECK(sl.wc[4 * i + c] ==
            doctest::Approx(p.bathy.corner(i, BathymetryData::Corner(c))).epsilon(1e-13));
  }
  // all reconstructed depths are zero up to roundoff
  const double eps = 1e-12;
  for (int i = 0; i < p.grid.num_leaves(); ++i) {
    EdgePointValues pv = point_values(p.grid, p.faces, i, s, sl, p.bathy, eps);
    for (const auto& e : pv.entries) CHECK(e.h <= 1e-15);
  }
}

TEST_CASE("positivity correction: the single-violation case from first principles") {
  // B corners (SW,SE,NW,NE) = (0,0,0,1) on cell (1,0,0); surface 0.4 so
  // the corner mean is 0.25 and d = 0.15; only NE dips under B
  QuadtreeGrid g({0, 0, 2, 2}, 2);
  BottomField bilin{[](double x, double y) { return x * y; }, true};
  FaceSet fs = build_faces(g);
  BathymetryData b = build_bathymetry(g, bilin, &fs);
  const int i = g.leaf_index({1, 0, 0});
  REQUIRE(b.corner(i, BathymetryData::NE) == doctest::Approx(1.0));
  REQUIRE(b.center(i) == doctest::Approx(0.25));

  GridState s = const_state(g, 0.4);
  SlopeSet sl;
  sl.sx.assign(g.num_leaves(), Conserved{});
  sl.sy.assign(g.num_leaves(), Conserved{});
  sl.corrected.assign(g.num_leaves(), 0);
  sl.wc.assign(size_t(g.num_leaves()) * 4, 0.0);
  const bool fired = correct_positivity(g, i, s, sl, b);
  CHECK(fired);
  CHECK(sl.wc[4 * i + 3] == doctest::Approx(1.0).epsilon(1e-14));  // NE pinned to B
  for (int c = 0; c < 3; ++c)
    CHECK(sl.wc[4 * i + c] == doctest::Approx(0.2).epsilon(1e-13));  // B + (4/3) * 0.15
  const double mean = 0.25 * (sl.wc[4 * i] + sl.wc[4 * i + 1] + sl.wc[4 * i + 2] + sl.wc[4 * i + 3]);
  CHECK(mean == doctest::Approx(0.4).epsilon(1e-13));
}

TEST_CASE("positivity correction: conservation and corner positivity, 1e4 random cells") {
  QuadtreeGrid g({0, 0, 2, 2}, 2);
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const double bc[4] = {U(rng), U(rng), U(rng), U(rng)};  // SW SE NW NE
    BottomField f{[&](double x, double y) {
                    return bc[0] * (1 - x) * (1 - y) + bc[1] * x * (1 - y) + bc[2] * (1 - x) * y +
                           bc[3] * x * y;
                  },
                  true};
    BathymetryData b = build_bathymetry(g, f);
    const int i = g.leaf_index({1, 0, 0});
    GridState s = const_state(g, 0.0);
    const double bcen = b.center(i);
    const double d = U(rng) * 0.5;
    s.w[i] = bcen + d;
    SlopeSet sl;
    sl.sx.assign(g.num_leaves(), Conserved{});
    sl.sy.assign(g.num_leaves(), Conserved{});
    sl.corrected.assign(g.num_leaves(), 0);
    sl.wc.assign(size_t(g.num_leaves()) * 4, 0.0);
    sl.sx[i] = {4.0 * (U(rng) - 0.5), 0, 0};
    sl.sy[i] = {4.0 * (U(rng) - 0.5), 0, 0};
    correct_positivity(g, i, s, sl, b);

    const double* wc = &sl.wc[4 * size_t(i)];
    const double mean = 0.25 * (wc[0] + wc[1] + wc[2] + wc[3]);
    CHECK(std::abs(mean - s.w[i]) <= 1e-13);
    for (int c = 0; c < 4; ++c)
      CHECK(wc[c] >= b.corner(i, BathymetryData::Corner(c)) - 1e-14);
  }
}

TEST_CASE("triple violation reduces to the displayed closed form") {
  // B with three high corners; surface just above the center value
  QuadtreeGrid g({0, 0, 2, 2}, 2);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double high = 1.0 + U(rng);
    const double bc[4] = {0.0, high, high, high};  // SW low, three equal raised corners
    BottomField f{[&](double x, double y) {
                    return bc[0] * (1 - x) * (1 - y) + bc[1] * x * (1 - y) + bc[2] * (1 - x) * y +
                           bc[3] * x * y;
                  },
                  true};
    BathymetryData b = build_bathymetry(g, f);
    const int i = g.leaf_index({1, 0, 0});
    GridState s = const_state(g, 0.0);
    s.w[i] = b.center(i) + 1e-3;  // with zero slopes exactly the three raised corners violate
    SlopeSet sl;
    sl.sx.assign(g.num_leaves(), Conserved{});
    sl.sy.assign(g.num_leaves(), Conserved{});
    sl.corrected.assign(g.num_leaves(), 0);
    sl.wc.assign(size_t(g.num_leaves()) * 4, 0.0);
    const bool fired = correct_positivity(g, i, s, sl, b);
    REQUIRE(fired);
    // with flat slopes exactly the three raised corners violate
    const double* wc = &sl.wc[4 * size_t(i)];
    const double expect_sw = 4.0 * s.w[i] - b.corner(i, BathymetryData::SE) -
                             b.corner(i, BathymetryData::NW) - b.corner(i, BathymetryData::NE);
    CHECK(wc[0] == doctest::Approx(expect_sw).epsilon(1e-12));
    CHECK(wc[0] >= b.corner(i, BathymetryData::SW) - 1e-14);
  }
}

TEST_CASE("point values: zero slopes give the cell averages at every quadrature point") {
  Patch p = config_b_patch(kFlat);
  GridState s = const_state(p.grid, 2.5, 0.3, -0.1);
  SlopeSet sl = compute_slopes(p.grid, p.faces, s, p.bathy, BoundarySpec::all(BcKind::zero_order));
  const double eps = 1e-12;
  for (int i = 0; i < p.grid.num_leaves(); ++i) {
    EdgePointValues pv = point_values(p.grid, p.faces, i, s, sl, p.bathy, eps);
    for (const auto& e : pv.entries) {
      CHECK(e.w == 2.5);
      CHECK(e.hu == 0.3);
      CHECK(e.hv == -0.1);
    }
  }
}

TEST_CASE("point values: fine neighbour trace at the split face uses its own half offset") {
  Patch p = config_b_patch(kFlat);
  GridState s = const_state(p.grid, 0.0);
  const int fine = p.grid.leaf_index({3, 1, 0});
  // nonzero slopes on the fine cell; its east trace sits at its own edge
  for (int i = 0; i < p.grid.num_leaves(); ++i) s.w[i] = 1.0;
  s.w[fine] = 1.2;
  SlopeSet sl = compute_slopes(p.grid, p.faces, s, p.bathy, BoundarySpec::all(BcKind::zero_order));
  sl.sx[fine].w = 0.4;  // hand-set after limiting to make the check explicit
  sl.corrected[fine] = 0;
  const double eps = 1e-12;
  EdgePointValues pv = point_values(p.grid, p.faces, fine, s, sl, p.bathy, eps);
  bool checked = false;
  for (const auto& e : pv.entries)
    if (e.side == Side::right) {
      const double dxf = p.grid.dx(3);
      CHECK(e.w == doctest::Approx(1.2 + 0.5 * dxf * 0.4).epsilon(1e-14));
      checked = true;
    }
  CHECK(checked);
}

TEST_CASE("corrected cell: edge-midpoint trace is the mean of that edge's corners") {
  BottomField bump{[](double x, double y) {
                     return std::max(0.0, 1.0 - 3.0 * ((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5)));
                   },
                   true};
  Patch p = config_b_patch(bump);
  GridState s = GridState::zeros(p.grid.num_leaves(), 1.0);
  for (int i = 0; i < p.grid.num_leaves(); ++i) s.w[i] = p.bathy.center(i) + 0.01;
  SlopeSet sl = compute_slopes(p.grid, p.faces, s, p.bathy, BoundarySpec::all(BcKind::zero_order));
  const double eps = 1e-12;
  for (int i = 0; i < p.grid.num_leaves(); ++i) {
    if (!sl.corrected[i]) continue;
    EdgePointValues pv = point_values(p.grid, p.faces, i, s, sl, p.bathy, eps);
    const double* wc = &sl.wc[4 * size_t(i)];
    for (const auto& e : pv.entries) {
      const SubFace& sf = p.faces.subfaces[e.subface];
      if (sf.len != (sf.axis == 0 ? p.grid.dy(p.grid.leaves()[i]) : p.grid.dx(p.grid.leaves()[i])))
        continue;  // full-edge quadrature points only
      double expect = 0.0;
      switch (e.side) {
        case Side::left: expect = 0.5 * (wc[0] + wc[2]); break;
        case Side::right: expect = 0.5 * (wc[1] + wc[3]); break;
        case Side::bottom: expect = 0.5 * (wc[0] + wc[1]); break;
        case Side::top: expect = 0.5 * (wc[2] + wc[3]); break;
      }
      CHECK(e.w == doctest::Approx(expect).epsilon(1e-13));
    }
  }
}

TEST_CASE("depth mean identity on split-face cells, corrected and not") {
  BottomField bump{[](double x, double y) { return 0.4 * std::sin(3 * x) * std::cos(2 * y) + 0.4; },
                   true};
  Patch p = config_b_patch(bump);
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int me = p.grid.leaf_index({2, 1, 0});
  for (int trial = 0; trial < 50; ++trial) {
    GridState s = GridState::zeros(p.grid.num_leaves(), 1.0);
    for (int i = 0; i < p.grid.num_leaves(); ++i) s.w[i] = p.bathy.center(i) + U(rng) * 0.05;
    SlopeSet sl = compute_slopes(p.grid, p.faces, s, p.bathy, BoundarySpec::all(BcKind::zero_order));
    // exaggerate the slopes so the correction fires on some trials, then
    // recompute the corrected corners
    sl.sx[me].w = 2.0 * (U(rng) - 0.5);
    sl.sy[me].w = 2.0 * (U(rng) - 0.5);
    correct_positivity(p.grid, me, s, sl, p.bathy);
    EdgePointValues pv = point_values(p.grid, p.faces, me, s, sl, p.bathy, 1e-12);
    double left[2];
    int nleft = 0;
    double right = 0, bottom = 0, top = 0;
    for (const auto& e : pv.entries) {
      if (e.side == Side::left) left[nleft++] = e.h;
      if (e.side == Side::right) right = e.h;
      if (e.side == Side::bottom) bottom = e.h;
      if (e.side == Side::top) top = e.h;
    }
    REQUIRE(nleft == 2);
    const double mean = 0.25 * (0.5 * (left[0] + left[1]) + right + bottom + top);
    CHECK(std::abs(mean - (s.w[me] - p.bathy.center(me))) <= 1e-13);
  }
}

TEST_CASE("desingularization formula and limits") {
  CHECK_THROWS_AS(desingularize(1.0, 0.0, 0.0, 0.0), std::invalid_argument);

  const Velocity dry = desingularize(0.0, 0.3, -0.2, 1e-12);
  CHECK(dry.u == 0.0);
  CHECK(dry.v == 0.0);
  CHECK(dry.hu == 0.0);
  CHECK(dry.hv == 0.0);

  const Velocity deep = desingularize(1.0, 0.3, 0.0, 1e-12);
  CHECK(deep.u == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(deep.hu == doctest::Approx(0.3).epsilon(1e-12));

  // crossover h = eps^(1/4): both branches coincide at hu/h
  const double eps = 1e-8;
  const double h = std::pow(eps, 0.25);
  const Velocity cross = desingularize(h, 0.05, 0.0, eps);
  CHECK(cross.u == doctest::Approx(0.05 / h).epsilon(1e-12));
  const Velocity lo = desingularize(h * (1 - 1e-9), 0.05, 0.0, eps);
  const Velocity hi = desingularize(h * (1 + 1e-9), 0.05, 0.0, eps);
  CHECK(lo.u == doctest::Approx(hi.u).epsilon(1e-6));
}

TEST_CASE("fully wet lake at rest reconstructs the flat surface exactly") {
  BottomField bump{[](double x, double y) {
                     return 0.5 * std::exp(-25 * (x - 0.5) * (x - 0.5) - 25 * (y - 0.5) * (y - 0.5));
                   },
                   true};
  Patch p = config_b_patch(bump);
  GridState s = const_state(p.grid, 1.0);
  SlopeSet sl = compute_slopes(p.grid, p.faces, s, p.bathy, BoundarySpec::all(BcKind::zero_order));
  for (int i = 0; i < p.grid.num_leaves(); ++i) {
    CHECK(sl.sx[i].w == 0.0);
    CHECK(sl.sy[i].w == 0.0);
    EdgePointValues pv = point_values(p.grid, p.faces, i, s, sl, p.bathy, 1e-12);
    for (const auto& e : pv.entries) CHECK(e.w == 1.0);
  }
}
