#include "quadswe/bathymetry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <memory>
#include <sstream>
#include <string>

namespace quadswe {

namespace {

std::uint64_t vkey(std::int64_t vx, std::int64_t vy) {
  return (std::uint64_t(vx) << 30) | std::uint64_t(vy);
}

}  // namespace

BottomField load_raster_bottom(std::istream& is) {
  std::string header;
  std::getline(is, header);
  std::istringstream hs(header);
  std::string hash, tag, ver;
  int nx = 0, ny = 0;
  double x0 = 0, y0 = 0, dx = 0, dy = 0;
  hs >> hash >> tag >> ver >> nx >> ny >> x0 >> y0 >> dx >> dy;
  if (hash != "#" || tag != "quadswe-raster" || ver != "v1" || nx < 2 || ny < 2 || !(dx > 0) || !(dy > 0))
    throw config_error("raster file: bad header: " + header);

  auto values = std::make_shared<std::vector<double>>();
  values->reserve(size_t(nx) * ny);
  double v;
  while (is >> v) values->push_back(v);
  if (int(values->size()) != nx * ny)
    throw config_error("raster file: expected " + std::to_string(nx * ny) + " values, got " +
                       std::to_string(values->size()));

  BottomField f;
  f.continuous = true;
  f.eval = [=](double x, double y) {
    double fx = (x - x0) / dx;
    double fy = (y - y0) / dy;
    fx = std::clamp(fx, 0.0, double(nx - 1));
    fy = std::clamp(fy, 0.0, double(ny - 1));
    const int i = std::min(int(fx), nx - 2);
    const int j = std::min(int(fy), ny - 2);
    const double tx = fx - i, ty = fy - j;
    const auto& a = *values;
    const double v00 = a[size_t(j) * nx + i], v10 = a[size_t(j) * nx + i + 1];
    const double v01 = a[size_t(j + 1) * nx + i], v11 = a[size_t(j + 1) * nx + i + 1];
    return v00 + (v10 - v00) * tx + (v01 - v00) * ty + (v11 - v10 - v01 + v00) * tx * ty;
  };
  return f;
}

double vertex_value(const BottomField& bottom, double x, double y, double probe_radius) {
  if (bottom.continuous) {
    const double v = bottom(x, y);
    if (!std::isfinite(v))
      throw numerical_error("non-finite bottom sample at (" + std::to_string(x) + ", " +
                            std::to_string(y) + ")");
    return v;
  }
  double lo = 0.0, hi = 0.0;
  bool any = false;
  constexpr int kProbes = 16;
  for (int k = 0; k < kProbes; ++k) {
    const double th = 2.0 * M_PI * (k + 0.5) / kProbes;
    const double v = bottom(x + probe_radius * std::cos(th), y + probe_radius * std::sin(th));
    if (!std::isfinite(v)) continue;
    if (!any) {
      lo = hi = v;
      any = true;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!any)
    throw numerical_error("all bottom probes non-finite at (" + std::to_string(x) + ", " +
                          std::to_string(y) + ")");
  return 0.5 * (hi + lo);
}

double BathymetryData::vertex(std::int64_t vx, std::int64_t vy) const {
  auto it = vertex_store_.find(vkey(vx, vy));
  if (it == vertex_store_.end()) throw std::invalid_argument("bathymetry: vertex not stored");
  return it->second;
}

bool BathymetryData::has_vertex(std::int64_t vx, std::int64_t vy) const {
  return vertex_store_.count(vkey(vx, vy)) != 0;
}

double BathymetryData::eval(const QuadtreeGrid& grid, const CellRef& cell, double x, double y) const {
  const double xl = grid.corner_x(cell, 0), yl = grid.corner_y(cell, 0);
  const double dx = grid.dx(cell), dy = grid.dy(cell);
  if (x < xl - 1e-12 * dx || x > xl + dx * (1 + 1e-12) || y < yl - 1e-12 * dy ||
      y > yl + dy * (1 + 1e-12))
    throw std::invalid_argument("eval: point outside cell");
  const int i = grid.leaf_index(cell);
  const double tx = (x - xl) / dx, ty = (y - yl) / dy;
  const double sw = corner(i, SW), se = corner(i, SE), nw = corner(i, NW), ne = corner(i, NE);
  return sw + (se - sw) * tx + (nw - sw) * ty + (ne - se - nw + sw) * tx * ty;
}

BathymetryData build_bathymetry(const QuadtreeGrid& grid, const BottomField& bottom,
                                const FaceSet* faces) {
  if (!grid.is_balanced())
    throw std::invalid_argument("build_bathymetry requires a regularized grid");

  BathymetryData data;
  const int m = grid.max_level();
  data.probe_radius_ = 1e-3 * std::min(grid.dx(m), grid.dy(m));

  // leaves grouped by level, preserving key order within each level
  std::vector<std::vector<int>> by_level(m + 1);
  for (int i = 0; i < grid.num_leaves(); ++i) by_level[grid.leaves()[i].level].push_back(i);

  auto& store = data.vertex_store_;
  store.reserve(size_t(grid.num_leaves()) * 2);

  for (int level = 1; level <= m; ++level) {
    const int shift = m - level;
    const std::int64_t step = std::int64_t(1) << shift;
    for (int i : by_level[level]) {
      const CellRef& c = grid.leaves()[i];
      const std::int64_t bx = std::int64_t(c.ix) << shift;
      const std::int64_t by = std::int64_t(c.iy) << shift;
      for (int cy = 0; cy < 2; ++cy)
        for (int cx = 0; cx < 2; ++cx) {
          const std::int64_t vx = bx + cx * step;
          const std::int64_t vy = by + cy * step;
          const std::uint64_t key = vkey(vx, vy);
          if (store.count(key)) continue;

          // hanging test: the vertex sits at the midpoint of an edge of a
          // one-level-coarser leaf exactly when one lattice coordinate is
          // on the coarser lattice and the other is a coarse midpoint
          double value;
          const std::int64_t coarse = step * 2;
          const bool on_cx = level > 1 && vx % coarse == 0;
          const bool on_cy = level > 1 && vy % coarse == 0;
          bool hanging = false;
          if (on_cx != on_cy) {
            if (on_cx) {  // candidate midpoint of a vertical coarse edge
              const int cjx = int(vx / coarse), cjy = int(vy / coarse);
              const CellRef cand_r{level - 1, cjx, cjy};
              const CellRef cand_l{level - 1, cjx - 1, cjy};
              if (grid.is_leaf(cand_r) || grid.is_leaf(cand_l)) {
                value = 0.5 * (store.at(vkey(vx, vy - step)) + store.at(vkey(vx, vy + step)));
                hanging = true;
              }
            } else {  // candidate midpoint of a horizontal coarse edge
              const int cjx = int(vx / coarse), cjy = int(vy / coarse);
              const CellRef cand_t{level - 1, cjx, cjy};
              const CellRef cand_b{level - 1, cjx, cjy - 1};
              if (grid.is_leaf(cand_t) || grid.is_leaf(cand_b)) {
                value = 0.5 * (store.at(vkey(vx - step, vy)) + store.at(vkey(vx + step, vy)));
                hanging = true;
              }
            }
          }
          if (!hanging)
            value = vertex_value(bottom, grid.vertex_x(vx), grid.vertex_y(vy), data.probe_radius_);
          store.emplace(key, value);
        }
    }
  }

  const int n = grid.num_leaves();
  data.corners_.resize(size_t(n) * 4);
  data.center_.resize(n);
  for (int i = 0; i < n; ++i) {
    const CellRef& c = grid.leaves()[i];
    const int shift = m - c.level;
    const std::int64_t step = std::int64_t(1) << shift;
    const std::int64_t bx = std::int64_t(c.ix) << shift;
    const std::int64_t by = std::int64_t(c.iy) << shift;
    const double sw = store.at(vkey(bx, by));
    const double se = store.at(vkey(bx + step, by));
    const double nw = store.at(vkey(bx, by + step));
    const double ne = store.at(vkey(bx + step, by + step));
    data.corners_[4 * i + BathymetryData::SW] = sw;
    data.corners_[4 * i + BathymetryData::SE] = se;
    data.corners_[4 * i + BathymetryData::NW] = nw;
    data.corners_[4 * i + BathymetryData::NE] = ne;
    const double east = 0.5 * (se + ne), west = 0.5 * (sw + nw);
    const double north = 0.5 * (nw + ne), south = 0.5 * (sw + se);
    data.center_[i] = 0.25 * ((east + west) + (north + south));
  }

  if (faces) {
    data.face_b_.resize(faces->subfaces.size());
    for (size_t s = 0; s < faces->subfaces.size(); ++s) {
      const SubFace& sf = faces->subfaces[s];
      data.face_b_[s] = 0.5 * (store.at(vkey(sf.v1x, sf.v1y)) + store.at(vkey(sf.v2x, sf.v2y)));
    }
  }
  return data;
}

}  // namespace quadswe
