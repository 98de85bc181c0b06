#pragma once

#include <functional>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "quadswe/faces.hpp"
#include "quadswe/grid.hpp"

namespace quadswe {

/// Bottom topography sampled pointwise. Discontinuous bottoms get the
/// one-sided-limit treatment in vertex_value.
struct BottomField {
  std::function<double(double, double)> eval;
  bool continuous = true;

  double operator()(double x, double y) const { return eval(x, y); }
};

/// Bottom read from a node-registered uniform raster, sampled bilinearly.
/// Header: `# quadswe-raster v1 nx ny x0 y0 dx dy`, then row-major values.
BottomField load_raster_bottom(std::istream& is);

/// Point value of B at a vertex. Continuous bottoms sample directly.
/// Discontinuous ones approximate (max + min)/2 of the one-sided limits by
/// probing 16 directions on a circle of radius probe_radius.
double vertex_value(const BottomField& bottom, double x, double y, double probe_radius);

/// Continuous piecewise bilinear interpolant of the bottom over a
/// balanced quadtree. Corner values are shared through a vertex store so
/// continuity is structural; a fine vertex hanging on a coarser edge gets
/// the average of that edge's endpoints, never a fresh sample.
class BathymetryData {
 public:
  // corner order within a cell
  enum Corner { SW = 0, SE = 1, NW = 2, NE = 3 };

  double corner(int cell, Corner c) const { return corners_[4 * cell + c]; }
  double center(int cell) const { return center_[cell]; }
  double edge_mid(int cell, Side s) const {
    switch (s) {
      case Side::left: return 0.5 * (corner(cell, SW) + corner(cell, NW));
      case Side::right: return 0.5 * (corner(cell, SE) + corner(cell, NE));
      case Side::bottom: return 0.5 * (corner(cell, SW) + corner(cell, SE));
      case Side::top: return 0.5 * (corner(cell, NW) + corner(cell, NE));
    }
    return 0.0;
  }

  /// B at the quadrature point of a sub-face (midpoint of the segment).
  double face_value(int subface) const { return face_b_[subface]; }

  /// Bilinear interpolation inside one cell; exact at the corners.
  double eval(const QuadtreeGrid& grid, const CellRef& cell, double x, double y) const;

  double vertex(std::int64_t vx, std::int64_t vy) const;
  bool has_vertex(std::int64_t vx, std::int64_t vy) const;

  double probe_radius() const { return probe_radius_; }

 private:
  friend BathymetryData build_bathymetry(const QuadtreeGrid&, const BottomField&, const FaceSet*);

  std::unordered_map<std::uint64_t, double> vertex_store_;
  std::vector<double> corners_;  // 4 per leaf
  std::vector<double> center_;
  std::vector<double> face_b_;
  double probe_radius_ = 0.0;
};

/// Assign vertex values level by level (coarse to fine) and derive the
/// per-cell and per-face values. `faces` may be null when only cell data
/// is needed. Throws if the grid is not balanced or a sample is not finite.
BathymetryData build_bathymetry(const QuadtreeGrid& grid, const BottomField& bottom,
                                const FaceSet* faces = nullptr);

}  // namespace quadswe
