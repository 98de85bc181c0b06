#pragma once

#include <iosfwd>
#include <string>

#include "quadswe/bathymetry.hpp"
#include "quadswe/reconstruction.hpp"

namespace quadswe {

/// Uniform cell-centered lattice of scalar samples.
struct LatticeField {
  int nx = 0, ny = 0;
  Rect rect;
  std::vector<double> v;  // row-major, j * nx + i

  double& at(int i, int j) { return v[size_t(j) * nx + i]; }
  double at(int i, int j) const { return v[size_t(j) * nx + i]; }
  double center_x(int i) const { return rect.x0 + (i + 0.5) * rect.width / nx; }
  double center_y(int j) const { return rect.y0 + (j + 0.5) * rect.height / ny; }
  double cell_area() const { return (rect.width / nx) * (rect.height / ny); }
};

struct ErrorReport {
  double l1 = 0.0;
  double linf = 0.0;
};

/// L1 (area-weighted) and Linf norms of the difference over a shared
/// lattice. Lattices must describe the same domain and resolution.
ErrorReport error_norms(const LatticeField& field, const LatticeField& reference);

/// Piecewise-constant sampling of a quadtree field onto a lattice.
LatticeField sample_w(const QuadtreeGrid& grid, const GridState& state, int nx, int ny);

/// `# quadswe-solution v1 t=<time>` header, then one
/// `level,ix,iy,xc,yc,dx,dy,w,hu,hv,B` row per leaf in key order.
void dump_solution(const QuadtreeGrid& grid, const GridState& state, const BathymetryData& bathy,
                   std::ostream& os, double t);

struct SolutionData {
  QuadtreeGrid grid;
  GridState state;
  std::vector<double> b_center;
  double t = 0.0;
};

SolutionData load_solution(std::istream& is);

/// gnuplot-style matrix of w samples (row per y, column per x).
void write_sample_matrix(const QuadtreeGrid& grid, const GridState& state, int nx, int ny,
                         std::ostream& os);

std::string diagnostics_line(int step, double t, double dt, double min_h, double mass, double max_w,
                             int cells);

}  // namespace quadswe
