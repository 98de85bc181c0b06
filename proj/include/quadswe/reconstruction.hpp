#pragma once

#include <span>
#include <vector>

#include "quadswe/bathymetry.hpp"
#include "quadswe/boundary.hpp"
#include "quadswe/faces.hpp"
#include "quadswe/grid.hpp"
#include "quadswe/types.hpp"

namespace quadswe {

/// Cell averages of the conserved variables over a grid's leaves.
struct GridState {
  std::vector<double> w, hu, hv;
  double g = 1.0;

  int size() const { return int(w.size()); }
  Conserved get(int i) const { return {w[i], hu[i], hv[i]}; }
  void set(int i, const Conserved& u) {
    w[i] = u.w;
    hu[i] = u.hu;
    hv[i] = u.hv;
  }
  static GridState zeros(int n, double g) {
    GridState s;
    s.w.assign(n, 0.0);
    s.hu.assign(n, 0.0);
    s.hv.assign(n, 0.0);
    s.g = g;
    return s;
  }
};

/// min of all arguments if all positive, max if all negative, else 0.
double minmod(std::span<const double> values);

/// Limited derivatives plus the positivity-correction record per cell.
/// Corrected cells replace the linear w piece with a conservative bilinear
/// one pinned at `wc` corner values (order SW, SE, NW, NE).
struct SlopeSet {
  std::vector<Conserved> sx, sy;
  std::vector<char> corrected;
  std::vector<double> wc;  // 4 per cell

  int size() const { return int(sx.size()); }
};

/// Minmod slopes with one candidate quotient per neighbouring cell per
/// side; distances are centroid-to-centroid. Boundary sides contribute
/// ghost averages per `bc`.
SlopeSet compute_slopes(const QuadtreeGrid& grid, const FaceSet& faces, const GridState& state,
                        const BathymetryData& bathy, const BoundarySpec& bc);

/// Corner values of the (possibly corrected) w piece for one cell; fills
/// slopes.corrected[i] / slopes.wc[4i..4i+3]. Returns true if the
/// correction fired.
bool correct_positivity(const QuadtreeGrid& grid, int cell, const GridState& state,
                        SlopeSet& slopes, const BathymetryData& bathy);

/// Run correct_positivity over all active cells (parallel).
void correct_positivity_all(const QuadtreeGrid& grid, const GridState& state, SlopeSet& slopes,
                            const BathymetryData& bathy);

struct Velocity {
  double u, v, hu, hv;
};

/// Regularized velocity recovery; discharges are recomputed as h*u, h*v.
Velocity desingularize(double h, double hu, double hv, double eps);

/// One-sided trace of the reconstruction of cell `i` at an in-cell point:
/// w from the corrected bilinear when the correction fired (linear piece
/// otherwise), hu and hv always from their linear pieces.
Conserved trace_at(const QuadtreeGrid& grid, int i, const GridState& state, const SlopeSet& slopes,
                   double x, double y);

/// Point values at every sub-face quadrature point belonging to one cell.
struct EdgePointValues {
  struct Entry {
    int subface;
    Side side;
    double w, hu, hv;  // raw trace
    double h, u, v;    // clamped depth and desingularized velocities
  };
  std::vector<Entry> entries;
};

EdgePointValues point_values(const QuadtreeGrid& grid, const FaceSet& faces, int cell,
                             const GridState& state, const SlopeSet& slopes,
                             const BathymetryData& bathy, double eps);

/// Clamp a depth that is nonnegative up to roundoff; anything below
/// -1e-14 indicates a reconstruction bug and throws.
double clamp_depth(double h);

}  // namespace quadswe
