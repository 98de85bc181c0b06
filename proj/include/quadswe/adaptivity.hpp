#pragma once

#include <array>
#include <vector>

#include "quadswe/bathymetry.hpp"
#include "quadswe/reconstruction.hpp"

namespace quadswe {

struct RegridReport {
  int copied = 0;      // same cell in both grids
  int prolonged = 0;   // new cell is a child of an old cell
  int restricted = 0;  // new cell is a parent of old cells
  int old_cells = 0;
  int new_cells = 0;
  double mass_before = 0.0;  // sum of w * area
  double mass_after = 0.0;
  double mass_created = 0.0;  // dry-clamp residue that could not be rebalanced
};

/// Centers of cells whose water-surface slope magnitude reaches the
/// seeding threshold in either direction.
std::vector<std::array<double, 2>> select_seeds(const QuadtreeGrid& grid, const SlopeSet& slopes,
                                                double c_seed);

/// generate_from_seeds + regularize over the same root and max level.
QuadtreeGrid make_regrid(const QuadtreeGrid& old_grid, const std::vector<std::array<double, 2>>& seeds);

/// Conservative transfer of cell averages onto a new grid over the same
/// root: copy where cells coincide, evaluate the old linear piece at the
/// new center under refinement, average (area-weighted) under coarsening.
/// Children that would come up drier than the new bottom are fixed by
/// scaling the parent slopes down; as a last resort they are clamped dry
/// and the surplus is taken back from their siblings.
RegridReport project_solution(const QuadtreeGrid& old_grid, const GridState& old_state,
                              const SlopeSet& old_slopes, const QuadtreeGrid& new_grid,
                              const BathymetryData& new_bathy, GridState& new_state);

}  // namespace quadswe
