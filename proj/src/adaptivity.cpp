#include "quadswe/adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "quadswe/threading.hpp"

namespace quadswe {

std::vector<std::array<double, 2>> select_seeds(const QuadtreeGrid& grid, const SlopeSet& slopes,
                                                double c_seed) {
  std::vector<std::array<double, 2>> seeds;
  for (int i = 0; i < grid.num_leaves(); ++i) {
    if (!grid.active(i)) continue;
    if (std::abs(slopes.sx[i].w) >= c_seed || std::abs(slopes.sy[i].w) >= c_seed)
      seeds.push_back({grid.center_x(grid.leaves()[i]), grid.center_y(grid.leaves()[i])});
  }
  return seeds;
}

QuadtreeGrid make_regrid(const QuadtreeGrid& old_grid, const std::vector<std::array<double, 2>>& seeds) {
  QuadtreeGrid g = QuadtreeGrid::generate_from_seeds(old_grid.root(), seeds, old_grid.max_level());
  g.regularize();
  return g;
}

namespace {

// area-weighted mean over the old leaves covering `c`; the pairwise
// quarter-averaging follows the subtree, so mixed-depth coverings get
// their exact area weights
Conserved restrict_avg(const QuadtreeGrid& old_grid, const GridState& old_state, const CellRef& c) {
  if (auto idx = old_grid.find_leaf_index(c)) return old_state.get(*idx);
  if (old_grid.cover(c) != QuadtreeGrid::Cover::Finer)
    throw std::logic_error("projection: new cell is not nested in the old grid");
  const Conserved s00 = restrict_avg(old_grid, old_state, c.child(0, 0));
  const Conserved s10 = restrict_avg(old_grid, old_state, c.child(1, 0));
  const Conserved s01 = restrict_avg(old_grid, old_state, c.child(0, 1));
  const Conserved s11 = restrict_avg(old_grid, old_state, c.child(1, 1));
  return 0.25 * ((s00 + s10) + (s01 + s11));
}

}  // namespace

RegridReport project_solution(const QuadtreeGrid& old_grid, const GridState& old_state,
                              const SlopeSet& old_slopes, const QuadtreeGrid& new_grid,
                              const BathymetryData& new_bathy, GridState& new_state) {
  RegridReport rep;
  rep.old_cells = old_grid.num_leaves();
  rep.new_cells = new_grid.num_leaves();

  const int n = new_grid.num_leaves();
  new_state = GridState::zeros(n, old_state.g);
  std::vector<int> case2_parent(n, -1);
  std::vector<int> kind(n, 0);

  threading::parallel_for(n, [&](std::int64_t ii) {
    const int i = int(ii);
    const CellRef c = new_grid.leaves()[i];
    if (auto idx = old_grid.find_leaf_index(c)) {
      new_state.set(i, old_state.get(*idx));
      kind[i] = 1;
      return;
    }
    // refinement: find the old ancestor and evaluate its linear pieces
    CellRef a = c;
    while (a.level > 1) {
      a = a.parent();
      if (auto idx = old_grid.find_leaf_index(a)) {
        const int p = *idx;
        const double ox = new_grid.center_x(c) - old_grid.center_x(a);
        const double oy = new_grid.center_y(c) - old_grid.center_y(a);
        const Conserved u = old_state.get(p);
        const Conserved& sx = old_slopes.sx[p];
        const Conserved& sy = old_slopes.sy[p];
        new_state.set(i, {u.w + sx.w * ox + sy.w * oy, u.hu + sx.hu * ox + sy.hu * oy,
                          u.hv + sx.hv * ox + sy.hv * oy});
        case2_parent[i] = p;
        kind[i] = 2;
        return;
      }
    }
    // coarsening: average the covered old leaves
    new_state.set(i, restrict_avg(old_grid, old_state, c));
    kind[i] = 3;
  });

  for (int i = 0; i < n; ++i) {
    rep.copied += kind[i] == 1;
    rep.prolonged += kind[i] == 2;
    rep.restricted += kind[i] == 3;
  }

  // depth restoration under refinement: group prolonged cells by parent
  std::unordered_map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i)
    if (case2_parent[i] >= 0) groups[case2_parent[i]].push_back(i);

  for (auto& [p, members] : groups) {
    bool ok = true;
    for (int i : members)
      if (new_state.w[i] < new_bathy.center(i)) {
        ok = false;
        break;
      }
    if (ok) continue;

    // scale the parent's w slopes by the largest factor in [0, 1] keeping
    // every child at or above its bottom; scaling preserves the group mean
    const double wp = old_state.w[p];
    double s = 1.0;
    bool feasible = true;
    for (int i : members) {
      const double off = new_state.w[i] - wp;  // slope contribution at this child
      const double margin = wp - new_bathy.center(i);
      if (off < 0.0 && margin < -off * s) {
        if (margin <= 0.0) {
          feasible = false;
          s = 0.0;
        } else {
          s = std::min(s, margin / -off);
        }
      }
    }
    for (int i : members) new_state.w[i] = wp + s * (new_state.w[i] - wp);

    if (!feasible) {
      // the rebuilt bottom rose above the parent's surface in some
      // children: clamp them dry and take the created water back from
      // siblings that still have surplus
      double deficit = 0.0;
      double surplus = 0.0;
      for (int i : members) {
        const double bc = new_bathy.center(i);
        const double a = new_grid.area(new_grid.leaves()[i]);
        if (new_state.w[i] < bc) {
          deficit += (bc - new_state.w[i]) * a;
          new_state.w[i] = bc;
        } else {
          surplus += (new_state.w[i] - bc) * a;
        }
      }
      if (surplus > 0.0) {
        const double take = std::min(1.0, deficit / surplus);
        for (int i : members) {
          const double bc = new_bathy.center(i);
          if (new_state.w[i] > bc) new_state.w[i] = bc + (new_state.w[i] - bc) * (1.0 - take);
        }
        deficit -= std::min(deficit, surplus);
      }
      rep.mass_created += deficit;
    }
  }

  // the rebuilt interpolant can raise a cell's center bottom above the
  // transferred surface (hanging vertices come and go with the grid);
  // clamp genuine violations dry and log the created volume
  for (int i = 0; i < n; ++i) {
    const double bc = new_bathy.center(i);
    if (new_state.w[i] < bc - 1e-13) {
      rep.mass_created += (bc - new_state.w[i]) * new_grid.area(new_grid.leaves()[i]);
      new_state.w[i] = bc;
    }
  }

  double before = 0.0, after = 0.0;
  for (int i = 0; i < old_grid.num_leaves(); ++i)
    before += old_state.w[i] * old_grid.area(old_grid.leaves()[i]);
  for (int i = 0; i < n; ++i) after += new_state.w[i] * new_grid.area(new_grid.leaves()[i]);
  rep.mass_before = before;
  rep.mass_after = after;
  return rep;
}

}  // namespace quadswe
