#include "quadswe/faces.hpp"

#include <algorithm>
#include <stdexcept>

namespace quadswe {

int FaceSet::num_interior_faces() const {
  int n = 0;
  for (const Face& f : faces)
    if (!subfaces[f.first].is_boundary()) ++n;
  return n;
}

int FaceSet::num_boundary_faces() const { return int(faces.size()) - num_interior_faces(); }

namespace {

struct SideGeom {
  int dx, dy;            // neighbor direction
  Side my_side;          // side of the owning cell
  Side other_side;       // side as seen from the neighbor
  bool upper;            // owner is the lower-coordinate cell of the pair
};

constexpr SideGeom kSides[4] = {
    {1, 0, Side::right, Side::left, true},
    {-1, 0, Side::left, Side::right, false},
    {0, 1, Side::top, Side::bottom, true},
    {0, -1, Side::bottom, Side::top, false},
};

}  // namespace

FaceSet build_faces(const QuadtreeGrid& grid) {
  FaceSet fs;
  const auto& leaves = grid.leaves();
  const int n = grid.num_leaves();
  fs.subfaces.reserve(size_t(n) * 2);
  std::vector<std::vector<CellFace>> incidence(n);

  // balance check up front: every Finer region must expose leaf children
  for (int i = 0; i < n; ++i) {
    const CellRef& c = leaves[i];
    for (const auto& sg : kSides) {
      const CellRef nb{c.level, c.ix + sg.dx, c.iy + sg.dy};
      if (grid.cover(nb) == QuadtreeGrid::Cover::Finer) {
        auto nbs = grid.neighbors(c, sg.my_side);  // throws if unbalanced
        (void)nbs;
      }
    }
  }

  auto push_subface = [&](SubFace sf, bool new_face) {
    if (new_face)
      fs.faces.push_back({sf.axis, int(fs.subfaces.size()), 1});
    else
      fs.faces.back().count++;
    const int idx = int(fs.subfaces.size());
    if (sf.left >= 0) incidence[sf.left].push_back({idx, sf.axis == 0 ? Side::right : Side::top});
    if (sf.right >= 0) incidence[sf.right].push_back({idx, sf.axis == 0 ? Side::left : Side::bottom});
    fs.subfaces.push_back(sf);
  };

  for (int i = 0; i < n; ++i) {
    const CellRef& c = leaves[i];
    if (!grid.active(i)) continue;

    for (const auto& sg : kSides) {
      const int axis = sg.dx != 0 ? 0 : 1;
      const CellRef nb{c.level, c.ix + sg.dx, c.iy + sg.dy};
      const auto cov = grid.cover(nb);

      // segment list along this side: {neighbor leaf or -1, sub index}
      struct Seg {
        int cell;     // -2 domain boundary, otherwise leaf index (maybe masked)
        CellRef ref;
        int half;     // 0 = lower/left half, 1 = upper/right half, -1 = full
      };
      Seg segs[2];
      int nsegs = 0;
      if (cov == QuadtreeGrid::Cover::Outside) {
        segs[nsegs++] = {-2, {}, -1};
      } else if (cov == QuadtreeGrid::Cover::Finer) {
        auto nbs = grid.neighbors(c, sg.my_side);
        segs[nsegs++] = {grid.leaf_index(nbs[0]), nbs[0], 0};
        segs[nsegs++] = {grid.leaf_index(nbs[1]), nbs[1], 1};
      } else {
        const CellRef other = cov == QuadtreeGrid::Cover::Same ? nb : *grid.leaf_at_or_above(nb);
        segs[nsegs++] = {grid.leaf_index(other), other, -1};
      }

      bool face_open = false;
      for (int s = 0; s < nsegs; ++s) {
        const Seg& seg = segs[s];
        const bool other_active = seg.cell >= 0 && grid.active(seg.cell);
        const bool is_wall = seg.cell >= 0 && !other_active;
        const bool is_domain = seg.cell == -2;

        // interior segments are owned by the coarser-or-equal cell, and by
        // the lower-coordinate cell when levels match
        if (!is_wall && !is_domain) {
          const bool owner = (cov == QuadtreeGrid::Cover::Finer) ||
                             (cov == QuadtreeGrid::Cover::Same && sg.upper);
          if (!owner) continue;
        }

        SubFace sf;
        sf.axis = axis;
        // the segment coincides with a full edge of the defining cell: c
        // itself for full-width segments, the finer neighbor otherwise
        const CellRef def = seg.half < 0 ? c : seg.ref;
        const Side edge_side = seg.half < 0 ? sg.my_side : sg.other_side;
        const int shift = grid.max_level() - def.level;
        const int bx = def.ix << shift, by = def.iy << shift, step = 1 << shift;
        switch (edge_side) {
          case Side::left:   sf.v1x = bx;        sf.v1y = by;        sf.v2x = bx;        sf.v2y = by + step; break;
          case Side::right:  sf.v1x = bx + step; sf.v1y = by;        sf.v2x = bx + step; sf.v2y = by + step; break;
          case Side::bottom: sf.v1x = bx;        sf.v1y = by;        sf.v2x = bx + step; sf.v2y = by;        break;
          case Side::top:    sf.v1x = bx;        sf.v1y = by + step; sf.v2x = bx + step; sf.v2y = by + step; break;
        }
        if (axis == 0) {
          sf.mid_x = grid.corner_x(def, edge_side == Side::right ? 1 : 0);
          sf.mid_y = grid.center_y(def);
          sf.len = grid.dy(def);
        } else {
          sf.mid_y = grid.corner_y(def, edge_side == Side::top ? 1 : 0);
          sf.mid_x = grid.center_x(def);
          sf.len = grid.dx(def);
        }

        if (is_domain || is_wall) {
          sf.boundary = is_wall ? BoundaryLoc::mask_wall
                        : sg.my_side == Side::left   ? BoundaryLoc::domain_left
                        : sg.my_side == Side::right  ? BoundaryLoc::domain_right
                        : sg.my_side == Side::bottom ? BoundaryLoc::domain_bottom
                                                     : BoundaryLoc::domain_top;
          if (sg.upper) {  // boundary on c's right/top
            sf.left = i;
            sf.right = -1;
            sf.frac_left = sf.len / (axis == 0 ? grid.dy(c) : grid.dx(c));
            sf.frac_right = 1.0;
          } else {
            sf.left = -1;
            sf.right = i;
            sf.frac_right = sf.len / (axis == 0 ? grid.dy(c) : grid.dx(c));
            sf.frac_left = 1.0;
          }
        } else {
          const int lo = sg.upper ? i : seg.cell;
          const int hi = sg.upper ? seg.cell : i;
          sf.left = lo;
          sf.right = hi;
          const CellRef& lc = leaves[lo];
          const CellRef& rc = leaves[hi];
          sf.frac_left = sf.len / (axis == 0 ? grid.dy(lc) : grid.dx(lc));
          sf.frac_right = sf.len / (axis == 0 ? grid.dy(rc) : grid.dx(rc));
        }

        push_subface(sf, !face_open);
        face_open = true;
      }
    }
  }

  // canonical per-cell order (side, then tangential position) so that
  // per-cell accumulations are independent of sweep order
  for (int i = 0; i < n; ++i) {
    std::sort(incidence[i].begin(), incidence[i].end(), [&](const CellFace& a, const CellFace& b) {
      if (a.side != b.side) return int(a.side) < int(b.side);
      const SubFace& sa = fs.subfaces[a.sf];
      const SubFace& sb = fs.subfaces[b.sf];
      return sa.axis == 0 ? sa.mid_y < sb.mid_y : sa.mid_x < sb.mid_x;
    });
  }

  fs.cell_face_offset.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) fs.cell_face_offset[i + 1] = fs.cell_face_offset[i] + int(incidence[i].size());
  fs.cell_faces.resize(fs.cell_face_offset.back());
  for (int i = 0; i < n; ++i)
    std::copy(incidence[i].begin(), incidence[i].end(), fs.cell_faces.begin() + fs.cell_face_offset[i]);
  return fs;
}

}  // namespace quadswe
