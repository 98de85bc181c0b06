#pragma once

#include <vector>

#include "quadswe/grid.hpp"

namespace quadswe {

enum class BoundaryLoc : char { none, domain_left, domain_right, domain_bottom, domain_top, mask_wall };

/// One flux quadrature segment. Interior segments connect two active
/// leaves; boundary segments have one side set to -1 and carry the
/// boundary location for ghost-state construction.
struct SubFace {
  int axis = 0;           // 0: x-face (normal along x), 1: y-face
  int left = -1;          // lower-coordinate cell, -1 at a boundary
  int right = -1;         // upper-coordinate cell, -1 at a boundary
  BoundaryLoc boundary = BoundaryLoc::none;
  double mid_x = 0.0, mid_y = 0.0;
  double len = 0.0;
  double frac_left = 1.0;   // len / left cell edge length
  double frac_right = 1.0;  // len / right cell edge length
  // segment endpoints on the finest vertex lattice (v1 = lower corner)
  int v1x = 0, v1y = 0, v2x = 0, v2y = 0;

  bool is_boundary() const { return boundary != BoundaryLoc::none; }
  int interior_cell() const { return left >= 0 ? left : right; }
};

/// Geometric interface: one or two consecutive sub-faces.
struct Face {
  int axis = 0;
  int first = 0;
  int count = 1;
};

/// Per-cell incidence record.
struct CellFace {
  int sf = 0;
  Side side = Side::left;
};

struct FaceSet {
  std::vector<Face> faces;
  std::vector<SubFace> subfaces;
  // CSR incidence: cell_faces[cell_face_offset[c] .. cell_face_offset[c+1])
  std::vector<int> cell_face_offset;
  std::vector<CellFace> cell_faces;

  int num_interior_faces() const;
  int num_boundary_faces() const;
};

/// Decompose a regularized grid into oriented faces with sub-face
/// quadrature points. Each geometric interface appears exactly once.
/// Faces between an active and a masked cell become wall boundaries.
FaceSet build_faces(const QuadtreeGrid& grid);

}  // namespace quadswe
