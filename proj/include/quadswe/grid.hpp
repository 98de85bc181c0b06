#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "quadswe/types.hpp"

namespace quadswe {

/// One quadtree cell: refinement level plus integer coordinates within
/// that level. Level ell cells tile the root rectangle 2^ell x 2^ell.
struct CellRef {
  int level = 1;
  int ix = 0;
  int iy = 0;

  friend bool operator==(const CellRef&, const CellRef&) = default;

  CellRef parent() const { return {level - 1, ix >> 1, iy >> 1}; }
  CellRef child(int cx, int cy) const { return {level + 1, 2 * ix + cx, 2 * iy + cy}; }

  /// Packed id: 6 bits level, 29 bits each coordinate.
  std::uint64_t id() const {
    return (std::uint64_t(level) << 58) | (std::uint64_t(ix) << 29) | std::uint64_t(iy);
  }
};

enum class Side { left, right, bottom, top };

constexpr int kMaxLevel = 28;

/// Leaf set of a quadtree over a root rectangle, ordered by a
/// space-filling (Morton) key so layouts are deterministic. Mutation is
/// single-writer; all queries are safe to run concurrently.
class QuadtreeGrid {
 public:
  QuadtreeGrid(Rect root, int max_level);

  /// Paper-style generation: split the root once, then keep splitting any
  /// cell that contains a seed until level m. Seeds outside the root are
  /// ignored. A seed lying exactly on an interior dividing line refines
  /// every child touching it, so mirror-symmetric seed sets produce
  /// mirror-symmetric grids. Result is not yet regularized.
  static QuadtreeGrid generate_from_seeds(Rect root, const std::vector<std::array<double, 2>>& seeds,
                                          int max_level);

  /// Generation with a per-seed refinement target (capped by max_level);
  /// a plain seed is a leveled seed with target max_level.
  struct LeveledSeed {
    double x, y;
    int target;
  };
  static QuadtreeGrid generate_leveled(Rect root, const std::vector<LeveledSeed>& seeds,
                                       int max_level);

  /// Enforce 2:1 balance across edges and diagonals by splitting only
  /// (never merging). Idempotent.
  void regularize();

  /// Leaves adjacent to `cell` across `side`: zero (domain boundary), one
  /// (same level or one coarser), or two (one finer). `cell` must be a leaf.
  std::vector<CellRef> neighbors(const CellRef& cell, Side side) const;

  void refine_cell(const CellRef& cell);
  void coarsen_siblings(const CellRef& parent);

  bool is_leaf(const CellRef& c) const { return index_.count(c.id()) != 0; }
  int leaf_index(const CellRef& c) const;
  std::optional<int> find_leaf_index(const CellRef& c) const;

  /// Leaf containing (x, y); cells are half-open [x_lo,x_hi)x[y_lo,y_hi)
  /// except at the top/right domain edges, which close the last cell.
  CellRef locate(double x, double y) const;

  int num_leaves() const { return int(leaves_.size()); }
  const std::vector<CellRef>& leaves() const { return leaves_; }
  const Rect& root() const { return root_; }
  int max_level() const { return max_level_; }

  double dx(int level) const { return root_.width * inv_pow2_[level]; }
  double dy(int level) const { return root_.height * inv_pow2_[level]; }
  double dx(const CellRef& c) const { return dx(c.level); }
  double dy(const CellRef& c) const { return dy(c.level); }
  double center_x(const CellRef& c) const { return root_.x0 + (c.ix + 0.5) * dx(c.level); }
  double center_y(const CellRef& c) const { return root_.y0 + (c.iy + 0.5) * dy(c.level); }
  double corner_x(const CellRef& c, int cx) const { return root_.x0 + (c.ix + cx) * dx(c.level); }
  double corner_y(const CellRef& c, int cy) const { return root_.y0 + (c.iy + cy) * dy(c.level); }
  double area(const CellRef& c) const { return dx(c.level) * dy(c.level); }

  double min_dx() const;
  double min_dy() const;

  /// Vertex coordinates on the level-m lattice (vx, vy in [0, 2^m]).
  double vertex_x(std::int64_t vx) const { return root_.x0 + double(vx) * dx(max_level_); }
  double vertex_y(std::int64_t vy) const { return root_.y0 + double(vy) * dy(max_level_); }

  /// Activity mask (used for non-rectangular geometry): a cell whose
  /// center the predicate rejects is inactive and its faces become walls.
  void apply_mask(const std::function<bool(double, double)>& inside);
  bool active(int leaf) const { return mask_.empty() || mask_[leaf]; }
  bool has_mask() const { return !mask_.empty(); }

  /// Region at (level,ix,iy) is: covered by a single leaf at the same
  /// level (Same), covered by one coarser leaf (Coarser), subdivided into
  /// finer leaves (Finer), or outside the root (Outside).
  enum class Cover { Same, Coarser, Finer, Outside };
  Cover cover(const CellRef& c) const;

  /// Leaf equal to `c` or the coarser leaf containing it, if any.
  std::optional<CellRef> leaf_at_or_above(const CellRef& c) const;

  /// True when every edge- and diagonally-adjacent leaf pair differs by at
  /// most one level.
  bool is_balanced() const;

  void dump(std::ostream& os) const;
  static QuadtreeGrid load(std::istream& is);

  friend bool operator==(const QuadtreeGrid& a, const QuadtreeGrid& b) {
    return a.root_.x0 == b.root_.x0 && a.root_.y0 == b.root_.y0 &&
           a.root_.width == b.root_.width && a.root_.height == b.root_.height &&
           a.max_level_ == b.max_level_ && a.leaves_ == b.leaves_;
  }

 private:
  void rebuild_index();
  void insert_sorted(const CellRef& c);

  Rect root_;
  int max_level_ = 1;
  std::vector<CellRef> leaves_;                     // sorted by Morton key
  std::unordered_map<std::uint64_t, int> index_;    // id -> leaf index
  std::vector<char> mask_;                          // empty = all active
  std::array<double, kMaxLevel + 2> inv_pow2_{};    // 2^-level
};

/// Morton sort key: anchor coordinates at the finest lattice, bits
/// interleaved, finer levels after their ancestors at equal anchors.
std::uint64_t morton_key(const CellRef& c, int max_level);

}  // namespace quadswe
