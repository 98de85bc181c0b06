#include "quadswe/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>

namespace quadswe {

namespace {

// spread the low 28 bits of v to even bit positions
std::uint64_t spread_bits(std::uint64_t v) {
  v &= 0x0fffffffULL;
  v = (v | (v << 16)) & 0x0000ffff0000ffffULL;
  v = (v | (v << 8)) & 0x00ff00ff00ff00ffULL;
  v = (v | (v << 4)) & 0x0f0f0f0f0f0f0f0fULL;
  v = (v | (v << 2)) & 0x3333333333333333ULL;
  v = (v | (v << 1)) & 0x5555555555555555ULL;
  return v;
}

}  // namespace

std::uint64_t morton_key(const CellRef& c, int max_level) {
  const int shift = max_level - c.level;
  const std::uint64_t ax = std::uint64_t(c.ix) << shift;
  const std::uint64_t ay = std::uint64_t(c.iy) << shift;
  const std::uint64_t key = spread_bits(ax) | (spread_bits(ay) << 1);
  return (key << 6) | std::uint64_t(c.level);
}

QuadtreeGrid::QuadtreeGrid(Rect root, int max_level) : root_(root), max_level_(max_level) {
  if (max_level < 1 || max_level > kMaxLevel)
    throw std::invalid_argument("quadtree max level must be in [1, " + std::to_string(kMaxLevel) + "]");
  if (!(root.width > 0.0) || !(root.height > 0.0))
    throw std::invalid_argument("quadtree root rectangle is degenerate");
  inv_pow2_[0] = 1.0;
  for (int l = 1; l <= kMaxLevel + 1; ++l) inv_pow2_[l] = inv_pow2_[l - 1] * 0.5;
  leaves_ = {{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}};
  std::sort(leaves_.begin(), leaves_.end(), [&](const CellRef& a, const CellRef& b) {
    return morton_key(a, max_level_) < morton_key(b, max_level_);
  });
  rebuild_index();
}

QuadtreeGrid QuadtreeGrid::generate_from_seeds(Rect root, const std::vector<std::array<double, 2>>& seeds,
                                               int max_level) {
  std::vector<LeveledSeed> ls;
  ls.reserve(seeds.size());
  for (const auto& s : seeds) ls.push_back({s[0], s[1], max_level});
  return generate_leveled(root, ls, max_level);
}

QuadtreeGrid QuadtreeGrid::generate_leveled(Rect root, const std::vector<LeveledSeed>& seeds,
                                            int max_level) {
  QuadtreeGrid g(root, max_level);
  std::vector<int> in_root;
  in_root.reserve(seeds.size());
  for (int i = 0; i < int(seeds.size()); ++i) {
    const auto& s = seeds[i];
    if (s.x >= root.x0 && s.x <= root.x0 + root.width && s.y >= root.y0 &&
        s.y <= root.y0 + root.height && std::isfinite(s.x) && std::isfinite(s.y) && s.target > 1)
      in_root.push_back(i);
  }

  std::vector<CellRef> out;
  // Children are visited in Morton order so the leaf list comes out sorted.
  // Seed membership is tested against closed child rectangles: a seed on a
  // dividing line descends into every child it touches.
  auto recurse = [&](auto&& self, const CellRef& c, const std::vector<int>& idx) -> void {
    bool split = false;
    if (c.level < max_level)
      for (int i : idx)
        if (seeds[i].target > c.level) {
          split = true;
          break;
        }
    if (!split) {
      out.push_back(c);
      return;
    }
    const double xm = g.corner_x(c.child(1, 0), 0);
    const double ym = g.corner_y(c.child(0, 1), 0);
    const CellRef order[4] = {c.child(0, 0), c.child(1, 0), c.child(0, 1), c.child(1, 1)};
    for (const CellRef& ch : order) {
      std::vector<int> sub;
      for (int i : idx) {
        const double sx = seeds[i].x, sy = seeds[i].y;
        const bool in_x = (ch.ix & 1) ? (sx >= xm) : (sx <= xm);
        const bool in_y = (ch.iy & 1) ? (sy >= ym) : (sy <= ym);
        if (in_x && in_y) sub.push_back(i);
      }
      self(self, ch, sub);
    }
  };

  {
    const CellRef l1[4] = {{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}};
    const double xm = root.x0 + 0.5 * root.width;
    const double ym = root.y0 + 0.5 * root.height;
    for (const CellRef& q : l1) {
      std::vector<int> sub;
      for (int i : in_root) {
        const double sx = seeds[i].x, sy = seeds[i].y;
        const bool in_x = (q.ix & 1) ? (sx >= xm) : (sx <= xm);
        const bool in_y = (q.iy & 1) ? (sy >= ym) : (sy <= ym);
        if (in_x && in_y) sub.push_back(i);
      }
      recurse(recurse, q, sub);
    }
  }

  g.leaves_ = std::move(out);
  g.rebuild_index();
  return g;
}

void QuadtreeGrid::rebuild_index() {
  index_.clear();
  index_.reserve(leaves_.size() * 2);
  for (int i = 0; i < int(leaves_.size()); ++i) index_.emplace(leaves_[i].id(), i);
  mask_.clear();
}

int QuadtreeGrid::leaf_index(const CellRef& c) const {
  auto it = index_.find(c.id());
  if (it == index_.end()) throw std::invalid_argument("cell is not a leaf of this grid");
  return it->second;
}

std::optional<int> QuadtreeGrid::find_leaf_index(const CellRef& c) const {
  auto it = index_.find(c.id());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

QuadtreeGrid::Cover QuadtreeGrid::cover(const CellRef& c) const {
  if (c.level < 1 || c.ix < 0 || c.iy < 0 || c.ix >= (1 << c.level) || c.iy >= (1 << c.level))
    return Cover::Outside;
  if (is_leaf(c)) return Cover::Same;
  CellRef a = c;
  while (a.level > 1) {
    a = a.parent();
    if (is_leaf(a)) return Cover::Coarser;
  }
  return Cover::Finer;
}

std::optional<CellRef> QuadtreeGrid::leaf_at_or_above(const CellRef& c) const {
  CellRef a = c;
  while (true) {
    if (is_leaf(a)) return a;
    if (a.level == 1) return std::nullopt;
    a = a.parent();
  }
}

std::vector<CellRef> QuadtreeGrid::neighbors(const CellRef& cell, Side side) const {
  if (!is_leaf(cell)) throw std::invalid_argument("neighbors() requires a leaf cell");
  int dx = 0, dy = 0;
  switch (side) {
    case Side::left: dx = -1; break;
    case Side::right: dx = 1; break;
    case Side::bottom: dy = -1; break;
    case Side::top: dy = 1; break;
  }
  const CellRef n{cell.level, cell.ix + dx, cell.iy + dy};
  switch (cover(n)) {
    case Cover::Outside: return {};
    case Cover::Same: return {n};
    case Cover::Coarser: return {*leaf_at_or_above(n)};
    case Cover::Finer: {
      // the two children of n that touch the shared edge
      CellRef a, b;
      if (side == Side::left) { a = n.child(1, 0); b = n.child(1, 1); }
      else if (side == Side::right) { a = n.child(0, 0); b = n.child(0, 1); }
      else if (side == Side::bottom) { a = n.child(0, 1); b = n.child(1, 1); }
      else { a = n.child(0, 0); b = n.child(1, 0); }
      if (!is_leaf(a) || !is_leaf(b))
        throw std::logic_error("neighbors(): grid is not 2:1 balanced");
      return {a, b};
    }
  }
  return {};
}

void QuadtreeGrid::refine_cell(const CellRef& cell) {
  if (cell.level >= max_level_) throw std::out_of_range("refine_cell: cell already at max level");
  const int idx = leaf_index(cell);
  leaves_.erase(leaves_.begin() + idx);
  index_.erase(cell.id());
  for (int cy = 0; cy < 2; ++cy)
    for (int cx = 0; cx < 2; ++cx) insert_sorted(cell.child(cx, cy));
  // indices shifted; rebuild
  index_.clear();
  for (int i = 0; i < int(leaves_.size()); ++i) index_.emplace(leaves_[i].id(), i);
  mask_.clear();
}

void QuadtreeGrid::coarsen_siblings(const CellRef& parent) {
  if (parent.level < 1) throw std::invalid_argument("coarsen_siblings: invalid parent level");
  for (int cy = 0; cy < 2; ++cy)
    for (int cx = 0; cx < 2; ++cx)
      if (!is_leaf(parent.child(cx, cy)))
        throw std::invalid_argument("coarsen_siblings: not all four children are leaves");
  for (int cy = 0; cy < 2; ++cy)
    for (int cx = 0; cx < 2; ++cx) {
      const CellRef ch = parent.child(cx, cy);
      leaves_.erase(std::find(leaves_.begin(), leaves_.end(), ch));
    }
  insert_sorted(parent);
  index_.clear();
  for (int i = 0; i < int(leaves_.size()); ++i) index_.emplace(leaves_[i].id(), i);
  mask_.clear();
}

void QuadtreeGrid::insert_sorted(const CellRef& c) {
  const std::uint64_t key = morton_key(c, max_level_);
  auto it = std::lower_bound(leaves_.begin(), leaves_.end(), key, [&](const CellRef& a, std::uint64_t k) {
    return morton_key(a, max_level_) < k;
  });
  leaves_.insert(it, c);
}

void QuadtreeGrid::regularize() {
  // Ripple balancing: split any leaf with an edge or diagonal neighbor two
  // or more levels finer; a split can only newly violate coarser
  // neighbors, which are re-queued. Leaf storage is treated as a hash set
  // until the fixpoint, then sorted once.
  std::deque<CellRef> queue(leaves_.begin(), leaves_.end());
  static const int dirs[8][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1},
                                 {-1, -1}, {1, -1}, {-1, 1}, {1, 1}};

  auto touching_children = [](const CellRef& n, int dx, int dy, CellRef out[2]) -> int {
    if (dx != 0 && dy != 0) {
      out[0] = n.child(dx < 0 ? 1 : 0, dy < 0 ? 1 : 0);
      return 1;
    }
    if (dx != 0) {
      const int cx = dx < 0 ? 1 : 0;
      out[0] = n.child(cx, 0);
      out[1] = n.child(cx, 1);
    } else {
      const int cy = dy < 0 ? 1 : 0;
      out[0] = n.child(0, cy);
      out[1] = n.child(1, cy);
    }
    return 2;
  };

  bool mutated = false;
  while (!queue.empty()) {
    const CellRef c = queue.front();
    queue.pop_front();
    if (!is_leaf(c)) continue;
    if (c.level >= max_level_ - 1) continue;  // nothing can be 2 levels finer

    bool violated = false;
    for (const auto& d : dirs) {
      const CellRef n{c.level, c.ix + d[0], c.iy + d[1]};
      if (cover(n) != Cover::Finer) continue;
      CellRef tc[2];
      const int ntc = touching_children(n, d[0], d[1], tc);
      for (int t = 0; t < ntc && !violated; ++t)
        if (cover(tc[t]) == Cover::Finer) violated = true;
      if (violated) break;
    }
    if (!violated) continue;

    // split c (hash-only bookkeeping; vector is compacted afterwards)
    mutated = true;
    index_.erase(c.id());
    for (int cy = 0; cy < 2; ++cy)
      for (int cx = 0; cx < 2; ++cx) {
        const CellRef ch = c.child(cx, cy);
        index_.emplace(ch.id(), -1);
        queue.push_back(ch);
      }
    for (const auto& d : dirs) {
      const CellRef n{c.level, c.ix + d[0], c.iy + d[1]};
      if (cover(n) == Cover::Coarser) queue.push_back(*leaf_at_or_above(n));
    }
  }

  if (mutated) {
    leaves_.clear();
    leaves_.reserve(index_.size());
    for (const auto& [id, _] : index_)
      leaves_.push_back(CellRef{int(id >> 58), int((id >> 29) & 0x1fffffff), int(id & 0x1fffffff)});
    std::sort(leaves_.begin(), leaves_.end(), [&](const CellRef& a, const CellRef& b) {
      return morton_key(a, max_level_) < morton_key(b, max_level_);
    });
    rebuild_index();
  }
}

bool QuadtreeGrid::is_balanced() const {
  static const int dirs[8][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1},
                                 {-1, -1}, {1, -1}, {-1, 1}, {1, 1}};
  for (const CellRef& c : leaves_) {
    if (c.level >= max_level_ - 1) continue;
    for (const auto& d : dirs) {
      const CellRef n{c.level, c.ix + d[0], c.iy + d[1]};
      if (cover(n) != Cover::Finer) continue;
      // any grandchild region on the touching edge/corner means a >=2 gap
      for (int ty = 0; ty < 2; ++ty)
        for (int tx = 0; tx < 2; ++tx) {
          if (d[0] != 0 && tx != (d[0] < 0 ? 1 : 0)) continue;
          if (d[1] != 0 && ty != (d[1] < 0 ? 1 : 0)) continue;
          if (cover(n.child(tx, ty)) == Cover::Finer) return false;
        }
    }
  }
  return true;
}

CellRef QuadtreeGrid::locate(double x, double y) const {
  for (int l = 1; l <= max_level_; ++l) {
    const double fx = (x - root_.x0) / dx(l);
    const double fy = (y - root_.y0) / dy(l);
    int ix = std::clamp(int(std::floor(fx)), 0, (1 << l) - 1);
    int iy = std::clamp(int(std::floor(fy)), 0, (1 << l) - 1);
    const CellRef c{l, ix, iy};
    if (is_leaf(c)) return c;
  }
  throw std::logic_error("locate(): point not covered by any leaf");
}

double QuadtreeGrid::min_dx() const {
  int deepest = 1;
  for (const auto& c : leaves_) deepest = std::max(deepest, c.level);
  return dx(deepest);
}

double QuadtreeGrid::min_dy() const {
  int deepest = 1;
  for (const auto& c : leaves_) deepest = std::max(deepest, c.level);
  return dy(deepest);
}

void QuadtreeGrid::apply_mask(const std::function<bool(double, double)>& inside) {
  mask_.assign(leaves_.size(), 1);
  for (int i = 0; i < int(leaves_.size()); ++i)
    mask_[i] = inside(center_x(leaves_[i]), center_y(leaves_[i])) ? 1 : 0;
}

void QuadtreeGrid::dump(std::ostream& os) const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "# quadswe-grid v1 %.17g %.17g %d\n", root_.width, root_.height,
                max_level_);
  os << buf;
  for (int i = 0; i < int(leaves_.size()); ++i) {
    const CellRef& c = leaves_[i];
    std::snprintf(buf, sizeof buf, "%d %d %d %.17g %.17g %.17g %.17g %d\n", c.level, c.ix, c.iy,
                  center_x(c), center_y(c), dx(c), dy(c), active(i) ? 1 : 0);
    os << buf;
  }
}

QuadtreeGrid QuadtreeGrid::load(std::istream& is) {
  std::string header;
  std::getline(is, header);
  std::istringstream hs(header);
  std::string hash, tag, ver;
  double w = 0, h = 0;
  int m = 0;
  hs >> hash >> tag >> ver >> w >> h >> m;
  if (hash != "#" || tag != "quadswe-grid" || ver != "v1" || !(w > 0) || !(h > 0) || m < 1)
    throw config_error("grid file: bad header: " + header);

  std::vector<CellRef> cells;
  std::unordered_map<std::uint64_t, char> mask_by_id;
  bool any_masked = false;
  double x0 = 0, y0 = 0;
  bool org_set = false;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    CellRef c;
    double xc, yc, cdx, cdy;
    int mk;
    if (!(ls >> c.level >> c.ix >> c.iy >> xc >> yc >> cdx >> cdy >> mk))
      throw config_error("grid file: bad row: " + line);
    if (!org_set) {
      x0 = xc - (c.ix + 0.5) * cdx;
      y0 = yc - (c.iy + 0.5) * cdy;
      org_set = true;
    }
    cells.push_back(c);
    mask_by_id[c.id()] = char(mk != 0);
    any_masked |= (mk == 0);
  }
  if (cells.empty()) throw config_error("grid file: no cells");

  QuadtreeGrid g({x0, y0, w, h}, m);
  g.leaves_ = std::move(cells);
  std::sort(g.leaves_.begin(), g.leaves_.end(), [&](const CellRef& a, const CellRef& b) {
    return morton_key(a, g.max_level_) < morton_key(b, g.max_level_);
  });
  g.rebuild_index();
  if (any_masked) {
    g.mask_.resize(g.leaves_.size());
    for (int i = 0; i < int(g.leaves_.size()); ++i) g.mask_[i] = mask_by_id[g.leaves_[i].id()];
  }
  return g;
}

}  // namespace quadswe
