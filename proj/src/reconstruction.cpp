#include "quadswe/reconstruction.hpp"

#include <cmath>

#include "quadswe/threading.hpp"

namespace quadswe {

double minmod(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("minmod of empty list");
  double lo = values[0], hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo > 0.0) return lo;
  if (hi < 0.0) return hi;
  return 0.0;
}

namespace {

// quotients toward one neighbour (or ghost) along one axis
struct Quotients {
  double w, hu, hv;
};

Quotients quotient(const Conserved& mine, const Conserved& other, double dist, bool upper) {
  // upper side: forward difference; lower side: backward (negated exactly)
  const double qw = (other.w - mine.w) / dist;
  const double qhu = (other.hu - mine.hu) / dist;
  const double qhv = (other.hv - mine.hv) / dist;
  return upper ? Quotients{qw, qhu, qhv} : Quotients{-qw, -qhu, -qhv};
}

}  // namespace

SlopeSet compute_slopes(const QuadtreeGrid& grid, const FaceSet& faces, const GridState& state,
                        const BathymetryData& bathy, const BoundarySpec& bc) {
  const int n = grid.num_leaves();
  SlopeSet out;
  out.sx.assign(n, Conserved{});
  out.sy.assign(n, Conserved{});
  out.corrected.assign(n, 0);
  out.wc.assign(size_t(n) * 4, 0.0);

  threading::parallel_for(n, [&](std::int64_t ii) {
    const int i = int(ii);
    if (!grid.active(i)) return;
    const CellRef& c = grid.leaves()[i];
    const Conserved mine = state.get(i);
    const double xc = grid.center_x(c), yc = grid.center_y(c);

    double zw[2][4], zhu[2][4], zhv[2][4];
    int nz[2] = {0, 0};

    for (int k = faces.cell_face_offset[i]; k < faces.cell_face_offset[i + 1]; ++k) {
      const CellFace& cf = faces.cell_faces[k];
      const SubFace& sf = faces.subfaces[cf.sf];
      const int axis = sf.axis;
      const bool upper = cf.side == Side::right || cf.side == Side::top;
      Quotients q;
      if (sf.is_boundary()) {
        const Conserved ghost = ghost_average(bc.rule(sf.boundary), mine, axis, bathy.center(i));
        const double dist = axis == 0 ? grid.dx(c) : grid.dy(c);
        q = quotient(mine, ghost, dist, upper);
      } else {
        const int ni = sf.left == i ? sf.right : sf.left;
        const CellRef& nb = grid.leaves()[ni];
        const double dist =
            axis == 0 ? std::abs(grid.center_x(nb) - xc) : std::abs(grid.center_y(nb) - yc);
        q = quotient(mine, state.get(ni), dist, upper);
      }
      zw[axis][nz[axis]] = q.w;
      zhu[axis][nz[axis]] = q.hu;
      zhv[axis][nz[axis]] = q.hv;
      ++nz[axis];
    }

    out.sx[i] = {minmod(std::span<const double>(zw[0], size_t(nz[0]))),
                 minmod(std::span<const double>(zhu[0], size_t(nz[0]))),
                 minmod(std::span<const double>(zhv[0], size_t(nz[0])))};
    out.sy[i] = {minmod(std::span<const double>(zw[1], size_t(nz[1]))),
                 minmod(std::span<const double>(zhu[1], size_t(nz[1]))),
                 minmod(std::span<const double>(zhv[1], size_t(nz[1])))};
  });

  correct_positivity_all(grid, state, out, bathy);
  return out;
}

bool correct_positivity(const QuadtreeGrid& grid, int cell, const GridState& state,
                        SlopeSet& slopes, const BathymetryData& bathy) {
  using C = BathymetryData::Corner;
  const CellRef& c = grid.leaves()[cell];
  const double hx = 0.5 * grid.dx(c), hy = 0.5 * grid.dy(c);
  const double wbar = state.w[cell];
  const double bcen = bathy.center(cell);

  double d = wbar - bcen;
  if (d < 0.0) {
    if (d < -1e-13)
      throw numerical_error("reconstruction: negative cell depth " + std::to_string(d));
    d = 0.0;
  }

  const Conserved& sx = slopes.sx[cell];
  const Conserved& sy = slopes.sy[cell];
  // corner order SW, SE, NW, NE
  const double wlin[4] = {wbar - hx * sx.w - hy * sy.w, wbar + hx * sx.w - hy * sy.w,
                          wbar - hx * sx.w + hy * sy.w, wbar + hx * sx.w + hy * sy.w};
  const double bcor[4] = {bathy.corner(cell, C::SW), bathy.corner(cell, C::SE),
                          bathy.corner(cell, C::NW), bathy.corner(cell, C::NE)};

  bool bad[4];
  int nbad = 0;
  for (int k = 0; k < 4; ++k) {
    bad[k] = wlin[k] < bcor[k];
    nbad += bad[k];
  }

  double* wc = &slopes.wc[size_t(cell) * 4];
  if (nbad == 0) {
    for (int k = 0; k < 4; ++k) wc[k] = wlin[k];
    slopes.corrected[cell] = 0;
    return false;
  }
  if (nbad == 4)
    throw std::logic_error("positivity correction: all four corners below bottom with wbar >= B");

  // violated corners are pinned to the bottom; the water removed there is
  // spread evenly over the remaining corners, which keeps the corner mean
  // at wbar and every corner at or above its bottom value
  const double lift = 4.0 * d / double(4 - nbad);
  for (int k = 0; k < 4; ++k) wc[k] = bad[k] ? bcor[k] : bcor[k] + lift;
  slopes.corrected[cell] = 1;
  return true;
}

void correct_positivity_all(const QuadtreeGrid& grid, const GridState& state, SlopeSet& slopes,
                            const BathymetryData& bathy) {
  threading::parallel_for(grid.num_leaves(), [&](std::int64_t i) {
    if (!grid.active(int(i))) return;
    correct_positivity(grid, int(i), state, slopes, bathy);
  });
}

Velocity desingularize(double h, double hu, double hv, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("desingularize: eps must be positive");
  const double h4 = (h * h) * (h * h);
  const double denom = std::sqrt(h4 + std::max(h4, eps));
  const double u = std::sqrt(2.0) * h * hu / denom;
  const double v = std::sqrt(2.0) * h * hv / denom;
  return {u, v, h * u, h * v};
}

Conserved trace_at(const QuadtreeGrid& grid, int i, const GridState& state, const SlopeSet& slopes,
                   double x, double y) {
  const CellRef& c = grid.leaves()[i];
  const double ox = x - grid.center_x(c), oy = y - grid.center_y(c);
  const Conserved& sx = slopes.sx[i];
  const Conserved& sy = slopes.sy[i];
  double w;
  if (slopes.corrected[i]) {
    const double tx = (x - grid.corner_x(c, 0)) / grid.dx(c);
    const double ty = (y - grid.corner_y(c, 0)) / grid.dy(c);
    const double* wc = &slopes.wc[size_t(i) * 4];
    // on-edge points reduce to linear interpolation between that edge's
    // corners; keep that form exact (quadrature points always hit it)
    if (tx == 0.0) w = wc[0] + (wc[2] - wc[0]) * ty;
    else if (tx == 1.0) w = wc[1] + (wc[3] - wc[1]) * ty;
    else if (ty == 0.0) w = wc[0] + (wc[1] - wc[0]) * tx;
    else if (ty == 1.0) w = wc[2] + (wc[3] - wc[2]) * tx;
    else
      w = wc[0] + (wc[1] - wc[0]) * tx + (wc[2] - wc[0]) * ty +
          (wc[3] - wc[1] - wc[2] + wc[0]) * tx * ty;
  } else {
    w = state.w[i] + ox * sx.w + oy * sy.w;
  }
  return {w, state.hu[i] + ox * sx.hu + oy * sy.hu, state.hv[i] + ox * sx.hv + oy * sy.hv};
}

double clamp_depth(double h) {
  if (h >= 0.0) return h;
  if (h >= -1e-14) return 0.0;
  throw numerical_error("reconstructed depth " + std::to_string(h) + " below roundoff band");
}

EdgePointValues point_values(const QuadtreeGrid& grid, const FaceSet& faces, int cell,
                             const GridState& state, const SlopeSet& slopes,
                             const BathymetryData& bathy, double eps) {
  EdgePointValues out;
  for (int k = faces.cell_face_offset[cell]; k < faces.cell_face_offset[cell + 1]; ++k) {
    const CellFace& cf = faces.cell_faces[k];
    const SubFace& sf = faces.subfaces[cf.sf];
    const Conserved t = trace_at(grid, cell, state, slopes, sf.mid_x, sf.mid_y);
    const double h = clamp_depth(t.w - bathy.face_value(cf.sf));
    const Velocity vel = desingularize(h, t.hu, t.hv, eps);
    out.entries.push_back({cf.sf, cf.side, t.w, t.hu, t.hv, h, vel.u, vel.v});
  }
  return out;
}

}  // namespace quadswe
