#include "quadswe/integrator.hpp"

#include <cmath>
#include <string>

#include "quadswe/threading.hpp"

namespace quadswe {

double desing_epsilon(const QuadtreeGrid& grid) {
  const double dx = grid.min_dx(), dy = grid.min_dy();
  return std::max((dx * dx) * (dx * dx), (dy * dy) * (dy * dy));
}

namespace {

FaceState make_face_state(const Conserved& t, double b, double eps, bool floor_depth) {
  double h = t.w - b;
  h = floor_depth ? (h > 0.0 ? h : 0.0) : clamp_depth(h);
  const Velocity vel = desingularize(h, t.hu, t.hv, eps);
  return {t.w, vel.hu, vel.hv, h, vel.u, vel.v};
}

FaceState ghost_face_state(const BcRule& rule, const FaceState& interior, const Conserved& avg,
                           int axis, double b, double eps) {
  switch (rule.kind) {
    case BcKind::wall: {
      FaceState g = interior;
      if (axis == 0) {
        g.hu = -g.hu;
        g.u = -g.u;
      } else {
        g.hv = -g.hv;
        g.v = -g.v;
      }
      return g;
    }
    case BcKind::zero_order:
      return make_face_state(avg, b, eps, /*floor_depth=*/true);
    case BcKind::inflow: {
      const double h = rule.w_in - b > 0.0 ? rule.w_in - b : 0.0;
      return {rule.w_in, h * rule.u_in, h * rule.v_in, h, rule.u_in, rule.v_in};
    }
  }
  return interior;
}

}  // namespace

StageEval evaluate_faces(const QuadtreeGrid& grid, const FaceSet& faces, const GridState& state,
                         const BathymetryData& bathy, const BoundarySpec& bc, double eps) {
  StageEval ev;
  ev.slopes = compute_slopes(grid, faces, state, bathy, bc);
  const int ns = int(faces.subfaces.size());
  ev.traces.resize(ns);
  ev.flux.resize(ns);

  threading::parallel_for(ns, [&](std::int64_t si) {
    const SubFace& sf = faces.subfaces[si];
    const double b = bathy.face_value(int(si));
    auto& tr = ev.traces[si];

    if (!sf.is_boundary()) {
      tr.L = make_face_state(trace_at(grid, sf.left, state, ev.slopes, sf.mid_x, sf.mid_y), b, eps,
                             false);
      tr.R = make_face_state(trace_at(grid, sf.right, state, ev.slopes, sf.mid_x, sf.mid_y), b, eps,
                             false);
    } else {
      const int i = sf.interior_cell();
      const FaceState in = make_face_state(trace_at(grid, i, state, ev.slopes, sf.mid_x, sf.mid_y),
                                           b, eps, false);
      const FaceState g =
          ghost_face_state(bc.rule(sf.boundary), in, state.get(i), sf.axis, b, eps);
      if (sf.left < 0) {
        tr.L = g;
        tr.R = in;
      } else {
        tr.L = in;
        tr.R = g;
      }
    }

    tr.sp = sf.axis == 0 ? local_speeds(tr.L.u, tr.L.h, tr.R.u, tr.R.h, state.g)
                         : local_speeds(tr.L.v, tr.L.h, tr.R.v, tr.R.h, state.g);
    const Conserved H = cu_flux(tr.L, tr.R, tr.sp, state.g, sf.axis);
    if (!std::isfinite(H.w) || !std::isfinite(H.hu) || !std::isfinite(H.hv))
      throw numerical_error(std::string("non-finite flux at ") + (sf.axis == 0 ? "x" : "y") +
                            "-face (" + std::to_string(sf.mid_x) + ", " + std::to_string(sf.mid_y) +
                            ")");
    ev.flux[si] = H;
  });
  return ev;
}

Conserved source_wb(const QuadtreeGrid& grid, const FaceSet& faces, const BathymetryData& bathy,
                    const GridState& state, const StageEval& eval, int cell) {
  const CellRef& c = grid.leaves()[cell];
  double xr = 0.0, xl = 0.0, yt = 0.0, yb = 0.0;
  for (int k = faces.cell_face_offset[cell]; k < faces.cell_face_offset[cell + 1]; ++k) {
    const CellFace& cf = faces.cell_faces[k];
    const SubFace& sf = faces.subfaces[cf.sf];
    const auto& tr = eval.traces[cf.sf];
    switch (cf.side) {
      case Side::right: xr += sf.frac_left * (tr.L.h * tr.L.h); break;
      case Side::left: xl += sf.frac_right * (tr.R.h * tr.R.h); break;
      case Side::top: yt += sf.frac_left * (tr.L.h * tr.L.h); break;
      case Side::bottom: yb += sf.frac_right * (tr.R.h * tr.R.h); break;
    }
  }
  const double g = state.g;
  const double hbar = state.w[cell] - bathy.center(cell);
  const double s2 = 0.5 * g * (xr - xl) / grid.dx(c) - g * eval.slopes.sx[cell].w * hbar;
  const double s3 = 0.5 * g * (yt - yb) / grid.dy(c) - g * eval.slopes.sy[cell].w * hbar;
  return {0.0, s2, s3};
}

Conserved source_naive(const QuadtreeGrid& grid, const BathymetryData& bathy,
                       const GridState& state, int cell, bool as_printed) {
  using C = BathymetryData::Corner;
  const CellRef& c = grid.leaves()[cell];
  const double g = state.g;
  const double hbar = state.w[cell] - bathy.center(cell);
  const double bx = 0.5 * (bathy.corner(cell, C::NE) + bathy.corner(cell, C::SE)) -
                    0.5 * (bathy.corner(cell, C::NW) + bathy.corner(cell, C::SW));
  const double s2 = -g * hbar * bx / grid.dx(c);
  double s3;
  if (as_printed) {
    s3 = s2;
  } else {
    const double by = 0.5 * (bathy.corner(cell, C::NE) + bathy.corner(cell, C::NW)) -
                      0.5 * (bathy.corner(cell, C::SE) + bathy.corner(cell, C::SW));
    s3 = -g * hbar * by / grid.dy(c);
  }
  return {0.0, s2, s3};
}

std::vector<Conserved> rhs_from(const QuadtreeGrid& grid, const FaceSet& faces,
                                const BathymetryData& bathy, const GridState& state,
                                const StageEval& eval, SourceMode mode) {
  const int n = grid.num_leaves();
  std::vector<Conserved> rhs(n);
  threading::parallel_for(n, [&](std::int64_t ii) {
    const int i = int(ii);
    if (!grid.active(i)) {
      rhs[i] = {0.0, 0.0, 0.0};
      return;
    }
    const CellRef& c = grid.leaves()[i];
    Conserved xr{}, xl{}, yt{}, yb{};
    for (int k = faces.cell_face_offset[i]; k < faces.cell_face_offset[i + 1]; ++k) {
      const CellFace& cf = faces.cell_faces[k];
      const SubFace& sf = faces.subfaces[cf.sf];
      const Conserved& H = eval.flux[cf.sf];
      switch (cf.side) {
        case Side::right: xr += sf.frac_left * H; break;
        case Side::left: xl += sf.frac_right * H; break;
        case Side::top: yt += sf.frac_left * H; break;
        case Side::bottom: yb += sf.frac_right * H; break;
      }
    }
    Conserved src{};
    if (mode == SourceMode::well_balanced)
      src = source_wb(grid, faces, bathy, state, eval, i);
    else
      src = source_naive(grid, bathy, state, i, mode == SourceMode::naive_as_printed);
    const double inv_dx = 1.0 / grid.dx(c), inv_dy = 1.0 / grid.dy(c);
    rhs[i] = {(xl.w - xr.w) * inv_dx + (yb.w - yt.w) * inv_dy + src.w,
              (xl.hu - xr.hu) * inv_dx + (yb.hu - yt.hu) * inv_dy + src.hu,
              (xl.hv - xr.hv) * inv_dx + (yb.hv - yt.hv) * inv_dy + src.hv};
  });
  return rhs;
}

double dt_from(const QuadtreeGrid& grid, const FaceSet& faces, const StageEval& eval, double sigma,
               double cap) {
  const int n = grid.num_leaves();
  std::vector<double> cell_bound(n, cap);
  threading::parallel_for(n, [&](std::int64_t ii) {
    const int i = int(ii);
    if (!grid.active(i)) return;
    double amax = 0.0, bmax = 0.0;
    for (int k = faces.cell_face_offset[i]; k < faces.cell_face_offset[i + 1]; ++k) {
      const CellFace& cf = faces.cell_faces[k];
      const auto& sp = eval.traces[cf.sf].sp;
      const double s = std::max(sp.plus, -sp.minus);
      if (faces.subfaces[cf.sf].axis == 0)
        amax = std::max(amax, s);
      else
        bmax = std::max(bmax, s);
    }
    const CellRef& c = grid.leaves()[i];
    double b = cap;
    if (amax > 1e-14) b = std::min(b, 0.25 * grid.dx(c) / amax);
    if (bmax > 1e-14) b = std::min(b, 0.25 * grid.dy(c) / bmax);
    cell_bound[i] = b;
  });
  double bound = cap;
  for (double b : cell_bound) bound = std::min(bound, b);
  return std::min(sigma * bound, cap);
}

std::vector<Conserved> assemble_rhs(const QuadtreeGrid& grid, const FaceSet& faces,
                                    const GridState& state, const BathymetryData& bathy,
                                    const BoundarySpec& bc, SourceMode mode, double eps) {
  const StageEval ev = evaluate_faces(grid, faces, state, bathy, bc, eps);
  return rhs_from(grid, faces, bathy, state, ev, mode);
}

double max_stable_dt(const QuadtreeGrid& grid, const FaceSet& faces, const GridState& state,
                     const BathymetryData& bathy, const BoundarySpec& bc, double eps, double sigma,
                     double cap) {
  const StageEval ev = evaluate_faces(grid, faces, state, bathy, bc, eps);
  return dt_from(grid, faces, ev, sigma, cap);
}

GridState euler_step(const QuadtreeGrid& grid, const GridState& state,
                     const std::vector<Conserved>& rhs, double dt, const BathymetryData& bathy) {
  const int n = state.size();
  GridState out = state;
  threading::parallel_for(n, [&](std::int64_t i) {
    out.w[i] = state.w[i] + dt * rhs[i].w;
    out.hu[i] = state.hu[i] + dt * rhs[i].hu;
    out.hv[i] = state.hv[i] + dt * rhs[i].hv;
  });
  for (int i = 0; i < n; ++i) {
    if (!grid.active(i)) continue;
    const double h = out.w[i] - bathy.center(i);
    if (h < -1e-13)
      throw numerical_error("positivity violated: cell depth " + std::to_string(h) + " after step");
  }
  return out;
}

namespace {

GridState combine(double a, const GridState& X, double b, const GridState& Y) {
  GridState out = X;
  const int n = X.size();
  threading::parallel_for(n, [&](std::int64_t i) {
    out.w[i] = a * X.w[i] + b * Y.w[i];
    out.hu[i] = a * X.hu[i] + b * Y.hu[i];
    out.hv[i] = a * X.hv[i] + b * Y.hv[i];
  });
  return out;
}

void check_positivity(const QuadtreeGrid* grid, const BathymetryData* bathy, const GridState& s) {
  if (!grid || !bathy) return;
  for (int i = 0; i < s.size(); ++i) {
    if (!grid->active(i)) continue;
    const double h = s.w[i] - bathy->center(i);
    if (h < -1e-13)
      throw numerical_error("positivity violated: cell depth " + std::to_string(h) +
                            " in RK stage");
  }
}

}  // namespace

GridState ssp_rk3_step(const GridState& state, double dt,
                       const std::function<std::vector<Conserved>(const GridState&)>& rhs_fn,
                       const QuadtreeGrid* grid, const BathymetryData* bathy) {
  const int n = state.size();
  auto apply = [&](const GridState& s, const std::vector<Conserved>& rhs) {
    GridState out = s;
    threading::parallel_for(n, [&](std::int64_t i) {
      out.w[i] = s.w[i] + dt * rhs[i].w;
      out.hu[i] = s.hu[i] + dt * rhs[i].hu;
      out.hv[i] = s.hv[i] + dt * rhs[i].hv;
    });
    return out;
  };

  const GridState u1 = apply(state, rhs_fn(state));
  check_positivity(grid, bathy, u1);
  const GridState u2 = combine(0.75, state, 0.25, apply(u1, rhs_fn(u1)));
  check_positivity(grid, bathy, u2);
  GridState out = combine(1.0 / 3.0, state, 2.0 / 3.0, apply(u2, rhs_fn(u2)));
  check_positivity(grid, bathy, out);
  return out;
}

}  // namespace quadswe
