#include "quadswe/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quadswe/threading.hpp"

namespace quadswe {

void RunConfig::validate() const {
  if (m < 1 || m > kMaxLevel) throw config_error("m must be in [1, " + std::to_string(kMaxLevel) + "]");
  if (!(domain.width > 0) || !(domain.height > 0)) throw config_error("degenerate domain");
  if (!(c_seed > 0)) throw config_error("c_seed must be positive");
  if (!(g > 0)) throw config_error("g must be positive");
  if (!(t_end > 0) || !std::isfinite(t_end)) throw config_error("t_end must be positive");
  if (!(sigma > 0) || sigma > 1.0) throw config_error("sigma must be in (0, 1]");
  if (!(dt_cap > 0)) throw config_error("dt_cap must be positive");
  if (regrid_every < 0) throw config_error("regrid_every must be >= 0");
  if (init_level < 1) throw config_error("init_level must be >= 1");
  if (output_every < 0) throw config_error("output_every must be >= 0");
  if (!bottom.eval || !w0 || !u0 || !v0) throw config_error("missing field callback");
}

std::vector<QuadtreeGrid::LeveledSeed> initial_seeds(const RunConfig& cfg) {
  std::vector<QuadtreeGrid::LeveledSeed> seeds;
  const int base = std::min(cfg.init_level, cfg.m);

  // base lattice: resolve the bottom at init_level and mark the geometry
  {
    const int n = 1 << base;
    const double dx = cfg.domain.width / n, dy = cfg.domain.height / n;
    auto cx = [&](int i) { return cfg.domain.x0 + (i + 0.5) * dx; };
    auto cy = [&](int j) { return cfg.domain.y0 + (j + 0.5) * dy; };
    std::vector<char> in(size_t(n) * n, 1);
    bool flat = true;
    for (int j = 0; j < n && flat; ++j)
      for (int i = 0; i < n; ++i)
        if (cfg.bottom(cx(i), cy(j)) != 0.0) {
          flat = false;
          break;
        }
    if (cfg.mask)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) in[size_t(j) * n + i] = cfg.mask(cx(i), cy(j)) ? 1 : 0;

    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const size_t k = size_t(j) * n + i;
        if (!in[k]) continue;
        if (!flat) seeds.push_back({cx(i), cy(j), base});
        if (cfg.mask) {
          const bool edge = (i > 0 && !in[k - 1]) || (i + 1 < n && !in[k + 1]) ||
                            (j > 0 && !in[k - n]) || (j + 1 < n && !in[k + n]);
          if (edge) seeds.push_back({cx(i), cy(j), std::min(base + 2, cfg.m)});
        }
      }
  }

  // fine lattice: refine to m the parent quadruples whose corner samples
  // spread steeply, i.e. the cells an initial discontinuity passes
  // through at the next-to-finest resolution
  {
    const int lev = std::min(std::max(cfg.m - 1, 1), 10);
    const int n = 1 << lev;
    const double dx = cfg.domain.width / n, dy = cfg.domain.height / n;
    auto nxv = [&](int i) { return cfg.domain.x0 + i * dx; };
    auto nyv = [&](int j) { return cfg.domain.y0 + j * dy; };
    std::vector<double> wn(size_t(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) wn[size_t(j) * (n + 1) + i] = cfg.w0(nxv(i), nyv(j));
    auto node = [&](int i, int j) { return wn[size_t(j) * (n + 1) + i]; };
    const double min_d = std::min(dx, dy);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double c00 = node(i, j), c10 = node(i + 1, j);
        const double c01 = node(i, j + 1), c11 = node(i + 1, j + 1);
        const double spread = std::max({c00, c10, c01, c11}) - std::min({c00, c10, c01, c11});
        if (spread / min_d < cfg.c_seed) continue;
        const double sx = cfg.domain.x0 + (i + 0.5) * dx;
        const double sy = cfg.domain.y0 + (j + 0.5) * dy;
        if (!cfg.mask || cfg.mask(sx, sy)) seeds.push_back({sx, sy, cfg.m});
      }
  }
  return seeds;
}

namespace {
RunConfig validated(RunConfig cfg) {
  cfg.validate();
  return cfg;
}
}  // namespace

Simulation::Simulation(RunConfig cfg)
    : cfg_(validated(std::move(cfg))), grid_(cfg_.domain, cfg_.m) {
  QuadtreeGrid g = QuadtreeGrid::generate_leveled(cfg_.domain, initial_seeds(cfg_), cfg_.m);
  g.regularize();
  rebuild_mesh(std::move(g));

  const int n = grid_.num_leaves();
  state_ = GridState::zeros(n, cfg_.g);
  for (int i = 0; i < n; ++i) {
    const CellRef& c = grid_.leaves()[i];
    const double x = grid_.center_x(c), y = grid_.center_y(c);
    const double bc = bathy_.center(i);
    const double w = std::max(cfg_.w0(x, y), bc);
    const double h = w - bc;
    state_.w[i] = w;
    state_.hu[i] = h * cfg_.u0(x, y);
    state_.hv[i] = h * cfg_.v0(x, y);
  }
}

void Simulation::rebuild_mesh(QuadtreeGrid&& g) {
  grid_ = std::move(g);
  if (cfg_.mask) grid_.apply_mask(cfg_.mask);
  faces_ = build_faces(grid_);
  bathy_ = build_bathymetry(grid_, cfg_.bottom, &faces_);
  eps_ = desing_epsilon(grid_);
}

StepInfo Simulation::step() {
  if (done()) throw std::logic_error("step() after t_end");

  const StageEval e1 = evaluate_faces(grid_, faces_, state_, bathy_, cfg_.bc, eps_);
  double dt = dt_from(grid_, faces_, e1, cfg_.sigma, cfg_.dt_cap);
  dt = std::min(dt, cfg_.t_end - t_);

  const GridState u1 =
      euler_step(grid_, state_, rhs_from(grid_, faces_, bathy_, state_, e1, cfg_.source_mode), dt, bathy_);
  const StageEval e2 = evaluate_faces(grid_, faces_, u1, bathy_, cfg_.bc, eps_);
  const GridState u1e =
      euler_step(grid_, u1, rhs_from(grid_, faces_, bathy_, u1, e2, cfg_.source_mode), dt, bathy_);
  GridState u2 = state_;
  threading::parallel_for(state_.size(), [&](std::int64_t i) {
    u2.w[i] = 0.75 * state_.w[i] + 0.25 * u1e.w[i];
    u2.hu[i] = 0.75 * state_.hu[i] + 0.25 * u1e.hu[i];
    u2.hv[i] = 0.75 * state_.hv[i] + 0.25 * u1e.hv[i];
  });
  const StageEval e3 = evaluate_faces(grid_, faces_, u2, bathy_, cfg_.bc, eps_);
  const GridState u2e =
      euler_step(grid_, u2, rhs_from(grid_, faces_, bathy_, u2, e3, cfg_.source_mode), dt, bathy_);
  GridState next = state_;
  threading::parallel_for(state_.size(), [&](std::int64_t i) {
    next.w[i] = (1.0 / 3.0) * state_.w[i] + (2.0 / 3.0) * u2e.w[i];
    next.hu[i] = (1.0 / 3.0) * state_.hu[i] + (2.0 / 3.0) * u2e.hu[i];
    next.hv[i] = (1.0 / 3.0) * state_.hv[i] + (2.0 / 3.0) * u2e.hv[i];
  });
  state_ = std::move(next);
  t_ += dt;
  ++nstep_;

  StepInfo info;
  info.step = nstep_;
  info.t = t_;
  info.dt = dt;
  info.cells = grid_.num_leaves();

  if (cfg_.regrid_every > 0 && nstep_ % cfg_.regrid_every == 0 && !done()) {
    info.regridded = true;
    regrid();
    info.regrid = last_regrid_;
    info.cells = grid_.num_leaves();
  }

  info.min_h = min_depth();
  info.mass = water_volume();
  info.max_w = max_w();
  return info;
}

void Simulation::regrid() {
  const SlopeSet slopes = compute_slopes(grid_, faces_, state_, bathy_, cfg_.bc);
  const auto seeds = select_seeds(grid_, slopes, cfg_.c_seed);
  QuadtreeGrid next = make_regrid(grid_, seeds);
  if (next == grid_) {
    last_regrid_ = RegridReport{};
    last_regrid_.copied = grid_.num_leaves();
    last_regrid_.old_cells = last_regrid_.new_cells = grid_.num_leaves();
    double mw = 0.0;
    for (int i = 0; i < grid_.num_leaves(); ++i) mw += state_.w[i] * grid_.area(grid_.leaves()[i]);
    last_regrid_.mass_before = last_regrid_.mass_after = mw;
    return;
  }

  QuadtreeGrid old_grid = std::move(grid_);
  GridState old_state = std::move(state_);
  rebuild_mesh(std::move(next));
  last_regrid_ = project_solution(old_grid, old_state, slopes, grid_, bathy_, state_);
  state_.g = cfg_.g;
}

double Simulation::min_depth() const {
  double h = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_.num_leaves(); ++i)
    if (grid_.active(i)) h = std::min(h, state_.w[i] - bathy_.center(i));
  return h;
}

double Simulation::water_volume() const {
  double m = 0.0;
  for (int i = 0; i < grid_.num_leaves(); ++i)
    if (grid_.active(i)) m += (state_.w[i] - bathy_.center(i)) * grid_.area(grid_.leaves()[i]);
  return m;
}

double Simulation::max_w() const {
  double w = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_.num_leaves(); ++i)
    if (grid_.active(i)) w = std::max(w, state_.w[i]);
  return w;
}

}  // namespace quadswe
