#pragma once

#include <functional>
#include <memory>
#include <string>

#include "quadswe/adaptivity.hpp"
#include "quadswe/integrator.hpp"
#include "quadswe/io.hpp"

namespace quadswe {

/// Full run description: either a built-in benchmark (see benchmarks.hpp)
/// or a custom setup from a config file.
struct RunConfig {
  std::string name = "custom";
  Rect domain{0, 0, 1, 1};
  int m = 6;
  double c_seed = 0.1;
  double g = 1.0;
  double t_end = 1.0;
  double sigma = 0.9;
  double dt_cap = 1.0;
  SourceMode source_mode = SourceMode::well_balanced;
  int regrid_every = 1;  // 0 disables adaptivity
  int init_level = 5;    // lattice level for the initial seeding scan (capped by m)
  BottomField bottom{[](double, double) { return 0.0; }, true};
  std::function<double(double, double)> w0 = [](double, double) { return 1.0; };
  std::function<double(double, double)> u0 = [](double, double) { return 0.0; };
  std::function<double(double, double)> v0 = [](double, double) { return 0.0; };
  BoundarySpec bc = BoundarySpec::all(BcKind::zero_order);
  std::function<bool(double, double)> mask;  // empty = whole rectangle active
  int output_every = 0;                      // solution dumps every k steps (0 = final only)
  std::string out_dir;
  int sample_nx = 0, sample_ny = 0;

  void validate() const;  // throws config_error
};

/// Initial seeding: a uniform base at init_level wherever the bottom is
/// not flat (so the initial interpolant resolves it), level-m seeds along
/// initial-surface jumps (adjacent-sample differences on the level-m
/// lattice), and moderate refinement along the geometry mask boundary.
std::vector<QuadtreeGrid::LeveledSeed> initial_seeds(const RunConfig& cfg);

struct StepInfo {
  int step = 0;
  double t = 0.0, dt = 0.0;
  double min_h = 0.0, mass = 0.0, max_w = 0.0;
  int cells = 0;
  bool regridded = false;
  RegridReport regrid;
};

/// Owns the moving parts of one simulation: grid, face decomposition,
/// bottom interpolant and state, rebuilt together on every regrid.
class Simulation {
 public:
  explicit Simulation(RunConfig cfg);

  /// One SSP-RK3 step (CFL-limited) followed by regridding when due.
  StepInfo step();

  bool done() const { return t_ >= cfg_.t_end; }
  double time() const { return t_; }
  int step_count() const { return nstep_; }

  const QuadtreeGrid& grid() const { return grid_; }
  const FaceSet& faces() const { return faces_; }
  const BathymetryData& bathy() const { return bathy_; }
  const GridState& state() const { return state_; }
  const RunConfig& config() const { return cfg_; }
  double epsilon() const { return eps_; }

  double min_depth() const;
  double water_volume() const;  // sum (w - B_center) * area over active cells
  double max_w() const;

 private:
  void rebuild_mesh(QuadtreeGrid&& g);
  void regrid();

  RunConfig cfg_;
  RegridReport last_regrid_;
  QuadtreeGrid grid_;
  FaceSet faces_;
  BathymetryData bathy_;
  GridState state_;
  double eps_ = 0.0;
  double t_ = 0.0;
  int nstep_ = 0;
};

}  // namespace quadswe
