#pragma once

#include <functional>

#include "quadswe/boundary.hpp"
#include "quadswe/flux.hpp"
#include "quadswe/reconstruction.hpp"

namespace quadswe {

struct TimeControls {
  double cfl_sigma = 0.9;  // extra safety on top of the 1/4 CFL bound
  double t_end = 1.0;
  double dt_cap = 1.0;     // used when the whole domain is quiescent
};

/// Desingularization scale: max of the fourth powers of the smallest
/// present cell extents. Recomputed after every regrid.
double desing_epsilon(const QuadtreeGrid& grid);

/// Everything face-local for one reconstruction of one state: traces on
/// both sides of every sub-face, local speeds, and numerical fluxes.
struct StageEval {
  SlopeSet slopes;
  struct FaceTrace {
    FaceState L, R;
    Speeds sp;
  };
  std::vector<FaceTrace> traces;
  std::vector<Conserved> flux;
};

StageEval evaluate_faces(const QuadtreeGrid& grid, const FaceSet& faces, const GridState& state,
                         const BathymetryData& bathy, const BoundarySpec& bc, double eps);

/// Well-balanced source average for one cell, from the same face traces
/// the fluxes use (composite midpoint over split sides).
Conserved source_wb(const QuadtreeGrid& grid, const FaceSet& faces, const BathymetryData& bathy,
                    const GridState& state, const StageEval& eval, int cell);

/// Plain midpoint-rule source from corner bottom values. `as_printed`
/// repeats the x-direction difference in the third component.
Conserved source_naive(const QuadtreeGrid& grid, const BathymetryData& bathy,
                       const GridState& state, int cell, bool as_printed);

std::vector<Conserved> rhs_from(const QuadtreeGrid& grid, const FaceSet& faces,
                                const BathymetryData& bathy, const GridState& state,
                                const StageEval& eval, SourceMode mode);

double dt_from(const QuadtreeGrid& grid, const FaceSet& faces, const StageEval& eval, double sigma,
               double cap);

/// One-shot semi-discrete right-hand side of the scheme.
std::vector<Conserved> assemble_rhs(const QuadtreeGrid& grid, const FaceSet& faces,
                                    const GridState& state, const BathymetryData& bathy,
                                    const BoundarySpec& bc, SourceMode mode, double eps);

/// CFL bound (factor 1/4) scaled by sigma; returns `cap` when every face
/// speed is below 1e-14.
double max_stable_dt(const QuadtreeGrid& grid, const FaceSet& faces, const GridState& state,
                     const BathymetryData& bathy, const BoundarySpec& bc, double eps, double sigma,
                     double cap);

/// U + dt*rhs with a positivity assertion on the new depths (tolerance
/// -1e-13; anything lower means the CFL bound or the reconstruction was
/// violated).
GridState euler_step(const QuadtreeGrid& grid, const GridState& state,
                     const std::vector<Conserved>& rhs, double dt, const BathymetryData& bathy);

/// Three-stage SSP Runge-Kutta in Shu-Osher form. `rhs_fn` re-evaluates
/// the full reconstruction + flux pipeline on each stage state. Pass
/// null grid/bathy to skip the positivity assertions (scalar ODE tests).
GridState ssp_rk3_step(const GridState& state, double dt,
                       const std::function<std::vector<Conserved>(const GridState&)>& rhs_fn,
                       const QuadtreeGrid* grid = nullptr, const BathymetryData* bathy = nullptr);

}  // namespace quadswe
