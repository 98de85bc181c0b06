#pragma once

#include "quadswe/types.hpp"

namespace quadswe {

/// One-sided face state after depth clamping and desingularization.
struct FaceState {
  double w = 0.0, hu = 0.0, hv = 0.0;  // hu, hv recomputed as h*u, h*v
  double h = 0.0, u = 0.0, v = 0.0;
};

struct Speeds {
  double plus = 0.0;   // >= 0
  double minus = 0.0;  // <= 0
};

/// One-sided local propagation speeds from the shallow-water eigenvalues,
/// clamped to include zero. For y-faces pass v in place of u.
Speeds local_speeds(double uL, double hL, double uR, double hR, double g);

/// Physical flux along one axis, written in surface/discharge variables.
Conserved phys_flux(const FaceState& s, double g, int axis);

/// Central-upwind numerical flux. Degenerate speed gaps (dry or quiescent
/// faces) fall back to the arithmetic flux mean, which is zero when both
/// sides are dry.
Conserved cu_flux(const FaceState& L, const FaceState& R, const Speeds& sp, double g, int axis);

enum class SourceMode : char { well_balanced, naive_as_printed, naive_y_fixed };

}  // namespace quadswe
