#include "quadswe/flux.hpp"

#include <algorithm>
#include <cmath>

namespace quadswe {

Speeds local_speeds(double uL, double hL, double uR, double hR, double g) {
  if (hL < 0.0 || hR < 0.0) throw std::invalid_argument("local_speeds: negative depth");
  const double cL = std::sqrt(g * hL);
  const double cR = std::sqrt(g * hR);
  Speeds s;
  s.plus = std::max({uR + cR, uL + cL, 0.0});
  s.minus = std::min({uR - cR, uL - cL, 0.0});
  return s;
}

Conserved phys_flux(const FaceState& s, double g, int axis) {
  const double p = 0.5 * g * s.h * s.h;
  if (axis == 0) return {s.hu, s.hu * s.u + p, s.hu * s.v};
  return {s.hv, s.hv * s.u, s.hv * s.v + p};
}

Conserved cu_flux(const FaceState& L, const FaceState& R, const Speeds& sp, double g, int axis) {
  const double ap = sp.plus, am = sp.minus;
  const double gap = ap - am;
  const Conserved FL = phys_flux(L, g, axis);
  const Conserved FR = phys_flux(R, g, axis);
  if (gap < 1e-10 * std::max({1.0, ap, -am})) {
    return {0.5 * (FL.w + FR.w), 0.5 * (FL.hu + FR.hu), 0.5 * (FL.hv + FR.hv)};
  }
  const double diss = ap * am / gap;
  return {(ap * FL.w - am * FR.w) / gap + diss * (R.w - L.w),
          (ap * FL.hu - am * FR.hu) / gap + diss * (R.hu - L.hu),
          (ap * FL.hv - am * FR.hv) / gap + diss * (R.hv - L.hv)};
}

}  // namespace quadswe
