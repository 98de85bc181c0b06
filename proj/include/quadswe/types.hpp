#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace quadswe {

/// Conserved variables per cell: water surface w, unit discharges hu, hv.
struct Conserved {
  double w = 0.0;
  double hu = 0.0;
  double hv = 0.0;

  Conserved& operator+=(const Conserved& o) {
    w += o.w;
    hu += o.hu;
    hv += o.hv;
    return *this;
  }
  friend Conserved operator+(Conserved a, const Conserved& b) { return a += b; }
  friend Conserved operator*(double s, const Conserved& u) {
    return {s * u.w, s * u.hu, s * u.hv};
  }
  friend Conserved operator-(const Conserved& a, const Conserved& b) {
    return {a.w - b.w, a.hu - b.hu, a.hv - b.hv};
  }
};

struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double width = 1.0;
  double height = 1.0;
};

/// Bad user input (CLI flags, config files, malformed data files).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// NaN/Inf fluxes, positivity breach, CFL violation and friends.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace quadswe
