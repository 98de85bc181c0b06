#pragma once

#include "quadswe/faces.hpp"
#include "quadswe/types.hpp"

namespace quadswe {

enum class BcKind : char { wall, zero_order, inflow };

struct BcRule {
  BcKind kind = BcKind::zero_order;
  // inflow state (w and velocities; discharges derive from local depth)
  double w_in = 0.0, u_in = 0.0, v_in = 0.0;
};

/// One rule per domain side. Masked-cell faces are always solid walls.
struct BoundarySpec {
  BcRule left, right, bottom, top;

  const BcRule& rule(BoundaryLoc loc) const {
    static const BcRule wall_rule{BcKind::wall, 0.0, 0.0, 0.0};
    switch (loc) {
      case BoundaryLoc::domain_left: return left;
      case BoundaryLoc::domain_right: return right;
      case BoundaryLoc::domain_bottom: return bottom;
      case BoundaryLoc::domain_top: return top;
      default: return wall_rule;
    }
  }

  static BoundarySpec all(BcKind k) {
    BoundarySpec b;
    b.left = b.right = b.bottom = b.top = {k, 0, 0, 0};
    return b;
  }
};

/// Virtual ghost-cell average across a boundary face: mirror state for
/// walls (normal discharge negated), copy for zero-order extrapolation,
/// prescribed state for inflow. `axis` is the face normal direction;
/// `b_center` is the interior cell's center bottom value.
inline Conserved ghost_average(const BcRule& rule, const Conserved& interior, int axis,
                               double b_center) {
  switch (rule.kind) {
    case BcKind::wall:
      return axis == 0 ? Conserved{interior.w, -interior.hu, interior.hv}
                       : Conserved{interior.w, interior.hu, -interior.hv};
    case BcKind::zero_order:
      return interior;
    case BcKind::inflow: {
      const double h = rule.w_in - b_center > 0.0 ? rule.w_in - b_center : 0.0;
      return {rule.w_in, h * rule.u_in, h * rule.v_in};
    }
  }
  return interior;
}

}  // namespace quadswe
