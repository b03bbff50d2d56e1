#pragma once

#include "morse_causal/chart.hpp"

namespace morse {

// Points of the affine plane y = 1 are stored as (x1, x2); the embedded
// 3-vector is (x1, x2, 1). Plane vectors embed as (v1, v2, 0).
using PlanePoint = Vec2;
using PlaneVec = Vec2;

struct RadialProjection {
  Vec2 x;    // (x1, x2)
  double y;  // |(y1, y2)|
};

RadialProjection project_rho(const Point4& z);
PlanePoint project_pi(const Vec2& x, double y);

// Projection of grad f to the plane at height y = 1.
PlaneVec projected_gradient(const MorseChart& chart, const PlanePoint& p);

// Pushes a 4-vector w at z forward through both projections.
PlaneVec push_forward(const Point4& z, const Vec4& w);

// Non-timelike residual for theta = pi/4:
//   2 s^2 - (v1^2 + v2^2 + (v1 x2 - v2 x1)^2)(x1^2 + b^2 x2^2 + 1)
// with s = -2 v2 x1 + (b+1) v1 x2. Positive means spacelike, zero lightlike,
// negative timelike.
double plane_residual(const MorseChart& chart, const PlanePoint& p,
                      const PlaneVec& v);

// The second factor above; always positive for v != 0, used as scale.
double plane_residual_scale(const MorseChart& chart, const PlanePoint& p,
                            const PlaneVec& v);

// s = <v x rho, grad f> in coordinates.
double barrier_form(const MorseChart& chart, const PlanePoint& p,
                    const PlaneVec& v);

// Orientation-resolved membership of v in the projected cones for an
// arbitrary cone half-angle. Inside Omega both flags are set.
struct ConeMembership {
  bool future;
  bool past;
};

ConeMembership projected_cone_test(const MorseChart& chart,
                                   const PlanePoint& p, const PlaneVec& v,
                                   double theta);

// Angle form of the projected test, valid for any zeta: v is spacelike iff
// angle(v x rho, grad f) lies in [0, pi/2 - theta) or (pi/2 + theta, pi].
// Returns Spacelike, Lightlike, or Timelike(Pos/Neg via projected_cone_test).
Classification classify_plane_generic(const MorseChart& chart,
                                      const PlanePoint& p, const PlaneVec& v);

// Quartic-residual classification, only for zeta = 2. Inside Omega every
// direction is timelike in both orientations and is reported TimelikePos.
// The margin is the residual divided by its scale (negative when timelike).
Classification classify_plane(const MorseChart& chart, const PlanePoint& p,
                              const PlaneVec& v);

enum class BarrierSign { PositiveBarrier, NegativeBarrier, NotBarrier };

const char* to_string(BarrierSign s);

BarrierSign barrier_sign(const MorseChart& chart, const PlanePoint& p,
                         const PlaneVec& v);

// Throws UnsupportedZeta unless the chart has right-angle cones.
void require_zeta2(const MorseChart& chart, const char* where);

}  // namespace morse
