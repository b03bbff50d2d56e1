#pragma once

#include <string>
#include <utility>
#include <vector>

#include "morse_causal/projection.hpp"

namespace morse {

enum class RegionLabel { OmegaPlus, OmegaMinus, ScriptC, Boundary };

const char* to_string(RegionLabel r);

// 2(-x1^2 - b x2^2 + 1)^2 - (x1^2 + b^2 x2^2 + 1)(x1^2 + x2^2 + 1).
// Positive where rho is timelike (Omega), negative on C, zero on the boundary.
double boundary_residual(const MorseChart& chart, const PlanePoint& p);

// Gradient of boundary_residual, used for curve normals.
Vec2 boundary_residual_gradient(const MorseChart& chart, const PlanePoint& p);

RegionLabel classify_region(const MorseChart& chart, const PlanePoint& p);

// Positive roots of b^2 x^4 - (b^2 + 4b + 1) x^2 + 1 = 0, lower first.
std::pair<double, double> beta_roots(double b);

// Apices on the x1-axis; independent of b.
inline constexpr double kInnerApex = kSqrt2 - 1.0;
inline constexpr double kOuterApex = kSqrt2 + 1.0;

enum class BoundaryComponent { Oval, RightArc, LeftArc, TopArc, BottomArc };

const char* to_string(BoundaryComponent c);
BoundaryComponent parse_component(const std::string& name);

struct BoundarySample {
  double s;  // trace parameter (angle for the oval, signed position for arcs)
  PlanePoint p;
  double residual;
};

struct BoundaryTrace {
  BoundaryComponent component;
  std::vector<BoundarySample> samples;
};

// Arcs are truncated to |p| <= kTraceRadius.
inline constexpr double kTraceRadius = 20.0;

BoundaryTrace trace_boundary(const MorseChart& chart,
                             BoundaryComponent component, int n_samples);

// Unit tangent of the boundary at p (perpendicular to the residual gradient),
// oriented counter-clockwise around the origin.
PlaneVec boundary_tangent(const MorseChart& chart, const PlanePoint& p);

}  // namespace morse
