#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "morse_causal/barrier.hpp"

namespace morse {

enum class Orientation { Future, Past };
enum class Approximation { Inner, Outer };

struct Domain {
  double xmin = -4.0, xmax = 4.0, ymin = -4.0, ymax = 4.0;

  bool contains(const PlanePoint& p) const {
    return p[0] >= xmin && p[0] <= xmax && p[1] >= ymin && p[1] <= ymax;
  }
};

struct ReachGrid {
  Domain domain;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> labels;  // row-major, 1 = Reached
  PlanePoint seed{0.0, 0.0};
  Orientation orientation = Orientation::Past;
  Approximation approximation = Approximation::Inner;
  double margin = 0.0;

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * nx + i;
  }
  bool reached(int i, int j) const { return labels[index(i, j)] != 0; }
  PlanePoint center(int i, int j) const;
  // Cell containing p; the caller checks domain.contains(p) first.
  std::pair<int, int> cell_of(const PlanePoint& p) const;
  std::size_t count() const;
};

// Discrete past or future of `seed`: the closure of the seed cell under
// steps to any of 16 neighbours whose direction lies in the projected cone
// at the step midpoint. Cones use half-angle theta - margin (Inner) or
// theta + margin (Outer).
ReachGrid reach_grid(const MorseChart& chart, const PlanePoint& seed,
                     Orientation orientation, const Domain& domain, int nx,
                     int ny, double margin,
                     Approximation approx = Approximation::Inner);

std::size_t shared_cells(const ReachGrid& a, const ReachGrid& b);

// Push-off from q = (sqrt2 + 1, 0, 1, 0) along Rot(pi/4 - eps_hat) grad f in
// the x1 y1 plane up to the crossing of x1 = 0.
struct EscapeResult {
  Curve4 curve;
  double crossing_height = 0.0;
  bool below_target = false;  // crossing height < eps^2
};

EscapeResult hyperbolic_escape(const MorseChart& chart, double eps,
                               double eps_hat);

// The generator of the lightlike push-off at eps_hat = 0, applied to v in
// the (x1, y1) plane.
Vec2 lightlike_rotation_field(const Vec2& v);

// Logarithmic spiral in the plane x = 0 from radius r0 at angle phi0 to radius
// r1 at angle phi0 + dphi. Throws PitchTooSteep unless
// atan(|dphi| / ln(r1 / r0)) < theta.
Curve4 spiral_connect(const MorseChart& chart, double r0, double r1,
                      double dphi, double phi0 = 0.0);

struct PushUpResult {
  Curve4 curve;
  double eps = 0.0;
  double eps_hat = 0.0;
  double scale_growth = 0.0;
  double crossing_height = 0.0;
};

// Timelike curve from q to a target whose projection lies in Omega+:
// escape, radial, spiral, then a lifted straight path in the plane and a
// final radial dilation.
PushUpResult push_up(const MorseChart& chart, const Point4& target);

// Projection of q and of p = (-(sqrt2 - 1), 0, 1, 0).
inline constexpr PlanePoint kQProjection{kSqrt2 + 1.0, 0.0};
inline constexpr PlanePoint kPProjection{-(kSqrt2 - 1.0), 0.0};

struct SteeringOptions {
  double step = 1e-3;
  double duration = 8.0;
  double resample = 0.05;
  double u_lo = 0.05;
  double u_hi = 0.95;
  Domain domain;
};

// Random timelike curve in the plane with piecewise-constant steering inside
// the open projected cone. Tangents are the velocities.
PlaneCurve steered_curve(const MorseChart& chart, const PlanePoint& start,
                         Orientation orientation, std::mt19937_64& rng,
                         const SteeringOptions& opt = {});

struct CrossingReport {
  bool forbidden = false;
  double t = 0.0;  // curve parameter of the first forbidden crossing
  PlanePoint at{0.0, 0.0};
  int crossings = 0;
};

// Checks every transversal intersection of `curve` with the barrier for the
// allowed orientation. Past curves are tested with reversed velocity.
CrossingReport crossing_check(const BarrierCertificate& cert,
                              const PlaneCurve& curve,
                              Orientation orientation);

}  // namespace morse
