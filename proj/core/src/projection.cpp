#include "morse_causal/projection.hpp"

#include <string>

namespace morse {

void require_zeta2(const MorseChart& chart, const char* where) {
  if (!chart.has_right_angle_cones())
    throw Error(ErrorKind::UnsupportedZeta,
                std::string(where) + " requires zeta = 2");
}

RadialProjection project_rho(const Point4& z) {
  const double y = std::hypot(z[2], z[3]);
  if (y == 0.0)
    throw Error(ErrorKind::OnStableManifold, "project_rho: y == 0");
  return {{z[0], z[1]}, y};
}

PlanePoint project_pi(const Vec2& x, double y) {
  if (!(y > 0.0)) throw Error(ErrorKind::NonpositiveY, "project_pi: y <= 0");
  return {x[0] / y, x[1] / y};
}

PlaneVec projected_gradient(const MorseChart& chart, const PlanePoint& p) {
  return {-2.0 * p[0], -(chart.b() + 1.0) * p[1]};
}

PlaneVec push_forward(const Point4& z, const Vec4& w) {
  const RadialProjection r = project_rho(z);
  const double ydot = (z[2] * w[2] + z[3] * w[3]) / r.y;
  const double y2 = r.y * r.y;
  return {(w[0] * r.y - z[0] * ydot) / y2, (w[1] * r.y - z[1] * ydot) / y2};
}

double barrier_form(const MorseChart& chart, const PlanePoint& p,
                    const PlaneVec& v) {
  return -2.0 * v[1] * p[0] + (chart.b() + 1.0) * v[0] * p[1];
}

double plane_residual_scale(const MorseChart& chart, const PlanePoint& p,
                            const PlaneVec& v) {
  const double b = chart.b();
  const double w = v[0] * p[1] - v[1] * p[0];
  return (v[0] * v[0] + v[1] * v[1] + w * w) *
         (p[0] * p[0] + b * b * p[1] * p[1] + 1.0);
}

double plane_residual(const MorseChart& chart, const PlanePoint& p,
                      const PlaneVec& v) {
  const double s = barrier_form(chart, p, v);
  return 2.0 * s * s - plane_residual_scale(chart, p, v);
}

ConeMembership projected_cone_test(const MorseChart& chart,
                                   const PlanePoint& p, const PlaneVec& v,
                                   double theta) {
  const double ct = std::cos(theta);
  const Vec3 g{-p[0], -chart.b() * p[1], 1.0};
  const Vec3 rho{p[0], p[1], 1.0};
  const Vec3 d{v[0], v[1], 0.0};
  const double gn = norm(g);
  const double rn2 = dot(rho, rho);
  if (std::abs(dot(rho, g)) / (std::sqrt(rn2) * gn) > ct) return {true, true};

  // e: component of d orthogonal to rho; the lifts of v sweep the open half
  // circle from -rho to rho through e.
  Vec3 e = d - scaled(rho, dot(d, rho) / rn2);
  const double en = norm(e);
  if (en == 0.0) return {false, false};
  e = scaled(e, 1.0 / en);
  const double gr = dot(g, rho) / std::sqrt(rn2);
  const double ge = dot(g, e);
  const double gp = std::sqrt(gr * gr + ge * ge);
  const bool inside = gp / gn > ct;
  return {inside && ge > 0.0, inside && ge < 0.0};
}

Classification classify_plane_generic(const MorseChart& chart,
                                      const PlanePoint& p, const PlaneVec& v) {
  if (is_zero(v)) throw Error(ErrorKind::ZeroVector, "classify_plane: v == 0");
  const Vec3 rho{p[0], p[1], 1.0};
  const Vec3 d{v[0], v[1], 0.0};
  const Vec3 g{-p[0], -chart.b() * p[1], 1.0};
  const Vec3 n = cross(d, rho);
  const double cn = dot(n, g) / (norm(n) * norm(g));
  // |cos angle(n, g)| < sin(theta) is the timelike band around pi/2.
  const double margin = std::sin(chart.theta()) - std::abs(cn);
  if (std::abs(margin) <= kLightlikeTolerance)
    return {CausalClass::Lightlike, 0.0};
  if (margin < 0.0) return {CausalClass::Spacelike, margin};
  const ConeMembership m = projected_cone_test(chart, p, v, chart.theta());
  if (m.past && !m.future) return {CausalClass::TimelikeNeg, margin};
  return {CausalClass::TimelikePos, margin};
}

Classification classify_plane(const MorseChart& chart, const PlanePoint& p,
                              const PlaneVec& v) {
  require_zeta2(chart, "classify_plane");
  if (is_zero(v)) throw Error(ErrorKind::ZeroVector, "classify_plane: v == 0");
  const double scale = plane_residual_scale(chart, p, v);
  const double r = plane_residual(chart, p, v) / scale;
  if (std::abs(r) <= kLightlikeTolerance) return {CausalClass::Lightlike, 0.0};
  if (r > 0.0) return {CausalClass::Spacelike, r};
  const ConeMembership m = projected_cone_test(chart, p, v, chart.theta());
  if (m.future) return {CausalClass::TimelikePos, r};
  if (m.past) return {CausalClass::TimelikeNeg, r};
  // Only reachable within rounding of the cone edge.
  const double o = dot(projected_gradient(chart, p), v);
  return {o >= 0.0 ? CausalClass::TimelikePos : CausalClass::TimelikeNeg, r};
}

const char* to_string(BarrierSign s) {
  switch (s) {
    case BarrierSign::PositiveBarrier: return "PositiveBarrier";
    case BarrierSign::NegativeBarrier: return "NegativeBarrier";
    case BarrierSign::NotBarrier: return "NotBarrier";
  }
  return "Unknown";
}

BarrierSign barrier_sign(const MorseChart& chart, const PlanePoint& p,
                         const PlaneVec& v) {
  if (is_zero(v)) throw Error(ErrorKind::ZeroVector, "barrier_sign: v == 0");
  if (is_timelike(classify_plane(chart, p, v).cls))
    return BarrierSign::NotBarrier;
  const double s = barrier_form(chart, p, v);
  if (s < 0.0) return BarrierSign::PositiveBarrier;
  if (s > 0.0) return BarrierSign::NegativeBarrier;
  return BarrierSign::NotBarrier;
}

}  // namespace morse
