#include "morse_causal/chart.hpp"

#include <algorithm>

namespace morse {

MorseChart::MorseChart(double b, double zeta)
    : b_(b),
      zeta_(zeta),
      theta_(std::acos(1.0 / std::sqrt(zeta))),
      cos_theta_(1.0 / std::sqrt(zeta)) {}

MorseChart MorseChart::make(double b, double zeta) {
  if (!(b > 0.0) || !std::isfinite(b))
    throw Error(ErrorKind::InvalidChart, "b must be a positive finite number");
  if (!(zeta > 1.0) || !std::isfinite(zeta))
    throw Error(ErrorKind::InvalidChart, "zeta must be finite and > 1");
  return MorseChart(b, zeta);
}

const char* to_string(CausalClass c) {
  switch (c) {
    case CausalClass::TimelikePos: return "TimelikePos";
    case CausalClass::TimelikeNeg: return "TimelikeNeg";
    case CausalClass::Lightlike: return "Lightlike";
    case CausalClass::Spacelike: return "Spacelike";
  }
  return "Unknown";
}

double morse_f(const MorseChart& chart, const Point4& z) {
  return 0.5 * (-z[0] * z[0] - chart.b() * z[1] * z[1] + z[2] * z[2] +
                z[3] * z[3]);
}

Vec4 gradient4(const MorseChart& chart, const Point4& z) {
  return {-z[0], -chart.b() * z[1], z[2], z[3]};
}

double metric_g(const MorseChart& chart, const Point4& z, const Vec4& u,
                const Vec4& v) {
  const Vec4 g = gradient4(chart, z);
  return dot(g, g) * dot(u, v) - chart.zeta() * dot(g, u) * dot(g, v);
}

Classification classify4_with_angle(const MorseChart& chart, const Point4& z,
                                    const Vec4& v, double theta) {
  if (is_zero(v)) throw Error(ErrorKind::ZeroVector, "classify4: v == 0");
  const Vec4 g = gradient4(chart, z);
  const double gn = norm(g);
  if (gn == 0.0) return {CausalClass::Lightlike, 0.0};
  const double c = dot(v, g) / (norm(v) * gn);
  const double margin = std::abs(c) - std::cos(theta);
  if (std::abs(margin) <= kLightlikeTolerance)
    return {CausalClass::Lightlike, 0.0};
  if (margin < 0.0) return {CausalClass::Spacelike, margin};
  return {c > 0.0 ? CausalClass::TimelikePos : CausalClass::TimelikeNeg,
          margin};
}

Classification classify4(const MorseChart& chart, const Point4& z,
                         const Vec4& v) {
  return classify4_with_angle(chart, z, v, chart.theta());
}

namespace {

// Unit eigenvectors of the 2x2 matrix m for eigenvalue lambda.
Vec2 eigvec(const std::array<double, 4>& m, double lambda) {
  // Rows of (m - lambda I); pick the row with the larger norm.
  const Vec2 r0{m[0] - lambda, m[1]};
  const Vec2 r1{m[2], m[3] - lambda};
  const Vec2 r = norm(r0) >= norm(r1) ? r0 : r1;
  Vec2 v{-r[1], r[0]};
  const double n = norm(v);
  return n > 0.0 ? scaled(v, 1.0 / n) : Vec2{1.0, 0.0};
}

}  // namespace

std::optional<EigenLines> eigenlines2d(const MorseChart& chart) {
  const double b = chart.b();
  const double c = chart.cos_theta();
  const double s = std::sin(chart.theta());
  const double threshold = 2.0 * std::sqrt(b) / (1.0 + b);
  const double rel = (c - threshold) / threshold;
  constexpr double kRepeatTol = 1e-12;
  if (rel < -kRepeatTol) return std::nullopt;

  const bool repeated = std::abs(rel) <= kRepeatTol;
  // A+- = -Rot(+-theta) diag(1, b), row-major.
  const std::array<double, 4> ap{-c, s * b, -s, -c * b};
  const std::array<double, 4> am{-c, -s * b, s, -c * b};
  const double tr = -c * (1.0 + b);
  const double disc = repeated ? 0.0 : std::max(0.0, tr * tr - 4.0 * b);
  const double l1 = 0.5 * (tr + std::sqrt(disc));
  const double l2 = 0.5 * (tr - std::sqrt(disc));

  EigenLines out;
  out.repeated = repeated;
  out.plus = {eigvec(ap, l1), eigvec(ap, l2)};
  out.minus = {eigvec(am, l1), eigvec(am, l2)};
  return out;
}

bool Curve4::all_steps(CausalClass c) const {
  if (z.size() < 2 || step_class.size() + 1 != z.size()) return false;
  for (CausalClass s : step_class)
    if (s != c) return false;
  return true;
}

void classify_steps(const MorseChart& chart, Curve4& curve) {
  curve.step_class.clear();
  for (std::size_t i = 0; i + 1 < curve.z.size(); ++i) {
    const Vec4 d = curve.z[i + 1] - curve.z[i];
    const Point4 mid = scaled(curve.z[i] + curve.z[i + 1], 0.5);
    curve.step_class.push_back(is_zero(d) ? CausalClass::Lightlike
                                          : classify4(chart, mid, d).cls);
  }
}

void append(Curve4& head, const Curve4& tail) {
  if (tail.z.empty()) return;
  if (head.z.empty()) {
    head = tail;
    return;
  }
  const bool joint = head.z.back() == tail.z.front();
  // A separate joint gets one time unit and a placeholder class.
  const double shift = head.t.back() - tail.t.front() + (joint ? 0.0 : 1.0);
  if (!joint) head.step_class.push_back(CausalClass::Lightlike);
  for (std::size_t i = joint ? 1 : 0; i < tail.z.size(); ++i) {
    head.t.push_back(tail.t[i] + shift);
    head.z.push_back(tail.z[i]);
  }
  for (CausalClass c : tail.step_class) head.step_class.push_back(c);
}

}  // namespace morse
