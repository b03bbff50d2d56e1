#pragma once

// Reference formulas written straight from the definitions, kept apart from
// the library so tests do not check the code against itself.

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// Angle between v and grad f at z in R^4 for f = (-x1^2 - b x2^2 + y1^2 + y2^2)/2.
inline double angle_to_gradient(double b, const double z[4], const double v[4]) {
  const double g[4] = {-z[0], -b * z[1], z[2], z[3]};
  double gv = 0, gg = 0, vv = 0;
  for (int i = 0; i < 4; ++i) {
    gv += g[i] * v[i];
    gg += g[i] * g[i];
    vv += v[i] * v[i];
  }
  return std::acos(std::clamp(gv / std::sqrt(gg * vv), -1.0, 1.0));
}

// Bisection for a sign change of f on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// B^2 - A C from the raw graph criterion at slope-parametrized (t, x).
inline double raw_discriminant(double b, double t, double x) {
  const double G = t * t + b * b * x * x + 1.0;
  const double A = 8.0 * t * t - (1.0 + t * t) * G;
  const double B = x * t * (G - 4.0 * (b + 1.0));
  const double C = 2.0 * (b + 1.0) * (b + 1.0) * x * x - (1.0 + x * x) * G;
  return B * B - A * C;
}

// Left minus right side of the planar non-timelike inequality.
inline double raw_plane_residual(double b, double x1, double x2, double v1,
                                 double v2) {
  const double s = -2.0 * v2 * x1 + (b + 1.0) * v1 * x2;
  const double w = v1 * x2 - v2 * x1;
  return 2.0 * s * s -
         (v1 * v1 + v2 * v2 + w * w) * (x1 * x1 + b * b * x2 * x2 + 1.0);
}

// Brute force: is some (v, 0) + lambda rho strictly inside the 45 degree cone
// around +grad (future) or -grad (past) at the lift (x1, x2, 1)?
struct Cone {
  bool future;
  bool past;
};

inline Cone brute_cone(double b, double x1, double x2, double v1, double v2,
                       double half_angle = kPi / 4, int n = 40001,
                       double span = 200.0) {
  const double rho[3] = {x1, x2, 1.0};
  const double g[3] = {-x1, -b * x2, 1.0};
  const double gn = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
  const double c = std::cos(half_angle);
  Cone out{false, false};
  for (int k = 0; k < n; ++k) {
    // Denser near 0 where the interesting lambdas sit.
    const double u = -1.0 + 2.0 * k / (n - 1);
    const double lam = span * u * u * u;
    const double w[3] = {v1 + lam * rho[0], v2 + lam * rho[1], lam * rho[2]};
    const double wn = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    if (wn == 0) continue;
    const double cs = (w[0] * g[0] + w[1] * g[1] + w[2] * g[2]) / (wn * gn);
    if (cs > c) out.future = true;
    if (cs < -c) out.past = true;
  }
  return out;
}

}  // namespace oracle
