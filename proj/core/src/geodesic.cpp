#include "morse_causal/geodesic.hpp"

#include <algorithm>

namespace morse {

Point4 gradient_flow(const MorseChart& chart, const Point4& z0, double t) {
  const Vec4 a = chart.coeffs();
  Point4 z{};
  for (int i = 0; i < 4; ++i) z[i] = std::exp(a[i] * t) * z0[i];
  return z;
}

double g_length(const MorseChart& chart, const Curve4& curve) {
  // Nodes and weights on [0, 1].
  static const double kNode[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5,
                                  0.5 + 0.5 * std::sqrt(0.6)};
  static const double kWeight[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < curve.z.size(); ++i) {
    const Vec4 d = curve.z[i + 1] - curve.z[i];
    if (is_zero(d)) continue;
    for (int k = 0; k < 3; ++k) {
      const Point4 z = curve.z[i] + scaled(d, kNode[k]);
      const double q = -metric_g(chart, z, d, d);
      const double scale = dot(d, d) * dot(gradient4(chart, z), gradient4(chart, z));
      if (q < -1e-12 * scale)
        throw Error(ErrorKind::NotTimelike,
                    "g_length: segment " + std::to_string(i) + " not timelike");
      total += kWeight[k] * std::sqrt(std::max(0.0, q));
    }
  }
  return total;
}

Vec4 xf_field(const MorseChart& chart, const Point4& z) {
  const Vec4 g = gradient4(chart, z);
  const double n2 = dot(g, g);
  if (n2 == 0.0) throw Error(ErrorKind::CriticalPoint, "xf_field at z = 0");
  return scaled(g, 1.0 / n2);
}

Curve4 gradient_line(const MorseChart& chart, const Point4& z0, double f1,
                     int n) {
  const double f0 = morse_f(chart, z0);
  if (!(f1 > f0) || n < 1)
    throw Error(ErrorKind::OutOfDomain, "gradient_line: need f1 > f0");
  // f along the flow is a sum of exponentials, increasing in t; bracket and
  // bisect the flow time where it reaches f1.
  auto f_at = [&](double t) { return morse_f(chart, gradient_flow(chart, z0, t)); };
  double hi = 1.0;
  while (f_at(hi) < f1) {
    hi *= 2.0;
    if (hi > 1e3) throw Error(ErrorKind::OutOfDomain, "gradient_line: f1 unreachable");
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f_at(mid) < f1 ? lo : hi) = mid;
  }
  const double t1 = hi;
  // Sample uniformly in f, which keeps chords short where the flow is fast.
  Curve4 c;
  double tprev = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double target = f0 + (f1 - f0) * k / n;
    double a = tprev, b = t1;
    if (k == 0) b = a;
    for (int it = 0; it < 200 && k > 0; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid == a || mid == b) break;
      (f_at(mid) < target ? a : b) = mid;
    }
    const double tk = k == 0 ? 0.0 : (k == n ? t1 : b);
    c.t.push_back(tk);
    c.z.push_back(gradient_flow(chart, z0, tk));
    tprev = tk;
  }
  classify_steps(chart, c);
  return c;
}

Point4 random_on_level(const MorseChart& chart, double level,
                       std::mt19937_64& rng) {
  if (level == 0.0)
    throw Error(ErrorKind::OutOfDomain, "random_on_level: level 0 is singular");
  std::normal_distribution<double> nd;
  for (;;) {
    Point4 z{nd(rng), nd(rng), nd(rng), nd(rng)};
    const double f = morse_f(chart, z);
    if (f == 0.0 || (f > 0.0) != (level > 0.0)) continue;
    return scaled(z, std::sqrt(level / f));
  }
}

Curve4 random_timelike_curve(const MorseChart& chart, double f0, double f1,
                             std::mt19937_64& rng, double fraction) {
  if (!(f1 > f0))
    throw Error(ErrorKind::OutOfDomain, "random_timelike_curve: need f1 > f0");
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> nd;
  Curve4 c;
  Point4 z = random_on_level(chart, f0, rng);
  c.t.push_back(0.0);
  c.z.push_back(z);
  constexpr int kMaxSteps = 100000;
  for (int k = 0; k < kMaxSteps; ++k) {
    const Vec4 g = gradient4(chart, z);
    const double gn = norm(g);
    if (gn < 1e-9)
      throw Error(ErrorKind::CriticalPoint, "random curve hit the critical point");
    const Vec4 gh = scaled(g, 1.0 / gn);
    // Random unit vector orthogonal to grad f.
    Vec4 o{nd(rng), nd(rng), nd(rng), nd(rng)};
    o = o - scaled(gh, dot(o, gh));
    o = scaled(o, 1.0 / norm(o));
    const double ang = fraction * chart.theta() * uni(rng);
    const Vec4 dir = scaled(gh, std::cos(ang)) + scaled(o, std::sin(ang));
    const double h = 0.004 * std::max(norm(z), 0.05);
    Point4 next = z + scaled(dir, h);
    const double fn = morse_f(chart, next);
    if (fn >= f1) {
      // f along the step is quadratic in s; take the root in (0, h].
      const Vec4 sq{dir[0] * dir[0], dir[1] * dir[1], dir[2] * dir[2],
                    dir[3] * dir[3]};
      const double qa = 0.5 * dot(chart.coeffs(), sq);
      const double qb = dot(g, dir);
      const double qc = morse_f(chart, z) - f1;
      double s;
      if (std::abs(qa) < 1e-300) {
        s = -qc / qb;
      } else {
        const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
        // Stable smaller positive root.
        s = (2.0 * -qc) / (qb + std::sqrt(disc));
      }
      next = z + scaled(dir, std::clamp(s, 0.0, h));
      c.t.push_back(c.t.back() + s);
      c.z.push_back(next);
      classify_steps(chart, c);
      return c;
    }
    c.t.push_back(c.t.back() + h);
    c.z.push_back(next);
    z = next;
  }
  throw Error(ErrorKind::OutOfDomain, "random_timelike_curve: f1 not reached");
}

}  // namespace morse
