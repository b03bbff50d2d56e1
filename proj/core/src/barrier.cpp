#include "morse_causal/barrier.hpp"

#include <algorithm>
#include <limits>

#include "morse_causal/parallel.hpp"
#include "morse_causal/regions.hpp"

namespace morse {

namespace {

MorseChart chart_for(double b) { return MorseChart::make(b, 2.0); }

double phi_of(double b, double t) {
  return (b * b - 4.0 * b + 1.0) * (1.0 + t * t) + 8.0 * b;
}

double psi_of(double t) { return t * t * t * t - 6.0 * t * t + 1.0; }

}  // namespace

QuadCoeffs quad_coeffs(const MorseChart& chart, double t, double x) {
  require_zeta2(chart, "quad_coeffs");
  const double b = chart.b();
  const double G = t * t + b * b * x * x + 1.0;
  return {8.0 * t * t - (1.0 + t * t) * G, x * t * (G - 4.0 * (b + 1.0)),
          2.0 * (b + 1.0) * (b + 1.0) * x * x - (1.0 + x * x) * G, G};
}

double discriminant(const MorseChart& chart, double t, double x) {
  const QuadCoeffs q = quad_coeffs(chart, t, x);
  const double b = chart.b();
  const double direct = q.B * q.B - q.A * q.Cq;
  const double x2 = x * x;
  const double factored =
      -q.G * (x2 * x2 * b * b - x2 * phi_of(b, t) + psi_of(t));
  // Measure the disagreement against the unreduced terms: A and Cq are each
  // a difference that can cancel to nothing while their parts stay O(1).
  const double a_terms = 8.0 * t * t + (1.0 + t * t) * q.G;
  const double c_terms = 2.0 * (b + 1.0) * (b + 1.0) * x2 + (1.0 + x2) * q.G;
  const double scale = std::max(q.B * q.B + a_terms * c_terms, 1e-300);
  if (std::abs(direct - factored) > 1e-6 * scale)
    throw Error(ErrorKind::FormMismatch, "discriminant forms disagree");
  return factored;
}

std::optional<std::pair<double, double>> v_range(const MorseChart& chart,
                                                 double t, double x) {
  const QuadCoeffs q = quad_coeffs(chart, t, x);
  if (std::abs(q.A) < 1e-12)
    throw Error(ErrorKind::DegenerateA, "v_range: |A| < 1e-12");
  const double d = discriminant(chart, t, x);
  if (d < 0.0) return std::nullopt;
  const double mid = -q.B / q.A;
  const double half = std::sqrt(d) / std::abs(q.A);
  return std::make_pair(mid - half, mid + half);
}

double x_plus_minus(double b, double t) {
  if (!(b > 0.0)) throw Error(ErrorKind::OutOfDomain, "x_plus_minus: b <= 0");
  const double psi = psi_of(t);
  if (psi < 0.0)
    throw Error(ErrorKind::OutOfDomain, "x_plus_minus: t^4 - 6t^2 + 1 < 0");
  const double phi = phi_of(b, t);
  const double disc = phi * phi - 4.0 * b * b * psi;
  if (disc < 0.0 || phi <= 0.0)
    throw Error(ErrorKind::OutOfDomain, "x_plus_minus: no real root");
  // Rationalized form of (phi - sqrt(disc)) / (2 b^2).
  return std::sqrt(2.0 * psi / (phi + std::sqrt(disc)));
}

double x_plus_minus_slope(double b, double t) {
  constexpr double h = 1e-6;
  return (x_plus_minus(b, t + h) - x_plus_minus(b, t - h)) / (2.0 * h);
}

double box_lower_bound(double b, double t) {
  const double psi = psi_of(t);
  if (psi < 0.0)
    throw Error(ErrorKind::OutOfDomain, "box_lower_bound: outside domain");
  return std::sqrt(psi / phi_of(b, t));
}

CriterionSpectrum criterion_spectrum(const MorseChart& chart,
                                     const PlanePoint& p) {
  const QuadCoeffs q = quad_coeffs(chart, p[0], p[1]);
  const double a = q.Cq, c = q.B, d = q.A;
  const double m = 0.5 * (a + d);
  const double r = std::hypot(0.5 * (a - d), c);
  const double ang = 0.5 * std::atan2(2.0 * c, a - d);
  const Vec2 e2{std::cos(ang), std::sin(ang)};
  return {m - r, m + r, {-e2[1], e2[0]}, e2};
}

double holder_gradient(double b, double t, double x) {
  const MorseChart chart = chart_for(b);
  auto ratio = [&](double xx) {
    const QuadCoeffs q = quad_coeffs(chart, t, xx);
    return discriminant(chart, t, xx) / (q.A * q.A);
  };
  const double h = 1e-7 * x;
  return (ratio(x + h) - ratio(x - h)) / (2.0 * h);
}

double holder_gradient_min_ratio(double b, int nt, int nx) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nt; ++i) {
    const double t = -0.1 + 0.1 * i / (nt - 1);
    for (int j = 1; j + 1 < nx; ++j) {
      const double x = (0.75 + 0.75 * j / (nx - 1)) / b;
      best = std::min(best, holder_gradient(b, t, x) / b);
    }
  }
  return best;
}

HyperbolaCoeffs hyperbola_coeffs(double b, double beta, double a) {
  const double b2 = b * b, be2 = beta * beta, be4 = be2 * be2;
  return {a * a * be2 * (b2 - 4.0 * b + 1.0) - a * a * a * b2 * be4 - a,
          -(a * a + a) * b2 * be4 + (2.0 * a * b2 - a * a - 4.0 * a - 1.0) * be2 -
              (1.0 + a),
          -b2 * be4 + (b2 + 4.0 * b + 1.0) * be2 - 1.0};
}

const char* to_string(Verdict v) {
  return v == Verdict::Verified ? "Verified" : "Falsified";
}

double sample_residual(const MorseChart& chart, Parametrization param,
                       const CurveSample& s) {
  if (param == Parametrization::Graph) {
    if (std::abs(s.tangent[0]) < 1e-12 * norm(s.tangent) ||
        s.tangent[0] == 0.0)
      throw Error(ErrorKind::VerticalTangent,
                  "graph sample with vertical tangent at t=" +
                      std::to_string(s.t));
    const double v = s.tangent[1] / s.tangent[0];
    const QuadCoeffs q = quad_coeffs(chart, s.p[0], s.p[1]);
    return q.A * v * v + 2.0 * q.B * v + q.Cq;
  }
  const double n = norm(s.tangent);
  if (n == 0.0) throw Error(ErrorKind::ZeroVector, "curve tangent is zero");
  return plane_residual(chart, s.p, scaled(s.tangent, 1.0 / n));
}

CertificatePiece make_piece(const MorseChart& chart, std::string name,
                            PlaneCurve curve) {
  CertificatePiece piece;
  piece.name = std::move(name);
  const std::size_t n = curve.samples.size();
  piece.residuals.resize(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      piece.residuals[i] = sample_residual(chart, curve.param, curve.samples[i]);
  });
  piece.min_residual = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (piece.residuals[i] < piece.min_residual) {
      piece.min_residual = piece.residuals[i];
      piece.argmin_t = curve.samples[i].t;
    }
  }
  piece.curve = std::move(curve);
  return piece;
}

void finalize(BarrierCertificate& cert) {
  cert.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& p : cert.pieces) {
    if (p.min_residual < cert.min_margin) {
      cert.min_margin = p.min_residual;
      cert.argmin_piece = p.name;
      cert.argmin_t = p.argmin_t;
    }
  }
  bool ok = !cert.pieces.empty() && cert.min_margin >= -kResidualTolerance;
  for (const auto& [name, pass] : cert.checks) ok = ok && pass;
  cert.verdict = ok ? Verdict::Verified : Verdict::Falsified;
}

BarrierCertificate verify_curve(const MorseChart& chart,
                                const PlaneCurve& curve) {
  BarrierCertificate cert;
  cert.params["b"] = chart.b();
  cert.params["samples"] = static_cast<double>(curve.samples.size());
  cert.pieces.push_back(make_piece(chart, "curve", curve));
  finalize(cert);
  return cert;
}

namespace {

// Samples of an analytic graph x(t) with slope x'(t).
PlaneCurve sample_graph(const std::function<double(double)>& x,
                        const std::function<double(double)>& dx, double t0,
                        double t1, int n) {
  PlaneCurve c;
  c.param = Parametrization::Graph;
  c.samples.resize(n);
  for (int k = 0; k < n; ++k) {
    const double t = k + 1 == n ? t1 : t0 + (t1 - t0) * k / (n - 1);
    c.samples[k] = {t, {t, x(t)}, {1.0, dx(t)}};
  }
  return c;
}

// Refines the residual minimum of an analytic graph piece around its argmin,
// tripling density three times. Returns the smallest value seen.
double refine_min(const MorseChart& chart,
                  const std::function<double(double)>& x,
                  const std::function<double(double)>& dx, double t_center,
                  double spacing, double t_lo, double t_hi) {
  double best = std::numeric_limits<double>::infinity();
  double c = t_center, h = spacing;
  for (int round = 0; round < 3; ++round) {
    const double lo = std::max(t_lo, c - 2.0 * h), hi = std::min(t_hi, c + 2.0 * h);
    h /= 3.0;
    double arg = c;
    for (double t = lo; t <= hi; t += h) {
      const CurveSample s{t, {t, x(t)}, {1.0, dx(t)}};
      const double r = sample_residual(chart, Parametrization::Graph, s);
      if (r < best) best = r, arg = t;
    }
    c = arg;
  }
  return best;
}

}  // namespace

BarrierCertificate verify_hyperbola(double b, double beta, double a,
                                    double t_max, int n) {
  if (!(beta > 0.0) || !(a > 0.0))
    throw Error(ErrorKind::OutOfDomain, "verify_hyperbola: beta, a > 0");
  if (n < 2 || !(t_max > 0.0))
    throw Error(ErrorKind::OutOfDomain, "verify_hyperbola: bad sampling");
  const MorseChart chart = chart_for(b);
  auto x = [=](double t) { return beta * std::sqrt(1.0 + a * t * t); };
  auto dx = [=](double t) { return a * beta * t / std::sqrt(1.0 + a * t * t); };

  BarrierCertificate cert;
  cert.params = {{"b", b}, {"beta", beta}, {"a", a}, {"t_min", 0.0},
                 {"t_max", t_max}, {"samples", static_cast<double>(n)}};
  CertificatePiece piece =
      make_piece(chart, "hyperbola", sample_graph(x, dx, 0.0, t_max, n));
  const double refined = refine_min(chart, x, dx, piece.argmin_t,
                                    t_max / (n - 1), 0.0, t_max);
  if (refined < piece.min_residual) piece.min_residual = refined;
  cert.pieces.push_back(std::move(piece));

  const HyperbolaCoeffs c = hyperbola_coeffs(b, beta, a);
  cert.params["c4"] = c.c4;
  cert.params["c2"] = c.c2;
  cert.params["c0"] = c.c0;
  // With u = t^2 >= t_max^2 the polynomial c4 u^2 + c2 u + c0 stays positive
  // when c4 > 0 and its minimum over that ray is positive.
  bool tail = c.c4 > 0.0;
  if (tail) {
    const double u = std::max(t_max * t_max, -c.c2 / (2.0 * c.c4));
    tail = c.c4 * u * u + c.c2 * u + c.c0 > 0.0;
  }
  cert.checks["tail_beyond_t_max"] = tail;
  // Reported only: the sufficient condition is not required for Verified.
  cert.params["coefficients_nonnegative"] =
      (c.c4 >= 0.0 && c.c2 >= 0.0 && c.c0 >= 0.0) ? 1.0 : 0.0;
  finalize(cert);
  cert.sign = BarrierSign::NegativeBarrier;
  return cert;
}

PlaneCurve interpolation_curve(double b, double a, double t0, double t1,
                               int n) {
  if (a < 0.0) throw Error(ErrorKind::OutOfDomain, "interpolation: a < 0");
  if (!(t1 > t0) || n < 2)
    throw Error(ErrorKind::OutOfDomain, "interpolation: bad interval");
  auto x = [=](double t) { return x_plus_minus(b, t) + a * (t - t0) * (t - t0); };
  auto dx = [=](double t) {
    return x_plus_minus_slope(b, t) + 2.0 * a * (t - t0);
  };
  return sample_graph(x, dx, t0, t1, n);
}

double DriftCurve::at(double s) const {
  if (t.empty() || s <= t.front()) return 0.0;
  if (s >= t.back()) return X.back();
  const auto it = std::upper_bound(t.begin(), t.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - t.begin());
  const double w = (s - t[j - 1]) / (t[j] - t[j - 1]);
  return (1.0 - w) * X[j - 1] + w * X[j];
}

DriftCurve drift_solution(const DriftField& V, double c_lo, double c_hi,
                          double T, double t_end, int n_steps) {
  if (!(c_lo > 0.0) || !(c_hi >= c_lo))
    throw Error(ErrorKind::OutOfDomain, "drift: need 0 < c_lo <= c_hi");
  if (!(t_end > T) || n_steps < 1)
    throw Error(ErrorKind::OutOfDomain, "drift: need t_end > T");
  // u = sqrt(X) turns X' = V(X) into u' = V(u^2) / (2u), regular at u = 0
  // for fields in the envelope. A tiny floor picks the departing branch.
  constexpr double kFloor = 1e-100;
  auto rhs = [&](double u, double t) {
    const double uu = std::max(u, kFloor);
    const double x = uu * uu;
    const double v = V(x, t);
    const double sq = uu;
    if (v < c_lo * sq * (1.0 - 1e-12) ||
        (std::isfinite(c_hi) && v > c_hi * sq * (1.0 + 1e-12)))
      throw Error(ErrorKind::EnvelopeViolated,
                  "V leaves the envelope at x=" + std::to_string(x) +
                      ", t=" + std::to_string(t));
    return v / (2.0 * uu);
  };
  DriftCurve out;
  out.t.reserve(n_steps + 1);
  out.X.reserve(n_steps + 1);
  const double h = (t_end - T) / n_steps;
  double u = 0.0;
  out.t.push_back(T);
  out.X.push_back(0.0);
  for (int k = 0; k < n_steps; ++k) {
    const double t = T + k * h;
    const double k1 = rhs(u, t);
    const double k2 = rhs(u + 0.5 * h * k1, t + 0.5 * h);
    const double k3 = rhs(u + 0.5 * h * k2, t + 0.5 * h);
    const double k4 = rhs(u + h * k3, t + h);
    u += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    out.t.push_back(k + 1 == n_steps ? t_end : T + (k + 1) * h);
    out.X.push_back(u * u);
  }
  return out;
}

double holder_drift_speed(double b, double t, double xi) {
  const MorseChart chart = chart_for(b);
  const double x = x_plus_minus(b, t) + xi;
  const auto r = v_range(chart, t, x);
  const double vplus = r ? r->second : -quad_coeffs(chart, t, x).B /
                                           quad_coeffs(chart, t, x).A;
  return vplus - x_plus_minus_slope(b, t);
}

const char* to_string(Construction c) {
  return c == Construction::HolderField ? "field" : "literal";
}

Construction parse_construction(const std::string& s) {
  if (s == "field") return Construction::HolderField;
  if (s == "literal") return Construction::Literal;
  throw Error(ErrorKind::Parse, "construction must be 'field' or 'literal'");
}

namespace {

constexpr double kJoinT = -0.1;
constexpr double kContinuityTol = 1e-6;

// Direction inside the barrier sector at p: the sector axis e2 rotated by
// fraction * half-width towards lower slopes (clockwise), oriented along prev.
Vec2 departure_direction(const MorseChart& chart, const PlanePoint& p,
                         const Vec2& prev, double fraction) {
  const CriterionSpectrum s = criterion_spectrum(chart, p);
  Vec2 e2 = s.e2;
  if (dot(e2, prev) < 0.0) e2 = scaled(e2, -1.0);
  Vec2 d = e2;
  if (s.l2 > 0.0) {
    const double half = s.l1 < 0.0 ? std::atan(std::sqrt(s.l2 / -s.l1))
                                   : 0.5 * kPi;
    const double a = fraction * half;
    Vec2 c = scaled(e2, std::cos(a)) + scaled(s.e1, std::sin(a));
    if (cross(e2, c) > 0.0)
      c = scaled(e2, std::cos(a)) - scaled(s.e1, std::sin(a));
    d = c;
  }
  if (dot(d, prev) < 0.0) d = scaled(d, -1.0);
  return scaled(d, 1.0 / norm(d));
}

// Integrates the departure field from p by RK4 in arclength up to x1 = -0.1.
PlaneCurve departure_curve(const MorseChart& chart, double fraction) {
  constexpr double ds = 3e-5;
  constexpr int kMaxSteps = 200000;
  PlaneCurve c;
  c.param = Parametrization::Free;
  PlanePoint p{-kInnerApex, 0.0};
  Vec2 prev{0.0, 1.0};
  double s = 0.0;
  auto step = [&](const PlanePoint& q, const Vec2& pr, double h) {
    const Vec2 k1 = departure_direction(chart, q, pr, fraction);
    const Vec2 k2 = departure_direction(chart, q + scaled(k1, 0.5 * h), k1, fraction);
    const Vec2 k3 = departure_direction(chart, q + scaled(k2, 0.5 * h), k1, fraction);
    const Vec2 k4 = departure_direction(chart, q + scaled(k3, h), k1, fraction);
    return q + scaled(k1 + scaled(k2, 2.0) + scaled(k3, 2.0) + k4, h / 6.0);
  };
  for (int k = 0; k < kMaxSteps; ++k) {
    const Vec2 d = departure_direction(chart, p, prev, fraction);
    c.samples.push_back({s, p, d});
    if (p[0] >= kJoinT) break;
    PlanePoint next = step(p, d, ds);
    double h = ds;
    if (next[0] > kJoinT) {
      // Secant iterations on the step length to land on x1 = -0.1.
      double h0 = 0.0, f0 = p[0] - kJoinT, h1 = ds, f1 = next[0] - kJoinT;
      for (int it = 0; it < 20 && std::abs(f1) > 1e-15; ++it) {
        const double h2 = h1 - f1 * (h1 - h0) / (f1 - f0);
        h0 = h1, f0 = f1, h1 = h2;
        next = step(p, d, h1);
        f1 = next[0] - kJoinT;
      }
      next[0] = kJoinT;
      h = h1;
    }
    p = next;
    prev = d;
    s += h;
  }
  if (c.samples.back().p[0] < kJoinT)
    throw Error(ErrorKind::GapMismatch,
                "departure curve does not reach x1 = -0.1");
  return c;
}

// Upper oval arc from p to (-0.1, x_plus_minus(-0.1)), as the curve itself.
PlaneCurve boundary_arc(const MorseChart& chart, int n) {
  PlaneCurve c;
  c.param = Parametrization::Free;
  const double t0 = -kInnerApex;
  for (int k = 0; k < n; ++k) {
    const double u = static_cast<double>(k) / (n - 1);
    const double t = k + 1 == n ? kJoinT : t0 + (kJoinT - t0) * u * u;
    const double x = k == 0 ? 0.0 : x_plus_minus(chart.b(), t);
    const PlanePoint p{t, x};
    // Counter-clockwise around the origin runs downwards here; flip it.
    c.samples.push_back({t, p, scaled(boundary_tangent(chart, p), -1.0)});
  }
  return c;
}

struct Base {
  std::vector<double> t, x, dx;
};

// Base graph on [-0.1, 0] for the interpolation piece.
Base base_graph(const MorseChart& chart, Construction mode, double x_start,
                double fraction, int n) {
  Base base;
  base.t.resize(n);
  base.x.resize(n);
  base.dx.resize(n);
  const double h = -kJoinT / (n - 1);
  for (int k = 0; k < n; ++k) base.t[k] = k + 1 == n ? 0.0 : kJoinT + k * h;
  if (mode == Construction::Literal) {
    for (int k = 0; k < n; ++k) {
      base.x[k] = x_plus_minus(chart.b(), base.t[k]);
      base.dx[k] = x_plus_minus_slope(chart.b(), base.t[k]);
    }
    return base;
  }
  // Slope at fraction towards the lower end of the barrier interval.
  auto slope = [&](double t, double x) {
    const QuadCoeffs q = quad_coeffs(chart, t, x);
    const double d = std::max(0.0, discriminant(chart, t, x));
    return -q.B / q.A - fraction * std::sqrt(d) / std::abs(q.A);
  };
  double x = x_start;
  for (int k = 0; k < n; ++k) {
    const double t = base.t[k];
    base.x[k] = x;
    base.dx[k] = slope(t, x);
    if (k + 1 == n) break;
    const double hk = base.t[k + 1] - t;
    const double k1 = base.dx[k];
    const double k2 = slope(t + 0.5 * hk, x + 0.5 * hk * k1);
    const double k3 = slope(t + 0.5 * hk, x + 0.5 * hk * k2);
    const double k4 = slope(t + hk, x + hk * k3);
    x += hk * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  }
  return base;
}

// Base plus a (t - T)^2 after the departure time T, which is delayed so the
// end point lands on beta_target.
PlaneCurve bump_curve(const Base& base, double a, double beta_target,
                      double& departure) {
  const double end = base.x.back();
  if (beta_target < end - kContinuityTol)
    throw Error(ErrorKind::GapMismatch,
                "beta_target lies below the interpolation base curve");
  if (!(a > 0.0) || a * kJoinT * kJoinT < beta_target - end - kContinuityTol)
    throw Error(ErrorKind::GapMismatch,
                "a_interp too small to reach beta_target by x1 = 0");
  const double T = -std::sqrt(std::max(0.0, beta_target - end) / a);
  departure = T;
  PlaneCurve c;
  c.param = Parametrization::Graph;
  for (std::size_t k = 0; k < base.t.size(); ++k) {
    const double t = base.t[k];
    const double s = std::max(0.0, t - T);
    c.samples.push_back({t, {t, base.x[k] + a * s * s},
                         {1.0, base.dx[k] + 2.0 * a * s}});
  }
  return c;
}

PlaneCurve hyperbola_curve(double beta, double a, double t_max, int n) {
  auto x = [=](double t) { return beta * std::sqrt(1.0 + a * t * t); };
  auto dx = [=](double t) { return a * beta * t / std::sqrt(1.0 + a * t * t); };
  return sample_graph(x, dx, 0.0, t_max, n);
}

CertificatePiece mirror_piece(const MorseChart& chart,
                              const CertificatePiece& up) {
  PlaneCurve c = up.curve;
  // Reflect across the x1-axis; tangents keep pointing along increasing t.
  for (auto& s : c.samples) {
    s.p[1] = -s.p[1];
    s.tangent[1] = -s.tangent[1];
  }
  CertificatePiece low = make_piece(chart, up.name + "_lower", std::move(c));
  low.reversed = true;
  return low;
}

}  // namespace

PlaneCurve first_piece(const AssembleOptions& opt) {
  const MorseChart chart = chart_for(opt.b);
  if (opt.construction == Construction::HolderField)
    return departure_curve(chart, opt.departure_fraction);
  return boundary_arc(chart, opt.n);
}

BarrierCertificate assemble_barrier(const AssembleOptions& opt) {
  return assemble_barrier(opt, first_piece(opt));
}

BarrierCertificate assemble_barrier(const AssembleOptions& opt,
                                    const PlaneCurve& first_curve) {
  const MorseChart chart = chart_for(opt.b);
  BarrierCertificate cert;
  cert.params = {{"b", opt.b},
                 {"a_interp", opt.a_interp},
                 {"a_hyp", opt.a_hyp},
                 {"beta_target", opt.beta_target},
                 {"t_max", opt.t_max},
                 {"samples", static_cast<double>(opt.n)},
                 {"construction_field",
                  opt.construction == Construction::HolderField ? 1.0 : 0.0}};

  PlaneCurve first = first_curve;
  std::string first_name;
  if (opt.construction == Construction::HolderField) {
    first_name = "departure";
    cert.params["departure_fraction"] = opt.departure_fraction;
  } else {
    first_name = "boundary";
  }
  const PlanePoint join1 = first.samples.back().p;
  cert.params["join_height"] = join1[1];

  const Base base = base_graph(chart, opt.construction, join1[1],
                               opt.departure_fraction, opt.n);
  double departure = 0.0;
  PlaneCurve interp = bump_curve(base, opt.a_interp, opt.beta_target, departure);
  cert.params["interp_departure_t"] = departure;
  cert.params["interp_base_end"] = base.x.back();

  PlaneCurve tail = hyperbola_curve(opt.beta_target, opt.a_hyp, opt.t_max, opt.n);

  const double gap1 = norm(interp.samples.front().p - join1);
  const double gap2 = norm(tail.samples.front().p - interp.samples.back().p);
  cert.params["gap_departure_interp"] = gap1;
  cert.params["gap_interp_tail"] = gap2;
  if (gap1 > kContinuityTol || gap2 > kContinuityTol)
    throw Error(ErrorKind::GapMismatch, "pieces do not join within 1e-6");

  std::vector<CertificatePiece> upper;
  upper.push_back(make_piece(chart, first_name, std::move(first)));
  upper.push_back(make_piece(chart, "interpolation", std::move(interp)));
  upper.push_back(make_piece(chart, "hyperbola", std::move(tail)));

  const HyperbolaCoeffs c = hyperbola_coeffs(opt.b, opt.beta_target, opt.a_hyp);
  cert.params["c4"] = c.c4;
  cert.params["c2"] = c.c2;
  cert.params["c0"] = c.c0;
  bool tail_ok = c.c4 > 0.0;
  if (tail_ok) {
    const double u = std::max(opt.t_max * opt.t_max, -c.c2 / (2.0 * c.c4));
    tail_ok = c.c4 * u * u + c.c2 * u + c.c0 > 0.0;
  }
  cert.checks["tail_beyond_t_max"] = tail_ok;

  for (const auto& p : upper) cert.pieces.push_back(p);
  for (const auto& p : upper) cert.pieces.push_back(mirror_piece(chart, p));

  // Every non-timelike sample must carry the same barrier sign.
  bool sign_ok = true;
  for (const auto& piece : cert.pieces) {
    for (const auto& s : piece.curve.samples) {
      Vec2 dir = s.tangent;
      if (piece.reversed) dir = scaled(dir, -1.0);
      if (barrier_form(chart, s.p, dir) <= 0.0) sign_ok = false;
    }
  }
  cert.checks["uniform_barrier_sign"] = sign_ok;
  cert.sign = BarrierSign::NegativeBarrier;
  finalize(cert);
  return cert;
}

BarrierPath barrier_path(const BarrierCertificate& cert) {
  BarrierPath path;
  auto push = [&](const PlanePoint& p, Vec2 t) {
    const double n = norm(t);
    if (n > 0.0) t = scaled(t, 1.0 / n);
    if (!path.points.empty() && norm(path.points.back() - p) == 0.0) return;
    path.points.push_back(p);
    path.tangents.push_back(t);
  };
  // Reversed pieces first, in reverse order, each walked backwards.
  for (auto it = cert.pieces.rbegin(); it != cert.pieces.rend(); ++it) {
    if (!it->reversed) continue;
    const auto& ss = it->curve.samples;
    for (auto s = ss.rbegin(); s != ss.rend(); ++s)
      push(s->p, scaled(s->tangent, -1.0));
  }
  for (const auto& piece : cert.pieces) {
    if (piece.reversed) continue;
    for (const auto& s : piece.curve.samples) push(s.p, s.tangent);
  }
  return path;
}

}  // namespace morse
