#include "morse_causal/reach.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

#include "morse_causal/regions.hpp"

namespace morse {

PlanePoint ReachGrid::center(int i, int j) const {
  const double dx = (domain.xmax - domain.xmin) / nx;
  const double dy = (domain.ymax - domain.ymin) / ny;
  return {domain.xmin + (i + 0.5) * dx, domain.ymin + (j + 0.5) * dy};
}

std::pair<int, int> ReachGrid::cell_of(const PlanePoint& p) const {
  const double fx = (p[0] - domain.xmin) / (domain.xmax - domain.xmin) * nx;
  const double fy = (p[1] - domain.ymin) / (domain.ymax - domain.ymin) * ny;
  return {std::clamp(static_cast<int>(std::floor(fx)), 0, nx - 1),
          std::clamp(static_cast<int>(std::floor(fy)), 0, ny - 1)};
}

std::size_t ReachGrid::count() const {
  return static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), std::uint8_t{1}));
}

namespace {

constexpr int kStencil[16][2] = {{1, 0},  {-1, 0}, {0, 1},   {0, -1},
                                 {1, 1},  {1, -1}, {-1, 1},  {-1, -1},
                                 {2, 1},  {2, -1}, {-2, 1},  {-2, -1},
                                 {1, 2},  {1, -2}, {-1, 2},  {-1, -2}};

}  // namespace

ReachGrid reach_grid(const MorseChart& chart, const PlanePoint& seed,
                     Orientation orientation, const Domain& domain, int nx,
                     int ny, double margin, Approximation approx) {
  require_zeta2(chart, "reach_grid");
  if (nx < 1 || ny < 1 || nx > 65535 || ny > 65535)
    throw Error(ErrorKind::OutOfDomain, "reach_grid: bad resolution");
  if (!domain.contains(seed))
    throw Error(ErrorKind::SeedOutsideDomain, "reach_grid: seed outside domain");
  ReachGrid g;
  g.domain = domain;
  g.nx = nx;
  g.ny = ny;
  g.labels.assign(static_cast<std::size_t>(nx) * ny, 0);
  g.seed = seed;
  g.orientation = orientation;
  g.approximation = approx;
  g.margin = margin;

  const double theta = approx == Approximation::Inner ? chart.theta() - margin
                                                      : chart.theta() + margin;
  const bool future = orientation == Orientation::Future;
  // The midpoint alone is not conservative next to Omega, where every
  // direction is admissible: a step that merely grazes Omega would pass. The
  // inner approximation therefore also demands the cone at both endpoints.
  auto in_cone = [&](const PlanePoint& at, const PlaneVec& d) {
    const ConeMembership m = projected_cone_test(chart, at, d, theta);
    return future ? m.future : m.past;
  };
  auto admissible = [&](const PlanePoint& from, const PlanePoint& to) {
    const PlaneVec d = to - from;
    const bool mid = in_cone(scaled(from + to, 0.5), d);
    if (approx == Approximation::Outer) return mid;
    return mid && in_cone(from, d) && in_cone(to, d);
  };
  // The first layer is stepped from the seed point itself rather than from
  // its cell centre, which may lie across a barrier through the seed.
  const auto [si, sj] = g.cell_of(seed);
  std::deque<std::pair<int, int>> queue;
  auto first = [&](int ni, int nj) {
    if (ni < 0 || nj < 0 || ni >= nx || nj >= ny) return;
    if (g.labels[g.index(ni, nj)]) return;
    const PlanePoint n = g.center(ni, nj);
    if (is_zero(n - seed) || admissible(seed, n)) {
      g.labels[g.index(ni, nj)] = 1;
      queue.emplace_back(ni, nj);
    }
  };
  first(si, sj);
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) first(si + di, sj + dj);
  for (const auto& off : kStencil) first(si + off[0], sj + off[1]);
  // Breadth-first closure; the reached set is the least fixed point of the
  // step rule and so does not depend on visiting order.
  while (!queue.empty()) {
    const auto [i, j] = queue.front();
    queue.pop_front();
    const PlanePoint c = g.center(i, j);
    for (const auto& off : kStencil) {
      const int ni = i + off[0], nj = j + off[1];
      if (ni < 0 || nj < 0 || ni >= nx || nj >= ny) continue;
      if (g.labels[g.index(ni, nj)]) continue;
      if (admissible(c, g.center(ni, nj))) {
        g.labels[g.index(ni, nj)] = 1;
        queue.emplace_back(ni, nj);
      }
    }
  }
  return g;
}

std::size_t shared_cells(const ReachGrid& a, const ReachGrid& b) {
  if (a.nx != b.nx || a.ny != b.ny)
    throw Error(ErrorKind::OutOfDomain, "shared_cells: grid shapes differ");
  std::size_t n = 0;
  for (std::size_t k = 0; k < a.labels.size(); ++k)
    n += (a.labels[k] && b.labels[k]) ? 1 : 0;
  return n;
}

Vec2 lightlike_rotation_field(const Vec2& v) {
  return rotate({-v[0], v[1]}, 0.25 * kPi);
}

EscapeResult hyperbolic_escape(const MorseChart& chart, double eps,
                               double eps_hat) {
  require_zeta2(chart, "hyperbolic_escape");
  if (!(eps_hat > 0.0) || !(eps > 0.0))
    throw Error(ErrorKind::OutOfDomain, "hyperbolic_escape: eps, eps_hat > 0");
  // W = Rot(pi/4 - eps_hat) diag(-1, 1) on (x1, y1).
  const double a = 0.25 * kPi - eps_hat;
  const double c = std::cos(a), s = std::sin(a);
  const double w00 = -c, w01 = -s, w10 = -s, w11 = c;
  // Implicit midpoint (Cayley) step: the secant equals dt * W * midpoint
  // exactly, so each chord inherits the field's angle to grad f.
  auto cayley = [&](const Vec2& z, double dt) {
    const double h = 0.5 * dt;
    const Vec2 r{z[0] + h * (w00 * z[0] + w01 * z[1]),
                 z[1] + h * (w10 * z[0] + w11 * z[1])};
    const double m00 = 1.0 - h * w00, m01 = -h * w01, m10 = -h * w10,
                 m11 = 1.0 - h * w11;
    const double det = m00 * m11 - m01 * m10;
    return Vec2{(m11 * r[0] - m01 * r[1]) / det, (m00 * r[1] - m10 * r[0]) / det};
  };
  constexpr double dt = 1e-3;
  constexpr double kTrust = 10.0;
  constexpr double kTimeLimit = 200.0;
  EscapeResult out;
  Vec2 z{kSqrt2 + 1.0, 1.0};
  double t = 0.0;
  out.curve.t.push_back(t);
  out.curve.z.push_back({z[0], 0.0, z[1], 0.0});
  while (true) {
    Vec2 next = cayley(z, dt);
    double h = dt;
    if (next[0] <= 0.0) {
      double lo = 0.0, hi = dt;
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (cayley(z, mid)[0] > 0.0)
          lo = mid;
        else
          hi = mid;
      }
      h = hi;
      next = cayley(z, h);
      next[0] = 0.0;
    }
    t += h;
    out.curve.t.push_back(t);
    out.curve.z.push_back({next[0], 0.0, next[1], 0.0});
    z = next;
    if (z[0] == 0.0) break;
    if (norm(z) > kTrust || t > kTimeLimit)
      throw Error(ErrorKind::CrossingMissed,
                  "push-off left the trust region before crossing x1 = 0");
  }
  if (!(z[1] > 0.0))
    throw Error(ErrorKind::CrossingMissed, "crossed x1 = 0 below y1 = 0");
  classify_steps(chart, out.curve);
  out.crossing_height = z[1];
  out.below_target = z[1] < eps * eps;
  return out;
}

Curve4 spiral_connect(const MorseChart& chart, double r0, double r1,
                      double dphi, double phi0) {
  if (!(r0 > 0.0) || !(r1 > r0))
    throw Error(ErrorKind::OutOfDomain, "spiral_connect: need 0 < r0 < r1");
  const double lr = std::log(r1 / r0);
  const double pitch = std::atan2(std::abs(dphi), lr);
  if (pitch >= chart.theta())
    throw Error(ErrorKind::PitchTooSteep,
                "spiral pitch " + std::to_string(pitch) + " rad >= theta");
  const int n = std::max(
      16, static_cast<int>(std::ceil(std::max(std::abs(dphi), lr) / 0.005)));
  Curve4 c;
  for (int k = 0; k <= n; ++k) {
    const double s = static_cast<double>(k) / n;
    const double r = k == n ? r1 : r0 * std::exp(lr * s);
    const double a = phi0 + dphi * s;
    c.t.push_back(s);
    c.z.push_back({0.0, 0.0, r * std::cos(a), r * std::sin(a)});
  }
  classify_steps(chart, c);
  return c;
}

namespace {

// Straight path from the plane origin to p_t, lifted at unit starting
// height with the smallest doubling growth keeping every chord future
// timelike with a margin. Coordinates are (x1, x2, Y).
std::vector<Vec3> lifted_path(const MorseChart& chart, const PlanePoint& p_t) {
  constexpr int kSteps = 400;
  constexpr double kMargin = 1e-6;
  std::vector<Vec3> path{{0.0, 0.0, 1.0}};
  double k = 1e-3;
  for (int i = 1; i <= kSteps; ++i) {
    const Vec3& z = path.back();
    const PlanePoint pn = scaled(p_t, static_cast<double>(i) / kSteps);
    k = std::max(1e-3, 0.5 * k);
    for (;;) {
      const double y = z[2] * std::exp(k / kSteps);
      const Vec3 zn{pn[0] * y, pn[1] * y, y};
      const Vec3 d = zn - z;
      const Vec3 m = scaled(z + zn, 0.5);
      const Classification cls =
          classify4(chart, {m[0], m[1], m[2], 0.0}, {d[0], d[1], d[2], 0.0});
      if (cls.cls == CausalClass::TimelikePos && cls.margin > kMargin) {
        path.push_back(zn);
        break;
      }
      k *= 2.0;
      if (k > 1e6)
        throw Error(ErrorKind::NotTimelike,
                    "lifted path needs unbounded growth; target too close to "
                    "the boundary");
    }
  }
  return path;
}

Curve4 embed(const std::vector<Vec3>& path, const Vec2& ydir, double scale,
             double t0) {
  Curve4 c;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const Vec3 z = scaled(path[i], scale);
    c.t.push_back(t0 + static_cast<double>(i));
    c.z.push_back({z[0], z[1], z[2] * ydir[0], z[2] * ydir[1]});
  }
  return c;
}

}  // namespace

PushUpResult push_up(const MorseChart& chart, const Point4& target) {
  require_zeta2(chart, "push_up");
  const RadialProjection rp = project_rho(target);
  const PlanePoint p_t = project_pi(rp.x, rp.y);
  if (classify_region(chart, p_t) != RegionLabel::OmegaPlus)
    throw Error(ErrorKind::OutOfDomain, "push_up: target not over Omega+");
  const double phi = std::atan2(target[3], target[2]);
  const Vec2 ydir{target[2] / rp.y, target[3] / rp.y};

  PushUpResult out;
  const std::vector<Vec3> lifted = lifted_path(chart, p_t);
  out.scale_growth = lifted.back()[2];
  out.eps = std::min(0.1, 0.9 * rp.y / out.scale_growth);
  // Spiral pitch atan(1 / 1.25) stays well inside pi/4.
  const double r_spiral = out.eps * std::exp(-1.25 * std::abs(phi));

  EscapeResult esc;
  bool found = false;
  for (double eh : {1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 3e-9}) {
    esc = hyperbolic_escape(chart, out.eps, eh);
    if (esc.crossing_height < r_spiral) {
      out.eps_hat = eh;
      found = true;
      break;
    }
  }
  if (!found)
    throw Error(ErrorKind::NotTimelike,
                "push_up: escape cannot get below the spiral start");
  out.crossing_height = esc.crossing_height;

  Curve4 curve = esc.curve;
  Curve4 radial;
  radial.t = {0.0, 1.0};
  radial.z = {curve.z.back(), {0.0, 0.0, r_spiral, 0.0}};
  classify_steps(chart, radial);
  append(curve, radial);
  append(curve, spiral_connect(chart, r_spiral, out.eps, phi));
  Curve4 lift = embed(lifted, ydir, out.eps, 0.0);
  // The spiral ends at eps * ydir up to rounding; start the lift there.
  lift.z.front() = curve.z.back();
  append(curve, lift);
  if (out.eps * out.scale_growth < rp.y) {
    Curve4 dil;
    dil.t = {0.0, 1.0};
    dil.z = {curve.z.back(), target};
    append(curve, dil);
  } else {
    curve.z.back() = target;
  }
  classify_steps(chart, curve);
  out.curve = std::move(curve);
  return out;
}

PlaneCurve steered_curve(const MorseChart& chart, const PlanePoint& start,
                         Orientation orientation, std::mt19937_64& rng,
                         const SteeringOptions& opt) {
  std::uniform_real_distribution<double> uni(opt.u_lo, opt.u_hi);
  const bool future = orientation == Orientation::Future;
  PlaneCurve c;
  c.param = Parametrization::Free;
  PlanePoint p = start;
  double u = uni(rng);
  double next_resample = opt.resample;
  const int steps = static_cast<int>(std::ceil(opt.duration / opt.step));
  for (int k = 0; k <= steps; ++k) {
    const double t = k * opt.step;
    if (t >= next_resample) {
      u = uni(rng);
      next_resample += opt.resample;
    }
    const CriterionSpectrum s = criterion_spectrum(chart, p);
    Vec2 dir;
    if (s.l2 < 0.0) {
      // Inside Omega every direction is timelike in both orientations.
      dir = rotate({1.0, 0.0}, 2.0 * kPi * u);
    } else if (s.l1 < 0.0) {
      const double half = 0.5 * kPi - std::atan(std::sqrt(s.l2 / -s.l1));
      Vec2 center = s.e1;
      const ConeMembership m = projected_cone_test(chart, p, center, chart.theta());
      if (future ? !m.future : !m.past) center = scaled(center, -1.0);
      dir = rotate(center, (2.0 * u - 1.0) * half);
    } else {
      break;  // no timelike direction at all
    }
    c.samples.push_back({t, p, dir});
    if (k == steps) break;
    const PlanePoint next = p + scaled(dir, opt.step);
    if (!opt.domain.contains(next)) break;
    p = next;
  }
  return c;
}

namespace {

struct Segment {
  PlanePoint a, b;
};

constexpr double kBucket = 0.05;

long long bucket_key(int ix, int iy) {
  return (static_cast<long long>(ix) << 32) ^ static_cast<unsigned>(iy);
}

}  // namespace

CrossingReport crossing_check(const BarrierCertificate& cert,
                              const PlaneCurve& curve,
                              Orientation orientation) {
  const BarrierPath path = barrier_path(cert);
  std::vector<Segment> segs;
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i)
    segs.push_back({path.points[i], path.points[i + 1]});
  std::unordered_map<long long, std::vector<int>> grid;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    const auto& sg = segs[s];
    const int x0 = static_cast<int>(std::floor(std::min(sg.a[0], sg.b[0]) / kBucket));
    const int x1 = static_cast<int>(std::floor(std::max(sg.a[0], sg.b[0]) / kBucket));
    const int y0 = static_cast<int>(std::floor(std::min(sg.a[1], sg.b[1]) / kBucket));
    const int y1 = static_cast<int>(std::floor(std::max(sg.a[1], sg.b[1]) / kBucket));
    for (int ix = x0; ix <= x1; ++ix)
      for (int iy = y0; iy <= y1; ++iy) grid[bucket_key(ix, iy)].push_back(s);
  }

  const bool negative = cert.sign == BarrierSign::NegativeBarrier;
  CrossingReport rep;
  const auto& cs = curve.samples;
  for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
    const PlanePoint a = cs[i].p, b = cs[i + 1].p;
    const Vec2 w = b - a;
    if (is_zero(w)) continue;
    const int x0 = static_cast<int>(std::floor(std::min(a[0], b[0]) / kBucket));
    const int x1 = static_cast<int>(std::floor(std::max(a[0], b[0]) / kBucket));
    const int y0 = static_cast<int>(std::floor(std::min(a[1], b[1]) / kBucket));
    const int y1 = static_cast<int>(std::floor(std::max(a[1], b[1]) / kBucket));
    std::vector<int> cand;
    for (int ix = x0; ix <= x1; ++ix)
      for (int iy = y0; iy <= y1; ++iy) {
        const auto it = grid.find(bucket_key(ix, iy));
        if (it != grid.end()) cand.insert(cand.end(), it->second.begin(), it->second.end());
      }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (int s : cand) {
      const Segment& sg = segs[s];
      const Vec2 v = sg.b - sg.a;
      const double den = cross(w, v);
      const double sin_angle = std::abs(den) / (norm(w) * norm(v));
      const Vec2 ap = sg.a - a;
      if (den == 0.0 || sin_angle < 1e-6) {
        // Parallel pieces only matter if they overlap; the identical segment
        // (curve equal to the barrier) is not a transversal crossing.
        if (std::abs(cross(ap, w)) > 1e-15 * norm(w) * (norm(ap) + 1.0)) continue;
        if ((sg.a == a && sg.b == b) || (sg.a == b && sg.b == a)) continue;
        const double wl = dot(w, w);
        const double s0 = dot(sg.a - a, w) / wl, s1 = dot(sg.b - a, w) / wl;
        if (std::max(s0, s1) <= 0.0 || std::min(s0, s1) >= 1.0) continue;
        throw Error(ErrorKind::TangencyUnresolved,
                    "curve runs along the barrier at t=" + std::to_string(cs[i].t));
      }
      const double u = cross(ap, v) / den;   // along the curve segment
      const double r = cross(ap, w) / den;   // along the barrier segment
      if (!(u > 0.0 && u < 1.0 && r > 0.0 && r < 1.0)) continue;
      ++rep.crossings;
      const Vec2 fw = orientation == Orientation::Past ? scaled(w, -1.0) : w;
      const double o = cross(v, fw);
      const bool allowed = negative ? o < 0.0 : o > 0.0;
      if (!allowed && !rep.forbidden) {
        rep.forbidden = true;
        rep.t = cs[i].t + u * (cs[i + 1].t - cs[i].t);
        rep.at = a + scaled(w, u);
      }
    }
  }
  return rep;
}

}  // namespace morse
