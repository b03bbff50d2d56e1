#include "morse_causal/regions.hpp"

#include <functional>
#include <optional>
#include <string>

#include "morse_causal/parallel.hpp"

namespace morse {

const char* to_string(RegionLabel r) {
  switch (r) {
    case RegionLabel::OmegaPlus: return "OmegaPlus";
    case RegionLabel::OmegaMinus: return "OmegaMinus";
    case RegionLabel::ScriptC: return "ScriptC";
    case RegionLabel::Boundary: return "Boundary";
  }
  return "Unknown";
}

double boundary_residual(const MorseChart& chart, const PlanePoint& p) {
  require_zeta2(chart, "boundary_residual");
  const double b = chart.b();
  const double x1s = p[0] * p[0], x2s = p[1] * p[1];
  const double f = -x1s - b * x2s + 1.0;
  return 2.0 * f * f - (x1s + b * b * x2s + 1.0) * (x1s + x2s + 1.0);
}

Vec2 boundary_residual_gradient(const MorseChart& chart, const PlanePoint& p) {
  const double b = chart.b();
  const double x1 = p[0], x2 = p[1];
  const double f = -x1 * x1 - b * x2 * x2 + 1.0;
  const double h = x1 * x1 + b * b * x2 * x2 + 1.0;
  const double k = x1 * x1 + x2 * x2 + 1.0;
  return {-8.0 * x1 * f - 2.0 * x1 * (h + k),
          -8.0 * b * x2 * f - 2.0 * b * b * x2 * k - 2.0 * x2 * h};
}

PlaneVec boundary_tangent(const MorseChart& chart, const PlanePoint& p) {
  const Vec2 g = boundary_residual_gradient(chart, p);
  Vec2 t{-g[1], g[0]};
  const double n = norm(t);
  if (n == 0.0) return {0.0, 0.0};
  t = scaled(t, 1.0 / n);
  if (cross(p, t) < 0.0) t = scaled(t, -1.0);
  return t;
}

RegionLabel classify_region(const MorseChart& chart, const PlanePoint& p) {
  require_zeta2(chart, "classify_region");
  const Point4 z{p[0], p[1], 1.0, 0.0};
  const Vec4 rho{p[0], p[1], 1.0, 0.0};
  switch (classify4(chart, z, rho).cls) {
    case CausalClass::TimelikePos: return RegionLabel::OmegaPlus;
    case CausalClass::TimelikeNeg: return RegionLabel::OmegaMinus;
    case CausalClass::Lightlike: return RegionLabel::Boundary;
    case CausalClass::Spacelike: break;
  }
  return RegionLabel::ScriptC;
}

std::pair<double, double> beta_roots(double b) {
  if (!(b > 0.0))
    throw Error(ErrorKind::DegenerateRoots, "beta_roots: b must be positive");
  const double s = b * b + 4.0 * b + 1.0;
  const double disc = s * s - 4.0 * b * b;
  if (disc < 0.0)
    throw Error(ErrorKind::DegenerateRoots, "beta_roots: negative discriminant");
  // Upper root directly, lower via the product of roots 1/b^2 (no cancellation).
  const double hi2 = (s + std::sqrt(disc)) / (2.0 * b * b);
  const double lo2 = 1.0 / (b * b * hi2);
  return {std::sqrt(lo2), std::sqrt(hi2)};
}

const char* to_string(BoundaryComponent c) {
  switch (c) {
    case BoundaryComponent::Oval: return "oval";
    case BoundaryComponent::RightArc: return "right";
    case BoundaryComponent::LeftArc: return "left";
    case BoundaryComponent::TopArc: return "top";
    case BoundaryComponent::BottomArc: return "bottom";
  }
  return "unknown";
}

BoundaryComponent parse_component(const std::string& name) {
  for (auto c : {BoundaryComponent::Oval, BoundaryComponent::RightArc,
                 BoundaryComponent::LeftArc, BoundaryComponent::TopArc,
                 BoundaryComponent::BottomArc})
    if (name == to_string(c)) return c;
  throw Error(ErrorKind::Parse, "unknown boundary component '" + name + "'");
}

namespace {

constexpr int kBisectIters = 80;

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  const bool lo_pos = f(lo) > 0.0;
  for (int i = 0; i < kBisectIters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) > 0.0) == lo_pos)
      lo = mid;
    else
      hi = mid;
  }
  const double flo = std::abs(f(lo)), fhi = std::abs(f(hi));
  return flo <= fhi ? lo : hi;
}

// Geometric scan of heights on the vertical line through x1, starting at 0.
std::vector<double> height_grid() {
  std::vector<double> h{0.0};
  for (double v = 1e-9; v < 2.0 * kTraceRadius; v *= 1.01) h.push_back(v);
  h.push_back(2.0 * kTraceRadius);
  return h;
}

enum class Pick { FirstFall, LastRise };

std::optional<double> vertical_root(const MorseChart& chart, double x1,
                                    const std::vector<double>& grid,
                                    Pick pick) {
  auto f = [&](double x2) { return boundary_residual(chart, {x1, x2}); };
  std::optional<std::pair<double, double>> bracket;
  double prev = f(grid[0]);
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double cur = f(grid[j]);
    if (pick == Pick::FirstFall && prev > 0.0 && cur <= 0.0) {
      bracket = {grid[j - 1], grid[j]};
      break;
    }
    if (pick == Pick::LastRise && prev <= 0.0 && cur > 0.0)
      bracket = {grid[j - 1], grid[j]};
    prev = cur;
  }
  if (!bracket) return std::nullopt;
  return bisect(f, bracket->first, bracket->second);
}

double require_root(const std::optional<double>& r, const char* what) {
  if (!r) throw Error(ErrorKind::ComponentNotFound, what);
  return *r;
}

// Largest x1 along an arc with |p| <= kTraceRadius.
double arc_extent(const std::function<double(double)>& height, double lo,
                  double hi) {
  auto g = [&](double x1) { return std::hypot(x1, height(x1)) - kTraceRadius; };
  if (g(hi) <= 0.0) return hi;
  return bisect(g, lo, hi);
}

// Symmetric parameters in [-1, 1], with 0 included exactly.
std::vector<double> symmetric_params(int n) {
  std::vector<double> s(n);
  for (int k = 0; k < n; ++k) s[k] = -1.0 + 2.0 * k / (n - 1);
  s[n / 2] = 0.0;
  return s;
}

BoundaryTrace trace_oval(const MorseChart& chart, int n) {
  const double blo = beta_roots(chart.b()).first;
  const double h = std::min(blo, kInnerApex) / 40.0;
  const double rmax = 4.0;
  std::vector<double> angles(n);
  for (int k = 0; k < n; ++k) angles[k] = 2.0 * kPi * k / n;
  // Put the four axis directions on exact samples.
  for (int q = 1; q < 4; ++q) {
    const double target = 0.5 * kPi * q;
    int best = 0;
    for (int k = 0; k < n; ++k)
      if (std::abs(angles[k] - target) < std::abs(angles[best] - target))
        best = k;
    angles[best] = target;
  }

  BoundaryTrace out{BoundaryComponent::Oval, std::vector<BoundarySample>(n)};
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      // Exact cos/sin on the axes keeps apex samples on the axis.
      const double a = angles[k];
      double c = std::cos(a), s = std::sin(a);
      if (a == 0.5 * kPi) c = 0.0, s = 1.0;
      if (a == kPi) c = -1.0, s = 0.0;
      if (a == 1.5 * kPi) c = 0.0, s = -1.0;
      auto f = [&](double r) { return boundary_residual(chart, {r * c, r * s}); };
      double prev_r = 0.0;
      std::optional<double> root;
      for (double r = h; r <= rmax; r += h) {
        if (f(r) <= 0.0) {
          root = bisect(f, prev_r, r);
          break;
        }
        prev_r = r;
      }
      const double r = require_root(root, "oval: ray never leaves Omega+");
      const PlanePoint p{r * c, r * s};
      out.samples[k] = {a, p, boundary_residual(chart, p)};
    }
  });
  return out;
}

BoundaryTrace trace_right(const MorseChart& chart, int n) {
  const auto grid = height_grid();
  auto height = [&](double x1) {
    if (x1 <= kOuterApex) return 0.0;
    return require_root(vertical_root(chart, x1, grid, Pick::FirstFall),
                        "right arc: no crossing on vertical line");
  };
  const double xmax = arc_extent(height, kOuterApex, kTraceRadius);
  const auto params = symmetric_params(n);
  BoundaryTrace out{BoundaryComponent::RightArc,
                    std::vector<BoundarySample>(n)};
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double s = params[k];
      const double x1 = kOuterApex + (xmax - kOuterApex) * s * s;
      const double x2 = s == 0.0 ? 0.0 : std::copysign(height(x1), s);
      const PlanePoint p{x1, x2};
      out.samples[k] = {s, p, boundary_residual(chart, p)};
    }
  });
  return out;
}

BoundaryTrace trace_top(const MorseChart& chart, int n) {
  const auto grid = height_grid();
  auto height = [&](double x1) {
    return require_root(vertical_root(chart, x1, grid, Pick::LastRise),
                        "top arc: no crossing on vertical line");
  };
  const double xmax = arc_extent(height, 0.0, kTraceRadius);
  const auto params = symmetric_params(n);
  BoundaryTrace out{BoundaryComponent::TopArc, std::vector<BoundarySample>(n)};
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double s = params[k];
      const PlanePoint p{xmax * s, height(std::abs(xmax * s))};
      out.samples[k] = {s, p, boundary_residual(chart, p)};
    }
  });
  return out;
}

BoundaryTrace mirrored(BoundaryTrace t, BoundaryComponent c, int axis) {
  t.component = c;
  for (auto& s : t.samples) s.p[axis] = -s.p[axis];
  return t;
}

}  // namespace

BoundaryTrace trace_boundary(const MorseChart& chart,
                             BoundaryComponent component, int n_samples) {
  require_zeta2(chart, "trace_boundary");
  if (n_samples < 8)
    throw Error(ErrorKind::OutOfDomain, "trace_boundary: need >= 8 samples");
  switch (component) {
    case BoundaryComponent::Oval: return trace_oval(chart, n_samples);
    case BoundaryComponent::RightArc: return trace_right(chart, n_samples);
    case BoundaryComponent::TopArc: return trace_top(chart, n_samples);
    case BoundaryComponent::LeftArc:
    case BoundaryComponent::BottomArc:
      break;
  }
  const bool left = component == BoundaryComponent::LeftArc;
  try {
    return left ? mirrored(trace_right(chart, n_samples), component, 0)
                : mirrored(trace_top(chart, n_samples), component, 1);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ComponentNotFound) throw;
    throw Error(ErrorKind::ComponentNotFound,
                std::string(to_string(component)) + " arc (mirror of " +
                    (left ? "right" : "top") + "): " + e.what());
  }
  throw Error(ErrorKind::ComponentNotFound, "unknown component");
}

}  // namespace morse
