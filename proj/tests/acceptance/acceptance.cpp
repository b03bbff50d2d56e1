// One PASS/FAIL line per acceptance criterion, followed by indented
// diagnostics. Exit status is nonzero when any criterion fails.
#include <chrono>
#include <cstdio>
#include <random>
#include <string>

#include "morse_causal/morse_causal.hpp"
#include "oracles.hpp"

using namespace morse;

namespace {

using Clock = std::chrono::steady_clock;

int g_failed = 0;

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  Clock::time_point start = Clock::now();
  bool ok = true;
  std::string detail;

  void check(bool cond, const std::string& what) {
    ok = ok && cond;
    detail += "    " + std::string(cond ? "ok   " : "FAIL ") + what + "\n";
  }
  void note(const std::string& what) { detail += "    note " + what + "\n"; }

  ~Criterion() {
    const double s = std::chrono::duration<double>(Clock::now() - start).count();
    char rt[96];
    std::snprintf(rt, sizeof rt, "runtime %.2f s < %.0f s", s, budget_s);
    check(s < budget_s, rt);
    std::printf("%s %2d %s\n%s", ok ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failed;
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

const MorseChart kB8 = MorseChart::make(8);

void criterion1() {
  Criterion c{1, "beta roots at b = 8", 1};
  const auto [lo, hi] = beta_roots(8);
  c.check(std::abs(lo - 0.101884) <= 1e-5, fmt("beta_lower %.8f vs 0.101884 (tol 1e-5)", lo));
  c.check(std::abs(hi - 1.22688) <= 1e-4, fmt("beta_upper %.7f vs 1.22688 (tol 1e-4)", hi));
}

void criterion2() {
  Criterion c{2, "hyperbola certificate constants", 1};
  const auto k = hyperbola_coeffs(8, 0.102, 6);
  c.check(std::abs(k.c4 - 4.863) <= 2e-3, fmt("c4 %.5f vs 4.863 (tol 2e-3)", k.c4));
  c.check(std::abs(k.c2 - 0.064) <= 2e-3, fmt("c2 %.5f vs 0.064 (tol 2e-3)", k.c2));
  c.check(std::abs(k.c0 - 0.002) <= 2e-3, fmt("c0 %.5f vs 0.002 (tol 2e-3)", k.c0));
  const auto cert = verify_hyperbola(8, 0.102, 6, 50, 10000);
  c.check(cert.verified(), fmt("verify_hyperbola t_max 50, n 1e4: min residual %.4g", cert.min_margin));
}

void criterion3() {
  Criterion c{3, "interpolation sign change", 5};
  auto cert_at = [](double a) { return verify_curve(kB8, interpolation_curve(8, a)); };
  const auto c1 = cert_at(1.0);
  c.check(c1.verified(), fmt("a = 1 Verified: min residual %.4g at t = %.4f", c1.min_margin, c1.argmin_t));
  const auto c3 = cert_at(3.0);
  c.check(!c3.verified(), fmt("a = 3 Falsified: min residual %.4g at t = %.4f", c3.min_margin, c3.argmin_t));
  // Scan the verdict in a; also locate where the residual at the joint with
  // the hyperbola (t = 0) changes sign.
  int verified = 0;
  for (double a = 0.0; a <= 4.0 + 1e-9; a += 0.25) verified += cert_at(a).verified();
  c.note(fmt("verdict scan a in [0, 4] step 0.25: %.0f of 17 Verified", verified));
  auto end_residual = [](double a) {
    return verify_curve(kB8, interpolation_curve(8, a, -0.1, 0.0, 201)).pieces[0].residuals.back();
  };
  const double flip = oracle::bisect(end_residual, 1.0, 3.0, 50);
  c.check(std::abs(flip - 2.66) <= 0.1, fmt("flip of the t = 0 residual at a = %.4f vs 2.66 (tol 0.1)", flip));
  c.note(fmt("residual at t = -0.1 is %.4g for every a: the slope of x+- is not a barrier slope there",
             c1.pieces[0].residuals.front()));
}

void criterion4() {
  Criterion c{4, "x+- anchor", 1};
  const double x = x_plus_minus(8, -0.1);
  const double o = oracle::bisect([](double xx) { return oracle::raw_discriminant(8, -0.1, xx); },
                                  0.05, 0.12, 200);
  c.check(std::abs(x - 0.0982) <= 1e-3, fmt("x+-(8, -0.1) = %.7f vs 0.0982 (tol 1e-3)", x));
  c.check(std::abs(x - o) <= 1e-8, fmt("closed form vs bisection oracle %.3g (tol 1e-8)", std::abs(x - o)));
  c.note(fmt("discrepancy to the printed 0.0982: %.3g", x - 0.0982));
}

void criterion5() {
  Criterion c{5, "apices and boundary", 5};
  double worst_apex = 0.0;
  for (double b : {2.0, 8.0, 100.0}) {
    const auto chart = MorseChart::make(b);
    for (double s : {-1.0, 1.0})
      for (double a : {kSqrt2 - 1.0, kSqrt2 + 1.0})
        worst_apex = std::max(worst_apex, std::abs(boundary_residual(chart, {s * a, 0.0})));
  }
  c.check(worst_apex <= 1e-12, fmt("apex residual max %.3g (tol 1e-12), b in {2, 8, 100}", worst_apex));

  int total = 0, lightlike = 0, timelike = 0;
  double worst_delta = 0.0, worst_rel = 0.0, worst_excess = 0.0;
  for (auto comp : {BoundaryComponent::Oval, BoundaryComponent::RightArc, BoundaryComponent::LeftArc,
                    BoundaryComponent::TopArc, BoundaryComponent::BottomArc}) {
    const auto tr = trace_boundary(kB8, comp, 2000);
    for (const auto& s : tr.samples) {
      ++total;
      const PlaneVec tan = boundary_tangent(kB8, s.p);
      const auto cls = classify_plane(kB8, s.p, tan);
      lightlike += cls.cls == CausalClass::Lightlike;
      timelike += is_timelike(cls.cls);
      worst_excess = std::min(worst_excess, cls.margin);
      const double d = std::abs(discriminant(kB8, s.p[0], s.p[1]));
      worst_delta = std::max(worst_delta, d);
      // Size of the terms Delta is assembled from, to separate rounding
      // from a real miss far out on the arcs.
      const double t2 = s.p[0] * s.p[0], x2 = s.p[1] * s.p[1];
      const double g = t2 + 64.0 * x2 + 1.0;
      const double terms = g * (64.0 * x2 * x2 + 33.0 * (1.0 + t2) * x2 + 64.0 * x2 + t2 * t2 + 6.0 * t2 + 1.0);
      worst_rel = std::max(worst_rel, d / terms);
    }
  }
  c.check(lightlike == total, fmt("Lightlike tangents: %.0f of %.0f traced samples (%.0f timelike)",
                                  lightlike, total, timelike));
  c.note(fmt("most timelike normalized residual along the trace %.3g", worst_excess));
  c.check(worst_delta <= 1e-6, fmt("|discriminant| on the trace max %.3g (tol 1e-6)", worst_delta));
  c.note(fmt("|discriminant| relative to its terms max %.3g (arcs reach |p| = %.0f)", worst_rel, kTraceRadius));
}

void criterion6() {
  Criterion c{6, "eigen-identity and push-off", 1};
  const Vec2 q{kSqrt2 + 1.0, 1.0};
  const Vec2 w = lightlike_rotation_field(q);
  const double err = std::max(std::abs(w[0] + q[0]), std::abs(w[1] + q[1]));
  c.check(err <= 1e-15 * norm(q), fmt("|Rot(pi/4) grad f (q) + q| = %.3g (tol 1e-15 |q|)", err));
  const auto e = hyperbolic_escape(kB8, 0.1, 1e-4);
  c.check(e.curve.all_steps(CausalClass::TimelikePos), "push-off steps all TimelikePos");
  c.check(e.crossing_height > 0.0 && e.crossing_height < 1e-2,
          fmt("eps_hat 1e-4 crosses the y1-axis at %.6g (need < 1e-2)", e.crossing_height));
  for (double eh : {1e-5, 1e-6})
    c.note(fmt("eps_hat %.0e crossing height %.6g", eh, hyperbolic_escape(kB8, 0.1, eh).crossing_height));
}

void criterion7() {
  Criterion c{7, "disjoint pasts at b = 8", 60};
  const auto gq = reach_grid(kB8, kQProjection, Orientation::Past, Domain{}, 800, 800, 0.01);
  const auto gp = reach_grid(kB8, kPProjection, Orientation::Past, Domain{}, 800, 800, 0.01);
  const std::size_t shared = shared_cells(gq, gp);
  c.check(shared == 0, fmt("shared cells %.0f (need 0)", static_cast<double>(shared)));
  c.note(fmt("reached from q %.0f, from p %.0f, from q only %.0f", static_cast<double>(gq.count()),
             static_cast<double>(gp.count()), static_cast<double>(gq.count() - shared)));

  const auto cert = assemble_barrier(AssembleOptions{});
  c.check(cert.verified(), "b = 8 certificate Verified");
  std::mt19937_64 rng(0);
  int forbidden = 0, crossings = 0;
  for (int k = 0; k < 100; ++k) {
    const auto r = crossing_check(cert, steered_curve(kB8, kQProjection, Orientation::Past, rng),
                                  Orientation::Past);
    forbidden += r.forbidden;
    crossings += r.crossings;
  }
  c.check(forbidden == 0, fmt("Monte Carlo: %.0f of 100 past curves cross forbidden (%.0f crossings)",
                              forbidden, crossings));
}

void criterion8() {
  Criterion c{8, "push-up suite", 10};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  int good = 0;
  for (int k = 0; k < 20; ++k) {
    PlanePoint p;
    do p = {0.5 * u(rng), 0.2 * u(rng)};
    while (classify_region(kB8, p) != RegionLabel::OmegaPlus);
    const double r = 0.5 + 0.75 * (u(rng) + 1), phi = oracle::kPi * u(rng);
    const Point4 target{p[0] * r, p[1] * r, r * std::cos(phi), r * std::sin(phi)};
    try {
      const auto res = push_up(kB8, target);
      good += res.curve.all_steps(CausalClass::TimelikePos) && res.curve.z.back() == target;
    } catch (const Error& e) {
      c.note(e.what());
    }
  }
  c.check(good == 20, fmt("%.0f of 20 targets reached with every step TimelikePos", good));
}

void criterion9() {
  Criterion c{9, "geodesic suite", 10};
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Point4 z{nd(rng), nd(rng), nd(rng), nd(rng)};
    const Vec4 x = xf_field(kB8, z);
    worst = std::max(worst, std::abs(metric_g(kB8, z, x, x) - (1.0 - kB8.zeta())));
  }
  c.check(worst <= 1e-12, fmt("|g(X_f, X_f) - (1 - zeta)| max %.3g over 1e3 points (tol 1e-12)", worst));
  const double bound = std::sqrt(kB8.zeta() - 1.0) * 2.0;
  double longest = 0.0;
  for (int k = 0; k < 1000; ++k)
    longest = std::max(longest, g_length(kB8, random_timelike_curve(kB8, -1.0, 1.0, rng)));
  c.check(longest <= bound + 1e-9, fmt("longest of 1e3 random curves %.6f vs bound %.6f", longest, bound));
  const auto line = gradient_line(kB8, random_on_level(kB8, -1.0, rng), 1.0, 20000);
  const double gap = std::abs(g_length(kB8, line) - bound);
  c.check(gap <= 1e-6, fmt("gradient line misses the bound by %.3g (tol 1e-6)", gap));
}

void criterion10() {
  Criterion c{10, "drift lower bound", 5};
  const double T = 0.5;
  double worst = 1e300;
  for (double k : {0.5, 1.0, 2.0}) {
    const auto d = drift_solution([k](double x, double) { return k * std::sqrt(x); }, k, k, T, T + 2);
    for (int i = 0; i <= 2000; ++i) {
      const double t = T + 2.0 * i / 2000;
      worst = std::min(worst, d.at(t) - 0.25 * k * k * (t - T) * (t - T));
    }
  }
  c.check(worst >= -1e-6, fmt("min of X(t) - c^2 (t - T)^2 / 4 = %.3g (tol -1e-6), c in {0.5, 1, 2}", worst));
  for (double b : {50.0, 200.0}) {
    const double r = holder_gradient_min_ratio(b);
    c.check(r >= 0.04, fmt("b = %.0f: min d/dx (Delta / A^2) / b = %.4f (need >= 0.04)", b, r));
  }
}

void criterion11() {
  Criterion c{11, "threshold scan", 300};
  ThresholdOptions opt;
  const auto r = threshold_search(opt);
  c.check(r.b_hi <= 8.0, fmt("[1, 8] bracket [%.5f, %.5f] after %.0f evaluations", r.b_lo, r.b_hi, r.evaluations));
  opt.b_hi = 1.05;
  bool none = false;
  try {
    threshold_search(opt);
  } catch (const Error& e) {
    none = e.kind() == ErrorKind::NoVerifiedPoint;
  }
  c.check(none, "[1, 1.05] reports NoVerifiedPoint");
}

}  // namespace

int main() {
  const auto run = [](void (*f)()) {
    try {
      f();
    } catch (const std::exception& e) {
      std::printf("FAIL    unexpected error: %s\n", e.what());
      ++g_failed;
    }
  };
  for (auto f : {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6,
                 criterion7, criterion8, criterion9, criterion10, criterion11})
    run(f);
  std::printf("%d of 11 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
