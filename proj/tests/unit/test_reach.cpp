#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "morse_causal/reach.hpp"
#include "morse_causal/regions.hpp"
#include "oracles.hpp"

using namespace morse;

namespace {

const MorseChart kB8 = MorseChart::make(8);

bool subset(const ReachGrid& a, const ReachGrid& b) {
  for (std::size_t k = 0; k < a.labels.size(); ++k)
    if (a.labels[k] && !b.labels[k]) return false;
  return true;
}

}  // namespace

TEST_CASE("push-off field maps (sqrt2 + 1, 1) to its negative") {
  const Vec2 q{kSqrt2 + 1.0, 1.0};
  const Vec2 w = lightlike_rotation_field(q);
  CHECK(std::abs(w[0] + q[0]) <= 1e-15 * 4);
  CHECK(std::abs(w[1] + q[1]) <= 1e-15 * 4);
  // Same identity from the raw formula Rot(pi/4) (-x, y).
  const double c = std::cos(oracle::kPi / 4), s = std::sin(oracle::kPi / 4);
  CHECK(w[0] == doctest::Approx(-c * q[0] - s * q[1]).epsilon(1e-15));
  CHECK(w[1] == doctest::Approx(-s * q[0] + c * q[1]).epsilon(1e-15));
}

TEST_CASE("hyperbolic escape") {
  const auto e = hyperbolic_escape(kB8, 0.1, 1e-4);
  CHECK(e.curve.all_steps(CausalClass::TimelikePos));
  CHECK(e.curve.z.back()[0] == 0.0);
  CHECK(e.crossing_height > 0.0);
  // Measured height is 0.0311 (about 3.1 sqrt(eps_hat)), above eps^2.
  CHECK(e.crossing_height == doctest::Approx(0.03107703).epsilon(1e-6));
  CHECK_FALSE(e.below_target);
  const auto& z0 = e.curve.z.front();
  CHECK(z0[0] == kSqrt2 + 1.0);
  CHECK(z0[2] == 1.0);
  CHECK_THROWS_AS(hyperbolic_escape(kB8, 0.1, 0.0), Error);
  CHECK_THROWS_AS(hyperbolic_escape(MorseChart::make(8, 3), 0.1, 1e-4), Error);
}

TEST_CASE("escape crossing height falls monotonically with eps_hat") {
  double prev = 1e300;
  for (double eh : {1e-4, 1e-5, 1e-6}) {
    const auto e = hyperbolic_escape(kB8, 0.1, eh);
    CHECK(e.crossing_height < prev);
    CHECK(e.curve.all_steps(CausalClass::TimelikePos));
    prev = e.crossing_height;
  }
  CHECK(prev == doctest::Approx(0.00310755).epsilon(1e-5));
}

TEST_CASE("spiral_connect") {
  // Pitch atan(2 pi / ln 10) exceeds pi/4.
  CHECK_THROWS_AS(spiral_connect(kB8, 0.01, 0.1, 2 * oracle::kPi), Error);
  CHECK_THROWS_AS(spiral_connect(kB8, 0.099, 0.1, 2 * oracle::kPi), Error);
  try {
    spiral_connect(kB8, 0.01, 0.1, 2 * oracle::kPi);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PitchTooSteep);
  }
  const auto s = spiral_connect(kB8, 1e-4, 0.1, 2 * oracle::kPi);
  CHECK(s.all_steps(CausalClass::TimelikePos));
  CHECK(std::hypot(s.z.back()[2], s.z.back()[3]) == doctest::Approx(0.1));
  CHECK(s.z.back()[2] == doctest::Approx(0.1));

  const auto radial = spiral_connect(kB8, 0.01, 0.1, 0.0);
  CHECK(radial.all_steps(CausalClass::TimelikePos));
  for (const auto& z : radial.z) CHECK(z[3] == 0.0);
  CHECK_THROWS_AS(spiral_connect(kB8, 0.1, 0.01, 0.0), Error);
}

TEST_CASE("future of the origin stays in Omega+ up to a collar") {
  const auto g = reach_grid(kB8, {0, 0}, Orientation::Future, Domain{-1, 1, -1, 1},
                            200, 200, 0.01);
  const auto [i0, j0] = g.cell_of({0, 0});
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) CHECK(g.reached(i0 + di, j0 + dj));
  const double h = 2.0 / 200;
  int outside = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!g.reached(i, j)) continue;
      const auto c = g.center(i, j);
      if (classify_region(kB8, c) == RegionLabel::OmegaPlus) continue;
      ++outside;
      // Each escapee touches Omega+ within one cell diagonal.
      bool near = false;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj)
          near |= classify_region(kB8, c + Vec2{di * h, dj * h}) ==
                  RegionLabel::OmegaPlus;
      CHECK(near);
    }
  CHECK(outside * 20 < static_cast<int>(g.count()));
}

TEST_CASE("property: inner and outer approximations sandwich margin 0") {
  const Domain d{-2, 3, -2, 2};
  for (const PlanePoint& seed : {kQProjection, kPProjection, PlanePoint{0.2, 0.5}}) {
    for (auto o : {Orientation::Past, Orientation::Future}) {
      const auto zero = reach_grid(kB8, seed, o, d, 120, 100, 0.0);
      for (double m : {0.01, 0.02}) {
        const auto in = reach_grid(kB8, seed, o, d, 120, 100, m);
        const auto out = reach_grid(kB8, seed, o, d, 120, 100, m, Approximation::Outer);
        CHECK(subset(in, zero));
        CHECK(subset(zero, out));
      }
    }
  }
}

TEST_CASE("property: refining the grid keeps every reached cell") {
  const Domain d{-2, 3, -2, 2};
  for (const PlanePoint& seed : {kQProjection, PlanePoint{0.2, 0.5}}) {
    const auto coarse = reach_grid(kB8, seed, Orientation::Past, d, 100, 80, 0.01);
    const auto fine = reach_grid(kB8, seed, Orientation::Past, d, 200, 160, 0.01);
    int lost = 0;
    for (int j = 0; j < coarse.ny; ++j)
      for (int i = 0; i < coarse.nx; ++i) {
        if (!coarse.reached(i, j)) continue;
        bool any = false;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) any |= fine.reached(2 * i + a, 2 * j + b);
        lost += !any;
      }
    CHECK(lost == 0);
  }
}

TEST_CASE("reach_grid errors and determinism") {
  CHECK_THROWS_AS(reach_grid(kB8, {10, 0}, Orientation::Past, Domain{}, 50, 50, 0.01),
                  Error);
  try {
    reach_grid(kB8, {10, 0}, Orientation::Past, Domain{}, 50, 50, 0.01);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SeedOutsideDomain);
  }
  const auto a = reach_grid(kB8, kQProjection, Orientation::Past, Domain{}, 300, 300, 0.01);
  const auto b = reach_grid(kB8, kQProjection, Orientation::Past, Domain{}, 300, 300, 0.01);
  CHECK(a.labels == b.labels);
  CHECK(shared_cells(a, b) == a.count());
  const auto c = reach_grid(kB8, kQProjection, Orientation::Past, Domain{}, 200, 300, 0.01);
  CHECK_THROWS_AS(shared_cells(a, c), Error);
}

TEST_CASE("pasts of p and q") {
  const auto gp = reach_grid(kB8, kPProjection, Orientation::Past, Domain{}, 400, 400, 0.01);
  const auto gq = reach_grid(kB8, kQProjection, Orientation::Past, Domain{}, 400, 400, 0.01);
  CHECK(gq.count() > shared_cells(gp, gq));  // q reaches cells p does not
  // The inner past of p never enters Omega+.
  for (int j = 0; j < gp.ny; ++j)
    for (int i = 0; i < gp.nx; ++i)
      if (gp.reached(i, j))
        CHECK(classify_region(kB8, gp.center(i, j)) != RegionLabel::OmegaPlus);
  // The outer approximation is allowed to slip into Omega+ next to p.
  const auto outer = reach_grid(kB8, kPProjection, Orientation::Past, Domain{}, 400,
                                400, 0.01, Approximation::Outer);
  CHECK(subset(gp, outer));
  CHECK(classify_region(kB8, outer.center(200, 200)) == RegionLabel::OmegaPlus);
  CHECK(outer.reached(200, 200));
}

TEST_CASE("crossing_check orientations") {
  const auto cert = assemble_barrier(AssembleOptions{});
  REQUIRE(cert.verified());
  auto segment = [](PlanePoint a, PlanePoint b) {
    PlaneCurve c;
    c.param = Parametrization::Free;
    c.samples = {{0.0, a, b - a}, {1.0, b, b - a}};
    return c;
  };
  // The upper tail sits near height 1.25 over x1 = 5.
  const auto up = segment({5, 0.5}, {5, 2.0});
  const auto down = segment({5, 2.0}, {5, 0.5});
  const auto ru = crossing_check(cert, up, Orientation::Future);
  const auto rd = crossing_check(cert, down, Orientation::Future);
  CHECK(ru.crossings == 1);
  CHECK(rd.crossings == 1);
  CHECK(ru.forbidden != rd.forbidden);
  // Reading the same curve as a past curve swaps the verdict.
  CHECK(crossing_check(cert, up, Orientation::Past).forbidden == !ru.forbidden);
  const auto& bad = ru.forbidden ? ru : rd;
  CHECK(bad.at[0] == doctest::Approx(5.0));
  CHECK(bad.at[1] == doctest::Approx(0.102 * std::sqrt(1 + 6 * 25.0)).epsilon(1e-3));

  // The barrier does not cross itself.
  const auto path = barrier_path(cert);
  PlaneCurve self;
  self.param = Parametrization::Free;
  for (std::size_t i = 0; i < path.points.size(); ++i)
    self.samples.push_back({static_cast<double>(i), path.points[i], path.tangents[i]});
  const auto rs = crossing_check(cert, self, Orientation::Future);
  CHECK(rs.crossings == 0);
  CHECK_FALSE(rs.forbidden);
}

TEST_CASE("steered past curves from q never cross the barrier the wrong way") {
  const auto cert = assemble_barrier(AssembleOptions{});
  std::mt19937_64 rng(7);
  int crossings = 0;
  for (int k = 0; k < 20; ++k) {
    const auto c = steered_curve(kB8, kQProjection, Orientation::Past, rng);
    REQUIRE(c.samples.size() > 10);
    for (std::size_t i = 0; i < c.samples.size(); i += 97) {
      const auto cls = classify_plane(kB8, c.samples[i].p, c.samples[i].tangent).cls;
      CHECK((cls == CausalClass::TimelikeNeg ||
             classify_region(kB8, c.samples[i].p) != RegionLabel::ScriptC));
    }
    const auto r = crossing_check(cert, c, Orientation::Past);
    CHECK_FALSE(r.forbidden);
    crossings += r.crossings;
  }
  CHECK(crossings > 0);
}

TEST_CASE("push_up reaches random targets over Omega+") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 8; ++k) {
    PlanePoint P;
    do P = {0.5 * u(rng), 0.2 * u(rng)};
    while (classify_region(kB8, P) != RegionLabel::OmegaPlus);
    const double r = 0.5 + 0.75 * (u(rng) + 1), phi = oracle::kPi * u(rng);
    const Point4 target{P[0] * r, P[1] * r, r * std::cos(phi), r * std::sin(phi)};
    const auto res = push_up(kB8, target);
    CHECK(res.curve.all_steps(CausalClass::TimelikePos));
    CHECK(res.curve.z.front()[0] == kSqrt2 + 1.0);
    CHECK(res.curve.z.back() == target);
    CHECK(res.crossing_height < res.eps);
  }
  CHECK_THROWS_AS(push_up(kB8, {3.0, 0.0, 1.0, 0.0}), Error);
}
