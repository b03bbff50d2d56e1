#pragma once

#include <random>

#include "morse_causal/chart.hpp"

namespace morse {

// Flow of grad f: componentwise exp(a_i t) z_i with a = (-1, -b, 1, 1).
Point4 gradient_flow(const MorseChart& chart, const Point4& z0, double t);

// Integral of sqrt(-g(c', c')) over a polygonal curve, three-point
// Gauss-Legendre per segment. Throws NotTimelike at a node where the
// segment direction is not timelike. Zero-length segments contribute 0.
double g_length(const MorseChart& chart, const Curve4& curve);

// grad f / |grad f|^2; throws CriticalPoint at z = 0.
Vec4 xf_field(const MorseChart& chart, const Point4& z);

// Gradient line through the level set f = f0 up to f = f1 (f0 < f1),
// sampled at n + 1 points. z0 must lie on f = f0.
Curve4 gradient_line(const MorseChart& chart, const Point4& z0, double f1,
                     int n);

// Random point on the level set f = level (level != 0).
Point4 random_on_level(const MorseChart& chart, double level,
                       std::mt19937_64& rng);

// Random future timelike curve from f = f0 to f = f1: each step leaves at an
// angle below `fraction` * theta from grad f and the last step ends exactly on
// f = f1.
Curve4 random_timelike_curve(const MorseChart& chart, double f0, double f1,
                             std::mt19937_64& rng, double fraction = 0.95);

}  // namespace morse
