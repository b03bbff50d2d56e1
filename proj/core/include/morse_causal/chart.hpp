#pragma once

#include <optional>
#include <vector>

#include "morse_causal/common.hpp"

namespace morse {

// Standard index-(2,2) Morse chart on R^4 with Euclidean background:
//   f(x1, x2, y1, y2) = 1/2 (-x1^2 - b x2^2 + y1^2 + y2^2).
// Cones are C+(z) = {v : angle(v, grad f) < theta} with cos(theta) = zeta^-1/2.
class MorseChart {
 public:
  static MorseChart make(double b, double zeta = 2.0);

  double b() const noexcept { return b_; }
  double zeta() const noexcept { return zeta_; }
  double theta() const noexcept { return theta_; }
  double cos_theta() const noexcept { return cos_theta_; }
  // Diagonal of the Hessian: (-1, -b, 1, 1).
  Vec4 coeffs() const noexcept { return {-1.0, -b_, 1.0, 1.0}; }
  bool has_right_angle_cones() const noexcept { return zeta_ == 2.0; }

 private:
  MorseChart(double b, double zeta);

  double b_;
  double zeta_;
  double theta_;
  double cos_theta_;
};

enum class CausalClass { TimelikePos, TimelikeNeg, Lightlike, Spacelike };

const char* to_string(CausalClass c);

inline bool is_timelike(CausalClass c) {
  return c == CausalClass::TimelikePos || c == CausalClass::TimelikeNeg;
}

struct Classification {
  CausalClass cls;
  // |cos angle(v, grad f)| - zeta^-1/2; zero for Lightlike.
  double margin;
};

// Band on |cos angle - zeta^-1/2| inside which a vector counts as lightlike.
inline constexpr double kLightlikeTolerance = 1e-9;

double morse_f(const MorseChart& chart, const Point4& z);
Vec4 gradient4(const MorseChart& chart, const Point4& z);
double metric_g(const MorseChart& chart, const Point4& z, const Vec4& u,
                const Vec4& v);

// Throws ZeroVector for v == 0. The critical point z == 0 admits no timelike
// vector, every v is reported Lightlike there.
Classification classify4(const MorseChart& chart, const Point4& z,
                         const Vec4& v);

// Same test with the cone half-angle replaced by `theta` (used to shrink or
// grow cones by a margin).
Classification classify4_with_angle(const MorseChart& chart, const Point4& z,
                                    const Vec4& v, double theta);

// Eigen-directions of the tilted 2-D gradient matrices
//   A+- = -Rot(+-theta) diag(1, b)
// on the stable plane. Present when cos(theta) >= 2 sqrt(b) / (1 + b).
struct EigenLines {
  std::array<Vec2, 2> plus;   // unit eigenvectors of A+
  std::array<Vec2, 2> minus;  // unit eigenvectors of A-
  bool repeated;              // threshold case, both entries coincide
};

std::optional<EigenLines> eigenlines2d(const MorseChart& chart);

// Polygonal curve in the chart. step_class[i] classifies the secant from z[i]
// to z[i+1] at its midpoint.
struct Curve4 {
  std::vector<double> t;
  std::vector<Point4> z;
  std::vector<CausalClass> step_class;

  bool all_steps(CausalClass c) const;
};

// Recomputes step_class from the samples.
void classify_steps(const MorseChart& chart, Curve4& curve);

// Appends `tail` to `head`; a duplicated joint point is dropped. Otherwise
// the joining chord is added with a placeholder class, so run classify_steps
// afterwards.
void append(Curve4& head, const Curve4& tail);

}  // namespace morse
