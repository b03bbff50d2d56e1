#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace morse {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;
using Point4 = Vec4;

enum class ErrorKind {
  InvalidChart,
  ZeroVector,
  OnStableManifold,
  NonpositiveY,
  UnsupportedZeta,
  DegenerateRoots,
  ComponentNotFound,
  FormMismatch,
  DegenerateA,
  OutOfDomain,
  VerticalTangent,
  EnvelopeViolated,
  GapMismatch,
  CrossingMissed,
  PitchTooSteep,
  SeedOutsideDomain,
  TangencyUnresolved,
  NotTimelike,
  CriticalPoint,
  NoVerifiedPoint,
  Io,
  Parse,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this exception; `kind()` is the
// stable, machine-checkable part, `what()` carries context for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

template <std::size_t N>
constexpr double dot(const std::array<double, N>& a,
                     const std::array<double, N>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <std::size_t N>
double norm(const std::array<double, N>& a) {
  return std::sqrt(dot(a, a));
}

template <std::size_t N>
std::array<double, N> scaled(const std::array<double, N>& a, double s) {
  std::array<double, N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] * s;
  return r;
}

template <std::size_t N>
std::array<double, N> operator+(const std::array<double, N>& a,
                                const std::array<double, N>& b) {
  std::array<double, N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
  return r;
}

template <std::size_t N>
std::array<double, N> operator-(const std::array<double, N>& a,
                                const std::array<double, N>& b) {
  std::array<double, N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
  return r;
}

template <std::size_t N>
bool is_zero(const std::array<double, N>& a) {
  for (double x : a)
    if (x != 0.0) return false;
  return true;
}

// z-component of the planar cross product.
constexpr double cross(const Vec2& a, const Vec2& b) {
  return a[0] * b[1] - a[1] * b[0];
}

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v[0] - s * v[1], s * v[0] + c * v[1]};
}

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;

}  // namespace morse
