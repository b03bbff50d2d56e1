#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "morse_causal/projection.hpp"

namespace morse {

// Coefficients of the non-timelike criterion for a graph x2 = x(x1) written
// as A v^2 + 2 B v + Cq >= 0 with t = x1, x = x2 and v = dx/dt.
struct QuadCoeffs {
  double A;
  double B;
  double Cq;
  double G;
};

QuadCoeffs quad_coeffs(const MorseChart& chart, double t, double x);

// B^2 - A Cq, returned in the factored form
//   -G (x^4 b^2 - x^2 ((b^2 - 4b + 1)(1 + t^2) + 8b) + (t^4 - 6t^2 + 1)).
// Throws FormMismatch if the two forms disagree beyond 1e-6 relative.
double discriminant(const MorseChart& chart, double t, double x);

// Closed interval of barrier slopes (v-, v+), empty when the discriminant is
// negative. Throws DegenerateA when |A| < 1e-12.
std::optional<std::pair<double, double>> v_range(const MorseChart& chart,
                                                 double t, double x);

// Lower positive root of the discriminant in x (the upper half of the oval
// over x1 = t). Requires t^4 - 6t^2 + 1 >= 0.
double x_plus_minus(double b, double t);

// Central-difference slope of x_plus_minus (step 1e-6).
double x_plus_minus_slope(double b, double t);

// sqrt((t^4 - 6t^2 + 1) / phi), a lower bound for x_plus_minus.
double box_lower_bound(double b, double t);

// Spectrum of the criterion as a quadratic form on directions d = (d1, d2):
// Q(d) = Cq d1^2 + 2B d1 d2 + A d2^2, with l1 <= l2 and unit eigenvectors.
struct CriterionSpectrum {
  double l1;
  double l2;
  Vec2 e1;
  Vec2 e2;
};

CriterionSpectrum criterion_spectrum(const MorseChart& chart,
                                     const PlanePoint& p);

// d/dx (Delta / A^2) by central differences (step 1e-7 x).
double holder_gradient(double b, double t, double x);

// Minimum of holder_gradient / b over t in [-0.1, 0], x in (0.75/b, 1.5/b).
double holder_gradient_min_ratio(double b, int nt = 41, int nx = 61);

struct HyperbolaCoeffs {
  double c4;
  double c2;
  double c0;
};

// Residual of gamma(t) = beta sqrt(1 + a t^2) times (1 + a t^2) equals
// c4 t^4 + c2 t^2 + c0.
HyperbolaCoeffs hyperbola_coeffs(double b, double beta, double a);

enum class Parametrization { Graph, Free };

struct CurveSample {
  double t;  // x1 for graph curves, curve parameter otherwise
  PlanePoint p;
  PlaneVec tangent;  // (1, slope) for graph curves, unit otherwise
};

struct PlaneCurve {
  Parametrization param = Parametrization::Graph;
  std::vector<CurveSample> samples;
};

enum class Verdict { Verified, Falsified };

const char* to_string(Verdict v);

// Residuals below this count as timelike.
inline constexpr double kResidualTolerance = 1e-12;

struct CertificatePiece {
  std::string name;
  PlaneCurve curve;
  std::vector<double> residuals;
  double min_residual = 0.0;
  double argmin_t = 0.0;
  // Lower pieces are traversed against their sample order.
  bool reversed = false;
};

struct BarrierCertificate {
  std::map<std::string, double> params;
  std::vector<CertificatePiece> pieces;
  // Named auxiliary checks, all of which must hold for Verified.
  std::map<std::string, bool> checks;
  double min_margin = 0.0;
  std::string argmin_piece;
  double argmin_t = 0.0;
  Verdict verdict = Verdict::Falsified;
  BarrierSign sign = BarrierSign::NotBarrier;

  bool verified() const { return verdict == Verdict::Verified; }
};

// Recomputes min_margin, argmin and verdict from the pieces and checks.
void finalize(BarrierCertificate& cert);

// Residual of one sample: A v^2 + 2 B v + Cq for graph curves, the plane
// residual of the unit tangent otherwise.
double sample_residual(const MorseChart& chart, Parametrization param,
                       const CurveSample& s);

CertificatePiece make_piece(const MorseChart& chart, std::string name,
                            PlaneCurve curve);

BarrierCertificate verify_curve(const MorseChart& chart,
                                const PlaneCurve& curve);

BarrierCertificate verify_hyperbola(double b, double beta, double a,
                                    double t_max, int n);

// Graph of x_plus_minus(t) + a (t - t0)^2 on [t0, t1].
PlaneCurve interpolation_curve(double b, double a, double t0 = -0.1,
                               double t1 = 0.0, int n = 10000);

struct DriftCurve {
  std::vector<double> t;
  std::vector<double> X;

  // X at time s; zero before the departure time, linear between samples.
  double at(double s) const;
};

using DriftField = std::function<double(double x, double t)>;

// Realizes the solution of X' = V(X, t) that leaves 0 at time T, by
// integrating u = sqrt(X). V is checked against c_lo sqrt(x) <= V <= c_hi
// sqrt(x) at every evaluation (c_hi may be infinite).
DriftCurve drift_solution(const DriftField& V, double c_lo, double c_hi,
                          double T, double t_end, int n_steps = 20000);

// Relative drift speed away from the upper oval boundary along the steepest
// barrier slope: v+(t, x_plus_minus(t) + xi) - x_plus_minus'(t).
double holder_drift_speed(double b, double t, double xi);

enum class Construction { HolderField, Literal };

const char* to_string(Construction c);
Construction parse_construction(const std::string& s);

struct AssembleOptions {
  double b = 8.0;
  double a_interp = 2.0;
  double a_hyp = 6.0;
  double beta_target = 0.102;
  double t_max = 50.0;
  int n = 10000;
  Construction construction = Construction::HolderField;
  // Fraction of the barrier sector used by the departure field.
  double departure_fraction = 0.9;
};

// Upper half from p = (-(sqrt2 - 1), 0) over x1 = -0.1 and x1 = 0 into a
// hyperbolic tail, plus its mirror image. Throws GapMismatch when the
// interpolation piece cannot land on beta_target.
BarrierCertificate assemble_barrier(const AssembleOptions& opt);

// The piece from p to x1 = -0.1 alone; it depends only on b, the
// construction and the departure fraction, so scans can reuse it.
PlaneCurve first_piece(const AssembleOptions& opt);
BarrierCertificate assemble_barrier(const AssembleOptions& opt,
                                    const PlaneCurve& first);

struct BarrierPath {
  std::vector<PlanePoint> points;
  std::vector<PlaneVec> tangents;  // unit, along the traversal
};

// Whole curve in traversal order (pieces joined, duplicates dropped).
BarrierPath barrier_path(const BarrierCertificate& cert);

}  // namespace morse
