#pragma once

#include <vector>

#include "morse_causal/barrier.hpp"

namespace morse {

struct ThresholdOptions {
  double b_lo = 1.0;
  double b_hi = 8.0;
  double tolerance = 0.05;  // bracket width at which bisection stops
  // beta_target = beta_lower(b) * (1 + factor)
  std::vector<double> beta_factors{0.001, 0.01, 0.05, 0.1, 0.2, 0.5};
  std::vector<double> a_hyp{0.5, 1.0, 2.0, 4.0, 6.0, 10.0, 20.0};
  std::vector<double> a_interp{0.5, 1.0, 2.0, 3.0};
  int samples = 4000;
  Construction construction = Construction::HolderField;
};

struct ThresholdResult {
  double b_lo = 0.0;  // largest scanned b without a verified certificate
  double b_hi = 0.0;  // smallest scanned b with one
  int evaluations = 0;
  AssembleOptions witness;  // parameters verified at b_hi
};

// Scans the parameter grid at b; fills `witness` with the first verified
// combination.
bool verified_at(double b, const ThresholdOptions& opt, AssembleOptions* witness);

// Bisection on the scan predicate. Throws NoVerifiedPoint when b_hi fails.
// If b_lo already verifies, the bracket is [b_lo, b_lo].
ThresholdResult threshold_search(const ThresholdOptions& opt);

}  // namespace morse
