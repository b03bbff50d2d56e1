#include "morse_causal/threshold.hpp"

#include "morse_causal/regions.hpp"

namespace morse {

bool verified_at(double b, const ThresholdOptions& opt, AssembleOptions* witness) {
  const double blo = beta_roots(b).first;
  AssembleOptions base;
  base.b = b;
  base.n = opt.samples;
  base.construction = opt.construction;
  PlaneCurve first;
  try {
    first = first_piece(base);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::GapMismatch || e.kind() == ErrorKind::OutOfDomain)
      return false;
    throw;
  }
  for (double f : opt.beta_factors) {
    for (double ai : opt.a_interp) {
      for (double ah : opt.a_hyp) {
        AssembleOptions a = base;
        a.a_interp = ai;
        a.a_hyp = ah;
        a.beta_target = blo * (1.0 + f);
        try {
          if (assemble_barrier(a, first).verified()) {
            if (witness) *witness = a;
            return true;
          }
        } catch (const Error& e) {
          // A piece that cannot be built counts as a failed parameter point.
          if (e.kind() != ErrorKind::GapMismatch && e.kind() != ErrorKind::OutOfDomain &&
              e.kind() != ErrorKind::DegenerateA)
            throw;
        }
      }
    }
  }
  return false;
}

ThresholdResult threshold_search(const ThresholdOptions& opt) {
  if (!(opt.b_lo > 0.0) || opt.b_hi < opt.b_lo)
    throw Error(ErrorKind::OutOfDomain, "threshold: need 0 < b_lo <= b_hi");
  ThresholdResult res;
  AssembleOptions w;
  ++res.evaluations;
  if (!verified_at(opt.b_hi, opt, &w))
    throw Error(ErrorKind::NoVerifiedPoint,
                "no verified certificate at b = " + std::to_string(opt.b_hi));
  res.witness = w;
  res.b_hi = opt.b_hi;
  res.b_lo = opt.b_hi;
  if (opt.b_lo == opt.b_hi) return res;
  ++res.evaluations;
  if (verified_at(opt.b_lo, opt, &w)) {
    res.b_lo = res.b_hi = opt.b_lo;
    res.witness = w;
    return res;
  }
  double lo = opt.b_lo, hi = opt.b_hi;
  while (hi - lo > opt.tolerance) {
    const double mid = 0.5 * (lo + hi);
    ++res.evaluations;
    if (verified_at(mid, opt, &w)) {
      hi = mid;
      res.witness = w;
    } else {
      lo = mid;
    }
  }
  res.b_lo = lo;
  res.b_hi = hi;
  return res;
}

}  // namespace morse
