#include "morse_causal/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

#include "morse_causal/parallel.hpp"

namespace morse {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidChart: return "InvalidChart";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::OnStableManifold: return "OnStableManifold";
    case ErrorKind::NonpositiveY: return "NonpositiveY";
    case ErrorKind::UnsupportedZeta: return "UnsupportedZeta";
    case ErrorKind::DegenerateRoots: return "DegenerateRoots";
    case ErrorKind::ComponentNotFound: return "ComponentNotFound";
    case ErrorKind::FormMismatch: return "FormMismatch";
    case ErrorKind::DegenerateA: return "DegenerateA";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::VerticalTangent: return "VerticalTangent";
    case ErrorKind::EnvelopeViolated: return "EnvelopeViolated";
    case ErrorKind::GapMismatch: return "GapMismatch";
    case ErrorKind::CrossingMissed: return "CrossingMissed";
    case ErrorKind::PitchTooSteep: return "PitchTooSteep";
    case ErrorKind::SeedOutsideDomain: return "SeedOutsideDomain";
    case ErrorKind::TangencyUnresolved: return "TangencyUnresolved";
    case ErrorKind::NotTimelike: return "NotTimelike";
    case ErrorKind::CriticalPoint: return "CriticalPoint";
    case ErrorKind::NoVerifiedPoint: return "NoVerifiedPoint";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MORSE_CAUSAL_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(worker_count(), std::max<std::size_t>(1, n / 64));
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, &errors, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace morse
