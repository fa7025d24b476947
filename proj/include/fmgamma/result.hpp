#pragma once
// Common result type of every double-precision evaluator.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace fmg {

using cplx = std::complex<double>;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

enum Flag : unsigned {
  kFlagNone = 0,
  kFlagTruncated = 1u << 0,       // term/iteration cap reached before the tolerance
  kFlagFallback = 1u << 1,        // switched to a different scheme
  kFlagDegenerate = 1u << 2,      // vanishing denominator or difference
  kFlagBranchSwitch = 1u << 3,    // salzer: P/Q switch side of the imaginary axis
  kFlagCancellation = 1u << 4,    // severe cancellation expected
  kFlagBranchAmbiguous = 1u << 5, // square root branch pick was a tie
  kFlagInterpretation = 1u << 6,  // result relies on a reading of an unclear formula
  kFlagSingularCarrier = 1u << 7, // fourier at m = 0
  kFlagAbsoluteMetric = 1u << 8,  // digits measured as absolute error
  kFlagUnreachable = 1u << 9,     // gridtaylor: target digits not reachable
  kFlagLimit = 1u << 10,          // z == 0 answered by the limit 1/(2m+1)
  kFlagMethodError = 1u << 11,    // survey: the method raised at this point, d left at 0
};

struct SeriesResult {
  cplx value{};
  int terms_used = 1;
  double error_estimate = 0.0;  // relative
  unsigned flags = kFlagNone;
};

namespace detail {

inline bool lower_half(cplx z) { return std::signbit(z.imag()); }

// Evaluate on the upper half plane and reflect, so that f(conj z) is the
// exact conjugate of f(z) for every method.
template <class Fn>
SeriesResult reflect(cplx z, Fn&& fn) {
  if (!lower_half(z)) return fn(z);
  SeriesResult r = fn(std::conj(z));
  r.value = std::conj(r.value);
  return r;
}

// Relative estimate from absolute parts, floored at one ulp.
inline double rel_estimate(double abs_err, cplx value) {
  double av = std::abs(value);
  if (!(av > 0.0) || !std::isfinite(av)) return std::isfinite(abs_err) && abs_err == 0.0 ? kEps : 1.0;
  double e = abs_err / av;
  if (!std::isfinite(e)) return 1e300;
  return std::max(e, kEps);
}

}  // namespace detail

}  // namespace fmg
