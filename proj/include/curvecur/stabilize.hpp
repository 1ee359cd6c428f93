#pragma once

#include "curvecur/functionals.hpp"

#include <optional>
#include <vector>

namespace curvecur::stabilize {

using functionals::CurveFunctional;
using words::ConjClass;

struct StableEstimate {
  double value = 0;
  std::optional<Rational> exact;
  std::vector<double> upper_bounds;  // f(C^n)/n
  bool tail_detected = false;
  int period = 0;  // of the detected tail
  bool window_limited = false;
};

// [f(C), f(C²), ..., f(C^N)] on honest powers. N >= 8.
std::vector<functionals::Value> power_sequence(const CurveFunctional& f, const ConjClass& c, int n);

// Running inf of f(C^n)/n. A tail with f(C^{n+π}) - f(C^n) = π·s over the last 8
// samples (π <= 4) and s at most every computed ratio is reported as the limit.
// Throws Unsupported unless f claims quasi-smoothing and convex union,
// BudgetExceeded for N > 64.
StableEstimate stable_value(const CurveFunctional& f, const ConjClass& c, int n = 64);

// Component-wise stable value combined by the weights.
CurveFunctional stable_functional(const CurveFunctional& f, int n = 64);

}  // namespace curvecur::stabilize
