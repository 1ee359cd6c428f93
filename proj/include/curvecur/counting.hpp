#pragma once

#include "curvecur/functionals.hpp"

#include <functional>
#include <vector>

namespace curvecur::counting {

// Simple closed curve on the punctured torus with homology (#a, ±#b).
struct SlopeCurve {
  long p = 0;  // letters b (or B when negative)
  long q = 1;  // total letters
  bool negative = false;
  words::Word word;
};

// Lower Christoffel word with q - p letters a and p letters b.
// christoffel(2, 5) = "aabab". Throws NotCoprime, OutOfDomain.
words::Word christoffel(long p, long q);
SlopeCurve slope_curve(long p, long q, bool negative = false);

using SlopeValue = std::function<double(const SlopeCurve&)>;

// Unoriented simple closed curves with value <= L, enumerated down the
// Stern–Brocot tree of both sign sectors; a subtree is cut as soon as its root
// exceeds L, so the value must grow along the tree. Throws BudgetExceeded once
// more than `budget` curves have been visited.
long count_slopes(const SlopeValue& f, double L, long budget = 10'000'000);
long count_slopes_serial(const SlopeValue& f, double L, long budget = 10'000'000);

long count(const functionals::CurveFunctional& f, double L, long budget = 10'000'000);

// f(p, q) = q, i.e. |#a| + |#b| of the slope.
SlopeValue synthetic_pq();
SlopeValue as_slope_value(const functionals::CurveFunctional& f);

struct Fit {
  double exponent = 0;
  double r2 = 0;
};

// Least squares slope of log count against log L. Needs >= 6 points with
// positive L and count, and two distinct L; DegenerateGrid otherwise.
Fit exponent_fit(const std::vector<double>& L, const std::vector<long>& counts);

// grid values evenly spaced from lmin (default lmax / 4) to lmax.
std::vector<double> make_grid(double lmax, int points, double lmin = -1);

}  // namespace curvecur::counting
