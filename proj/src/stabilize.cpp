#include "curvecur/stabilize.hpp"

#include "curvecur/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace curvecur::stabilize {

using functionals::Axiom;
using functionals::Value;

std::vector<Value> power_sequence(const CurveFunctional& f, const ConjClass& c, int n) {
  if (n < 8) fail(ErrorKind::OutOfDomain, "power sequence needs N >= 8");
  if (f.powers) return f.powers(c, n);
  std::vector<Value> out;
  for (int j = 1; j <= n; ++j) out.push_back(f(words::single(words::power(c, j), 1, *f.presentation)));
  return out;
}

namespace {

bool all_exact(const std::vector<Value>& seq) {
  return std::all_of(seq.begin(), seq.end(), [](const Value& v) { return v.exact.has_value(); });
}

}  // namespace

StableEstimate stable_value(const CurveFunctional& f, const ConjClass& c, int n) {
  if (!f.claims(Axiom::QuasiSmoothing) || !f.claims(Axiom::ConvexUnion))
    fail(ErrorKind::Unsupported, f.id + " does not claim quasi-smoothing and convex union");
  if (n > 64) fail(ErrorKind::BudgetExceeded, "N above 64 exceeds the word length budget");
  auto seq = power_sequence(f, c, n);
  StableEstimate e;
  e.value = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= n; ++j) {
    const Value& v = seq[j - 1];
    e.upper_bounds.push_back(v.value / j);
    e.value = std::min(e.value, v.value / j);
    e.window_limited = e.window_limited || v.window_limited;
  }
  const bool exact = all_exact(seq);
  std::optional<Rational> min_ratio;
  if (exact)
    for (int j = 1; j <= n; ++j) {
      Rational r = *seq[j - 1].exact / j;
      if (!min_ratio || r < *min_ratio) min_ratio = r;
    }
  for (int period = 1; period <= 4 && !e.tail_detected; ++period) {
    if (n < 8 + period) break;
    // differences a_{j+π} - a_j for the last 8 values of j
    bool same = true;
    if (exact) {
      Rational d = *seq[n - 1].exact - *seq[n - 1 - period].exact;
      for (int j = n - period; j > n - period - 8 && same; --j)
        same = *seq[j + period - 1].exact - *seq[j - 1].exact == d;
      Rational s = d / period;
      if (same && s <= *min_ratio) {
        e.tail_detected = true;
        e.period = period;
        e.exact = s;
        e.value = to_double(s);
      }
    } else {
      double d = seq[n - 1].value - seq[n - 1 - period].value;
      for (int j = n - period; j > n - period - 8 && same; --j)
        same = std::abs(seq[j + period - 1].value - seq[j - 1].value - d) <=
               1e-9 * std::max(1.0, std::abs(d));
      double s = d / period;
      if (same && s <= e.value + 1e-9 * std::max(1.0, std::abs(s))) {
        e.tail_detected = true;
        e.period = period;
        e.value = std::min(e.value, s);
      }
    }
  }
  return e;
}

CurveFunctional stable_functional(const CurveFunctional& f, int n) {
  if (!f.claims(Axiom::QuasiSmoothing) || !f.claims(Axiom::ConvexUnion))
    fail(ErrorKind::Unsupported, f.id + " does not claim quasi-smoothing and convex union");
  CurveFunctional g;
  g.id = "stable-" + f.id;
  g.presentation = f.presentation;
  g.claimed = {Axiom::QuasiSmoothing, Axiom::ConvexUnion, Axiom::Homogeneous, Axiom::Stable,
               Axiom::StronglyStable};
  g.eval = [f, n](const words::MultiCurve& c) {
    Value v{0, Rational(0), false, false};
    for (const auto& [k, w] : c.components()) {
      StableEstimate e = stable_value(f, k, n);
      v.value += to_double(w) * e.value;
      if (e.exact && v.exact)
        *v.exact += w * *e.exact;
      else
        v.exact.reset();
      v.window_limited = v.window_limited || e.window_limited;
      v.upper_bound_only = v.upper_bound_only || !e.tail_detected;
    }
    if (v.exact) v.value = to_double(*v.exact);
    return v;
  };
  return g;
}

}  // namespace curvecur::stabilize
