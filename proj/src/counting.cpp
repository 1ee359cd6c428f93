#include "curvecur/counting.hpp"

#include "curvecur/error.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>

namespace curvecur::counting {

words::Word christoffel(long p, long q) {
  if (q < 1 || p < 0 || p > q) fail(ErrorKind::OutOfDomain, "christoffel needs 0 <= p <= q, q >= 1");
  if (std::gcd(p, q) != 1) fail(ErrorKind::NotCoprime, std::to_string(p) + "/" + std::to_string(q));
  words::Word w;
  for (long i = 1; i <= q; ++i) w += (i * p) / q > ((i - 1) * p) / q ? 'b' : 'a';
  return w;
}

SlopeCurve slope_curve(long p, long q, bool negative) {
  SlopeCurve s{p, q, negative, christoffel(p, q)};
  if (negative)
    for (char& c : s.word)
      if (c == 'b') c = 'B';
  return s;
}

namespace {

// Stern–Brocot node between (a-count, b-count) pairs l and r; mediant = l + r.
struct Node {
  long la, lb, ra, rb;
};

SlopeCurve at(long na, long nb, bool neg) { return slope_curve(nb, na + nb, neg); }

struct Counter {
  const SlopeValue& f;
  double L;
  long budget;
  std::atomic<long> visited{0};

  bool fits(const SlopeCurve& s) {
    if (visited.fetch_add(1) + 1 > budget)
      fail(ErrorKind::BudgetExceeded, "more than " + std::to_string(budget) + " curves visited");
    return f(s) <= L;
  }

  long subtree(Node n, bool neg) {
    long total = 0;
    std::vector<Node> stack{n};
    while (!stack.empty()) {
      Node x = stack.back();
      stack.pop_back();
      long a = x.la + x.ra, b = x.lb + x.rb;
      if (!fits(at(a, b, neg))) continue;
      ++total;
      stack.push_back({x.la, x.lb, a, b});
      stack.push_back({a, b, x.ra, x.rb});
    }
    return total;
  }
};

// Frontier of subtrees a few levels down, in a fixed order; nodes above it are
// counted directly.
long split(Counter& c, std::vector<std::pair<Node, bool>>& frontier) {
  long above = 0;
  for (bool neg : {false, true}) {
    std::vector<Node> level{{1, 0, 0, 1}};
    for (int depth = 0; depth < 4; ++depth) {
      std::vector<Node> next;
      for (const Node& x : level) {
        long a = x.la + x.ra, b = x.lb + x.rb;
        if (!c.fits(at(a, b, neg))) continue;
        ++above;
        next.push_back({x.la, x.lb, a, b});
        next.push_back({a, b, x.ra, x.rb});
      }
      level = std::move(next);
    }
    for (const Node& x : level) frontier.push_back({x, neg});
  }
  return above;
}

long axes(Counter& c) {
  // a and b themselves
  return (c.fits(at(1, 0, false)) ? 1 : 0) + (c.fits(at(0, 1, false)) ? 1 : 0);
}

}  // namespace

long count_slopes_serial(const SlopeValue& f, double L, long budget) {
  Counter c{f, L, budget};
  long total = axes(c);
  for (bool neg : {false, true}) total += c.subtree({1, 0, 0, 1}, neg);
  return total;
}

long count_slopes(const SlopeValue& f, double L, long budget) {
  Counter c{f, L, budget};
  long total = axes(c);
  std::vector<std::pair<Node, bool>> frontier;
  total += split(c, frontier);
  const int n = static_cast<int>(frontier.size());
  std::vector<long> parts(n, 0);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      parts[i] = c.subtree(frontier[i].first, frontier[i].second);
    } catch (...) {
#pragma omp critical(curvecur_count_err)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  for (long x : parts) total += x;
  return total;
}

SlopeValue synthetic_pq() {
  return [](const SlopeCurve& s) { return static_cast<double>(s.q); };
}

SlopeValue as_slope_value(const functionals::CurveFunctional& f) {
  return [f](const SlopeCurve& s) {
    return f(words::single(words::canonical_form(s.word), 1, *f.presentation)).value;
  };
}

long count(const functionals::CurveFunctional& f, double L, long budget) {
  if (f.presentation->name != "pt") fail(ErrorKind::Unsupported, "slope counting is on the punctured torus");
  return count_slopes(as_slope_value(f), L, budget);
}

Fit exponent_fit(const std::vector<double>& L, const std::vector<long>& counts) {
  if (L.size() != counts.size()) fail(ErrorKind::DegenerateGrid, "grid and counts differ in size");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < L.size(); ++i)
    if (L[i] > 0 && counts[i] > 0) {
      x.push_back(std::log(L[i]));
      y.push_back(std::log(static_cast<double>(counts[i])));
    }
  if (x.size() < 6) fail(ErrorKind::DegenerateGrid, "need at least 6 grid points with positive counts");
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) fail(ErrorKind::DegenerateGrid, "all grid values are equal");
  Fit f;
  f.exponent = sxy / sxx;
  f.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

std::vector<double> make_grid(double lmax, int points, double lmin) {
  if (points < 2 || !(lmax > 0)) fail(ErrorKind::DegenerateGrid, "grid needs >= 2 points and Lmax > 0");
  if (lmin < 0) lmin = lmax / 4;
  std::vector<double> g;
  for (int k = 0; k < points; ++k) g.push_back(lmin + k * (lmax - lmin) / (points - 1));
  return g;
}

}  // namespace curvecur::counting
