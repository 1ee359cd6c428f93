#include "doctest.h"

#include "curvecur/counting.hpp"
#include "curvecur/crossings.hpp"
#include "curvecur/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace curvecur;
using namespace curvecur::counting;

namespace {

double trace_len(const std::string& w) {
  return hyperbolic::trace_length(hyperbolic::holonomy(hyperbolic::HolonomyRep::builtin_pt(), w));
}

// Every coprime homology class up to sign with |#a| + |#b| <= qmax, no tree.
long brute_count(double L, long qmax) {
  long n = 0;
  for (long q = 1; q <= qmax; ++q)
    for (long p = 0; p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      bool edge = p == 0 || p == q;
      for (bool neg : {false, true}) {
        if (edge && neg) continue;  // a and b have one orientation class
        if (trace_len(slope_curve(p, q, neg).word) <= L) ++n;
      }
    }
  return n;
}

long phi(long n) {
  long r = 0;
  for (long k = 1; k <= n; ++k) r += std::gcd(k, n) == 1;
  return r;
}

}  // namespace

TEST_CASE("christoffel words") {
  CHECK(christoffel(2, 5) == "aabab");
  CHECK(christoffel(0, 1) == "a");
  CHECK(christoffel(1, 1) == "b");
  CHECK(christoffel(1, 2) == "ab");
  CHECK(christoffel(1, 3) == "aab");
  CHECK(slope_curve(2, 5, true).word == "aaBaB");
  CHECK_THROWS_AS(christoffel(2, 4), Error);
  CHECK_THROWS_AS(christoffel(3, 2), Error);
  // letter counts
  for (long q = 1; q <= 20; ++q)
    for (long p = 0; p <= q; ++p)
      if (std::gcd(p, q) == 1) {
        auto w = christoffel(p, q);
        CHECK(std::count(w.begin(), w.end(), 'b') == p);
        CHECK(static_cast<long>(w.size()) == q);
      }
}

TEST_CASE("christoffel words are simple") {
  for (long q = 2; q <= 9; ++q)
    for (long p = 1; p < q; ++p)
      if (std::gcd(p, q) == 1) CHECK(crossings::self_intersection(words::canonical_form(christoffel(p, q))) == 0);
}

TEST_CASE("hyperbolic counts match a tree-free enumeration") {
  auto h = functionals::hyperbolic_length_functional();
  for (double L : {0.5, 5.0, 10.0, 17.5, 25.0}) CHECK(count(h, L) == brute_count(L, 40));
}

TEST_CASE("golden hyperbolic counts") {
  auto h = functionals::hyperbolic_length_functional();
  auto grid = make_grid(40, 7);
  std::vector<long> counts;
  for (double L : grid) counts.push_back(count(h, L));
  CHECK(counts == std::vector<long>{30, 60, 108, 174, 234, 336, 426});
  auto fit = exponent_fit(grid, counts);
  CHECK(fit.exponent >= 1.8);
  CHECK(fit.exponent <= 2.2);
  CHECK(fit.r2 >= 0.99);
}

TEST_CASE("synthetic counts") {
  auto f = synthetic_pq();
  long phis = 0;
  for (long m = 1; m <= 60; ++m) {
    if (m >= 2) phis += phi(m);
    CHECK(count_slopes(f, static_cast<double>(m)) == 2 + 2 * phis);
  }
  auto grid = make_grid(400, 7);
  std::vector<long> counts;
  for (double L : grid) counts.push_back(count_slopes(f, L));
  auto fit = exponent_fit(grid, counts);
  CHECK(std::abs(fit.exponent - 2) <= 0.05);
}

TEST_CASE("count properties") {
  auto f = synthetic_pq();
  long prev = 0;
  for (double L = 0; L <= 30; L += 0.7) {
    long c = count_slopes(f, L);
    CHECK(c >= prev);
    CHECK(c == count_slopes_serial(f, L));
    prev = c;
  }
  CHECK(count_slopes(f, 0.5) == 0);
  // scaling covariance
  auto g = [](const SlopeCurve& s) { return 2.5 * static_cast<double>(s.q); };
  for (double L : {3.0, 11.0, 25.0}) CHECK(count_slopes(g, 2.5 * L) == count_slopes(f, L));
  CHECK_THROWS_AS(count_slopes(f, 1000, 100), Error);
  CHECK_THROWS_AS(exponent_fit({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}), Error);
  CHECK_THROWS_AS(exponent_fit({2, 2, 2, 2, 2, 2}, {1, 2, 3, 4, 5, 6}), Error);
  auto exact = exponent_fit({1, 2, 3, 4, 5, 6}, {1, 4, 9, 16, 25, 36});
  CHECK(exact.exponent == doctest::Approx(2));
  CHECK(exact.r2 == doctest::Approx(1));
}
