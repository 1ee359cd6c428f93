#include "doctest.h"
#include "gen.hpp"

#include "curvecur/crossings.hpp"
#include "curvecur/error.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

using namespace curvecur;
using namespace curvecur::crossings;
using curvecur::words::canonical_form;
using curvecur::words::parse_multicurve;

namespace {
const auto& rep = hyperbolic::HolonomyRep::builtin_pt();

// Homology class (#a - #A, #b - #B).
std::pair<long, long> homology(const std::string& w) {
  long x = 0, y = 0;
  for (char c : w) {
    if (c == 'a') ++x;
    if (c == 'A') --x;
    if (c == 'b') ++y;
    if (c == 'B') --y;
  }
  return {x, y};
}

std::string lower_christoffel(int p, int q) {
  std::string w;
  for (int i = 1; i <= q; ++i) w += (i * p) / q > ((i - 1) * p) / q ? 'b' : 'a';
  return w;
}

double hyp_length(const words::ConjClass& c) {
  auto m = hyperbolic::holonomy(rep, c.canonical);
  return m.is_hyperbolic() ? hyperbolic::trace_length(m) : 0.0;
}
}  // namespace

TEST_CASE("crossings of simple examples") {
  CHECK(enumerate_essential_crossings(parse_multicurve("a")).empty());
  auto sq = enumerate_essential_crossings(parse_multicurve("aa"));
  REQUIRE(sq.size() == 1);
  CHECK(sq[0].kind == CrossingKind::PowerType);
  CHECK(sq[0].m == 1);
  CHECK(sq[0].n == 2);
  for (int r : {3, 5, 6}) {
    auto ab = enumerate_essential_crossings(parse_multicurve("a; b"), {r, false});
    REQUIRE(ab.size() == 1);
    CHECK(ab[0].kind == CrossingKind::LinkedAxes);
    CHECK(ab[0].conjugator == "");
  }
  CHECK(intersection_number(canonical_form("a"), canonical_form("a")) == 0);
  CHECK(intersection_number(canonical_form("a"), canonical_form("b")) == 1);
  CHECK(self_intersection(canonical_form("a")) == 0);
  CHECK(self_intersection(canonical_form("abAB")) == 0);
  CHECK(self_intersection(canonical_form("abaB")) == self_intersection(canonical_form("abaB"), 8));
  CHECK_THROWS_AS(enumerate_essential_crossings(parse_multicurve("a", words::genus_two())), Error);
}

TEST_CASE("simple closed curves intersect as their homology classes") {
  std::vector<std::string> slopes;
  for (int q = 1; q <= 7; ++q)
    for (int p = 0; p <= q; ++p)
      if (std::gcd(p, q) == 1) slopes.push_back(lower_christoffel(p, q));
  for (const auto& u : slopes) {
    CHECK(self_intersection(canonical_form(u)) == 0);
    for (const auto& v : slopes) {
      auto [x1, y1] = homology(u);
      auto [x2, y2] = homology(v);
      long det = std::labs(x1 * y2 - x2 * y1);
      int r = std::max(6, complete_radius(u, v));
      CHECK(intersection_number(canonical_form(u), canonical_form(v), r) == det);
    }
  }
}

TEST_CASE("candidate window agrees with exhaustive enumeration") {
  testgen::Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    std::string u = testgen::cyclic_word(rng, "ab", 4);
    std::string v = testgen::cyclic_word(rng, "ab", 4);
    auto fast = linked_cosets(rep, u, v, complete_radius(u, v));
    auto slow = linked_cosets_exhaustive(rep, u, v, 6);
    CHECK(fast == slow);
  }
  for (int i = 0; i < 6; ++i) {
    std::string u = testgen::cyclic_word(rng, "ab", 6);
    std::string v = testgen::cyclic_word(rng, "ab", 6);
    CHECK(linked_cosets(rep, u, v, complete_radius(u, v)) ==
          linked_cosets_exhaustive(rep, u, v, 8));
  }
}

TEST_CASE("serial and parallel scans agree") {
  testgen::Rng rng(23);
  for (int i = 0; i < 30; ++i) {
    std::string u = testgen::cyclic_word(rng, "ab", 10);
    std::string v = testgen::cyclic_word(rng, "ab", 10);
    CHECK(linked_cosets(rep, u, v, 6) == linked_cosets_serial(rep, u, v, 6));
  }
}

TEST_CASE("tree linking agrees with the circle") {
  const std::string order = boundary_letter_order(rep);
  CHECK(order.size() == 4);
  testgen::Rng rng(31);
  int compared = 0;
  for (int i = 0; i < 3000; ++i) {
    std::string u = testgen::cyclic_word(rng, "ab", static_cast<int>(rng.range(1, 5)));
    std::string v = testgen::cyclic_word(rng, "ab", static_cast<int>(rng.range(1, 5)));
    std::string g = testgen::reduced_word(rng, "ab", static_cast<int>(rng.range(0, 4)));
    auto hu = hyperbolic::holonomy(rep, u), hv = hyperbolic::holonomy(rep, v);
    if (!hu.is_hyperbolic() || !hv.is_hyperbolic()) continue;
    std::string conj = words::free_reduce(g + v + words::inverse(g));
    if (words::free_reduce(u + conj) == words::free_reduce(conj + u)) continue;
    bool circle = hyperbolic::linked(hyperbolic::axis_endpoints(hu),
                                     hyperbolic::apply(hyperbolic::holonomy(rep, g),
                                                       hyperbolic::axis_endpoints(hv)));
    CHECK(tree_linked(order, u, g, v) == circle);
    ++compared;
  }
  CHECK(compared > 2000);
}

TEST_CASE("long runs do not defeat linking") {
  CHECK_NOTHROW(intersection_number(canonical_form("abABBBaBBBBBBBB"), canonical_form("b")));
}

TEST_CASE("double coset normal form is a class invariant") {
  testgen::Rng rng(29);
  for (int i = 0; i < 200; ++i) {
    std::string u = testgen::cyclic_word(rng, "ab", 5);
    std::string v = testgen::cyclic_word(rng, "ab", 5);
    std::string g = testgen::reduced_word(rng, "ab", static_cast<int>(rng.range(0, 5)));
    int i1 = static_cast<int>(rng.range(-3, 3)), j1 = static_cast<int>(rng.range(-3, 3));
    auto pw = [](const std::string& w, int k) {
      return k >= 0 ? words::repeat(w, k) : words::repeat(words::inverse(w), -k);
    };
    std::string h = words::free_reduce(pw(u, i1) + g + pw(v, j1));
    CHECK(double_coset_normal_form(u, h, v) == double_coset_normal_form(u, g, v));
  }
}

TEST_CASE("intersection number properties") {
  testgen::Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    auto c = canonical_form(testgen::cyclic_word(rng, "ab", 8));
    auto d = canonical_form(testgen::cyclic_word(rng, "ab", 8));
    long cd = intersection_number(c, d), dc = intersection_number(d, c);
    CHECK(cd == dc);
    auto [x1, y1] = homology(c.canonical);
    auto [x2, y2] = homology(d.canonical);
    long det = std::labs(x1 * y2 - x2 * y1);
    // Geometric bounds algebraic, with the same parity.
    CHECK(cd >= det);
    CHECK((cd - det) % 2 == 0);
    if (i < 25) {
      auto c2 = words::power(c, 2);
      CHECK(intersection_number(c2, d, std::max(6, complete_radius(c2.canonical, d.canonical))) ==
            2 * cd);
    }
  }
}

TEST_CASE("self-intersection of powers") {
  for (const char* w : {"a", "ab", "aab", "abaB", "aabAB"}) {
    auto c = canonical_form(w);
    long s = self_intersection(c);
    for (int n = 2; n <= 3; ++n) {
      auto p = words::power(c, n);
      CHECK(self_intersection(p, std::max(6, complete_radius(p.canonical, p.canonical))) ==
            n * n * s + n - 1);
    }
  }
}

TEST_CASE("oriented smoothing examples") {
  auto ab = parse_multicurve("a; b");
  auto xs = enumerate_essential_crossings(ab);
  REQUIRE(xs.size() == 1);
  CHECK(oriented_smoothing(ab, xs[0]).result == parse_multicurve("ab"));
  auto [o, u] = unoriented_smoothings(ab, xs[0]);
  CHECK(o.result == parse_multicurve("ab"));
  CHECK(u.result == parse_multicurve("aB"));
  CHECK(o.result.total_weight() == 1);
  CHECK(u.result.total_weight() == 1);

  auto a2 = parse_multicurve("aa");
  auto p = enumerate_essential_crossings(a2);
  CHECK(oriented_smoothing(a2, p[0]).result == parse_multicurve("2*a"));
  auto [po, pu] = unoriented_smoothings(a2, p[0]);
  CHECK(po.result == parse_multicurve("2*a"));
  CHECK(pu.result.empty());

  auto a3 = parse_multicurve("aaa");
  auto x3 = enumerate_essential_crossings(a3);
  REQUIRE(x3.size() == 2);
  auto step = oriented_smoothing(a3, x3[0]).result;
  CHECK(step == parse_multicurve("a; aa"));
  auto again = enumerate_essential_crossings(step);
  REQUIRE(again.size() == 1);
  CHECK(oriented_smoothing(step, again[0]).result == parse_multicurve("3*a"));
}

TEST_CASE("smoothing errors") {
  auto m = parse_multicurve("a; 2*b");
  auto xs = enumerate_essential_crossings(m);
  REQUIRE(xs.size() == 1);
  try {
    oriented_smoothing(m, xs[0]);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WeightMismatch);
  }
  try {
    oriented_smoothing(parse_multicurve("ab"), xs[0]);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidCrossing);
  }
  auto w = parse_multicurve("1/3*a; 1/3*b");
  auto wx = enumerate_essential_crossings(w);
  auto r = oriented_smoothing(w, wx[0]);
  CHECK(r.weight_used == Rational(1, 3));
  CHECK(r.result == parse_multicurve("1/3*ab"));
}

TEST_CASE("self-crossing smoothings shorten geodesics") {
  testgen::Rng rng(37);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    auto c = canonical_form(testgen::cyclic_word(rng, "ab", 10));
    auto m = words::single(c);
    double len = hyp_length(c);
    for (const auto& x : enumerate_essential_crossings(m)) {
      auto r = oriented_smoothing(m, x);
      double after = 0;
      for (const auto& [k, w] : r.result.components()) after += to_double(w) * hyp_length(k);
      CHECK(after <= len + 1e-9);
      // The two pieces multiply back to the curve.
      if (x.kind == CrossingKind::LinkedAxes) ++checked;
      auto [o, u] = unoriented_smoothings(m, x);
      double ulen = 0;
      for (const auto& [k, w] : u.result.components()) ulen += to_double(w) * hyp_length(k);
      CHECK(ulen <= len + 1e-9);
    }
  }
  CHECK(checked > 20);
}
