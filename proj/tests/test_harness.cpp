#include "doctest.h"

#include "curvecur/error.hpp"
#include "curvecur/harness.hpp"
#include "curvecur/stabilize.hpp"

using namespace curvecur;
using namespace curvecur::harness;
using functionals::hyperbolic_length_functional;
using functionals::intersection_functional;
using functionals::sqrt_self_intersection_functional;
using functionals::word_length_functional;

namespace {
const auto& pt_rep = hyperbolic::HolonomyRep::builtin_pt();
}

TEST_CASE("corpus is reproducible and nested") {
  auto a = make_corpus(42, 120, 8);
  auto b = make_corpus(42, 120, 8);
  auto c = make_corpus(42, 60, 8);
  REQUIRE(a.curves.size() == 120);
  for (std::size_t i = 0; i < a.curves.size(); ++i) CHECK(a.curves[i] == b.curves[i]);
  for (std::size_t i = 0; i < c.curves.size(); ++i) CHECK(c.curves[i] == a.curves[i]);
  CHECK(a.curves[0].to_string() == "a");
  CHECK(a.curves[1].to_string() == "b");
  std::set<std::string> seen;
  int two = 0;
  for (const auto& m : a.curves) {
    CHECK(seen.insert(m.to_string()).second);
    if (m.size() == 2) ++two;
    for (const auto& [k, w] : m.components()) CHECK(k.length() <= 8);
  }
  CHECK(two > 15);
  CHECK_FALSE(make_corpus(43, 120, 8).curves[50] == a.curves[50]);
  CHECK_THROWS_AS(make_corpus(1, 0), Error);
}

TEST_CASE("counterexamples fail where expected") {
  auto corpus = make_corpus(42, 40, 6);
  auto conv = check_convex_union(sqrt_self_intersection_functional(), corpus);
  CHECK(conv.verdict == Verdict::Fail);
  CHECK_FALSE(conv.claimed);
  CHECK(conv.witness["c1"] == "a");
  CHECK(conv.witness["c2"] == "b");
  auto wl = word_length_functional({"a", "aa", "b"});
  auto st = check_stability(wl, corpus);
  CHECK(st.verdict == Verdict::Fail);
  CHECK(st.witness["curve"] == "a");
  CHECK(st.witness["n"] == 2);
  CHECK(st.witness["f_power"] == "1");
  CHECK(st.witness["f_multiple"] == "2");
  auto sm = check_quasi_smoothing(wl, corpus, 6, true);
  CHECK(sm.verdict == Verdict::Fail);
  auto q = check_quasi_smoothing(wl, corpus, 6, false);
  CHECK(q.verdict == Verdict::Estimated);
  CHECK(*q.r_hat > 0);
  CHECK(*q.r_hat == doctest::Approx(*sm.r_hat));
}

TEST_CASE("hyperbolic length passes its claims") {
  auto corpus = make_corpus(7, 60, 8);
  auto h = hyperbolic_length_functional(pt_rep, true);
  for (auto p : functionals::all_axioms()) {
    auto r = check(h, p, corpus);
    CHECK_MESSAGE(r.holds(), functionals::axiom_name(p));
    CHECK(r.checked > 0);
  }
  auto s = check_quasi_smoothing(h, corpus, 6, true);
  CHECK(s.checked > 100);
  CHECK(*s.r_hat <= 1e-9);
}

TEST_CASE("intersection functional passes smoothing") {
  auto corpus = make_corpus(9, 40, 7);
  auto f = intersection_functional(words::parse_multicurve("b"));
  CHECK(check_quasi_smoothing(f, corpus, 6, true).verdict == Verdict::Pass);
  CHECK(check_additive_union(f, corpus).verdict == Verdict::Pass);
  CHECK(check_stability(f, corpus).verdict == Verdict::Pass);
}

TEST_CASE("no shipped functional fails homogeneity") {
  auto corpus = make_corpus(3, 30, 6);
  auto wl = word_length_functional({"a", "aa", "b"});
  CHECK(check_homogeneity(wl, corpus).holds());
  CHECK(check_homogeneity(sqrt_self_intersection_functional(), corpus).holds());
  CHECK(check_homogeneity(intersection_functional(words::parse_multicurve("ab")), corpus).holds());
}

TEST_CASE("stabilized word length restores stability") {
  auto corpus = make_corpus(5, 50, 6);
  auto sf = stabilize::stable_functional(word_length_functional({"a", "aa", "b"}), 32);
  auto st = check_stability(sf, corpus, 3);
  CHECK(st.verdict == Verdict::Pass);
  CHECK(st.skipped == 0);
  CHECK(check_homogeneity(sf, corpus, 3).verdict == Verdict::Pass);
}

TEST_CASE("R estimate grows with the corpus") {
  auto wl = word_length_functional({"a", "aa", "b"});
  double prev = 0;
  for (int n : {10, 20, 40}) {
    double r = *check_quasi_smoothing(wl, make_corpus(11, n, 6), 6, false).r_hat;
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("reports are byte-identical across runs") {
  auto corpus = make_corpus(42, 30, 6);
  auto f = sqrt_self_intersection_functional();
  CHECK(check_convex_union(f, corpus).to_json().dump() ==
        check_convex_union(f, make_corpus(42, 30, 6)).to_json().dump());
}
