// Acceptance runner: one PASS/FAIL line per criterion, exit 1 if any fails.

#include "gen.hpp"

#include "curvecur/cli.hpp"
#include "curvecur/counting.hpp"
#include "curvecur/crossings.hpp"
#include "curvecur/elastic.hpp"
#include "curvecur/error.hpp"
#include "curvecur/functionals.hpp"
#include "curvecur/harness.hpp"
#include "curvecur/hyperbolic.hpp"
#include "curvecur/stabilize.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace curvecur;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const double kPi = std::numbers::pi;
const double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = true;
  std::string detail;
};

void need(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Run {
  int code;
  std::string out;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::cmd_dispatch(args, out, err);
  return {code, out.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir() {
  fs::path d = fs::temp_directory_path() / "curvecur_acceptance";
  fs::create_directories(d);
  return d;
}

Outcome sawtooth_values() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto pts = cli::sawtooth(13);
  auto find = [&](long p, long q) -> const cli::SawtoothPoint* {
    for (const auto& s : pts)
      if (s.p == p && s.q == q) return &s;
    return nullptr;
  };
  auto expect = [&](long p, long q, Rational v) {
    const auto* s = find(p, q);
    std::string name = std::to_string(p) + "/" + std::to_string(q);
    if (!s) return need(o, false, name + " missing");
    need(o, s->tail_detected, name + " tail not detected");
    need(o, s->value == v, name + " gave " + to_string(s->value) + ", want " + to_string(v));
  };
  for (long n = 1; n <= 6; ++n) {
    expect(1, 2 * n + 1, Rational(n + 1, 2 * n + 1));
    expect(1, 2 * n, Rational(n + 1, 2 * n));
  }
  expect(2, 5, Rational(4, 5));
  double t = seconds_since(t0);
  need(o, t < 30, "runtime " + std::to_string(t) + " s");
  if (o.pass) o.detail = std::to_string(pts.size()) + " points, " + std::to_string(t) + " s";
  return o;
}

Outcome stability_counterexample() {
  Outcome o;
  auto wl = functionals::word_length_functional({"a", "aa", "b"});
  auto a2 = wl(words::parse_multicurve("aa"));
  auto two_a = functionals::weighted_eval(wl, words::parse_multicurve("2*a"));
  need(o, a2.exact && *a2.exact == Rational(1), "f(a^2) != 1");
  need(o, two_a.exact && *two_a.exact == Rational(2), "f(2a) != 2");
  auto corpus = harness::make_corpus(42, 50, 6);
  auto st = harness::check_stability(wl, corpus);
  need(o, st.verdict == harness::Verdict::Fail, "stability did not fail");
  need(o, st.witness.is_object() && st.witness.value("curve", "") == "a" &&
              st.witness.value("n", 0) == 2,
       "witness is " + st.witness.dump());
  auto sf = stabilize::stable_functional(wl, 32);
  auto ss = harness::check_stability(sf, corpus, 3);
  need(o, ss.verdict == harness::Verdict::Pass && ss.skipped == 0,
       std::string("stabilized: ") + harness::verdict_name(ss.verdict) + ", skipped " +
           std::to_string(ss.skipped));
  if (o.pass)
    o.detail = "witness " + st.witness.dump() + "; stabilized checked " +
               std::to_string(ss.checked) + " on " + std::to_string(corpus.curves.size()) +
               " curves";
  return o;
}

Outcome convex_union_counterexample() {
  Outcome o;
  auto f = functionals::sqrt_self_intersection_functional();
  double both = f(words::parse_multicurve("a; b")).value;
  double sum = f(words::parse_multicurve("a")).value + f(words::parse_multicurve("b")).value;
  need(o, std::abs(both - std::sqrt(2.0)) <= 1e-12, "f({a,b}) = " + std::to_string(both));
  need(o, sum == 0, "f(a) + f(b) = " + std::to_string(sum));
  Run r = run({"verify", "--functional", "sqrtself", "--property", "convex_union", "--samples",
               "50", "--seed", "42"});
  need(o, r.code == 1, "exit code " + std::to_string(r.code));
  json j = json::parse(r.out, nullptr, false);
  bool witness_ok = j.is_object() && j["witness"].is_object() && j["witness"]["c1"] == "a" &&
                    j["witness"]["c2"] == "b";
  need(o, witness_ok, "witness " + (j.is_object() ? j["witness"].dump() : r.out));
  if (o.pass) o.detail = "f({a,b}) = " + std::to_string(both) + ", exit 1, witness a,b";
  return o;
}

Outcome smoothing_suite() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto corpus = harness::make_corpus(42, 300, 10);
  auto h = functionals::hyperbolic_length_functional(hyperbolic::HolonomyRep::builtin_pt(), true);
  auto i = functionals::intersection_functional(words::parse_multicurve("b"));
  std::string det;
  for (const auto& [name, f] : {std::pair{"hyplen", &h}, std::pair{"intersection", &i}}) {
    auto r = harness::check_quasi_smoothing(*f, corpus, 6, true);
    bool ok = r.verdict == harness::Verdict::Pass && r.r_hat && *r.r_hat <= 1e-9 &&
              r.skipped == 0 && r.checked > 0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s max deficit %.3g over %ld smoothings, %ld skipped", name,
                  r.r_hat ? *r.r_hat : -1.0, static_cast<long>(r.checked),
                  static_cast<long>(r.skipped));
    need(o, ok, buf);
    det += (det.empty() ? "" : "; ") + std::string(buf);
  }
  double t = seconds_since(t0);
  need(o, t < 300, "runtime " + std::to_string(t) + " s");
  if (o.pass) o.detail = det + "; " + std::to_string(t) + " s";
  return o;
}

Outcome power_chain() {
  Outcome o;
  const auto& rep = hyperbolic::HolonomyRep::builtin_pt();
  int chains = 0;
  for (std::string c : {"a", "ab", "aab"}) {
    double lc = hyperbolic::trace_length(hyperbolic::holonomy(rep, c));
    for (int n = 2; n <= 4; ++n) {
      auto cur = words::parse_multicurve(words::repeat(c, n));
      int steps = 0;
      for (; steps < n; ++steps) {
        auto xs = crossings::enumerate_essential_crossings(cur);
        const crossings::Crossing* pick = nullptr;
        for (const auto& x : xs)
          if (x.kind == crossings::CrossingKind::PowerType) {
            pick = &x;
            break;
          }
        if (!pick) break;
        cur = crossings::oriented_smoothing(cur, *pick).result;
      }
      auto want = words::scale(words::parse_multicurve(c), n);
      need(o, steps == n - 1 && cur == want,
           c + "^" + std::to_string(n) + " -> " + cur.to_string() + " after " +
               std::to_string(steps) + " steps");
      double ln = hyperbolic::trace_length(hyperbolic::holonomy(rep, words::repeat(c, n)));
      need(o, std::abs(ln - n * lc) <= 1e-9, "length of " + c + "^" + std::to_string(n));
      ++chains;
    }
  }
  if (o.pass) o.detail = std::to_string(chains) + " chains";
  return o;
}

// Random connected graph and closed walk from vertex 0.
std::pair<elastic::ElasticGraph, elastic::GraphCurve> random_instance(testgen::Rng& r) {
  int nv = static_cast<int>(r.range(1, 4));
  int ne = static_cast<int>(r.range(std::max(1, nv - 1), 8));
  std::vector<std::string> vs;
  for (int i = 0; i < nv; ++i) vs.push_back("v" + std::to_string(i));
  std::vector<elastic::Edge> es;
  for (int e = 0; e < ne; ++e) {
    int f = e < nv - 1 ? e : static_cast<int>(r.range(0, nv - 1));
    int t = e < nv - 1 ? e + 1 : static_cast<int>(r.range(0, nv - 1));
    es.push_back({"e" + std::to_string(e), vs[f], vs[t], r.uniform(0.2, 3.0)});
  }
  elastic::ElasticGraph g(vs, es);
  elastic::GraphCurve c;
  int comps = static_cast<int>(r.range(1, 2));
  for (int k = 0; k < comps; ++k) {
    std::vector<int> path;
    int at = 0;
    int steps = static_cast<int>(r.range(1, 12));
    for (int s = 0; s < steps || at != 0; ++s) {
      std::vector<int> out;
      for (int d = 0; d < 2 * ne; ++d)
        if (g.tail(d) == at) out.push_back(d);
      int d = out[r.range(0, static_cast<long>(out.size()) - 1)];
      path.push_back(d);
      at = g.head(d);
      if (s > 60 && at == 0) break;
    }
    c.components.push_back({path, Rational(static_cast<int>(r.range(1, 3)))});
  }
  return {g, c};
}

Outcome elastic_graphs() {
  Outcome o;
  testgen::Rng r(2024);
  double worst_opt = 0, worst_inf = 0, worst_two = 0;
  for (int i = 0; i < 200; ++i) {
    auto [g, c] = random_instance(r);
    double closed = elastic::el_graph(c, g).value;
    worst_opt = std::max(worst_opt, std::abs(elastic::el_graph_ascent(c, g).value - closed));
    std::vector<double> unit(g.edge_count(), 1.0);
    worst_inf = std::max(worst_inf, std::abs(elastic::e_p(c, g, kInf).value -
                                             elastic::graph_length(c, unit, g)));
    worst_two = std::max(worst_two, std::abs(elastic::e_p(c, g, 2).value - closed));
  }
  need(o, worst_opt <= 1e-6, "optimizer error " + std::to_string(worst_opt));
  need(o, worst_inf <= 1e-9, "E_inf error " + std::to_string(worst_inf));
  need(o, worst_two <= 1e-9, "E_2 error " + std::to_string(worst_two));

  const auto& pt = words::punctured_torus();
  using elastic::ElasticGraph;
  std::vector<elastic::GraphEmbedding> embs{
      elastic::make_embedding(ElasticGraph({"v"}, {{"a", "v", "v", 1}, {"b", "v", "v", 2}}), pt,
                              {"a", "b"}),
      elastic::make_embedding(
          ElasticGraph({"v"}, {{"a", "v", "v", 1}, {"b", "v", "v", 1.5}, {"c", "v", "v", 0.7}}),
          pt, {"a", "b", "ab"}),
      elastic::make_embedding(
          ElasticGraph({"u", "w"}, {{"x", "u", "w", 1}, {"y", "u", "w", 2}, {"z", "u", "w", 0.5}}),
          pt, {"", "a", "b"}),
  };
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    const auto& emb = embs[i % embs.size()];
    const int cut = i % embs.size() == 2 ? 10 : 6;
    auto c1 = words::parse_multicurve(testgen::cyclic_word(r, "ab", 4), pt);
    auto c2 = words::parse_multicurve(testgen::cyclic_word(r, "ab", 4), pt);
    double e1 = std::pow(elastic::el_embedded(c1, emb, cut).value, 2);
    double e2 = std::pow(elastic::el_embedded(c2, emb, cut).value, 2);
    double eu = std::pow(elastic::el_embedded(words::union_of(c1, c2), emb, cut).value, 2);
    if (!(e1 + e2 <= eu + 1e-6 && eu <= 2 * (e1 + e2) + 1e-6)) ++bad;
  }
  need(o, bad == 0, std::to_string(bad) + " embedded bound violations");
  if (o.pass) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "200 graphs: optimizer %.2g, E_inf %.2g, E_2 %.2g; 100 embedded bounds hold",
                  worst_opt, worst_inf, worst_two);
    o.detail = buf;
  }
  return o;
}

Outcome counting_law() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto h = functionals::hyperbolic_length_functional(hyperbolic::HolonomyRep::builtin_pt());
  std::vector<double> grid{10, 15, 20, 25, 30, 35, 40};
  std::vector<long> counts;
  for (double L : grid) counts.push_back(counting::count(h, L));
  auto fit = counting::exponent_fit(grid, counts);
  need(o, fit.exponent >= 1.8 && fit.exponent <= 2.2 && fit.r2 >= 0.99,
       "hyplen exponent " + std::to_string(fit.exponent) + ", r2 " + std::to_string(fit.r2));
  auto syn = counting::synthetic_pq();
  auto sgrid = counting::make_grid(400, 7);
  std::vector<long> sc;
  for (double L : sgrid) sc.push_back(counting::count_slopes(syn, L));
  auto sfit = counting::exponent_fit(sgrid, sc);
  need(o, std::abs(sfit.exponent - 2) <= 0.05,
       "synthetic exponent " + std::to_string(sfit.exponent));
  double t = seconds_since(t0);
  need(o, t < 120, "runtime " + std::to_string(t) + " s");
  if (o.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "hyplen exponent %.4f r2 %.5f; synthetic %.4f; %.2f s",
                  fit.exponent, fit.r2, sfit.exponent, t);
    o.detail = buf;
  }
  return o;
}

Outcome geometry_kernel() {
  Outcome o;
  using namespace hyperbolic;
  const auto& rep = HolonomyRep::builtin_pt();
  double tr = holonomy(rep, "abAB").trace();
  need(o, std::abs(tr + 2) <= 1e-6, "commutator trace " + std::to_string(tr));
  need(o, std::abs(gd_inv(kPi / 4) - std::log(1 + std::sqrt(2.0))) <= 1e-12, "gd_inv(pi/4)");
  need(o, std::abs(L0(kPi / 6) - std::log(3.0)) <= 1e-10, "L0(pi/6)");
  testgen::Rng r(12);
  int specs = 0, lines = 0;
  while (specs < 50) {
    BrokenPathSpec s;
    s.epsilon = r.uniform(0.05, 1.2);
    double l0 = L0(s.epsilon);
    int pieces = static_cast<int>(r.range(1, 3));
    double sign = r.range(0, 1) ? 1 : -1;
    for (int k = 0; k < pieces; ++k) {
      auto turn = [&](double sg) {
        return sg * (kPi / 2 + 0.99 * r.uniform(-s.epsilon, s.epsilon));
      };
      BrokenPiece p;
      p.short_length = r.uniform(0, 2);
      p.turn_off = turn(sign);
      p.long_length = r.uniform(1.05 * l0, 3 * l0 + 1);
      p.turn_on = turn(-sign);
      s.pattern.push_back(p);
    }
    ++specs;
    try {
      broken_path_endpoints(s);
      // Each short segment in its own frame; by periodicity this covers every line.
      need(o, separated_by_short_segments(s), "path " + std::to_string(specs) + " not separated");
      lines += static_cast<int>(s.pattern.size());
    } catch (const Error& e) {
      need(o, false, std::string("path ") + std::to_string(specs) + ": " + e.what());
    }
  }
  if (o.pass)
    o.detail = "tr = " + std::to_string(tr) + "; " + std::to_string(specs) + " specs, " +
               std::to_string(lines) + " short segments separate the endpoints";
  return o;
}

Outcome determinism() {
  Outcome o;
  fs::path dir = scratch_dir();
  fs::path graph = dir / "rose.json";
  std::ofstream(graph)
      << R"({"vertices":["v"],"edges":[{"id":"x","from":"v","to":"v","alpha":1},)"
         R"({"id":"y","from":"v","to":"v","alpha":2}],"embedding":{"x":"a","y":"b"}})";
  const std::vector<std::vector<std::string>> cmds = {
      {"eval", "--functional", "hyplen", "--curve", "aab; 1/2*b"},
      {"eval", "--functional", "wordlen", "--gens", "a,aa,b", "--curve", "aabab"},
      {"eval", "--functional", "sqrtself", "--curve", "a; b"},
      {"intersect", "--surface", "pt", "--c", "aab", "--d", "abAB"},
      {"stable", "--functional", "wordlen", "--gens", "a,aa,b", "--curve", "aab"},
      {"el", "--graph", graph.string(), "--curve", "aab"},
      {"el", "--graph", graph.string(), "--curve", "aab", "--p", "3"},
      {"verify", "--functional", "hyplen", "--property", "smoothing", "--samples", "40", "--seed",
       "3"},
      {"verify", "--functional", "wordlen", "--gens", "a,aa,b", "--property", "stability",
       "--samples", "40", "--seed", "3"},
      {"verify", "--functional", "sqrtself", "--property", "convex_union", "--samples", "40",
       "--seed", "3"},
      {"count", "--functional", "hyplen", "--Lmax", "30", "--grid", "7"},
  };
  int compared = 0;
  for (const auto& c : cmds) {
    Run a = run(c), b = run(c);
    if (a.code != b.code || a.out != b.out || a.out.empty()) need(o, false, c[0] + " " + c[2]);
    ++compared;
  }
  for (const std::string& sub : {"count", "sawtooth"}) {
    std::string files[2];
    for (int k = 0; k < 2; ++k) {
      fs::path prefix = dir / sub;
      std::vector<std::string> args =
          sub == "count"
              ? std::vector<std::string>{"count", "--functional", "pq", "--Lmax", "80", "--grid",
                                         "6", "--out", prefix.string()}
              : std::vector<std::string>{"sawtooth", "--max-den", "7", "--out", prefix.string()};
      Run r = run(args);
      files[k] = r.out + slurp(prefix.string() + ".csv");
      if (sub == "sawtooth") files[k] += slurp(prefix.string() + ".svg");
      if (r.code != 0) need(o, false, sub + " exit " + std::to_string(r.code));
    }
    need(o, files[0] == files[1] && !files[0].empty(), sub + " files differ");
    ++compared;
  }
  if (o.pass) o.detail = std::to_string(compared) + " commands byte-identical on rerun";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"sawtooth values", sawtooth_values},
      {"stability counterexample", stability_counterexample},
      {"convex-union counterexample", convex_union_counterexample},
      {"smoothing suite", smoothing_suite},
      {"power-smoothing chain", power_chain},
      {"elastic-graph extremal length", elastic_graphs},
      {"counting power law", counting_law},
      {"geometry kernel", geometry_kernel},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
