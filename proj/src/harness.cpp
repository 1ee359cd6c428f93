#include "curvecur/harness.hpp"

#include "curvecur/crossings.hpp"
#include "curvecur/error.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <set>

namespace curvecur::harness {

using functionals::Value;

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  long range(long lo, long hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(eng_() % span);
  }

 private:
  std::mt19937_64 eng_;
};

words::Word random_reduced(Rng& r, const std::string& gens, int len) {
  std::string alphabet;
  for (char g : gens) {
    alphabet.push_back(g);
    alphabet.push_back(words::inverse_letter(g));
  }
  words::Word w;
  while (static_cast<int>(w.size()) < len) {
    char c = alphabet[r.range(0, static_cast<long>(alphabet.size()) - 1)];
    if (!w.empty() && w.back() == words::inverse_letter(c)) continue;
    w.push_back(c);
  }
  return w;
}

const std::vector<std::string>& fixed_list(const words::SurfacePresentation& p) {
  static const std::vector<std::string> pt{"a",   "b",    "ab",   "aB",   "aa",    "aab",
                                           "aabab", "aaa", "abab", "abAB", "a; b", "a; ab",
                                           "ab; aB", "aab; b"};
  static const std::vector<std::string> g2{"a", "b", "c", "d", "ab", "cd", "aa", "abc", "a; c"};
  return p.name == "pt" ? pt : g2;
}

// Shared evaluation with Error turned into "skip".
struct Eval {
  const CurveFunctional& f;
  std::optional<Value> operator()(const MultiCurve& c) const {
    try {
      return f(c);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
};

bool both_exact(const Value& a, const Value& b) { return a.exact && b.exact; }

double tol(const Value& a, const Value& b) {
  return 1e-9 * std::max({1.0, std::abs(a.value), std::abs(b.value)});
}

bool equal(const Value& a, const Value& b) {
  if (both_exact(a, b)) return *a.exact == *b.exact;
  return std::abs(a.value - b.value) <= tol(a, b);
}

bool at_most(const Value& a, const Value& b) {
  if (both_exact(a, b)) return *a.exact <= *b.exact;
  return a.value <= b.value + tol(a, b);
}

Value sum(const Value& a, const Value& b) {
  Value s{a.value + b.value, std::nullopt, a.window_limited || b.window_limited, false};
  if (both_exact(a, b)) s.exact = *a.exact + *b.exact;
  return s;
}

Value times(const Value& a, int n) {
  Value s{a.value * n, std::nullopt, a.window_limited, false};
  if (a.exact) s.exact = *a.exact * n;
  return s;
}

nlohmann::json value_json(const Value& v) {
  if (v.exact) return to_string(*v.exact);
  return round12(v.value);
}

FunctionalReport base(const CurveFunctional& f, const Corpus& c, const std::string& property,
                      Axiom axiom) {
  FunctionalReport r;
  r.functional = f.id;
  r.property = property;
  r.claimed = f.claims(axiom);
  r.samples = static_cast<int>(c.curves.size());
  r.seed = c.seed;
  r.max_len = c.max_word_length;
  r.tolerance = "exact for rational values, 1e-9 relative otherwise";
  r.witness = nullptr;
  return r;
}

// Runs body(i) for every index in parallel, rethrowing the first non-Error failure.
template <class Body>
void parallel_items(int n, Body body) {
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(curvecur_harness_err)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

// Outcome of one comparison-style item.
struct Item {
  int checked = 0;
  int skipped = 0;
  nlohmann::json witness;  // first failure of this item
};

FunctionalReport assemble(FunctionalReport r, const std::vector<Item>& items) {
  for (const auto& it : items) {
    r.checked += it.checked;
    r.skipped += it.skipped;
    if (!it.witness.is_null() && r.witness.is_null()) {
      r.witness = it.witness;
      r.verdict = Verdict::Fail;
    }
  }
  return r;
}

std::vector<std::pair<int, int>> union_pairs(const Corpus& c) {
  std::vector<std::pair<int, int>> pairs;
  const int n = static_cast<int>(c.curves.size());
  const int k = std::min(n, static_cast<int>(fixed_list(*c.surface).size()));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) pairs.push_back({i, j});
  Rng r(c.seed ^ 0x5bd1e995ULL);
  for (int s = 0; s < n && n > 1; ++s) {
    int i = static_cast<int>(r.range(0, n - 1)), j = static_cast<int>(r.range(0, n - 1));
    if (i != j) pairs.push_back({i, j});
  }
  return pairs;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Estimated: return "estimated";
  }
  return "?";
}

nlohmann::json FunctionalReport::to_json() const {
  nlohmann::json j;
  j["functional"] = functional;
  j["property"] = property;
  j["claimed"] = claimed;
  j["verdict"] = verdict_name(verdict);
  j["r_hat"] = r_hat ? nlohmann::json(round12(*r_hat)) : nlohmann::json(nullptr);
  j["witness"] = witness;
  j["samples"] = samples;
  j["checked"] = checked;
  j["skipped"] = skipped;
  j["seed"] = seed;
  j["max_len"] = max_len;
  j["tolerance"] = tolerance;
  return j;
}

Corpus make_corpus(std::uint64_t seed, int samples, int max_len, const words::SurfacePresentation& p) {
  if (samples < 1) fail(ErrorKind::OutOfDomain, "corpus needs at least one sample");
  if (max_len < 1) fail(ErrorKind::OutOfDomain, "max length must be positive");
  Corpus c{seed, max_len, &words::presentation_by_name(p.name), {}};
  std::set<std::string> seen;
  auto push = [&](const MultiCurve& m) {
    if (m.empty() || static_cast<int>(c.curves.size()) >= samples) return;
    if (seen.insert(m.to_string()).second) c.curves.push_back(m);
  };
  for (const auto& lit : fixed_list(p)) push(words::parse_multicurve(lit, p));
  Rng r(seed);
  const std::string gens = p.generators;
  long attempts = 0;
  while (static_cast<int>(c.curves.size()) < samples) {
    if (++attempts > 1000L * samples) fail(ErrorKind::BudgetExceeded, "could not fill the corpus");
    int comps = r.range(0, 9) < 3 ? 2 : 1;
    MultiCurve m(p);
    for (int k = 0; k < comps; ++k) {
      auto w = words::cyclic_reduce(random_reduced(r, gens, static_cast<int>(r.range(1, max_len))));
      if (w.empty()) continue;
      try {
        m.add(words::canonical_form(w, p), 1);
      } catch (const Error&) {
      }
    }
    push(m);
  }
  return c;
}

FunctionalReport check_quasi_smoothing(const CurveFunctional& f, const Corpus& corpus, int radius,
                                       bool strict) {
  FunctionalReport rep = base(f, corpus, strict ? "smoothing" : "quasi_smoothing",
                              strict ? Axiom::Smoothing : Axiom::QuasiSmoothing);
  if (corpus.surface->name != "pt")
    fail(ErrorKind::Unsupported, "smoothing checks use the punctured torus representation");
  struct Local {
    int checked = 0, skipped = 0;
    bool any = false;
    double deficit = 0;
    std::optional<Rational> exact;
    nlohmann::json witness;
  };
  const int n = static_cast<int>(corpus.curves.size());
  std::vector<Local> out(n);
  Eval ev{f};
  crossings::EnumerateOptions opts;
  opts.radius = radius;
  parallel_items(n, [&](int i) {
    const MultiCurve& c = corpus.curves[i];
    Local& l = out[i];
    auto fc = ev(c);
    if (!fc) {
      ++l.skipped;
      return;
    }
    std::vector<crossings::Crossing> xs;
    try {
      xs = crossings::enumerate_essential_crossings(c, opts);
    } catch (const Error&) {
      ++l.skipped;
      return;
    }
    for (const auto& x : xs) {
      std::vector<std::pair<std::string, crossings::SmoothingResult>> results;
      try {
        results.push_back({"oriented", crossings::oriented_smoothing(c, x)});
        auto [u1, u2] = crossings::unoriented_smoothings(c, x);
        results.push_back({"unoriented_1", std::move(u1)});
        results.push_back({"unoriented_2", std::move(u2)});
      } catch (const Error&) {
        ++l.skipped;
        continue;
      }
      for (const auto& [kind, s] : results) {
        auto fs = ev(s.result);
        if (!fs) {
          ++l.skipped;
          continue;
        }
        ++l.checked;
        double w = to_double(s.weight_used);
        double d = (fs->value - fc->value) / w;
        std::optional<Rational> de;
        if (both_exact(*fs, *fc)) de = (*fs->exact - *fc->exact) / s.weight_used;
        bool bigger = !l.any || (de && l.exact ? *de > *l.exact : d > l.deficit + 1e-12);
        if (bigger) {
          l.any = true;
          l.deficit = d;
          l.exact = de;
          l.witness = {{"curve", c.to_string()},
                       {"smoothing", kind},
                       {"crossing", x.kind == crossings::CrossingKind::LinkedAxes ? "linked_axes" : "power"},
                       {"components", {x.comp_a.canonical, x.comp_b.canonical}},
                       {"conjugator", x.conjugator},
                       {"result", s.result.to_string()},
                       {"f_curve", value_json(*fc)},
                       {"f_result", value_json(*fs)},
                       {"deficit", de ? nlohmann::json(to_string(*de)) : nlohmann::json(round12(d))}};
        }
      }
    }
  });
  bool any = false;
  double best = 0;
  std::optional<Rational> best_exact;
  nlohmann::json witness = nullptr;
  for (const auto& l : out) {
    rep.checked += l.checked;
    rep.skipped += l.skipped;
    if (!l.any) continue;
    bool bigger = !any || (l.exact && best_exact ? *l.exact > *best_exact : l.deficit > best + 1e-12);
    if (bigger) {
      any = true;
      best = l.deficit;
      best_exact = l.exact;
      witness = l.witness;
    }
  }
  rep.r_hat = std::max(0.0, any ? best : 0.0);
  if (strict) {
    bool ok = !any || (best_exact ? *best_exact <= 0 : best <= 1e-9);
    rep.verdict = ok ? Verdict::Pass : Verdict::Fail;
    if (!ok) rep.witness = witness;
  } else {
    rep.verdict = Verdict::Estimated;
    if (any && best > 0) rep.witness = witness;
  }
  return rep;
}

FunctionalReport check_convex_union(const CurveFunctional& f, const Corpus& corpus) {
  auto pairs = union_pairs(corpus);
  std::vector<Item> items(pairs.size());
  Eval ev{f};
  parallel_items(static_cast<int>(pairs.size()), [&](int k) {
    const auto& c1 = corpus.curves[pairs[k].first];
    const auto& c2 = corpus.curves[pairs[k].second];
    auto a = ev(c1), b = ev(c2), u = ev(words::union_of(c1, c2));
    if (!a || !b || !u) {
      ++items[k].skipped;
      return;
    }
    ++items[k].checked;
    Value s = sum(*a, *b);
    if (!at_most(*u, s))
      items[k].witness = {{"c1", c1.to_string()}, {"c2", c2.to_string()},
                          {"f_union", value_json(*u)}, {"f_c1", value_json(*a)},
                          {"f_c2", value_json(*b)}};
  });
  return assemble(base(f, corpus, "convex_union", Axiom::ConvexUnion), items);
}

FunctionalReport check_additive_union(const CurveFunctional& f, const Corpus& corpus) {
  auto pairs = union_pairs(corpus);
  std::vector<Item> items(pairs.size());
  Eval ev{f};
  parallel_items(static_cast<int>(pairs.size()), [&](int k) {
    const auto& c1 = corpus.curves[pairs[k].first];
    const auto& c2 = corpus.curves[pairs[k].second];
    auto a = ev(c1), b = ev(c2), u = ev(words::union_of(c1, c2));
    if (!a || !b || !u) {
      ++items[k].skipped;
      return;
    }
    ++items[k].checked;
    if (!equal(*u, sum(*a, *b)))
      items[k].witness = {{"c1", c1.to_string()}, {"c2", c2.to_string()},
                          {"f_union", value_json(*u)}, {"f_c1", value_json(*a)},
                          {"f_c2", value_json(*b)}};
  });
  return assemble(base(f, corpus, "additive_union", Axiom::AdditiveUnion), items);
}

FunctionalReport check_homogeneity(const CurveFunctional& f, const Corpus& corpus, int max_n) {
  const int n = static_cast<int>(corpus.curves.size());
  std::vector<Item> items(n);
  Eval ev{f};
  parallel_items(n, [&](int i) {
    const auto& c = corpus.curves[i];
    auto one = ev(c);
    if (!one) {
      ++items[i].skipped;
      return;
    }
    for (int k = 2; k <= max_n; ++k) {
      auto many = ev(words::scale(c, k));
      if (!many) {
        ++items[i].skipped;
        continue;
      }
      ++items[i].checked;
      if (!equal(*many, times(*one, k))) {
        items[i].witness = {{"curve", c.to_string()}, {"n", k}, {"f_multiple", value_json(*many)},
                            {"f_curve", value_json(*one)}};
        return;
      }
    }
  });
  return assemble(base(f, corpus, "homogeneity", Axiom::Homogeneous), items);
}

FunctionalReport check_stability(const CurveFunctional& f, const Corpus& corpus, int max_n) {
  const int n = static_cast<int>(corpus.curves.size());
  std::vector<Item> items(n);
  Eval ev{f};
  parallel_items(n, [&](int i) {
    const auto& c = corpus.curves[i];
    for (int k = 2; k <= max_n; ++k) {
      auto pw = ev(words::power(c, k)), mult = ev(words::scale(c, k));
      if (!pw || !mult) {
        ++items[i].skipped;
        continue;
      }
      ++items[i].checked;
      if (!equal(*pw, *mult)) {
        items[i].witness = {{"curve", c.to_string()}, {"n", k}, {"f_power", value_json(*pw)},
                            {"f_multiple", value_json(*mult)}};
        return;
      }
    }
  });
  return assemble(base(f, corpus, "stability", Axiom::Stable), items);
}

FunctionalReport check_strong_stability(const CurveFunctional& f, const Corpus& corpus, int max_n) {
  const int n = static_cast<int>(corpus.curves.size());
  std::vector<int> partner(n);
  Rng r(corpus.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < n; ++i) partner[i] = static_cast<int>(r.range(0, n - 1));
  std::vector<Item> items(n);
  Eval ev{f};
  parallel_items(n, [&](int i) {
    const auto& c = corpus.curves[i];
    const auto& d = corpus.curves[partner[i]];
    for (int k = 2; k <= max_n; ++k) {
      auto pw = ev(words::union_of(d, words::power(c, k)));
      auto mult = ev(words::union_of(d, words::scale(c, k)));
      if (!pw || !mult) {
        ++items[i].skipped;
        continue;
      }
      ++items[i].checked;
      if (!equal(*pw, *mult)) {
        items[i].witness = {{"curve", c.to_string()}, {"other", d.to_string()}, {"n", k},
                            {"f_power", value_json(*pw)}, {"f_multiple", value_json(*mult)}};
        return;
      }
    }
  });
  return assemble(base(f, corpus, "strong_stability", Axiom::StronglyStable), items);
}

FunctionalReport check(const CurveFunctional& f, Axiom property, const Corpus& corpus) {
  switch (property) {
    case Axiom::QuasiSmoothing: return check_quasi_smoothing(f, corpus, 6, false);
    case Axiom::Smoothing: return check_quasi_smoothing(f, corpus, 6, true);
    case Axiom::ConvexUnion: return check_convex_union(f, corpus);
    case Axiom::AdditiveUnion: return check_additive_union(f, corpus);
    case Axiom::Homogeneous: return check_homogeneity(f, corpus);
    case Axiom::Stable: return check_stability(f, corpus);
    case Axiom::StronglyStable: return check_strong_stability(f, corpus);
  }
  fail(ErrorKind::ParseError, "unknown property");
}

}  // namespace curvecur::harness
