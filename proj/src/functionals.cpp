#include "curvecur/functionals.hpp"

#include "curvecur/crossings.hpp"
#include "curvecur/error.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <set>

namespace curvecur::functionals {

namespace {
const std::vector<std::pair<Axiom, const char*>> kNames{
    {Axiom::QuasiSmoothing, "quasi_smoothing"}, {Axiom::Smoothing, "smoothing"},
    {Axiom::ConvexUnion, "convex_union"},       {Axiom::AdditiveUnion, "additive_union"},
    {Axiom::Homogeneous, "homogeneity"},        {Axiom::Stable, "stability"},
    {Axiom::StronglyStable, "strong_stability"},
};

long floor_mod(long a, long m) { return ((a % m) + m) % m; }
}  // namespace

const char* axiom_name(Axiom a) {
  for (const auto& [k, n] : kNames)
    if (k == a) return n;
  return "?";
}

Axiom axiom_from_name(std::string_view s) {
  for (const auto& [k, n] : kNames)
    if (s == n) return k;
  fail(ErrorKind::ParseError, "unknown property '" + std::string(s) + "'");
}

const std::vector<Axiom>& all_axioms() {
  static const std::vector<Axiom> v = [] {
    std::vector<Axiom> out;
    for (const auto& [k, n] : kNames) out.push_back(k);
    return out;
  }();
  return v;
}

std::vector<Word> parse_gens(std::string_view s) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i <= s.size()) {
    std::size_t j = s.find(',', i);
    if (j == std::string_view::npos) j = s.size();
    std::string g;
    for (char c : s.substr(i, j - i))
      if (!std::isspace(static_cast<unsigned char>(c))) g.push_back(c);
    if (g.empty()) fail(ErrorKind::ParseError, "empty generator in '" + std::string(s) + "'");
    for (char c : g)
      if (!words::is_letter(c)) fail(ErrorKind::ParseError, "bad letter in generator '" + g + "'");
    out.push_back(g);
    i = j + 1;
  }
  return out;
}

std::vector<long> conjugacy_lengths(const std::vector<Word>& gens, const Word& root, int max_power,
                                    int tube) {
  const long m = static_cast<long>(root.size());
  if (m == 0) fail(ErrorKind::TrivialCurve, "empty root");
  std::vector<Word> alphabet;
  for (const auto& g : gens) {
    Word r = words::free_reduce(g);
    if (r.empty()) continue;
    for (const Word& x : {r, words::inverse(r)})
      if (std::find(alphabet.begin(), alphabet.end(), x) == alphabet.end()) alphabet.push_back(x);
  }
  auto next = [&](long t) { return root[floor_mod(t, m)]; };
  auto prev = [&](long t) { return root[floor_mod(t - 1, m)]; };
  // A tree point is axis(t)·w with w hanging off the axis.
  auto normalize = [&](long& t, Word& w) {
    std::size_t k = 0;
    while (k < w.size()) {
      if (w[k] == next(t))
        ++t;
      else if (w[k] == words::inverse_letter(prev(t)))
        --t;
      else
        break;
      ++k;
    }
    w.erase(0, k);
  };

  // Offsets of length <= tube coded in base (letters + 1).
  std::string letters;
  auto add_letter = [&](char c) {
    for (char x : {c, words::inverse_letter(c)})
      if (letters.find(x) == std::string::npos) letters.push_back(x);
  };
  for (char c : root) add_letter(c);
  for (const auto& w : alphabet)
    for (char c : w) add_letter(c);
  const long base = static_cast<long>(letters.size()) + 1;
  long codes = 1;
  for (int i = 0; i < tube; ++i) {
    codes *= base;
    if (codes > (1L << 22)) fail(ErrorKind::BudgetExceeded, "search tube too wide");
  }
  auto encode = [&](const Word& w) {
    long c = 0;
    for (auto it = w.rbegin(); it != w.rend(); ++it)
      c = c * base + static_cast<long>(letters.find(*it)) + 1;
    return c;
  };
  auto decode = [&](long c) {
    Word w;
    for (; c > 0; c /= base) w.push_back(letters[c % base - 1]);
    return w;
  };
  // Transition cache: (t mod m, code, generator) -> (dt, code'), code' = -1 if outside.
  const long A = static_cast<long>(alphabet.size());
  struct Step {
    int dt = 0;
    long code = -2;  // -2: not computed yet
  };
  std::vector<Step> table(static_cast<std::size_t>(m * codes * A));
  auto step = [&](long t, long code, long g) -> const Step& {
    Step& st = table[(floor_mod(t, m) * codes + code) * A + g];
    if (st.code == -2) {
      long t2 = floor_mod(t, m);
      long t0 = t2;
      Word w = words::free_reduce(decode(code) + alphabet[g]);
      normalize(t2, w);
      st.dt = static_cast<int>(t2 - t0);
      st.code = static_cast<int>(w.size()) > tube ? -1 : encode(w);
    }
    return st;
  };

  std::set<std::pair<long, long>> starts;
  for (long p = 0; p < m; ++p) {
    for (const Word& s : alphabet) {
      for (std::size_t k = 0; k < s.size(); ++k) {
        long t = p;
        Word w = words::inverse(s.substr(0, k));
        normalize(t, w);
        if (static_cast<int>(w.size()) <= tube) starts.insert({floor_mod(t, m), encode(w)});
      }
    }
  }

  std::vector<long> best(max_power, LONG_MAX);
  std::vector<int> dist;
  std::vector<std::pair<long, long>> queue;
  for (const auto& [t0, w0] : starts) {
    const long lo = t0 - 2 * tube - m, hi = t0 + max_power * m + 2 * tube + m;
    const long span = hi - lo + 1;
    dist.assign(static_cast<std::size_t>(span * codes), -1);
    queue.clear();
    dist[(t0 - lo) * codes + w0] = 0;
    queue.push_back({t0, w0});
    int remaining = max_power;
    for (std::size_t head = 0; head < queue.size() && remaining > 0; ++head) {
      auto [t, w] = queue[head];
      int d = dist[(t - lo) * codes + w];
      if (w == w0 && t > t0 && (t - t0) % m == 0 && (t - t0) / m <= max_power) {
        long j = (t - t0) / m;
        best[j - 1] = std::min<long>(best[j - 1], d);
        --remaining;
      }
      for (long g = 0; g < A; ++g) {
        const Step& st = step(t, w, g);
        if (st.code < 0) continue;
        long t2 = t + st.dt;
        if (t2 < lo || t2 > hi) continue;
        int& slot = dist[(t2 - lo) * codes + st.code];
        if (slot >= 0) continue;
        slot = d + 1;
        queue.push_back({t2, st.code});
      }
    }
  }
  for (long j = 0; j < max_power; ++j)
    if (best[j] == LONG_MAX)
      fail(ErrorKind::BudgetExceeded, "no expression of power " + std::to_string(j + 1) +
                                          " of " + root + " inside the search window");
  return best;
}

namespace {

int max_len(const std::vector<Word>& gens) {
  std::size_t t = 0;
  for (const auto& g : gens) t = std::max(t, words::free_reduce(g).size());
  return static_cast<int>(t);
}

void check_generating(const std::vector<Word>& gens, const words::SurfacePresentation& p) {
  std::vector<Word> alphabet;
  for (const auto& g : gens) {
    words::check_letters(g, p);
    Word r = words::free_reduce(g);
    if (r.empty()) continue;
    alphabet.push_back(r);
    alphabet.push_back(words::inverse(r));
  }
  std::set<Word> ball{""};
  std::vector<Word> layer{""};
  for (int r = 0; r < 4; ++r) {
    std::vector<Word> nxt;
    for (const Word& x : layer)
      for (const Word& s : alphabet) {
        Word y = words::free_reduce(x + s);
        if (ball.insert(y).second) nxt.push_back(y);
      }
    layer = std::move(nxt);
  }
  for (char x : p.generators)
    if (!ball.count(std::string(1, x)))
      fail(ErrorKind::NotGenerating,
           std::string("generator ") + x + " is not a product of at most 4 given words");
}

constexpr std::size_t kMaxWordLength = 64;

void check_presentation(const MultiCurve& c, const words::SurfacePresentation* p) {
  if (!(c.presentation() == *p))
    fail(ErrorKind::PresentationMismatch, "curve lives on " + c.presentation().name +
                                              ", functional on " + p->name);
}

}  // namespace

CurveFunctional word_length_functional(const std::vector<Word>& gens,
                                       const words::SurfacePresentation& p) {
  if (!p.is_free()) fail(ErrorKind::Unsupported, "word length is implemented for free presentations");
  if (gens.empty()) fail(ErrorKind::NotGenerating, "no generators");
  check_generating(gens, p);
  CurveFunctional f;
  f.id = "wordlen";
  f.presentation = &p;
  f.claimed = {Axiom::QuasiSmoothing, Axiom::ConvexUnion, Axiom::AdditiveUnion, Axiom::Homogeneous};
  const int tube = max_len(gens);
  auto one = [gens, tube](const ConjClass& k, int n) {
    // f(k^j) for j = 1..n, plus the window flag
    if (k.length() > kMaxWordLength || n > static_cast<int>(kMaxWordLength))
      fail(ErrorKind::BudgetExceeded, "word length budget exceeded");
    int m = k.power * n;
    auto a = conjugacy_lengths(gens, k.root, m, tube);
    auto b = conjugacy_lengths(gens, k.root, m, tube + 1);
    std::vector<Value> out;
    for (int j = 1; j <= n; ++j) {
      long x = a[k.power * j - 1];
      Value v{static_cast<double>(x), Rational(x), b[k.power * j - 1] != x, false};
      out.push_back(v);
    }
    return out;
  };
  f.eval = [one, &p](const MultiCurve& c) {
    check_presentation(c, &p);
    Value v{0, Rational(0), false, false};
    for (const auto& [k, w] : c.components()) {
      Value x = one(k, 1)[0];
      *v.exact += w * *x.exact;
      v.window_limited = v.window_limited || x.window_limited;
    }
    v.value = to_double(*v.exact);
    return v;
  };
  f.powers = one;
  return f;
}

CurveFunctional hyperbolic_length_functional(const hyperbolic::HolonomyRep& rep, bool parabolic_zero) {
  CurveFunctional f;
  f.id = "hyplen";
  f.presentation = rep.presentation;
  f.claimed = {all_axioms().begin(), all_axioms().end()};
  auto len = [rep, parabolic_zero](const ConjClass& k) {
    auto m = hyperbolic::holonomy(rep, k.canonical);
    if (!m.is_hyperbolic()) {
      if (parabolic_zero) return 0.0;
      fail(ErrorKind::NotHyperbolic, k.canonical + " is not hyperbolic");
    }
    return hyperbolic::trace_length(m);
  };
  f.eval = [len, p = rep.presentation](const MultiCurve& c) {
    check_presentation(c, p);
    Value v;
    for (const auto& [k, w] : c.components()) v.value += to_double(w) * len(k);
    return v;
  };
  f.powers = [len](const ConjClass& k, int n) {
    // ℓ(k^j) = j·ℓ(k), computed honestly from the power
    std::vector<Value> out;
    for (int j = 1; j <= n; ++j) out.push_back(Value{len(words::power(k, j)), std::nullopt, false, false});
    return out;
  };
  return f;
}

namespace {
long pair_count(const ConjClass& c, const ConjClass& d, const hyperbolic::HolonomyRep& rep) {
  int r = std::max(6, crossings::complete_radius(c.canonical, d.canonical));
  return crossings::intersection_count(c, d, r, rep).count;
}
}  // namespace

CurveFunctional intersection_functional(const MultiCurve& d, const hyperbolic::HolonomyRep& rep) {
  if (!(d.presentation() == *rep.presentation))
    fail(ErrorKind::PresentationMismatch, "D and the representation differ in surface");
  CurveFunctional f;
  f.id = "intersection";
  f.presentation = rep.presentation;
  f.claimed = {all_axioms().begin(), all_axioms().end()};
  f.eval = [d, rep](const MultiCurve& c) {
    check_presentation(c, rep.presentation);
    Rational s = 0;
    for (const auto& [k, w] : c.components())
      for (const auto& [l, u] : d.components()) s += w * u * pair_count(k, l, rep);
    return Value{to_double(s), s, false, false};
  };
  return f;
}

CurveFunctional sqrt_self_intersection_functional(const hyperbolic::HolonomyRep& rep) {
  CurveFunctional f;
  f.id = "sqrtself";
  f.presentation = rep.presentation;
  f.claimed = {Axiom::Smoothing, Axiom::QuasiSmoothing, Axiom::Homogeneous, Axiom::Stable,
               Axiom::StronglyStable};
  f.eval = [rep](const MultiCurve& c) {
    check_presentation(c, rep.presentation);
    Rational s = 0;
    for (const auto& [k, w] : c.components())
      for (const auto& [l, u] : c.components()) s += w * u * pair_count(k, l, rep);
    Value v{std::sqrt(to_double(s)), std::nullopt, false, false};
    if (s == 0) v.exact = Rational(0);
    return v;
  };
  return f;
}

CurveFunctional graph_length_functional(const elastic::GraphEmbedding& emb, int cutoff) {
  if (!emb.filling) fail(ErrorKind::NotFilling, "embedding is not filling");
  CurveFunctional f;
  f.id = "graphlen";
  f.presentation = emb.presentation;
  f.claimed = {all_axioms().begin(), all_axioms().end()};
  f.eval = [emb, cutoff](const MultiCurve& c) {
    auto r = elastic::graph_length_embedded(c, emb, cutoff);
    return Value{r.value, std::nullopt, !r.stabilized, false};
  };
  return f;
}

CurveFunctional extremal_length_functional(const elastic::GraphEmbedding& emb, int cutoff) {
  if (!emb.filling) fail(ErrorKind::NotFilling, "embedding is not filling");
  CurveFunctional f;
  f.id = "el";
  f.presentation = emb.presentation;
  f.claimed = {Axiom::ConvexUnion, Axiom::Stable, Axiom::Homogeneous, Axiom::Smoothing,
               Axiom::QuasiSmoothing};
  f.eval = [emb, cutoff](const MultiCurve& c) {
    auto r = elastic::el_embedded(c, emb, cutoff);
    return Value{r.value, std::nullopt, !r.stabilized, false};
  };
  return f;
}

Value weighted_eval(const CurveFunctional& f, const MultiCurve& c) {
  if (!f.claims(Axiom::Homogeneous))
    fail(ErrorKind::NotHomogeneous, f.id + " does not claim homogeneity");
  std::vector<Rational> ws;
  for (const auto& [k, w] : c.components()) ws.push_back(w);
  Integer d = lcm_of_denominators(ws.data(), ws.data() + ws.size());
  Value v = f(words::scale(c, Rational(d)));
  v.value /= d.convert_to<double>();
  if (v.exact) *v.exact /= Rational(d);
  return v;
}

}  // namespace curvecur::functionals
