#include "curvecur/crossings.hpp"

#include "curvecur/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <exception>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace curvecur::crossings {

using hyperbolic::Axis;
using hyperbolic::HolonomyRep;
using hyperbolic::Mobius;

namespace {

struct ShortlexLess {
  bool operator()(const Word& x, const Word& y) const { return words::shortlex_less(x, y); }
};
using WordSet = std::set<Word, ShortlexLess>;

Word signed_power(const Word& u, int k) {
  return k >= 0 ? words::repeat(u, k) : words::repeat(words::inverse(u), -k);
}

bool commute(const Word& x, const Word& y) {
  return words::free_reduce(x + y) == words::free_reduce(y + x);
}

// Fixed data for one (u, v) scan.
struct Scan {
  const HolonomyRep* rep;
  Word u, v, v_inv;
  Axis axis_u, axis_v;
  std::string order;  // nonempty: link combinatorially in the Cayley tree
  bool active = false;

  Scan(const HolonomyRep& r, const Word& u_, const Word& v_)
      : rep(&r), u(u_), v(v_), v_inv(words::inverse(v_)) {
    Mobius hu = hyperbolic::holonomy(r, u), hv = hyperbolic::holonomy(r, v);
    // Parabolic classes have no axis and cross nothing essentially.
    if (!hu.is_hyperbolic() || !hv.is_hyperbolic()) return;
    axis_u = hyperbolic::axis_endpoints(hu);
    axis_v = hyperbolic::axis_endpoints(hv);
    if (r.presentation->is_free()) {
      try {
        order = boundary_letter_order(r);
      } catch (const Error&) {
        order.clear();
      }
    }
    active = true;
  }

  bool crosses(const Word& g) const {
    Word conj = words::free_reduce(g + v + words::inverse(g));
    if (commute(u, conj)) return false;
    if (!order.empty()) return tree_linked(order, u, g, v);
    Mobius hg = hyperbolic::holonomy(*rep, g);
    return hyperbolic::linked(axis_u, hyperbolic::apply(hg, axis_v));
  }
};

std::vector<Word> finish(const WordSet& s) { return {s.begin(), s.end()}; }

std::vector<Word> scan_candidates(const HolonomyRep& rep, const Word& u, const Word& v,
                                  const std::vector<Word>& cands, bool parallel) {
  Scan scan(rep, u, v);
  if (!scan.active) return {};
  const long n = static_cast<long>(cands.size());
  std::vector<Word> nf(cands.size());
  std::vector<char> hit(cands.size(), 0);
  std::exception_ptr err;
  auto body = [&](long i) {
    try {
      if (scan.crosses(cands[i])) {
        hit[i] = 1;
        nf[i] = double_coset_normal_form(u, cands[i], v);
      }
    } catch (...) {
#pragma omp critical(curvecur_scan_error)
      if (!err) err = std::current_exception();
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < n; ++i) body(i);
  } else {
    for (long i = 0; i < n; ++i) body(i);
  }
  if (err) std::rethrow_exception(err);
  WordSet out;
  for (long i = 0; i < n; ++i)
    if (hit[i]) out.insert(std::move(nf[i]));
  return finish(out);
}

void all_reduced(const std::string& alphabet, int max_len, std::vector<Word>& out) {
  out.push_back("");
  std::size_t begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (char c : alphabet) {
        const Word& w = out[i];
        if (!w.empty() && w.back() == words::inverse_letter(c)) continue;
        out.push_back(w + c);
      }
    }
    begin = end;
  }
}

}  // namespace

namespace {

// Vertex at signed position s on the axis through 1 of cyclically reduced w.
Word axis_point(const Word& w, const Word& w_inv, long s) {
  const Word& base = s >= 0 ? w : w_inv;
  long n = s >= 0 ? s : -s;
  Word out;
  out.reserve(n);
  for (long i = 0; i < n; ++i) out.push_back(base[i % base.size()]);
  return out;
}

long lcp_periodic(const Word& x, const Word& w) {
  long k = 0;
  while (k < static_cast<long>(x.size()) && x[k] == w[k % w.size()]) ++k;
  return k;
}

long floor_mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

Word double_coset_normal_form(const Word& u, const Word& g, const Word& v) {
  // Walk g·A_v, locate where it meets A_u (or its nearest point), and move
  // that meeting point into the fundamental windows of both axes.
  const Word ui = words::inverse(u), vi = words::inverse(v);
  const Word gr = words::free_reduce(g);
  const long span = static_cast<long>(gr.size() + u.size() + v.size()) + 2;
  bool have = false;
  long best_t = 0, best_s = 0, best_d = 0;
  Word best_tail;
  for (long t = -span; t <= span; ++t) {
    Word x = words::free_reduce(gr + axis_point(v, vi, t));
    long kp = lcp_periodic(x, u), km = lcp_periodic(x, ui);
    long s = kp >= km ? kp : -km;
    long d = static_cast<long>(x.size()) - std::max(kp, km);
    if (!have || d < best_d || (d == best_d && d == 0 && s < best_s)) {
      have = true;
      best_t = t;
      best_s = s;
      best_d = d;
      best_tail = x.substr(x.size() - d);
    }
  }
  long s0 = floor_mod(best_s, static_cast<long>(u.size()));
  long t0 = floor_mod(best_t, static_cast<long>(v.size()));
  return words::free_reduce(axis_point(u, ui, s0) + best_tail +
                            words::inverse(axis_point(v, vi, t0)));
}

int complete_radius(const Word& u, const Word& v) {
  return static_cast<int>((std::max(u.size(), v.size()) + 1) / 2);
}

std::vector<Word> candidate_conjugators(const Word& u, const Word& v, int radius) {
  // Positions -h..h with h = ceil(|w|/2) already cover a fundamental domain of
  // the axis; longer prefixes only repeat double cosets.
  auto prefixes = [radius](const Word& w) {
    std::vector<Word> out{""};
    if (w.empty()) return out;
    const int h = std::min(radius, static_cast<int>((w.size() + 1) / 2));
    for (const Word& base : {w, words::inverse(w)}) {
      Word p;
      for (int k = 0; k < h; ++k) {
        p.push_back(base[k % base.size()]);
        out.push_back(p);
      }
    }
    return out;
  };
  std::vector<Word> ps = prefixes(u), qs = prefixes(v);
  WordSet out;
  for (const Word& p : ps)
    for (const Word& q : qs) out.insert(words::free_reduce(p + words::inverse(q)));
  return finish(out);
}

std::string boundary_letter_order(const HolonomyRep& rep) {
  std::vector<std::pair<double, char>> pts;
  for (char g : rep.presentation->generators) {
    for (char s : {g, words::inverse_letter(g)}) {
      Mobius m = hyperbolic::holonomy(rep, std::string(1, s));
      if (!m.is_hyperbolic())
        fail(ErrorKind::DegenerateConfiguration, std::string("generator not hyperbolic: ") + s);
      pts.emplace_back(hyperbolic::axis_endpoints(m).attracting.angle(), s);
    }
  }
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double gap = pts[(i + 1) % pts.size()].first - pts[i].first;
    if (i + 1 == pts.size()) gap += 2 * M_PI;
    if (gap < 1e-9) fail(ErrorKind::DegenerateConfiguration, "generator fixed points coincide");
  }
  std::string out;
  for (const auto& [a, s] : pts) out.push_back(s);
  return out;
}

namespace {

// Eventually periodic reduced ray from the identity: head then period forever.
struct Ray {
  Word head, period;
  char at(std::size_t i) const {
    return i < head.size() ? head[i] : period[(i - head.size()) % period.size()];
  }
};

Ray translate_ray(const Word& g, const Word& p) {
  std::size_t n = g.size() / p.size() + 2;
  return {words::free_reduce(g + words::repeat(p, static_cast<int>(n))), p};
}

// Orientation of three distinct rays as seen from their tripod center.
int orient(const std::array<int, 128>& pos, int k, const Ray* r[3], std::size_t len) {
  std::size_t l[3];
  for (int i = 0; i < 3; ++i) {
    const Ray& x = *r[i];
    const Ray& y = *r[(i + 1) % 3];
    std::size_t j = 0;
    while (j < len && x.at(j) == y.at(j)) ++j;
    if (j == len) return 0;
    l[i] = j;
  }
  // Longest pairwise prefix is the center; the ray outside that pair leaves backwards.
  int top = 0;
  for (int i = 1; i < 3; ++i)
    if (l[i] > l[top]) top = i;
  std::size_t c = l[top];
  int dir[3];
  for (int i = 0; i < 3; ++i) {
    bool in_pair = (i == top || i == (top + 1) % 3);
    char letter = in_pair || l[(top + 1) % 3] == c || l[(top + 2) % 3] == c
                      ? r[i]->at(c)
                      : words::inverse_letter(r[top]->at(c - 1));
    dir[i] = pos[static_cast<unsigned char>(letter)];
  }
  int d1 = ((dir[1] - dir[0]) % k + k) % k, d2 = ((dir[2] - dir[0]) % k + k) % k;
  return d1 < d2 ? 1 : -1;
}

}  // namespace

bool tree_linked(const std::string& order, const Word& u, const Word& g, const Word& v) {
  std::array<int, 128> pos{};
  for (std::size_t i = 0; i < order.size(); ++i)
    pos[static_cast<unsigned char>(order[i])] = static_cast<int>(i);
  const int k = static_cast<int>(order.size());
  Word ui = words::inverse(u), vi = words::inverse(v);
  Ray p1{"", u}, p2{"", ui};
  Ray q1 = translate_ray(g, v), q2 = translate_ray(g, vi);
  std::size_t len = std::max(q1.head.size(), q2.head.size()) + 2 * (u.size() + v.size()) + 2;
  const Ray* a[3] = {&p1, &q1, &p2};
  const Ray* b[3] = {&p1, &q2, &p2};
  int oa = orient(pos, k, a, len), ob = orient(pos, k, b, len);
  if (oa == 0 || ob == 0) return false;  // shared endpoint
  return oa != ob;
}

std::vector<Word> linked_cosets(const HolonomyRep& rep, const Word& u, const Word& v,
                                int radius) {
  return scan_candidates(rep, u, v, candidate_conjugators(u, v, radius), true);
}

std::vector<Word> linked_cosets_serial(const HolonomyRep& rep, const Word& u, const Word& v,
                                       int radius) {
  return scan_candidates(rep, u, v, candidate_conjugators(u, v, radius), false);
}

std::vector<Word> linked_cosets_exhaustive(const HolonomyRep& rep, const Word& u,
                                           const Word& v, int max_len) {
  std::string alphabet;
  for (char g : rep.presentation->generators) {
    alphabet.push_back(g);
    alphabet.push_back(words::inverse_letter(g));
  }
  std::vector<Word> all;
  all_reduced(alphabet, max_len, all);
  return scan_candidates(rep, u, v, all, false);
}

namespace {

void check_radius(int radius) {
  if (radius < 1) fail(ErrorKind::OutOfDomain, "radius must be >= 1");
}

void check_rep(const MultiCurve& c, const HolonomyRep& rep) {
  if (!(c.presentation() == *rep.presentation))
    fail(ErrorKind::NoRepresentation,
         "no holonomy configured for presentation " + c.presentation().name);
}

// Representatives of unordered self-crossings among ordered linked cosets.
std::vector<Word> unordered_self(const Word& u, const std::vector<Word>& cosets) {
  std::vector<Word> out;
  for (const Word& d : cosets) {
    Word partner = double_coset_normal_form(u, words::inverse(d), u);
    if (!words::shortlex_less(partner, d)) out.push_back(d);
  }
  return out;
}

}  // namespace

std::vector<Crossing> enumerate_essential_crossings(const MultiCurve& c,
                                                    const EnumerateOptions& opts,
                                                    const HolonomyRep& rep) {
  check_radius(opts.radius);
  check_rep(c, rep);
  std::vector<Crossing> out;
  std::vector<ConjClass> comps;
  for (const auto& [k, w] : c.components()) comps.push_back(k);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const ConjClass& a = comps[i];
    auto self = linked_cosets(rep, a.canonical, a.canonical, opts.radius);
    for (Word& g : unordered_self(a.canonical, self))
      out.push_back({CrossingKind::LinkedAxes, a, a, std::move(g), 0, 0});
    for (int m = 1; m < a.power; ++m)
      out.push_back({CrossingKind::PowerType, a, a, "", m, a.power});
    for (std::size_t j = i + 1; j < comps.size(); ++j) {
      const ConjClass& b = comps[j];
      if (!opts.include_reverse_pairs && words::inverse(a) == b) continue;
      for (Word& g : linked_cosets(rep, a.canonical, b.canonical, opts.radius))
        out.push_back({CrossingKind::LinkedAxes, a, b, std::move(g), 0, 0});
    }
  }
  return out;
}

namespace {

std::complex<double> act(const Mobius& m, std::complex<double> z) {
  return (m.a * z + m.b) / (m.c * z + m.d);
}

// Split u at a self-crossing with g: loops alpha, beta with alpha·beta = u.
std::pair<Word, Word> split_self(const HolonomyRep& rep, const Word& u, const Word& g) {
  Mobius hu = hyperbolic::holonomy(rep, u);
  Axis ax = hyperbolic::axis_endpoints(hu);
  auto homog = [](hyperbolic::IdealPoint p) {
    return std::pair{std::sin(p.angle() / 2), std::cos(p.angle() / 2)};
  };
  auto [x1, y1] = homog(ax.attracting);
  auto [x2, y2] = homog(ax.repelling);
  // Sends repelling -> 0, attracting -> ∞.
  Mobius m{y2, -x2, y1, -x1};
  if (m.det() < 0) m = {-y2, x2, y1, -x1};
  m = m.normalized();
  const double period = hyperbolic::trace_length(hu);
  Mobius gp = m * hyperbolic::holonomy(rep, g) * m.inverse();
  double e0 = gp.b / gp.d, e1 = gp.a / gp.c;
  if (!(e0 * e1 < 0))
    fail(ErrorKind::InvalidCrossing, "conjugator does not give a crossing");
  double tp = 0.5 * std::log(-e0 * e1);
  std::complex<double> q = act(gp.inverse(), std::complex<double>(0, std::exp(tp)));
  double tq = std::log(std::abs(q));
  int k = static_cast<int>(std::floor((tq - tp) / period)) + 1;
  Word alpha = words::free_reduce(signed_power(u, k) + g);
  Word beta = words::free_reduce(words::inverse(g) + signed_power(u, 1 - k));
  return {alpha, beta};
}

struct Parts {
  std::vector<Word> oriented;
  std::vector<Word> reversed;
};

Parts smoothing_words(const HolonomyRep& rep, const Crossing& x) {
  const Word& u = x.comp_a.canonical;
  if (x.kind == CrossingKind::PowerType) {
    if (!(x.comp_a == x.comp_b) || x.m <= 0 || x.m >= x.n || x.n != x.comp_a.power)
      fail(ErrorKind::InvalidCrossing, "bad power-type data");
    const Word& d = x.comp_a.root;
    return {{words::repeat(d, x.m), words::repeat(d, x.n - x.m)},
            {signed_power(d, 2 * x.m - x.n)}};
  }
  const Word& g = x.conjugator;
  if (x.comp_a == x.comp_b) {
    auto [alpha, beta] = split_self(rep, u, g);
    return {{alpha, beta}, {words::free_reduce(alpha + words::inverse(beta))}};
  }
  const Word& v = x.comp_b.canonical;
  Word gi = words::inverse(g);
  return {{words::free_reduce(u + g + v + gi)},
          {words::free_reduce(u + g + words::inverse(v) + gi)}};
}

SmoothingResult apply_parts(const MultiCurve& c, const Crossing& x,
                            const std::vector<Word>& parts) {
  if (c.weight(x.comp_a) == 0 || c.weight(x.comp_b) == 0)
    fail(ErrorKind::InvalidCrossing, "crossing refers to components not in the multi-curve");
  Rational w = c.weight(x.comp_a);
  if (!(x.comp_a == x.comp_b) && c.weight(x.comp_b) != w)
    fail(ErrorKind::WeightMismatch, "smoothing needs equal weights on both strands");
  SmoothingResult r{c, w, {}, {}};
  r.result.remove(x.comp_a);
  r.result.remove(x.comp_b);
  r.removed.push_back(x.comp_a);
  if (!(x.comp_a == x.comp_b)) r.removed.push_back(x.comp_b);
  for (const Word& p : parts) {
    Word cyc = words::cyclic_reduce(p);
    if (cyc.empty()) continue;
    ConjClass k = words::canonical_form(cyc);
    r.result.add(k, w);
    r.added.push_back(k);
  }
  return r;
}

}  // namespace

SmoothingResult oriented_smoothing(const MultiCurve& c, const Crossing& x,
                                   const HolonomyRep& rep) {
  check_rep(c, rep);
  return apply_parts(c, x, smoothing_words(rep, x).oriented);
}

std::pair<SmoothingResult, SmoothingResult> unoriented_smoothings(const MultiCurve& c,
                                                                  const Crossing& x,
                                                                  const HolonomyRep& rep) {
  check_rep(c, rep);
  Parts p = smoothing_words(rep, x);
  return {apply_parts(c, x, p.oriented), apply_parts(c, x, p.reversed)};
}

Count intersection_count(const ConjClass& c, const ConjClass& d, int radius,
                         const HolonomyRep& rep) {
  check_radius(radius);
  Count r;
  r.radius = radius;
  r.count = static_cast<long>(linked_cosets(rep, c.canonical, d.canonical, radius).size());
  r.check = static_cast<long>(linked_cosets(rep, c.canonical, d.canonical, radius + 2).size());
  if (r.count != r.check)
    fail(ErrorKind::Unstable, "intersection count changed between radius " +
                                  std::to_string(radius) + " and " + std::to_string(radius + 2));
  return r;
}

long intersection_number(const ConjClass& c, const ConjClass& d, int radius,
                         const HolonomyRep& rep) {
  return intersection_count(c, d, radius, rep).count;
}

long self_intersection(const ConjClass& c, int radius, const HolonomyRep& rep) {
  check_radius(radius);
  const Word& u = c.canonical;
  auto at = [&](int r) {
    return static_cast<long>(unordered_self(u, linked_cosets(rep, u, u, r)).size());
  };
  long n0 = at(radius), n1 = at(radius + 2);
  if (n0 != n1) fail(ErrorKind::Unstable, "self-intersection count not stable");
  return n0 + (c.power - 1);
}

}  // namespace curvecur::crossings
