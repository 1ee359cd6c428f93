#include "curvecur/hyperbolic.hpp"

#include "curvecur/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace curvecur::hyperbolic {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSep = 1e-9;

double wrap(double t) {
  t = std::fmod(t, 2 * kPi);
  if (t <= -kPi) t += 2 * kPi;
  if (t > kPi) t -= 2 * kPi;
  return t;
}

Mobius rescaled(const Mobius& m) {
  double s = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
  if (s == 0 || !std::isfinite(s)) fail(ErrorKind::NoConvergence, "frame degenerated");
  return {m.a / s, m.b / s, m.c / s, m.d / s};
}
}  // namespace

Mobius Mobius::inverse() const {
  double dt = det();
  return {d / dt, -b / dt, -c / dt, a / dt, unimodular};
}

Mobius Mobius::normalized() const {
  if (unimodular) return *this;
  double dt = det();
  if (!(dt > 0)) fail(ErrorKind::DegenerateConfiguration, "matrix determinant must be positive");
  double s = std::sqrt(dt);
  return {a / s, b / s, c / s, d / s, true};
}

bool Mobius::is_hyperbolic() const {
  return std::abs(trace()) / std::sqrt(std::abs(det())) > 2 + 1e-9;
}

IdealPoint IdealPoint::from_real(double x) {
  if (std::isinf(x)) return infinity();
  return IdealPoint(2 * std::atan(x));
}

IdealPoint IdealPoint::infinity() { return IdealPoint(kPi); }

IdealPoint IdealPoint::from_homogeneous(double x, double y) {
  if (x == 0 && y == 0) fail(ErrorKind::DegenerateConfiguration, "zero homogeneous vector");
  return IdealPoint(wrap(2 * std::atan2(x, y)));
}

bool IdealPoint::is_infinity(double tol) const { return kPi - std::abs(theta_) <= tol; }

double IdealPoint::value() const {
  if (is_infinity()) return std::numeric_limits<double>::infinity();
  return std::tan(theta_ / 2);
}

double circle_distance(IdealPoint p, IdealPoint q) {
  double d = std::abs(wrap(p.angle() - q.angle()));
  return std::min(d, 2 * kPi - d);
}

IdealPoint apply(const Mobius& m, IdealPoint p) {
  double s = std::sin(p.angle() / 2), c = std::cos(p.angle() / 2);
  return IdealPoint::from_homogeneous(m.a * s + m.b * c, m.c * s + m.d * c);
}

Axis apply(const Mobius& m, const Axis& ax) {
  return {apply(m, ax.attracting), apply(m, ax.repelling)};
}

const HolonomyRep& HolonomyRep::builtin_pt() {
  static const HolonomyRep rep{&words::punctured_torus(),
                               {{'a', Mobius{1, 1, 1, 2, true}}, {'b', Mobius{1, -1, -1, 2, true}}}};
  return rep;
}

HolonomyRep HolonomyRep::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("representation: ") + e.what());
  }
  HolonomyRep rep;
  try {
    std::string gens;
    for (const auto& g : j.at("generators")) {
      std::string s = g.get<std::string>();
      if (s.size() != 1 || s[0] < 'a' || s[0] > 'd')
        fail(ErrorKind::ParseError, "generator names must be single letters a-d");
      gens += s;
    }
    std::string surface = j.value("surface", gens == "ab" ? "pt" : gens == "abcd" ? "genus2" : "");
    rep.presentation = &words::presentation_by_name(surface);
    if (rep.presentation->generators != gens)
      fail(ErrorKind::PresentationMismatch, "generators do not match surface " + surface);
    for (char g : gens) {
      const auto& m = j.at("matrices").at(std::string(1, g));
      if (m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
        fail(ErrorKind::ParseError, "matrices must be 2x2");
      Mobius x{m[0][0].get<double>(), m[0][1].get<double>(), m[1][0].get<double>(),
               m[1][1].get<double>()};
      rep.images[g] = x.normalized();
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("representation: ") + e.what());
  }
  for (const auto& r : rep.presentation->relators) {
    Mobius m = holonomy(rep, r);
    double s = m.a > 0 ? 1 : -1;
    if (std::abs(s * m.a - 1) + std::abs(m.b) + std::abs(m.c) + std::abs(s * m.d - 1) > 1e-6)
      fail(ErrorKind::PresentationMismatch, "relator " + r + " is not mapped to the identity");
  }
  if (rep.presentation->name == "pt") {
    double t = holonomy(rep, "abAB").trace();
    if (std::abs(t + 2) > 1e-6)
      fail(ErrorKind::PresentationMismatch, "commutator trace must be -2 for a cusped torus");
  }
  return rep;
}

Mobius holonomy(const HolonomyRep& rep, std::string_view w) {
  Mobius m = Mobius::identity();
  int since = 0;
  for (char ch : w) {
    if (!rep.presentation->has_letter(ch))
      fail(ErrorKind::UnknownGenerator, std::string("letter '") + ch + "'");
    bool inv = ch < 'a';
    char g = inv ? static_cast<char>(ch - 'A' + 'a') : ch;
    auto it = rep.images.find(g);
    if (it == rep.images.end())
      fail(ErrorKind::UnknownGenerator, std::string("no image for '") + g + "'");
    m = m * (inv ? it->second.inverse() : it->second);
    if (++since == 16) {
      m = m.normalized();
      since = 0;
    }
  }
  return m.normalized();
}

double trace_length(const Mobius& m) {
  if (!m.is_hyperbolic()) fail(ErrorKind::NotHyperbolic, "|trace| <= 2");
  double t = std::abs(m.trace()) / std::sqrt(m.det());
  return 2 * std::acosh(t / 2);
}

Axis axis_endpoints(const Mobius& m0) {
  if (!m0.is_hyperbolic()) fail(ErrorKind::NotHyperbolic, "|trace| <= 2");
  Mobius m = m0.normalized();
  if (m.trace() < 0) m = {-m.a, -m.b, -m.c, -m.d};
  double t = m.trace();
  double root = std::sqrt(t * t - 4);
  auto fixed = [&](double lam) {
    // Two candidate eigenvectors; keep the better conditioned one.
    double x1 = m.b, y1 = lam - m.a;
    double x2 = lam - m.d, y2 = m.c;
    if (std::hypot(x1, y1) >= std::hypot(x2, y2)) return IdealPoint::from_homogeneous(x1, y1);
    return IdealPoint::from_homogeneous(x2, y2);
  };
  double big = (t + root) / 2;
  double small = 1 / big;
  return {fixed(big), fixed(small)};
}

bool linked(const Axis& p, const Axis& q) {
  const IdealPoint pts[4] = {p.attracting, p.repelling, q.attracting, q.repelling};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (circle_distance(pts[i], pts[j]) < kSep)
        fail(ErrorKind::DegenerateConfiguration, "endpoints closer than 1e-9");
  auto ccw = [](double from, double to) {
    double d = std::fmod(to - from, 2 * kPi);
    return d < 0 ? d + 2 * kPi : d;
  };
  double span = ccw(pts[0].angle(), pts[1].angle());
  bool in1 = ccw(pts[0].angle(), pts[2].angle()) < span;
  bool in2 = ccw(pts[0].angle(), pts[3].angle()) < span;
  return in1 != in2;
}

double gd(double x) { return std::atan(std::sinh(x)); }

double gd_inv(double y) {
  if (!(std::abs(y) < kPi / 2)) fail(ErrorKind::OutOfDomain, "gd_inv needs |y| < pi/2");
  return std::asinh(std::tan(y));
}

double L0(double eps) {
  if (!(eps > 0 && eps < kPi / 2)) fail(ErrorKind::OutOfDomain, "L0 needs 0 < eps < pi/2");
  return 2 * gd_inv(eps);
}

namespace {

Mobius advance(double t) { return {std::exp(t / 2), 0, 0, std::exp(-t / 2)}; }

// Left turn by theta of the unit tangent at i.
Mobius turn(double theta) {
  double phi = -theta / 2;
  return {std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi)};
}

Mobius forward_piece(const BrokenPiece& p) {
  return advance(p.short_length) * turn(p.turn_off) * advance(p.long_length) * turn(p.turn_on);
}

Mobius backward_piece(const BrokenPiece& p) {
  return turn(-p.turn_on) * advance(p.long_length) * turn(-p.turn_off) *
         advance(p.short_length);
}

IdealPoint heading(const Mobius& g) { return IdealPoint::from_homogeneous(g.a, g.c); }

IdealPoint limit(Mobius g, const std::vector<Mobius>& steps) {
  IdealPoint prev = heading(g);
  int calm = 0;
  for (int k = 0; k < 10000; ++k) {
    g = rescaled(g * steps[k % steps.size()]);
    IdealPoint cur = heading(g);
    calm = circle_distance(cur, prev) < 1e-10 ? calm + 1 : 0;
    prev = cur;
    if (calm >= static_cast<int>(steps.size()) + 1) return cur;
  }
  fail(ErrorKind::NoConvergence, "broken path did not converge in 1e4 compositions");
}

}  // namespace

void validate(const BrokenPathSpec& spec) {
  double eps = spec.epsilon;
  double l0 = L0(eps);
  int last_sign = 0;
  for (const auto& p : spec.pattern) {
    if (!(p.long_length > l0))
      fail(ErrorKind::BelowThreshold, "long segment not longer than L0(eps)");
    if (p.short_length < 0) fail(ErrorKind::OutOfDomain, "negative short length");
    for (double th : {p.turn_off, p.turn_on}) {
      if (std::abs(kPi / 2 - std::abs(th)) > eps)
        fail(ErrorKind::OutOfDomain, "turn angle not within eps of pi/2");
      int s = th > 0 ? 1 : -1;
      if (s == last_sign) fail(ErrorKind::OutOfDomain, "turns must alternate left and right");
      last_sign = s;
    }
  }
  if (!spec.pattern.empty() && (spec.pattern.front().turn_off > 0) == (last_sign > 0))
    fail(ErrorKind::OutOfDomain, "turns must alternate across the period");
}

namespace {

// Endpoints seen from the start of piece k.
Axis endpoints_from(const BrokenPathSpec& spec, std::size_t k) {
  const std::size_t n = spec.pattern.size();
  std::vector<Mobius> fwd, bwd;
  for (std::size_t i = 0; i < n; ++i) fwd.push_back(forward_piece(spec.pattern[(k + i) % n]));
  for (std::size_t i = 1; i <= n; ++i) bwd.push_back(backward_piece(spec.pattern[(k + n - i) % n]));
  return {limit(Mobius{}, fwd), limit(turn(kPi), bwd)};
}

const Axis kBaseLine{IdealPoint::infinity(), IdealPoint::from_real(0)};

}  // namespace

Axis broken_path_endpoints(const BrokenPathSpec& spec) {
  validate(spec);
  if (spec.pattern.empty()) return kBaseLine;
  Axis ends = endpoints_from(spec, 0);
  if (!separated_by_short_segments(spec))
    fail(ErrorKind::DegenerateConfiguration, "endpoints on one side of a short-segment line");
  return ends;
}

bool separated_by_short_segments(const BrokenPathSpec& spec) {
  validate(spec);
  // The path is periodic and linking is invariant under isometries, so each
  // short segment only needs checking once, in its own frame.
  for (std::size_t k = 0; k < spec.pattern.size(); ++k)
    if (!linked(endpoints_from(spec, k), kBaseLine)) return false;
  return true;
}

std::vector<Axis> short_segment_lines(const BrokenPathSpec& spec, int periods) {
  validate(spec);
  std::vector<Axis> lines;
  if (spec.pattern.empty()) return lines;
  auto line_of = [](const Mobius& g) {
    return Axis{IdealPoint::from_homogeneous(g.a, g.c), IdealPoint::from_homogeneous(g.b, g.d)};
  };
  const std::size_t n = spec.pattern.size() * periods;
  Mobius g;
  for (std::size_t k = 0; k < n; ++k) {
    lines.push_back(line_of(g));
    g = rescaled(g * forward_piece(spec.pattern[k % spec.pattern.size()]));
  }
  g = turn(kPi);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& p = spec.pattern[spec.pattern.size() - 1 - k % spec.pattern.size()];
    g = rescaled(g * backward_piece(p));
    lines.push_back(line_of(g));
  }
  return lines;
}

double estimate_kappa(double eps, double L) {
  if (!(L > L0(eps))) fail(ErrorKind::BelowThreshold, "L must exceed L0(eps)");
  // 1e4 stands for an unbounded long segment; beyond ~50 the window is fixed
  // to double precision.
  const double lengths[2] = {L, std::min(1e4, std::max(L, 50.0))};
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (double t1 : {kPi / 2 - eps, kPi / 2 + eps})
    for (double len : lengths)
      for (double t2 : {kPi / 2 - eps, kPi / 2 + eps}) {
        Mobius g = turn(-t1) * advance(len) * turn(t2);
        for (IdealPoint p : {IdealPoint::from_homogeneous(g.a, g.c),
                             IdealPoint::from_homogeneous(g.b, g.d)}) {
          double x = p.value();
          if (!(x > 0) || !std::isfinite(x))
            fail(ErrorKind::NoConvergence, "window not bounded away from the base line");
          lo = std::min(lo, x);
          hi = std::max(hi, x);
        }
      }
  auto disjoint = [&](double kappa) { return std::exp(kappa) * lo > hi; };
  double a = 0, b = 1;
  while (!disjoint(b)) b *= 2;
  if (disjoint(0)) return 0;
  while (b - a > 1e-3) {
    double m = (a + b) / 2;
    (disjoint(m) ? b : a) = m;
  }
  return b;
}

}  // namespace curvecur::hyperbolic
