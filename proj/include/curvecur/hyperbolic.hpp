#pragma once

#include "curvecur/words.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace curvecur::hyperbolic {

// z -> (a z + b) / (c z + d)
struct Mobius {
  double a = 1, b = 0, c = 0, d = 1;
  // Known to have det 1. Products of such matrices keep it, which avoids
  // recomputing ad - bc once the entries are large.
  bool unimodular = false;

  static Mobius identity() { return {1, 0, 0, 1, true}; }
  double trace() const { return a + d; }
  double det() const { return unimodular ? 1.0 : a * d - b * c; }
  Mobius operator*(const Mobius& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d,
            unimodular && o.unimodular};
  }
  Mobius inverse() const;
  Mobius normalized() const;  // det = 1; throws DegenerateConfiguration if det <= 0
  bool is_hyperbolic() const;
};

// A point of R ∪ {∞}, stored as the angle 2·atan(x) in (-π, π]; ∞ is π.
class IdealPoint {
 public:
  IdealPoint() = default;
  static IdealPoint from_real(double x);
  static IdealPoint infinity();
  // Point x/y of the projective line.
  static IdealPoint from_homogeneous(double x, double y);

  double angle() const { return theta_; }
  bool is_infinity(double tol = 0) const;
  double value() const;  // +inf for the point at infinity

 private:
  explicit IdealPoint(double theta) : theta_(theta) {}
  double theta_ = 0;
};

double circle_distance(IdealPoint p, IdealPoint q);
IdealPoint apply(const Mobius& m, IdealPoint p);

struct Axis {
  IdealPoint attracting;
  IdealPoint repelling;
};

Axis apply(const Mobius& m, const Axis& ax);

struct HolonomyRep {
  const words::SurfacePresentation* presentation = &words::punctured_torus();
  std::map<char, Mobius> images;  // lowercase generators

  static const HolonomyRep& builtin_pt();
  // {"generators": [...], "matrices": {"a": [[p,q],[r,s]], ...}, "surface": "pt"}
  static HolonomyRep from_json(std::string_view text);
};

Mobius holonomy(const HolonomyRep& rep, std::string_view w);
double trace_length(const Mobius& m);
Axis axis_endpoints(const Mobius& m);
// Throws DegenerateConfiguration when two of the four points nearly coincide.
bool linked(const Axis& p, const Axis& q);

double gd(double x);
double gd_inv(double y);
double L0(double eps);

// One period unit: a short segment, a turn, a long segment, a turn.
// Turns are signed (left positive).
struct BrokenPiece {
  double short_length = 0;
  double turn_off = 0;
  double long_length = 0;
  double turn_on = 0;
};

struct BrokenPathSpec {
  double epsilon = 0.1;
  std::vector<BrokenPiece> pattern;  // repeated in both directions; empty = one geodesic
};

void validate(const BrokenPathSpec& spec);
// (forward limit, backward limit) of the path starting at i heading up.
// Throws DegenerateConfiguration if a short-segment line fails to separate them.
Axis broken_path_endpoints(const BrokenPathSpec& spec);
// Whether the endpoints lie on opposite sides of every short-segment line.
bool separated_by_short_segments(const BrokenPathSpec& spec);
// Lines through the short segments of pieces -periods*P .. periods*P, in the
// frame of the path's start. Far lines lose precision quickly.
std::vector<Axis> short_segment_lines(const BrokenPathSpec& spec, int periods);

double estimate_kappa(double eps, double L);

}  // namespace curvecur::hyperbolic
