#pragma once

#include "curvecur/elastic.hpp"
#include "curvecur/hyperbolic.hpp"
#include "curvecur/words.hpp"

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace curvecur::functionals {

using words::ConjClass;
using words::MultiCurve;
using words::Word;

enum class Axiom {
  QuasiSmoothing,
  Smoothing,
  ConvexUnion,
  AdditiveUnion,
  Homogeneous,
  Stable,
  StronglyStable,
};

const char* axiom_name(Axiom a);
// snake_case names as used on the command line; ParseError otherwise.
Axiom axiom_from_name(std::string_view s);
const std::vector<Axiom>& all_axioms();

struct Value {
  double value = 0;
  std::optional<Rational> exact;
  bool window_limited = false;   // a wider search window changed the answer
  bool upper_bound_only = false; // stabilized value without a detected tail
};

struct CurveFunctional {
  std::string id;
  std::set<Axiom> claimed;
  const words::SurfacePresentation* presentation = &words::punctured_torus();
  std::function<Value(const MultiCurve&)> eval;
  // f(C^n) for n = 1..N in one pass, when the functional has a faster route.
  std::function<std::vector<Value>(const ConjClass&, int)> powers;

  bool claims(Axiom a) const { return claimed.count(a) != 0; }
  Value operator()(const MultiCurve& c) const { return eval(c); }
};

// Conjugacy length of root^j for j = 1..max_power with respect to gens, found by
// breadth-first search inside a tube of the given width around the axis of root.
// root must be cyclically reduced. Throws BudgetExceeded if some power has no
// expression inside the tube.
std::vector<long> conjugacy_lengths(const std::vector<Word>& gens, const Word& root,
                                    int max_power, int tube);

// Throws NotGenerating unless every generator of the (free) presentation is a
// product of at most four gens. Unsupported on closed surfaces.
CurveFunctional word_length_functional(const std::vector<Word>& gens,
                                       const words::SurfacePresentation& p = words::punctured_torus());

// parabolic_zero: cusp classes evaluate to 0 instead of throwing NotHyperbolic.
CurveFunctional hyperbolic_length_functional(
    const hyperbolic::HolonomyRep& rep = hyperbolic::HolonomyRep::builtin_pt(),
    bool parabolic_zero = false);

CurveFunctional intersection_functional(
    const MultiCurve& d, const hyperbolic::HolonomyRep& rep = hyperbolic::HolonomyRep::builtin_pt());

// sqrt(i(C, C)) with the bilinear convention: each transverse self-crossing counts twice.
CurveFunctional sqrt_self_intersection_functional(
    const hyperbolic::HolonomyRep& rep = hyperbolic::HolonomyRep::builtin_pt());

CurveFunctional graph_length_functional(const elastic::GraphEmbedding& emb, int cutoff = 8);
// sqrt(EL) on an embedded elastic graph.
CurveFunctional extremal_length_functional(const elastic::GraphEmbedding& emb, int cutoff = 8);

// f(Σ aᵢCᵢ) = f(Σ d·aᵢCᵢ)/d with d the common denominator. Throws NotHomogeneous.
Value weighted_eval(const CurveFunctional& f, const MultiCurve& c);

// Splits "a,aa,b" into generator words.
std::vector<Word> parse_gens(std::string_view s);

}  // namespace curvecur::functionals
