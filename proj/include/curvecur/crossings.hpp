#pragma once

#include "curvecur/hyperbolic.hpp"
#include "curvecur/words.hpp"

#include <string>
#include <utility>
#include <vector>

namespace curvecur::crossings {

using words::ConjClass;
using words::MultiCurve;
using words::Word;

enum class CrossingKind { LinkedAxes, PowerType };

struct Crossing {
  CrossingKind kind = CrossingKind::LinkedAxes;
  ConjClass comp_a;
  ConjClass comp_b;
  Word conjugator;  // LinkedAxes: axis(comp_a) is linked with g·axis(comp_b)
  int m = 0;        // PowerType: comp_a = delta^n split at m
  int n = 0;
};

struct SmoothingResult {
  MultiCurve result;
  Rational weight_used;
  std::vector<ConjClass> removed;
  std::vector<ConjClass> added;
};

// Canonical representative of <u> g <v> (u, v cyclically reduced and not
// commensurable): read off from where g·axis(v) meets axis(u) in the Cayley tree.
Word double_coset_normal_form(const Word& u, const Word& g, const Word& v);

// g = P·Q^-1 with P a prefix of u^±∞ and Q a prefix of v^±∞,
// |P| <= min(radius, ceil(|u|/2)) and likewise for Q.
// Covers every double coset with crossing axes once radius >= ceil(max(|u|,|v|)/2).
std::vector<Word> candidate_conjugators(const Word& u, const Word& v, int radius);
int complete_radius(const Word& u, const Word& v);

// Normal forms of the double cosets <u> g <v> whose axes are linked, shortlex
// sorted. u, v cyclically reduced. Cosets inside the commensurator of u are skipped.
std::vector<Word> linked_cosets(const hyperbolic::HolonomyRep& rep, const Word& u,
                                const Word& v, int radius);
std::vector<Word> linked_cosets_serial(const hyperbolic::HolonomyRep& rep, const Word& u,
                                       const Word& v, int radius);
// Reference: every reduced g with |g| <= max_len. Exponential; tests only.
std::vector<Word> linked_cosets_exhaustive(const hyperbolic::HolonomyRep& rep, const Word& u,
                                           const Word& v, int max_len);

// Letters s, S of a free presentation in the cyclic order of the attracting
// fixed points of their holonomies. Throws DegenerateConfiguration.
std::string boundary_letter_order(const hyperbolic::HolonomyRep& rep);
// Whether axis(u) and g·axis(v) are linked in the Cayley tree with the given
// letter order at every vertex. u, v cyclically reduced.
bool tree_linked(const std::string& order, const Word& u, const Word& g, const Word& v);

struct EnumerateOptions {
  int radius = 6;
  bool include_reverse_pairs = false;  // pairs {C, C^-1} of components
};

std::vector<Crossing> enumerate_essential_crossings(
    const MultiCurve& c, const EnumerateOptions& opts = {},
    const hyperbolic::HolonomyRep& rep = hyperbolic::HolonomyRep::builtin_pt());

SmoothingResult oriented_smoothing(
    const MultiCurve& c, const Crossing& x,
    const hyperbolic::HolonomyRep& rep = hyperbolic::HolonomyRep::builtin_pt());
std::pair<SmoothingResult, SmoothingResult> unoriented_smoothings(
    const MultiCurve& c, const Crossing& x,
    const hyperbolic::HolonomyRep& rep = hyperbolic::HolonomyRep::builtin_pt());

struct Count {
  long count = 0;
  int radius = 0;
  long check = 0;  // count at radius + 2
};

// Number of linked double cosets; both classes must not be parallel to each other
// for a nonzero answer. Throws Unstable when radius and radius+2 disagree.
Count intersection_count(const ConjClass& c, const ConjClass& d, int radius,
                         const hyperbolic::HolonomyRep& rep = hyperbolic::HolonomyRep::builtin_pt());
long intersection_number(const ConjClass& c, const ConjClass& d, int radius = 6,
                         const hyperbolic::HolonomyRep& rep = hyperbolic::HolonomyRep::builtin_pt());
// Unordered essential self-crossings, power-type ones included.
long self_intersection(const ConjClass& c, int radius = 6,
                       const hyperbolic::HolonomyRep& rep = hyperbolic::HolonomyRep::builtin_pt());

}  // namespace curvecur::crossings
