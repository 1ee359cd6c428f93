#pragma once

#include "curvecur/rational.hpp"

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace curvecur::words {

// Lowercase letter = generator, uppercase = its inverse.
using Word = std::string;

struct SurfacePresentation {
  std::string name;
  std::string generators;  // lowercase letters, in order
  std::vector<Word> relators;
  int euler_char = 0;

  bool is_free() const { return relators.empty(); }
  bool has_letter(char c) const;
  bool operator==(const SurfacePresentation& o) const { return name == o.name; }
};

const SurfacePresentation& punctured_torus();
const SurfacePresentation& genus_two();
// "pt" or "genus2"; throws ParseError otherwise.
const SurfacePresentation& presentation_by_name(std::string_view name);

bool is_letter(char c);
char inverse_letter(char c);
// a<b<c<d<A<B<C<D
int letter_rank(char c);
bool rank_less(const Word& x, const Word& y);  // lexicographic by rank
bool shortlex_less(const Word& x, const Word& y);

Word inverse(std::string_view w);
Word free_reduce(std::string_view w);
// Free reduction followed by removal of a conjugating prefix/suffix pair.
Word cyclic_reduce(std::string_view w);
Word min_rotation(std::string_view w);
Word repeat(std::string_view w, int n);
// Smallest period p dividing |w| with w = (w[0,p))^(|w|/p).
std::size_t primitive_period(std::string_view w);

void check_letters(std::string_view w, const SurfacePresentation& p);

// Word problem via Dehn's algorithm; for free presentations it is free reduction.
Word dehn_reduce(std::string_view w, const SurfacePresentation& p);
bool is_identity(std::string_view w, const SurfacePresentation& p);

struct ConjClass {
  Word canonical;
  Word root;
  int power = 1;

  std::size_t length() const { return canonical.size(); }
  bool operator==(const ConjClass& o) const { return canonical == o.canonical; }
  bool operator<(const ConjClass& o) const {
    return shortlex_less(canonical, o.canonical);
  }
};

// Conjugacy class in the free group on the letters of w. Throws TrivialCurve.
ConjClass canonical_form(std::string_view w);
// Presentation aware; for closed surfaces uses cyclic Dehn reduction plus the
// half-relator swap orbit.
ConjClass canonical_form(std::string_view w, const SurfacePresentation& p);
ConjClass power(const ConjClass& c, int n);
ConjClass inverse(const ConjClass& c);
// Orbit {C, C^-1} picked by shortlex.
ConjClass unoriented(const ConjClass& c);

class MultiCurve {
 public:
  using Map = std::map<ConjClass, Rational>;

  MultiCurve();
  explicit MultiCurve(const SurfacePresentation& p);

  // Merges with an existing parallel component; zero weight is a no-op.
  void add(const ConjClass& c, const Rational& w);
  void remove(const ConjClass& c);

  const Map& components() const { return comps_; }
  const SurfacePresentation& presentation() const { return *pres_; }
  bool empty() const { return comps_.empty(); }
  std::size_t size() const { return comps_.size(); }
  Rational weight(const ConjClass& c) const;
  Rational total_weight() const;
  bool integral() const;
  std::string to_string() const;

  bool operator==(const MultiCurve& o) const {
    return pres_->name == o.pres_->name && comps_ == o.comps_;
  }

 private:
  const SurfacePresentation* pres_;
  Map comps_;
};

MultiCurve single(const ConjClass& c, const Rational& w = 1,
                  const SurfacePresentation& p = punctured_torus());
MultiCurve scale(const MultiCurve& c, const Rational& n);
MultiCurve union_of(const MultiCurve& c, const MultiCurve& d);
MultiCurve reverse_orientation(const MultiCurve& c);
// Each component replaced by its n-th power, weights kept.
MultiCurve power(const MultiCurve& c, int n);

// "1/5*aabab; 2*b". Trivial terms are dropped.
MultiCurve parse_multicurve(std::string_view literal,
                            const SurfacePresentation& p = punctured_torus());

}  // namespace curvecur::words
