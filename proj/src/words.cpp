#include "curvecur/words.hpp"

#include "curvecur/error.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <set>

namespace curvecur::words {

const SurfacePresentation& punctured_torus() {
  static const SurfacePresentation p{"pt", "ab", {}, -1};
  return p;
}

const SurfacePresentation& genus_two() {
  static const SurfacePresentation p{"genus2", "abcd", {"abABcdCD"}, -2};
  return p;
}

const SurfacePresentation& presentation_by_name(std::string_view name) {
  if (name == "pt") return punctured_torus();
  if (name == "genus2") return genus_two();
  fail(ErrorKind::ParseError, "unknown surface '" + std::string(name) + "'");
}

bool SurfacePresentation::has_letter(char c) const {
  if (!is_letter(c)) return false;
  char lo = c >= 'a' ? c : static_cast<char>(c - 'A' + 'a');
  return generators.find(lo) != std::string::npos;
}

bool is_letter(char c) { return (c >= 'a' && c <= 'd') || (c >= 'A' && c <= 'D'); }

char inverse_letter(char c) {
  return c >= 'a' ? static_cast<char>(c - 'a' + 'A') : static_cast<char>(c - 'A' + 'a');
}

int letter_rank(char c) { return c >= 'a' ? c - 'a' : 4 + (c - 'A'); }

bool rank_less(const Word& x, const Word& y) {
  return std::lexicographical_compare(
      x.begin(), x.end(), y.begin(), y.end(),
      [](char p, char q) { return letter_rank(p) < letter_rank(q); });
}

bool shortlex_less(const Word& x, const Word& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  return rank_less(x, y);
}

Word inverse(std::string_view w) {
  Word r(w.rbegin(), w.rend());
  for (char& c : r) c = inverse_letter(c);
  return r;
}

Word free_reduce(std::string_view w) {
  Word out;
  out.reserve(w.size());
  for (char c : w) {
    if (!out.empty() && out.back() == inverse_letter(c))
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

Word cyclic_reduce(std::string_view w) {
  Word r = free_reduce(w);
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == inverse_letter(r[j - 1])) {
    ++i;
    --j;
  }
  return r.substr(i, j - i);
}

Word min_rotation(std::string_view w) {
  // Booth's least rotation under letter_rank.
  const std::size_t n = w.size();
  if (n < 2) return Word(w);
  std::vector<int> s(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) s[i] = letter_rank(w[i % n]);
  std::vector<long> f(2 * n, -1);
  long k = 0;
  for (long j = 1; j < static_cast<long>(2 * n); ++j) {
    int sj = s[j];
    long i = f[j - k - 1];
    while (i != -1 && sj != s[k + i + 1]) {
      if (sj < s[k + i + 1]) k = j - i - 1;
      i = f[i];
    }
    if (sj != s[k + i + 1]) {
      if (sj < s[k]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  Word r(w.substr(k));
  r.append(w.substr(0, k));
  return r;
}

Word repeat(std::string_view w, int n) {
  Word r;
  r.reserve(w.size() * std::max(n, 0));
  for (int i = 0; i < n; ++i) r.append(w);
  return r;
}

std::size_t primitive_period(std::string_view w) {
  const std::size_t n = w.size();
  if (n == 0) return 0;
  std::vector<std::size_t> pi(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && w[i] != w[k]) k = pi[k - 1];
    if (w[i] == w[k]) ++k;
    pi[i] = k;
  }
  std::size_t p = n - pi[n - 1];
  return n % p == 0 ? p : n;
}

void check_letters(std::string_view w, const SurfacePresentation& p) {
  for (char c : w)
    if (!p.has_letter(c))
      fail(ErrorKind::UnknownGenerator,
           std::string("letter '") + c + "' not in presentation " + p.name);
}

namespace {

// Cyclic conjugates of every relator and its inverse.
const std::vector<Word>& relator_cycles(const SurfacePresentation& p) {
  static std::map<std::string, std::vector<Word>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p.name);
  if (it != cache.end()) return it->second;
  std::vector<Word> out;
  for (const Word& r : p.relators) {
    for (const Word& base : {r, inverse(r)}) {
      for (std::size_t i = 0; i < base.size(); ++i)
        out.push_back(base.substr(i) + base.substr(0, i));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return cache.emplace(p.name, std::move(out)).first->second;
}

// One Dehn step on a linear word: replace a piece longer than half a relator.
bool dehn_step(Word& w, const std::vector<Word>& cycles) {
  for (const Word& r : cycles) {
    const std::size_t len = r.size();
    for (std::size_t k = len; k > len / 2; --k) {
      std::string_view piece(r.data(), k);
      auto pos = w.find(piece);
      if (pos != Word::npos) {
        Word rep = inverse(std::string_view(r).substr(k));
        w = free_reduce(w.substr(0, pos) + rep + w.substr(pos + k));
        return true;
      }
    }
  }
  return false;
}

Word cyclic_dehn(std::string_view w, const std::vector<Word>& cycles) {
  Word c = cyclic_reduce(w);
  bool changed = true;
  while (changed && !c.empty()) {
    changed = false;
    for (std::size_t i = 0; i < c.size() && !changed; ++i) {
      Word rot = c.substr(i) + c.substr(0, i);
      if (dehn_step(rot, cycles)) {
        c = cyclic_reduce(rot);
        changed = true;
      }
    }
  }
  return c;
}

ConjClass from_cyclic(const Word& cyc) {
  Word m = min_rotation(cyc);
  std::size_t p = primitive_period(m);
  return ConjClass{m, m.substr(0, p), static_cast<int>(m.size() / p)};
}

}  // namespace

Word dehn_reduce(std::string_view w, const SurfacePresentation& p) {
  Word r = free_reduce(w);
  if (p.is_free()) return r;
  const auto& cycles = relator_cycles(p);
  while (dehn_step(r, cycles)) {
  }
  return r;
}

bool is_identity(std::string_view w, const SurfacePresentation& p) {
  return dehn_reduce(w, p).empty();
}

ConjClass canonical_form(std::string_view w) {
  Word c = cyclic_reduce(w);
  if (c.empty()) fail(ErrorKind::TrivialCurve, "word '" + std::string(w) + "' is trivial");
  return from_cyclic(c);
}

ConjClass canonical_form(std::string_view w, const SurfacePresentation& p) {
  check_letters(w, p);
  if (p.is_free()) return canonical_form(w);
  const auto& cycles = relator_cycles(p);
  Word c = cyclic_dehn(w, cycles);
  if (c.empty()) fail(ErrorKind::TrivialCurve, "word '" + std::string(w) + "' is trivial");
  // Explore cyclic words reachable by swapping exact half-relators; a shorter
  // word restarts the search.
  constexpr std::size_t kOrbitCap = 4096;
  for (;;) {
    std::set<Word> seen{min_rotation(c)};
    std::deque<Word> queue{c};
    Word shorter;
    while (!queue.empty() && seen.size() < kOrbitCap && shorter.empty()) {
      Word cur = queue.front();
      queue.pop_front();
      const std::size_t n = cur.size();
      for (std::size_t i = 0; i < n && shorter.empty(); ++i) {
        Word rot = cur.substr(i) + cur.substr(0, i);
        for (const Word& r : cycles) {
          std::size_t half = r.size() / 2;
          if (r.size() % 2 != 0 || rot.size() < half) continue;
          if (rot.compare(0, half, r, 0, half) != 0) continue;
          Word next = cyclic_dehn(
              inverse(std::string_view(r).substr(half)) + rot.substr(half), cycles);
          if (next.empty()) fail(ErrorKind::TrivialCurve, "word is trivial");
          if (next.size() < n) {
            shorter = next;
            break;
          }
          if (seen.insert(min_rotation(next)).second) queue.push_back(next);
        }
      }
    }
    if (!shorter.empty()) {
      c = shorter;
      continue;
    }
    Word best = *seen.begin();
    for (const Word& s : seen)
      if (shortlex_less(s, best)) best = s;
    return from_cyclic(best);
  }
}

ConjClass power(const ConjClass& c, int n) {
  if (n < 1) fail(ErrorKind::OutOfDomain, "power needs n >= 1");
  return ConjClass{repeat(c.canonical, n), c.root, c.power * n};
}

ConjClass inverse(const ConjClass& c) {
  ConjClass r = from_cyclic(inverse(c.canonical));
  return r;
}

ConjClass unoriented(const ConjClass& c) {
  ConjClass r = inverse(c);
  return r < c ? r : c;
}

MultiCurve::MultiCurve() : pres_(&punctured_torus()) {}
MultiCurve::MultiCurve(const SurfacePresentation& p) : pres_(&presentation_by_name(p.name)) {}

void MultiCurve::add(const ConjClass& c, const Rational& w) {
  if (w < 0) fail(ErrorKind::OutOfDomain, "negative weight");
  if (w == 0) return;
  comps_[c] += w;
}

void MultiCurve::remove(const ConjClass& c) { comps_.erase(c); }

Rational MultiCurve::weight(const ConjClass& c) const {
  auto it = comps_.find(c);
  return it == comps_.end() ? Rational(0) : it->second;
}

Rational MultiCurve::total_weight() const {
  Rational t = 0;
  for (const auto& [c, w] : comps_) t += w;
  return t;
}

bool MultiCurve::integral() const {
  for (const auto& [c, w] : comps_)
    if (boost::multiprecision::denominator(w) != 1) return false;
  return true;
}

std::string MultiCurve::to_string() const {
  std::string s;
  for (const auto& [c, w] : comps_) {
    if (!s.empty()) s += "; ";
    if (w != 1) s += curvecur::to_string(w) + "*";
    s += c.canonical;
  }
  return s;
}

MultiCurve single(const ConjClass& c, const Rational& w, const SurfacePresentation& p) {
  MultiCurve m(p);
  m.add(c, w);
  return m;
}

MultiCurve scale(const MultiCurve& c, const Rational& n) {
  if (n <= 0) fail(ErrorKind::OutOfDomain, "scale factor must be positive");
  MultiCurve r(c.presentation());
  for (const auto& [k, w] : c.components()) r.add(k, w * n);
  return r;
}

MultiCurve union_of(const MultiCurve& c, const MultiCurve& d) {
  if (!(c.presentation() == d.presentation()))
    fail(ErrorKind::PresentationMismatch,
         c.presentation().name + " vs " + d.presentation().name);
  MultiCurve r = c;
  for (const auto& [k, w] : d.components()) r.add(k, w);
  return r;
}

MultiCurve reverse_orientation(const MultiCurve& c) {
  MultiCurve r(c.presentation());
  for (const auto& [k, w] : c.components()) {
    if (c.presentation().is_free())
      r.add(inverse(k), w);
    else
      r.add(canonical_form(inverse(k.canonical), c.presentation()), w);
  }
  return r;
}

MultiCurve power(const MultiCurve& c, int n) {
  MultiCurve r(c.presentation());
  for (const auto& [k, w] : c.components()) r.add(power(k, n), w);
  return r;
}

static std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

MultiCurve parse_multicurve(std::string_view literal, const SurfacePresentation& p) {
  MultiCurve m(p);
  std::size_t start = 0;
  while (start <= literal.size()) {
    std::size_t end = literal.find(';', start);
    if (end == std::string_view::npos) end = literal.size();
    std::string_view term = trim(literal.substr(start, end - start));
    start = end + 1;
    if (term.empty()) {
      if (end == literal.size()) break;
      continue;
    }
    Rational w = 1;
    std::string_view word = term;
    if (auto star = term.find('*'); star != std::string_view::npos) {
      w = parse_rational(term.substr(0, star));
      word = trim(term.substr(star + 1));
    }
    if (w < 0) fail(ErrorKind::ParseError, "negative weight in '" + std::string(term) + "'");
    for (char ch : word)
      if (!is_letter(ch))
        fail(ErrorKind::ParseError, "bad letter in '" + std::string(term) + "'");
    check_letters(word, p);
    try {
      m.add(canonical_form(word, p), w);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TrivialCurve) throw;
    }
    if (end == literal.size()) break;
  }
  return m;
}

}  // namespace curvecur::words
