#pragma once

#include "curvecur/functionals.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace curvecur::harness {

using functionals::Axiom;
using functionals::CurveFunctional;
using words::MultiCurve;

struct Corpus {
  std::uint64_t seed = 0;
  int max_word_length = 10;
  const words::SurfacePresentation* surface = &words::punctured_torus();
  std::vector<MultiCurve> curves;
};

// A fixed list of small curves (generators, powers, the commutator, Christoffel
// words, a few two-component curves) followed by random reduced words of length
// <= max_len, about 30% of them with two components, deduplicated. A corpus with
// fewer samples is a prefix of one with more.
Corpus make_corpus(std::uint64_t seed, int samples, int max_len = 10,
                   const words::SurfacePresentation& p = words::punctured_torus());

enum class Verdict { Pass, Fail, Estimated };
const char* verdict_name(Verdict v);

struct FunctionalReport {
  std::string functional;
  std::string property;
  bool claimed = false;
  Verdict verdict = Verdict::Pass;
  std::optional<double> r_hat;
  nlohmann::json witness;  // null when none
  int samples = 0;
  int checked = 0;   // comparisons made
  int skipped = 0;   // items where f could not be evaluated
  std::uint64_t seed = 0;
  int max_len = 0;
  std::string tolerance;

  bool holds() const { return verdict != Verdict::Fail; }
  nlohmann::json to_json() const;
};

// Max deficit f(C') - f(C) over every essential crossing and every smoothing.
// property is quasi_smoothing (verdict Estimated with R̂) or smoothing (R = 0).
FunctionalReport check_quasi_smoothing(const CurveFunctional& f, const Corpus& corpus, int radius = 6,
                                       bool strict = false);
FunctionalReport check_convex_union(const CurveFunctional& f, const Corpus& corpus);
FunctionalReport check_additive_union(const CurveFunctional& f, const Corpus& corpus);
FunctionalReport check_homogeneity(const CurveFunctional& f, const Corpus& corpus, int max_n = 4);
FunctionalReport check_stability(const CurveFunctional& f, const Corpus& corpus, int max_n = 4);
FunctionalReport check_strong_stability(const CurveFunctional& f, const Corpus& corpus, int max_n = 3);

FunctionalReport check(const CurveFunctional& f, Axiom property, const Corpus& corpus);

}  // namespace curvecur::harness
