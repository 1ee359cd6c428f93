#include "curvecur/error.hpp"
#include "curvecur/rational.hpp"

#include <cstdio>
#include <cstdlib>

namespace curvecur {

std::string_view kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::TrivialCurve: return "TrivialCurve";
    case ErrorKind::PresentationMismatch: return "PresentationMismatch";
    case ErrorKind::UnknownGenerator: return "UnknownGenerator";
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::BelowThreshold: return "BelowThreshold";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NoRepresentation: return "NoRepresentation";
    case ErrorKind::WeightMismatch: return "WeightMismatch";
    case ErrorKind::InvalidCrossing: return "InvalidCrossing";
    case ErrorKind::Unstable: return "Unstable";
    case ErrorKind::NotGenerating: return "NotGenerating";
    case ErrorKind::NotHomogeneous: return "NotHomogeneous";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotFilling: return "NotFilling";
    case ErrorKind::NoLiftFound: return "NoLiftFound";
    case ErrorKind::BadExponent: return "BadExponent";
    case ErrorKind::EdgeMismatch: return "EdgeMismatch";
    case ErrorKind::NotCoprime: return "NotCoprime";
    case ErrorKind::DegenerateGrid: return "DegenerateGrid";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string to_string(const Rational& r) {
  Integer n = boost::multiprecision::numerator(r);
  Integer d = boost::multiprecision::denominator(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

static bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

Rational parse_rational(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1")
                                                        : s.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    fail(ErrorKind::ParseError, "bad rational '" + std::string(s) + "'");
  Integer n{std::string(num)}, d{std::string(den)};
  if (d == 0) fail(ErrorKind::ParseError, "zero denominator");
  Rational r(n, d);
  return neg ? Rational(-r) : r;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Integer lcm_of_denominators(const Rational* first, const Rational* last) {
  Integer l = 1;
  for (; first != last; ++first) {
    Integer d = boost::multiprecision::denominator(*first);
    l = boost::multiprecision::lcm(l, d);
  }
  return l;
}

double round12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

}  // namespace curvecur
