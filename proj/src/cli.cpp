#include "curvecur/cli.hpp"

#include "curvecur/counting.hpp"
#include "curvecur/crossings.hpp"
#include "curvecur/elastic.hpp"
#include "curvecur/error.hpp"
#include "curvecur/harness.hpp"
#include "curvecur/stabilize.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

namespace curvecur::cli {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ParseError, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::ParseError, "cannot write " + path);
  out << text;
}

json number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return round12(x);
}

std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json exact_json(const std::optional<Rational>& r) {
  return r ? json(to_string(*r)) : json(nullptr);
}

// Options shared by the commands that build a functional.
struct FunctionalArgs {
  std::string id;
  std::string surface = "pt";
  std::string gens = "a,b";
  std::string rep_file;
  std::string d = "b";
  std::string graph_file;
  int cutoff = 8;
  int n = 64;
  bool parabolic_zero = false;
};

struct Built {
  std::unique_ptr<hyperbolic::HolonomyRep> rep;  // keeps a loaded representation alive
  functionals::CurveFunctional f;
};

const hyperbolic::HolonomyRep& rep_for(const FunctionalArgs& a, Built& b) {
  if (!a.rep_file.empty()) {
    b.rep = std::make_unique<hyperbolic::HolonomyRep>(hyperbolic::HolonomyRep::from_json(read_file(a.rep_file)));
    if (b.rep->presentation->name != a.surface)
      fail(ErrorKind::PresentationMismatch, "representation is for " + b.rep->presentation->name);
    return *b.rep;
  }
  if (a.surface != "pt") fail(ErrorKind::NoRepresentation, "surface " + a.surface + " needs --rep");
  return hyperbolic::HolonomyRep::builtin_pt();
}

functionals::CurveFunctional make_base(const std::string& id, const FunctionalArgs& a, Built& b) {
  const auto& p = words::presentation_by_name(a.surface);
  if (id == "wordlen") return functionals::word_length_functional(functionals::parse_gens(a.gens), p);
  if (id == "hyplen") return functionals::hyperbolic_length_functional(rep_for(a, b), a.parabolic_zero);
  if (id == "intersection")
    return functionals::intersection_functional(words::parse_multicurve(a.d, p), rep_for(a, b));
  if (id == "sqrtself") return functionals::sqrt_self_intersection_functional(rep_for(a, b));
  if (id == "graphlen" || id == "el") {
    if (a.graph_file.empty()) fail(ErrorKind::ParseError, id + " needs --graph");
    auto emb = elastic::GraphEmbedding::from_json(read_file(a.graph_file));
    return id == "el" ? functionals::extremal_length_functional(emb, a.cutoff)
                      : functionals::graph_length_functional(emb, a.cutoff);
  }
  fail(ErrorKind::ParseError, "unknown functional '" + id + "'");
}

Built make_functional(const FunctionalArgs& a) {
  Built b;
  const std::string prefix = "stable-";
  if (a.id.rfind(prefix, 0) == 0)
    b.f = stabilize::stable_functional(make_base(a.id.substr(prefix.size()), a, b), a.n);
  else
    b.f = make_base(a.id, a, b);
  return b;
}

void add_functional_options(CLI::App* c, FunctionalArgs& a, bool need_id = true) {
  auto* o = c->add_option("--functional", a.id, "wordlen | hyplen | intersection | sqrtself | graphlen | el, or stable-<id>");
  if (need_id) o->required();
  c->add_option("--surface", a.surface, "pt or genus2");
  c->add_option("--gens", a.gens, "generating words for wordlen, comma separated");
  c->add_option("--rep", a.rep_file, "representation JSON file");
  c->add_option("--D", a.d, "the fixed multi-curve of the intersection functional");
  c->add_option("--graph", a.graph_file, "embedded elastic graph JSON file");
  c->add_option("--cutoff", a.cutoff, "lift length cutoff for graph functionals");
}

std::uint64_t effective_seed(std::uint64_t flag) {
  if (const char* env = std::getenv("CURVECUR_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') fail(ErrorKind::ParseError, "CURVECUR_SEED must be an unsigned integer");
    return v;
  }
  return flag;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int run_eval(const FunctionalArgs& a, const std::string& literal, std::ostream& out, std::ostream& err) {
  Built b = make_functional(a);
  auto c = words::parse_multicurve(literal, words::presentation_by_name(a.surface));
  functionals::Value v = c.integral() ? b.f(c) : functionals::weighted_eval(b.f, c);
  json j{{"functional", b.f.id},
         {"curve", c.to_string()},
         {"value", number(v.value)},
         {"exact", exact_json(v.exact)}};
  if (v.window_limited) j["window_limited"] = true;
  if (v.upper_bound_only) j["upper_bound_only"] = true;
  emit(out, j);
  err << b.f.id << "(" << c.to_string() << ") = " << fmt12(v.value) << "\n";
  return 0;
}

int run_intersect(const std::string& surface, const std::string& cw, const std::string& dw, int radius,
                  const std::string& rep_file, std::ostream& out, std::ostream& err) {
  FunctionalArgs a;
  a.surface = surface;
  a.rep_file = rep_file;
  Built b;
  const auto& rep = rep_for(a, b);
  const auto& p = words::presentation_by_name(surface);
  auto c = words::canonical_form(cw, p), d = words::canonical_form(dw, p);
  int r = radius > 0 ? radius : std::max(6, crossings::complete_radius(c.canonical, d.canonical));
  auto n = crossings::intersection_count(c, d, r, rep);
  emit(out, json{{"c", c.canonical}, {"d", d.canonical}, {"count", n.count}, {"radius", n.radius}, {"stable", true}});
  err << "i(" << c.canonical << ", " << d.canonical << ") = " << n.count << " (radius " << r << ")\n";
  return 0;
}

int run_stable(const FunctionalArgs& a, const std::string& literal, std::ostream& out, std::ostream& err) {
  Built b = make_functional(a);
  auto c = words::parse_multicurve(literal, words::presentation_by_name(a.surface));
  if (c.size() != 1) fail(ErrorKind::ParseError, "stable takes a single (weighted) curve");
  const auto& [k, w] = *c.components().begin();
  auto e = stabilize::stable_value(b.f, k, a.n);
  json ub = json::array();
  for (double u : e.upper_bounds) ub.push_back(number(u * to_double(w)));
  std::optional<Rational> exact;
  if (e.exact) exact = *e.exact * w;
  json j{{"functional", b.f.id},
         {"curve", c.to_string()},
         {"value", number(exact ? to_double(*exact) : e.value * to_double(w))},
         {"exact", exact_json(exact)},
         {"tail_detected", e.tail_detected},
         {"period", e.period},
         {"upper_bounds", ub}};
  if (e.window_limited) j["window_limited"] = true;
  emit(out, j);
  err << "stable " << b.f.id << "(" << c.to_string() << ") = "
      << (exact ? to_string(*exact) : fmt12(e.value * to_double(w)))
      << (e.tail_detected ? "" : " (upper bound only)") << "\n";
  return 0;
}

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  double p = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') fail(ErrorKind::ParseError, "bad exponent '" + s + "'");
  return p;
}

int run_el(const std::string& graph_file, const std::string& literal, const std::string& p_text,
           int cutoff, std::ostream& out, std::ostream& err) {
  auto emb = elastic::GraphEmbedding::from_json(read_file(graph_file));
  auto c = words::parse_multicurve(literal, *emb.presentation);
  double p = parse_p(p_text);
  json j{{"curve", c.to_string()}, {"p", std::isinf(p) ? json("inf") : number(p)}, {"cutoff", cutoff}};
  if (p == 2) {
    auto r = elastic::el_embedded(c, emb, cutoff);
    j["value"] = number(r.value);
    j["el"] = number(r.value * r.value);
    j["upper_bound"] = number(r.upper_bound);
    j["stabilized"] = r.stabilized;
    json rho = json::object();
    for (std::size_t e = 0; e < emb.graph.edge_count(); ++e) rho[emb.graph.edges()[e].id] = number(r.rho[e]);
    j["rho"] = rho;
    json active = json::array();
    for (const auto& comp : r.active) {
      json lifts = json::array();
      for (const auto& l : comp) {
        std::string path;
        for (int d : l.cycle) {
          if (!path.empty()) path += " ";
          path += emb.graph.edges()[elastic::edge_of(d)].id + (d & 1 ? "-" : "+");
        }
        lifts.push_back(path);
      }
      active.push_back(lifts);
    }
    j["active_lifts"] = active;
  } else {
    auto r = elastic::e_p_embedded(c, emb, p, cutoff);
    j["value"] = number(r.value);
    j["exact"] = r.exact;
    j["stabilized"] = r.stabilized;
  }
  emit(out, j);
  err << "E_" << p_text << "(" << c.to_string() << ") = " << fmt12(j["value"].get<double>()) << "\n";
  return 0;
}

int run_verify(FunctionalArgs a, const std::string& property, int samples, std::uint64_t seed_flag,
               int max_len, std::ostream& out, std::ostream& err) {
  // cusp classes appear among smoothings, so lengths there count as 0
  a.parabolic_zero = true;
  Built b = make_functional(a);
  auto axiom = functionals::axiom_from_name(property);
  auto corpus = harness::make_corpus(effective_seed(seed_flag), samples, max_len,
                                     words::presentation_by_name(a.surface));
  auto rep = harness::check(b.f, axiom, corpus);
  emit(out, rep.to_json());
  err << rep.functional << " " << rep.property << ": " << harness::verdict_name(rep.verdict);
  if (rep.r_hat) err << " (R = " << fmt12(*rep.r_hat) << ")";
  if (!rep.witness.is_null()) err << " witness " << rep.witness.dump();
  err << "\n";
  return rep.holds() ? 0 : 1;
}

int run_count(const FunctionalArgs& a, double lmax, int grid, double lmin, long budget,
              const std::string& out_prefix, std::ostream& out, std::ostream& err) {
  counting::SlopeValue f;
  Built b;
  if (a.id == "pq") {
    f = counting::synthetic_pq();
  } else {
    b = make_functional(a);
    if (b.f.presentation->name != "pt") fail(ErrorKind::Unsupported, "counting runs on pt");
    f = counting::as_slope_value(b.f);
  }
  auto ls = counting::make_grid(lmax, grid, lmin);
  std::vector<long> counts;
  for (double L : ls) counts.push_back(counting::count_slopes(f, L, budget));
  auto fit = counting::exponent_fit(ls, counts);
  std::string csv = "L,count\n";
  for (std::size_t i = 0; i < ls.size(); ++i) csv += fmt12(ls[i]) + "," + std::to_string(counts[i]) + "\n";
  json j{{"functional", a.id}, {"exponent", number(fit.exponent)}, {"r2", number(fit.r2)}};
  json L = json::array(), C = json::array();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    L.push_back(number(ls[i]));
    C.push_back(counts[i]);
  }
  j["L"] = L;
  j["counts"] = C;
  if (!out_prefix.empty()) {
    write_file(out_prefix + ".csv", csv);
    j["csv"] = out_prefix + ".csv";
  } else {
    j["csv"] = csv;
  }
  emit(out, j);
  err << "exponent " << fmt12(fit.exponent) << ", r2 " << fmt12(fit.r2) << "\n";
  return 0;
}

int run_sawtooth(int max_den, int n, const std::string& prefix, std::ostream& out, std::ostream& err) {
  if (max_den < 5) fail(ErrorKind::OutOfDomain, "--max-den must be at least 5");
  auto pts = sawtooth(max_den, n);
  write_file(prefix + ".csv", sawtooth_csv(pts));
  write_file(prefix + ".svg", sawtooth_svg(pts));
  int detected = 0;
  for (const auto& p : pts) detected += p.tail_detected;
  emit(out, json{{"points", pts.size()},
                 {"tail_detected", detected},
                 {"csv", prefix + ".csv"},
                 {"svg", prefix + ".svg"}});
  err << pts.size() << " points written to " << prefix << ".csv and " << prefix << ".svg\n";
  return 0;
}

}  // namespace

std::vector<SawtoothPoint> sawtooth(int max_den, int n) {
  auto f = functionals::word_length_functional({"a", "aa", "b"});
  std::vector<SawtoothPoint> pts;
  for (long q = 1; q <= max_den; ++q)
    for (long p = 0; p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      auto e = stabilize::stable_value(f, words::canonical_form(counting::christoffel(p, q)), n);
      Rational v = e.exact ? *e.exact : Rational(0);
      if (!e.exact) fail(ErrorKind::NoConvergence, "no tail for " + std::to_string(p) + "/" + std::to_string(q));
      pts.push_back({p, q, v / q, e.tail_detected});
    }
  std::sort(pts.begin(), pts.end(), [](const SawtoothPoint& x, const SawtoothPoint& y) {
    return Rational(x.p, x.q) < Rational(y.p, y.q);
  });
  return pts;
}

std::string sawtooth_csv(const std::vector<SawtoothPoint>& pts) {
  std::string s = "x,value,value_float,tail_detected\n";
  for (const auto& p : pts)
    s += to_string(Rational(p.p, p.q)) + "," + to_string(p.value) + "," + fmt12(to_double(p.value)) + "," +
         (p.tail_detected ? "true" : "false") + "\n";
  return s;
}

std::string sawtooth_svg(const std::vector<SawtoothPoint>& pts) {
  const double w = 640, h = 400, m = 40;
  auto px = [&](double x) { return m + x * (w - 2 * m); };
  auto py = [&](double y) { return h - m - y * (h - 2 * m); };
  char buf[128];
  std::string s;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                w, h, w, h);
  s += buf;
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<line x1=\"%.6f\" y1=\"%.6f\" x2=\"%.6f\" y2=\"%.6f\" stroke=\"black\"/>\n",
                px(0), py(0), px(1), py(0));
  s += buf;
  std::snprintf(buf, sizeof buf, "<line x1=\"%.6f\" y1=\"%.6f\" x2=\"%.6f\" y2=\"%.6f\" stroke=\"black\"/>\n",
                px(0), py(0), px(0), py(1));
  s += buf;
  s += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.6f,%.6f", i ? " " : "", px(static_cast<double>(pts[i].p) / pts[i].q),
                  py(to_double(pts[i].value)));
    s += buf;
  }
  s += "\"/>\n";
  for (const auto& p : pts) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"2\" fill=\"steelblue\"/>\n",
                  px(static_cast<double>(p.p) / p.q), py(to_double(p.value)));
    s += buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%.6f\" y=\"%.6f\" font-size=\"12\">x</text>\n", w - m / 2, py(0));
  s += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.6f\" y=\"%.6f\" font-size=\"12\">stable length (a, a^2, b)</text>\n", m, m / 2);
  s += buf;
  s += "</svg>\n";
  return s;
}

int cmd_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curve functionals on surfaces", "curvecur"};
  app.require_subcommand(1);

  FunctionalArgs fa;
  std::string curve, cw, dw, graph, p_text = "2", property, out_prefix, rep_file;
  int radius = 0, cutoff = 8, samples = 500, max_len = 10, grid = 8, max_den = 13;
  std::uint64_t seed = 0;
  double lmax = 40, lmin = -1;
  long budget = 10'000'000;

  auto* eval = app.add_subcommand("eval", "evaluate a functional on a multi-curve");
  add_functional_options(eval, fa);
  eval->add_option("--curve", curve, "multi-curve literal, e.g. \"1/5*aabab; b\"")->required();
  eval->add_flag("--parabolic-zero", fa.parabolic_zero, "hyplen: cusp classes count as 0");
  eval->add_option("--N", fa.n, "powers used by stable-<id>");

  auto* inter = app.add_subcommand("intersect", "geometric intersection number");
  inter->add_option("--surface", fa.surface);
  inter->add_option("--rep", rep_file);
  inter->add_option("--c", cw)->required();
  inter->add_option("--d", dw)->required();
  inter->add_option("--radius", radius);

  auto* stable = app.add_subcommand("stable", "stabilized value lim f(C^n)/n");
  add_functional_options(stable, fa);
  stable->add_option("--curve", curve)->required();
  stable->add_option("--N", fa.n);

  auto* el = app.add_subcommand("el", "extremal length and E_p on an embedded elastic graph");
  el->add_option("--graph", graph)->required();
  el->add_option("--curve", curve)->required();
  el->add_option("--p", p_text);
  el->add_option("--cutoff", cutoff);

  auto* verify = app.add_subcommand("verify", "check an axiom on a random corpus");
  add_functional_options(verify, fa);
  verify->add_option("--property", property)->required();
  verify->add_option("--samples", samples);
  verify->add_option("--seed", seed);
  verify->add_option("--max-len", max_len);
  verify->add_option("--N", fa.n);

  auto* cnt = app.add_subcommand("count", "count simple closed curves with f <= L");
  add_functional_options(cnt, fa, false);
  cnt->add_option("--Lmax", lmax);
  cnt->add_option("--Lmin", lmin);
  cnt->add_option("--grid", grid);
  cnt->add_option("--budget", budget);
  cnt->add_option("--out", out_prefix, "write <out>.csv");

  auto* saw = app.add_subcommand("sawtooth", "stable length of (1/q)·christoffel(p,q)");
  saw->add_option("--max-den", max_den);
  saw->add_option("--N", fa.n);
  saw->add_option("--out", out_prefix)->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    emit(out, json{{"error", "ParseError"}, {"message", e.what()}});
    return 2;
  }

  try {
    if (*eval) return run_eval(fa, curve, out, err);
    if (*inter) return run_intersect(fa.surface, cw, dw, radius, rep_file, out, err);
    if (*stable) return run_stable(fa, curve, out, err);
    if (*el) return run_el(graph, curve, p_text, cutoff, out, err);
    if (*verify) return run_verify(fa, property, samples, seed, max_len, out, err);
    if (*cnt) {
      if (fa.id.empty()) fa.id = "hyplen";
      return run_count(fa, lmax, grid, lmin, budget, out_prefix, out, err);
    }
    if (*saw) return run_sawtooth(max_den, fa.n, out_prefix, out, err);
  } catch (const Error& e) {
    emit(out, json{{"error", std::string(kind_name(e.kind()))}, {"message", e.what()}});
    err << "error: " << kind_name(e.kind()) << ": " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace curvecur::cli
