#include "curvecur/elastic.hpp"

#include "curvecur/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>

namespace curvecur::elastic {

using words::Word;

ElasticGraph::ElasticGraph(std::vector<std::string> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  if (vertices_.empty()) fail(ErrorKind::ParseError, "graph has no vertices");
  std::set<std::string> seen;
  for (const auto& v : vertices_)
    if (!seen.insert(v).second) fail(ErrorKind::ParseError, "duplicate vertex " + v);
  seen.clear();
  for (const auto& e : edges_) {
    if (!seen.insert(e.id).second) fail(ErrorKind::ParseError, "duplicate edge " + e.id);
    if (!(e.alpha > 0) || !std::isfinite(e.alpha))
      fail(ErrorKind::ParseError, "edge " + e.id + " needs alpha > 0");
    int f = vertex_index(e.from), t = vertex_index(e.to);
    if (f < 0 || t < 0) fail(ErrorKind::ParseError, "edge " + e.id + " has an unknown endpoint");
    from_.push_back(f);
    to_.push_back(t);
  }
  // Connectivity by union-find.
  std::vector<int> parent(vertices_.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (std::size_t e = 0; e < edges_.size(); ++e) parent[find(from_[e])] = find(to_[e]);
  for (std::size_t v = 1; v < vertices_.size(); ++v)
    if (find(static_cast<int>(v)) != find(0)) fail(ErrorKind::ParseError, "graph is not connected");
}

int ElasticGraph::vertex_index(std::string_view id) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i] == id) return static_cast<int>(i);
  return -1;
}

int ElasticGraph::edge_index(std::string_view id) const {
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].id == id) return static_cast<int>(i);
  return -1;
}

int ElasticGraph::tail(int d) const { return d & 1 ? to_[edge_of(d)] : from_[edge_of(d)]; }
int ElasticGraph::head(int d) const { return d & 1 ? from_[edge_of(d)] : to_[edge_of(d)]; }

std::vector<double> GraphCurve::multiplicities(std::size_t edge_count) const {
  std::vector<double> n(edge_count, 0.0);
  for (const auto& comp : components) {
    double w = to_double(comp.weight);
    for (int d : comp.path) {
      if (d < 0 || static_cast<std::size_t>(edge_of(d)) >= edge_count)
        fail(ErrorKind::EdgeMismatch, "edge index out of range");
      n[edge_of(d)] += w;
    }
  }
  return n;
}

void check_closed(const GraphCurve& c, const ElasticGraph& g) {
  const int nd = static_cast<int>(2 * g.edge_count());
  for (const auto& comp : c.components) {
    for (int d : comp.path)
      if (d < 0 || d >= nd) fail(ErrorKind::EdgeMismatch, "edge index out of range");
    for (std::size_t i = 0; i < comp.path.size(); ++i) {
      int d = comp.path[i], next = comp.path[(i + 1) % comp.path.size()];
      if (g.head(d) != g.tail(next)) fail(ErrorKind::EdgeMismatch, "component is not a closed walk");
    }
  }
}

GraphCurve tighten(const GraphCurve& c, std::vector<std::string>* notices) {
  GraphCurve out;
  for (std::size_t k = 0; k < c.components.size(); ++k) {
    std::vector<int> st;
    for (int d : c.components[k].path) {
      if (!st.empty() && st.back() == flip(d))
        st.pop_back();
      else
        st.push_back(d);
    }
    std::size_t i = 0, j = st.size();
    while (j - i >= 2 && st[j - 1] == flip(st[i])) {
      ++i;
      --j;
    }
    if (i == j) {
      if (notices) notices->push_back("component " + std::to_string(k) + " is null-homotopic; dropped");
      continue;
    }
    out.components.push_back({std::vector<int>(st.begin() + i, st.begin() + j), c.components[k].weight});
  }
  return out;
}

namespace {
void check_size(const ScalingVector& rho, const ElasticGraph& g) {
  if (rho.size() != g.edge_count()) fail(ErrorKind::EdgeMismatch, "scaling vector size differs from edge count");
}
}  // namespace

double graph_length(const GraphCurve& c, const ScalingVector& rho, const ElasticGraph& g) {
  check_size(rho, g);
  check_closed(c, g);
  auto n = tighten(c).multiplicities(g.edge_count());
  double s = 0;
  for (std::size_t e = 0; e < n.size(); ++e) s += n[e] * rho[e] * g.edges()[e].alpha;
  return s;
}

Extremal el_graph(const GraphCurve& c, const ElasticGraph& g) {
  check_closed(c, g);
  auto n = tighten(c).multiplicities(g.edge_count());
  double s = 0;
  for (std::size_t e = 0; e < n.size(); ++e) s += n[e] * n[e] * g.edges()[e].alpha;
  Extremal r{std::sqrt(s), ScalingVector(n.size(), 0.0)};
  if (s > 0)
    for (std::size_t e = 0; e < n.size(); ++e) r.witness[e] = n[e] / r.value;
  return r;
}

Extremal e_p(const GraphCurve& c, const ElasticGraph& g, double p) {
  if (!(p >= 1)) fail(ErrorKind::BadExponent, "p must be in [1, inf]");
  check_closed(c, g);
  auto n = tighten(c).multiplicities(g.edge_count());
  const std::size_t m = n.size();
  Extremal r{0, ScalingVector(m, 0.0)};
  if (std::isinf(p)) {
    for (std::size_t e = 0; e < m; ++e) r.value += n[e] * g.edges()[e].alpha;
    std::fill(r.witness.begin(), r.witness.end(), 1.0);
    return r;
  }
  if (p == 1) {
    std::size_t best = 0;
    for (std::size_t e = 1; e < m; ++e)
      if (n[e] > n[best]) best = e;
    if (m == 0) return r;
    r.value = n[best];
    r.witness[best] = 1.0 / g.edges()[best].alpha;
    return r;
  }
  const double q = p / (p - 1);
  double s = 0;
  for (std::size_t e = 0; e < m; ++e) s += std::pow(n[e], q) * g.edges()[e].alpha;
  r.value = std::pow(s, 1 / q);
  if (s == 0) return r;
  // σ ∝ n^{q-1}, unit p-norm.
  double norm = 0;
  for (std::size_t e = 0; e < m; ++e) {
    r.witness[e] = std::pow(n[e], q - 1);
    norm += std::pow(r.witness[e], p) * g.edges()[e].alpha;
  }
  norm = std::pow(norm, 1 / p);
  for (double& x : r.witness) x /= norm;
  return r;
}

namespace {

// Euclidean projection onto the probability simplex.
void project_simplex(std::vector<double>& x) {
  std::vector<double> s = x;
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0, theta = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    cum += s[i];
    double t = (cum - 1) / static_cast<double>(i + 1);
    if (i + 1 == s.size() || s[i + 1] <= t) {
      theta = t;
      break;
    }
  }
  for (double& v : x) v = std::max(0.0, v - theta);
}

struct Problem {
  std::vector<double> weight;
  std::vector<std::vector<std::vector<double>>> m;  // [family][lift][edge], σ-coordinates
  std::size_t dim = 0;

  double dot(const std::vector<double>& a, const std::vector<double>& b) const {
    double s = 0;
    for (std::size_t e = 0; e < dim; ++e) s += a[e] * b[e];
    return s;
  }

  // F(σ) and a supergradient (ties averaged).
  double value(const std::vector<double>& sigma, std::vector<double>* grad,
               std::vector<std::vector<int>>* active) const {
    double f = 0;
    if (grad) grad->assign(dim, 0.0);
    if (active) active->assign(m.size(), {});
    for (std::size_t i = 0; i < m.size(); ++i) {
      std::vector<double> vals(m[i].size());
      double lo = std::numeric_limits<double>::infinity();
      for (std::size_t d = 0; d < m[i].size(); ++d) lo = std::min(lo, vals[d] = dot(m[i][d], sigma));
      f += weight[i] * lo;
      double tie = 1e-12 * std::max(1.0, std::abs(lo));
      std::vector<int> arg;
      for (std::size_t d = 0; d < m[i].size(); ++d)
        if (vals[d] <= lo + tie) arg.push_back(static_cast<int>(d));
      if (grad)
        for (int d : arg)
          for (std::size_t e = 0; e < dim; ++e)
            (*grad)[e] += weight[i] * m[i][d][e] / static_cast<double>(arg.size());
      if (active) (*active)[i] = arg;
    }
    return f;
  }
};

double norm2(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// min over λ in a product of simplices of |Σ w_i M_i λ_i|, by FISTA.
std::vector<double> min_norm_point(const Problem& pb, int max_iter, double tol) {
  const std::size_t F = pb.m.size();
  std::vector<std::vector<double>> lam(F), y(F), prev(F);
  double lip = 0;
  for (std::size_t i = 0; i < F; ++i) {
    lam[i].assign(pb.m[i].size(), 1.0 / static_cast<double>(pb.m[i].size()));
    for (const auto& row : pb.m[i]) lip += pb.weight[i] * pb.weight[i] * pb.dot(row, row);
  }
  y = lam;
  auto combine = [&](const std::vector<std::vector<double>>& l) {
    std::vector<double> v(pb.dim, 0.0);
    for (std::size_t i = 0; i < F; ++i)
      for (std::size_t d = 0; d < pb.m[i].size(); ++d)
        for (std::size_t e = 0; e < pb.dim; ++e) v[e] += pb.weight[i] * l[i][d] * pb.m[i][d][e];
    return v;
  };
  if (lip == 0) return combine(lam);
  double t = 1;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> v = combine(y);
    prev = lam;
    for (std::size_t i = 0; i < F; ++i) {
      lam[i] = y[i];
      for (std::size_t d = 0; d < pb.m[i].size(); ++d)
        lam[i][d] -= pb.weight[i] * pb.dot(pb.m[i][d], v) / lip;
      project_simplex(lam[i]);
    }
    double tn = (1 + std::sqrt(1 + 4 * t * t)) / 2;
    for (std::size_t i = 0; i < F; ++i)
      for (std::size_t d = 0; d < lam[i].size(); ++d)
        y[i][d] = lam[i][d] + (t - 1) / tn * (lam[i][d] - prev[i][d]);
    t = tn;
    if (it % 25 == 0) {
      std::vector<double> w = combine(lam);
      double ub = norm2(w);
      if (ub == 0) return w;
      std::vector<double> s = w;
      for (double& x : s) x /= ub;
      if (ub - pb.value(s, nullptr, nullptr) <= tol * std::max(1.0, ub)) return w;
    }
  }
  return combine(lam);
}

}  // namespace

MaxMinResult maximize_min_length(const std::vector<LiftFamily>& families,
                                 const std::vector<double>& alpha, const AscentOptions& opts) {
  Problem pb;
  pb.dim = alpha.size();
  for (const auto& fam : families) {
    if (fam.multiplicities.empty()) fail(ErrorKind::NoLiftFound, "component without lifts");
    pb.weight.push_back(fam.weight);
    std::vector<std::vector<double>> rows;
    for (const auto& n : fam.multiplicities) {
      if (n.size() != pb.dim) fail(ErrorKind::EdgeMismatch, "multiplicity vector size");
      std::vector<double> row(pb.dim);
      for (std::size_t e = 0; e < pb.dim; ++e) row[e] = n[e] * std::sqrt(alpha[e]);
      rows.push_back(std::move(row));
    }
    pb.m.push_back(std::move(rows));
  }
  MaxMinResult r;
  const double tol = opts.tolerance;

  std::vector<double> v = min_norm_point(pb, 200000, tol * 1e-2);
  double ub = norm2(v);
  r.upper_bound = ub;
  std::vector<double> sigma_dual(pb.dim, 0.0);
  double dual_val = 0;
  if (ub > 0) {
    for (std::size_t e = 0; e < pb.dim; ++e) sigma_dual[e] = v[e] / ub;
    dual_val = pb.value(sigma_dual, nullptr, nullptr);
  }

  // Projected supergradient ascent on {σ >= 0, |σ| <= 1}, step 1/sqrt(k).
  std::vector<double> sigma(pb.dim, 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(pb.dim, 1))));
  std::vector<double> best_sigma = sigma, grad;
  double best = pb.value(sigma, &grad, nullptr);
  int k = 1;
  for (; k <= opts.max_iterations; ++k) {
    if (best >= ub - tol * std::max(1.0, ub)) break;
    double gn = norm2(grad);
    if (gn == 0) break;
    double step = 1.0 / std::sqrt(static_cast<double>(k));
    for (std::size_t e = 0; e < pb.dim; ++e) sigma[e] = std::max(0.0, sigma[e] + step * grad[e] / gn);
    double sn = norm2(sigma);
    if (sn > 1)
      for (double& x : sigma) x /= sn;
    double f = pb.value(sigma, &grad, nullptr);
    if (f > best) {
      best = f;
      best_sigma = sigma;
    }
  }
  r.iterations = std::min(k, opts.max_iterations);
  r.ascent_value = best;
  std::vector<double> chosen = best >= dual_val ? best_sigma : sigma_dual;
  r.value = std::max(best, dual_val);
  double cn = norm2(chosen);
  if (cn > 0)
    for (double& x : chosen) x /= cn;
  pb.value(chosen, nullptr, &r.active);
  r.rho.resize(pb.dim);
  for (std::size_t e = 0; e < pb.dim; ++e) r.rho[e] = chosen[e] / std::sqrt(alpha[e]);
  return r;
}

namespace {
std::vector<double> alphas(const ElasticGraph& g) {
  std::vector<double> a;
  for (const auto& e : g.edges()) a.push_back(e.alpha);
  return a;
}

std::vector<int> counts(const std::vector<int>& path, std::size_t edges) {
  std::vector<int> n(edges, 0);
  for (int d : path) ++n[edge_of(d)];
  return n;
}
}  // namespace

MaxMinResult el_graph_ascent(const GraphCurve& c, const ElasticGraph& g, const AscentOptions& opts) {
  check_closed(c, g);
  GraphCurve t = tighten(c);
  std::vector<LiftFamily> fams;
  for (const auto& comp : t.components)
    fams.push_back({to_double(comp.weight), {counts(comp.path, g.edge_count())}});
  if (fams.empty()) return MaxMinResult{0, 0, 0, ScalingVector(g.edge_count(), 0.0), 0, {}};
  return maximize_min_length(fams, alphas(g), opts);
}

Word GraphEmbedding::image(const std::vector<int>& path) const {
  Word w;
  for (int d : path) w += d & 1 ? words::inverse(edge_images[edge_of(d)]) : edge_images[edge_of(d)];
  return words::free_reduce(w);
}

GraphEmbedding make_embedding(ElasticGraph graph, const words::SurfacePresentation& p,
                              std::vector<Word> images) {
  if (images.size() != graph.edge_count())
    fail(ErrorKind::EdgeMismatch, "one image word per edge is required");
  for (auto& w : images) {
    words::check_letters(w, p);
    w = words::free_reduce(w);
  }
  GraphEmbedding emb{std::move(graph), &words::presentation_by_name(p.name), std::move(images), false};
  const ElasticGraph& g = emb.graph;
  // Spanning tree from vertex 0; loop images at the base vertex.
  const std::size_t nv = g.vertices().size();
  std::vector<Word> to_vertex(nv);
  std::vector<char> seen(nv, 0), tree_edge(g.edge_count(), 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int x = queue[qi];
    for (int d = 0; d < static_cast<int>(2 * g.edge_count()); ++d) {
      if (g.tail(d) != x || seen[g.head(d)]) continue;
      seen[g.head(d)] = 1;
      tree_edge[edge_of(d)] = 1;
      to_vertex[g.head(d)] = words::free_reduce(to_vertex[x] + emb.image({d}));
      queue.push_back(g.head(d));
    }
  }
  std::vector<Word> gens;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (tree_edge[e]) continue;
    int d = forward(static_cast<int>(e));
    Word loop = words::free_reduce(to_vertex[g.tail(d)] + emb.edge_images[e] +
                                   words::inverse(to_vertex[g.head(d)]));
    if (loop.empty()) continue;
    gens.push_back(loop);
    gens.push_back(words::inverse(loop));
  }
  // Products of at most four loop images.
  std::set<Word> ball{""};
  std::vector<Word> layer{""};
  for (int r = 0; r < 4; ++r) {
    std::vector<Word> next;
    for (const Word& x : layer)
      for (const Word& s : gens) {
        Word y = words::dehn_reduce(x + s, p);
        if (ball.insert(y).second) next.push_back(y);
      }
    layer = std::move(next);
  }
  bool all = true;
  for (char x : p.generators) {
    bool hit = false;
    for (const Word& y : ball)
      if (words::is_identity(y + std::string(1, words::inverse_letter(x)), p)) {
        hit = true;
        break;
      }
    all = all && hit;
  }
  emb.filling = all;
  return emb;
}

GraphEmbedding GraphEmbedding::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("graph: ") + e.what());
  }
  try {
    std::vector<std::string> vs = j.at("vertices").get<std::vector<std::string>>();
    std::vector<Edge> es;
    for (const auto& e : j.at("edges"))
      es.push_back({e.at("id").get<std::string>(), e.at("from").get<std::string>(),
                    e.at("to").get<std::string>(), e.value("alpha", 1.0)});
    ElasticGraph g(std::move(vs), std::move(es));
    std::vector<Word> images;
    for (const auto& e : g.edges()) images.push_back(j.at("embedding").at(e.id).get<std::string>());
    const auto& p = words::presentation_by_name(j.value("surface", std::string("pt")));
    return make_embedding(std::move(g), p, std::move(images));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("graph: ") + e.what());
  }
}

namespace {

std::string cache_key(const GraphEmbedding& emb, const words::ConjClass& c, int cutoff) {
  std::string k = emb.presentation->name + "|" + c.canonical + "|" + std::to_string(cutoff);
  for (std::size_t e = 0; e < emb.graph.edge_count(); ++e)
    k += "|" + std::to_string(emb.graph.tail(forward(static_cast<int>(e)))) + ">" +
         std::to_string(emb.graph.head(forward(static_cast<int>(e)))) + ":" + emb.edge_images[e];
  return k;
}

bool dominates(const std::vector<int>& a, const std::vector<int>& b) {
  // a >= b everywhere and a != b
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

std::vector<int> min_rotation(const std::vector<int>& c) {
  std::vector<int> best = c;
  for (std::size_t i = 1; i < c.size(); ++i) {
    std::vector<int> r(c.begin() + i, c.end());
    r.insert(r.end(), c.begin(), c.begin() + i);
    if (r < best) best = r;
  }
  return best;
}

}  // namespace

std::vector<Lift> enumerate_lifts(const GraphEmbedding& emb, const words::ConjClass& c, int cutoff) {
  static std::mutex mu;
  static std::map<std::string, std::vector<Lift>> cache;
  const std::string key = cache_key(emb, c, cutoff);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const ElasticGraph& g = emb.graph;
  const int nd = cutoff < 1 ? 0 : static_cast<int>(2 * g.edge_count());
  const auto& pres = *emb.presentation;
  const bool free = pres.is_free();
  std::vector<Word> img(nd);
  for (int d = 0; d < nd; ++d) img[d] = emb.image({d});

  std::set<std::vector<int>> cycles;
  auto matches = [&](const Word& w) {
    if (free) {
      Word cyc = words::cyclic_reduce(w);
      return cyc.size() == c.canonical.size() && !cyc.empty() && words::min_rotation(cyc) == c.canonical;
    }
    try {
      return words::canonical_form(w, pres) == c;
    } catch (const Error&) {
      return false;
    }
  };
  // Each start edge is the smallest edge of its cycles, so starts are independent.
#pragma omp parallel for schedule(dynamic)
  for (int d0 = 0; d0 < nd; ++d0) {
    std::set<std::vector<int>> local;
    std::vector<int> path{d0};
    std::vector<Word> stack{"", img[d0]};
    std::function<void()> dfs = [&]() {
      int last = path.back();
      if (g.head(last) == g.tail(d0) && last != flip(d0) && matches(stack.back()))
        local.insert(min_rotation(path));
      if (static_cast<int>(path.size()) >= cutoff) return;
      for (int d = d0; d < nd; ++d) {
        if (g.tail(d) != g.head(last) || d == flip(last)) continue;
        path.push_back(d);
        stack.push_back(words::free_reduce(stack.back() + img[d]));
        dfs();
        stack.pop_back();
        path.pop_back();
      }
    };
    dfs();
#pragma omp critical(curvecur_lifts)
    cycles.insert(local.begin(), local.end());
  }
  std::vector<Lift> all;
  for (const auto& cyc : cycles) all.push_back({cyc, counts(cyc, g.edge_count())});
  std::vector<Lift> out;
  std::set<std::vector<int>> kept;
  for (const auto& l : all) {
    bool dominated = false;
    for (const auto& o : all)
      if (dominates(l.multiplicity, o.multiplicity)) {
        dominated = true;
        break;
      }
    if (!dominated && kept.insert(l.multiplicity).second) out.push_back(l);
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, out);
  return out;
}

namespace {

std::vector<std::vector<Lift>> lifts_of(const words::MultiCurve& c, const GraphEmbedding& emb, int cutoff) {
  if (!emb.filling) fail(ErrorKind::NotFilling, "embedding is not pi1-surjective at radius 4");
  if (!(c.presentation() == *emb.presentation))
    fail(ErrorKind::PresentationMismatch, "curve and embedding live on different surfaces");
  std::vector<std::vector<Lift>> out;
  for (const auto& [k, w] : c.components()) {
    auto l = enumerate_lifts(emb, k, cutoff);
    if (l.empty()) fail(ErrorKind::NoLiftFound, "no lift of " + k.canonical + " up to length " + std::to_string(cutoff));
    out.push_back(std::move(l));
  }
  return out;
}

std::vector<LiftFamily> families(const words::MultiCurve& c, const std::vector<std::vector<Lift>>& lifts) {
  std::vector<LiftFamily> fams;
  std::size_t i = 0;
  for (const auto& [k, w] : c.components()) {
    LiftFamily f{to_double(w), {}};
    for (const auto& l : lifts[i]) f.multiplicities.push_back(l.multiplicity);
    fams.push_back(std::move(f));
    ++i;
  }
  return fams;
}

double cheapest_length(const words::MultiCurve& c, const std::vector<std::vector<Lift>>& lifts,
                       const ElasticGraph& g) {
  double total = 0;
  std::size_t i = 0;
  for (const auto& [k, w] : c.components()) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& l : lifts[i]) {
      double s = 0;
      for (std::size_t e = 0; e < g.edge_count(); ++e) s += l.multiplicity[e] * g.edges()[e].alpha;
      best = std::min(best, s);
    }
    total += to_double(w) * best;
    ++i;
  }
  return total;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

}  // namespace

EmbeddedResult el_embedded(const words::MultiCurve& c, const GraphEmbedding& emb, int cutoff,
                           const AscentOptions& opts) {
  EmbeddedResult r;
  if (c.empty()) {
    r.rho.assign(emb.graph.edge_count(), 0.0);
    r.stabilized = true;
    return r;
  }
  auto lifts = lifts_of(c, emb, cutoff);
  auto res = maximize_min_length(families(c, lifts), alphas(emb.graph), opts);
  r.value = res.value;
  r.upper_bound = res.upper_bound;
  r.rho = res.rho;
  r.iterations = res.iterations;
  for (std::size_t i = 0; i < lifts.size(); ++i) {
    std::vector<Lift> act;
    for (int d : res.active[i]) act.push_back(lifts[i][d]);
    r.active.push_back(std::move(act));
  }
  auto lifts2 = lifts_of(c, emb, cutoff + 2);
  bool same = lifts2.size() == lifts.size();
  for (std::size_t i = 0; same && i < lifts.size(); ++i) same = lifts2[i].size() == lifts[i].size();
  if (same) {
    r.stabilized = true;
  } else {
    auto res2 = maximize_min_length(families(c, lifts2), alphas(emb.graph), opts);
    r.stabilized = std::abs(res2.value - res.value) <= 1e-9 * std::max(1.0, res.value);
  }
  return r;
}

EmbeddedValue graph_length_embedded(const words::MultiCurve& c, const GraphEmbedding& emb, int cutoff) {
  if (c.empty()) return {0, true, true};
  auto l1 = lifts_of(c, emb, cutoff);
  auto l2 = lifts_of(c, emb, cutoff + 2);
  double v1 = cheapest_length(c, l1, emb.graph), v2 = cheapest_length(c, l2, emb.graph);
  return {v1, true, close(v1, v2)};
}

EmbeddedValue e_p_embedded(const words::MultiCurve& c, const GraphEmbedding& emb, double p, int cutoff) {
  if (!(p >= 1)) fail(ErrorKind::BadExponent, "p must be in [1, inf]");
  if (std::isinf(p)) return graph_length_embedded(c, emb, cutoff);
  if (p == 2) {
    auto r = el_embedded(c, emb, cutoff);
    return {r.value, true, r.stabilized};
  }
  if (c.empty()) return {0, true, true};
  auto lifts = lifts_of(c, emb, cutoff);
  const ElasticGraph& g = emb.graph;
  std::vector<double> weights;
  for (const auto& [k, w] : c.components()) weights.push_back(to_double(w));
  bool unique = true;
  for (const auto& l : lifts) unique = unique && l.size() == 1;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(lifts.size(), 0);
  constexpr long kMaxCombos = 100000;
  for (long combos = 0; combos < kMaxCombos; ++combos) {
    GraphCurve gc;
    for (std::size_t i = 0; i < lifts.size(); ++i)
      gc.components.push_back({lifts[i][idx[i]].cycle, 1});
    // weights applied through multiplicities
    std::vector<double> n(g.edge_count(), 0.0);
    for (std::size_t i = 0; i < lifts.size(); ++i)
      for (std::size_t e = 0; e < g.edge_count(); ++e) n[e] += weights[i] * lifts[i][idx[i]].multiplicity[e];
    double v;
    if (p == 1) {
      v = *std::max_element(n.begin(), n.end());
    } else {
      double q = p / (p - 1), s = 0;
      for (std::size_t e = 0; e < n.size(); ++e) s += std::pow(n[e], q) * g.edges()[e].alpha;
      v = std::pow(s, 1 / q);
    }
    best = std::min(best, v);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == lifts[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return {best, unique, true};
}

}  // namespace curvecur::elastic
