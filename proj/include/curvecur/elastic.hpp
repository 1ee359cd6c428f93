#pragma once

#include "curvecur/words.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace curvecur::elastic {

struct Edge {
  std::string id;
  std::string from;
  std::string to;
  double alpha = 1;
};

class ElasticGraph {
 public:
  ElasticGraph() = default;
  // Throws ParseError on unknown endpoints, duplicate ids, alpha <= 0 or a
  // disconnected graph.
  ElasticGraph(std::vector<std::string> vertices, std::vector<Edge> edges);

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  int vertex_index(std::string_view id) const;
  int edge_index(std::string_view id) const;
  int tail(int dir_edge) const;
  int head(int dir_edge) const;

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<int> from_, to_;
};

// Directed edge 2e (along the edge) or 2e+1 (against it).
inline int edge_of(int d) { return d >> 1; }
inline int flip(int d) { return d ^ 1; }
inline int forward(int e) { return 2 * e; }
inline int backward(int e) { return 2 * e + 1; }

struct GraphCurveComponent {
  std::vector<int> path;  // cyclic sequence of directed edges
  Rational weight = 1;
};

struct GraphCurve {
  std::vector<GraphCurveComponent> components;
  // Weighted traversal counts per edge, both directions counted.
  std::vector<double> multiplicities(std::size_t edge_count) const;
};

using ScalingVector = std::vector<double>;

// Throws EdgeMismatch if some component is not a closed walk in g.
void check_closed(const GraphCurve& c, const ElasticGraph& g);
// Removes backtracks (cyclically). Components that vanish are dropped and
// named in `notices` when given.
GraphCurve tighten(const GraphCurve& c, std::vector<std::string>* notices = nullptr);

double graph_length(const GraphCurve& c, const ScalingVector& rho, const ElasticGraph& g);

struct Extremal {
  double value = 0;
  ScalingVector witness;
};

// sqrt(Σ n² α) with ρ* ∝ n normalized to unit area.
Extremal el_graph(const GraphCurve& c, const ElasticGraph& g);
// (Σ n^q α)^{1/q}, 1/p + 1/q = 1, with metric g = α. p in [1, ∞]; inf for ∞.
Extremal e_p(const GraphCurve& c, const ElasticGraph& g, double p);

struct AscentOptions {
  int max_iterations = 100000;
  double tolerance = 1e-8;
};

// Max over ρ >= 0 of Σ_i w_i min_{D in lifts_i} ℓ_ρα(D) / sqrt(Area_ρ).
struct MaxMinResult {
  double value = 0;        // best certified lower value found
  double upper_bound = 0;  // from the min-norm dual
  double ascent_value = 0; // best value reached by the supergradient iterates alone
  ScalingVector rho;       // unit area
  int iterations = 0;
  std::vector<std::vector<int>> active;  // per component, indices of minimizing lifts
};

struct LiftFamily {
  double weight = 1;
  std::vector<std::vector<int>> multiplicities;  // one per lift, indexed by edge
};

MaxMinResult maximize_min_length(const std::vector<LiftFamily>& families,
                                 const std::vector<double>& alpha,
                                 const AscentOptions& opts = {});

// The optimizer applied to a single fixed curve (one lift per component).
MaxMinResult el_graph_ascent(const GraphCurve& c, const ElasticGraph& g,
                             const AscentOptions& opts = {});

struct GraphEmbedding {
  ElasticGraph graph;
  const words::SurfacePresentation* presentation = &words::punctured_torus();
  std::vector<words::Word> edge_images;  // image of each edge in its own direction
  bool filling = false;

  words::Word image(const std::vector<int>& path) const;
  // {"vertices": [...], "edges": [{"id","from","to","alpha"}], "embedding": {id: word},
  //  "surface": "pt"}
  static GraphEmbedding from_json(std::string_view text);
};

// Computes the filling flag: every generator is a product of at most four
// loop images (or their inverses) at a base vertex.
GraphEmbedding make_embedding(ElasticGraph graph, const words::SurfacePresentation& p,
                              std::vector<words::Word> images);

struct Lift {
  std::vector<int> cycle;
  std::vector<int> multiplicity;
};

// Tight closed walks of length <= cutoff whose image is conjugate to c, with
// Pareto-dominated multiplicity vectors removed.
std::vector<Lift> enumerate_lifts(const GraphEmbedding& emb, const words::ConjClass& c,
                                  int cutoff);

struct EmbeddedResult {
  double value = 0;
  double upper_bound = 0;
  ScalingVector rho;
  std::vector<std::vector<Lift>> active;  // per component
  bool stabilized = false;
  int iterations = 0;
};

// sqrt(EL) of c on the embedded graph. Throws NotFilling, NoLiftFound.
EmbeddedResult el_embedded(const words::MultiCurve& c, const GraphEmbedding& emb, int cutoff,
                           const AscentOptions& opts = {});

struct EmbeddedValue {
  double value = 0;
  bool exact = true;  // false: only an upper bound (several lifts, p != 2)
  bool stabilized = false;
};

// Σ w_i min over lifts of Σ n α. Throws NotFilling, NoLiftFound.
EmbeddedValue graph_length_embedded(const words::MultiCurve& c, const GraphEmbedding& emb,
                                    int cutoff);
// E_p of the cheapest lift combination; exact when every component has one lift.
EmbeddedValue e_p_embedded(const words::MultiCurve& c, const GraphEmbedding& emb, double p,
                           int cutoff);

}  // namespace curvecur::elastic
