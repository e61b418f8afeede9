#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphindex/coefficients.hpp"
#include "graphindex/symplectic.hpp"
#include "json.hpp"

namespace graphindex {

enum class IntervalKind { Bounded, RightHalfLine, LeftHalfLine };

struct Vertex {
  std::string id;
  bool at_infinity = false;
};

/// Directed metric edge: the tail sits at coordinate a, the head at b.
/// Half-lines have one finite endpoint; the far vertex is at infinity.
struct Edge {
  int id = 0;
  std::string tail, head;
  IntervalKind kind = IntervalKind::Bounded;
  double a = 0.0;
  double b = 1.0;

  bool has_finite_a() const { return kind != IntervalKind::LeftHalfLine; }
  bool has_finite_b() const { return kind != IntervalKind::RightHalfLine; }
  double length() const {
    return kind == IntervalKind::Bounded
               ? b - a
               : std::numeric_limits<double>::infinity();
  }
};

/// One finite endpoint of an edge, i.e. one 2d-block of the boundary space.
struct EndpointRef {
  int edge_index = 0;   // position in the edge list
  bool is_b = false;    // false: left endpoint a, true: right endpoint b
  double coord = 0.0;
  std::string vertex;   // the vertex this endpoint is glued to
};

/// Validated directed metric graph with d-dimensional fibers.
/// Endpoint blocks are frozen in the order: all finite a-endpoints by
/// ascending edge id, then all finite b-endpoints by ascending edge id.
class MetricGraph {
 public:
  MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges,
              int fiber_dim);

  /// Invariant violations of an unvalidated description (empty == valid).
  static std::vector<std::string> check(const std::vector<Vertex>& vertices,
                                        const std::vector<Edge>& edges,
                                        int fiber_dim);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int fiber_dim() const { return d_; }
  bool compact() const;

  int degree(const std::string& vertex_id) const;

  const std::vector<EndpointRef>& a_endpoints() const { return a_eps_; }
  const std::vector<EndpointRef>& b_endpoints() const { return b_eps_; }
  int m_a() const { return static_cast<int>(a_eps_.size()); }
  int m_b() const { return static_cast<int>(b_eps_.size()); }

  /// Boundary-space block index of a finite endpoint (-1 for infinite ends).
  int block_of(int edge_index, bool is_b) const;
  /// All blocks of a finite vertex, in the frozen order (a's then b's).
  std::vector<int> vertex_blocks(const std::string& vertex_id) const;
  const EndpointRef& endpoint_of_block(int block) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  int d_ = 1;
  std::vector<EndpointRef> a_eps_, b_eps_;
  std::map<std::pair<int, bool>, int> block_index_;
};

/// Signed boundary symplectic space of the graph: one 2d block per finite
/// endpoint, sign -1 on a-blocks and +1 on b-blocks.
SymplecticForm boundary_space(const MetricGraph& g);

struct VertexCondition {
  enum class Type { Dirichlet, Kirchhoff, Conormal };
  Type type = Type::Dirichlet;
  // Conormal only: basis of W inside the vertex's configuration block
  // (deg * d rows, ordered by the vertex's blocks in graph order).
  Eigen::MatrixXd W;
};

using VertexConditionSet = std::map<std::string, VertexCondition>;

VertexConditionSet all_dirichlet(const MetricGraph& g);
/// Dirichlet at degree-one vertices, Kirchhoff elsewhere.
VertexConditionSet dirichlet_leaves_kirchhoff_centers(const MetricGraph& g);

/// The boundary Lagrangian of a vertex condition set: the conormal of the
/// stacked per-vertex configuration subspaces.
LagrangianFrame conditions_to_lagrangian(const MetricGraph& g,
                                         const VertexConditionSet& vc);

/// Per-edge function given by callables (value and first derivative).
struct EdgeFunction {
  std::function<Eigen::VectorXd(double)> value;
  std::function<Eigen::VectorXd(double)> derivative;
};

/// Boundary trace of a function family: configuration traces and
/// quasi-Wronskians x^[1] = P x' + Q x at every finite endpoint.
struct BoundaryTrace {
  Eigen::VectorXd full;   // boundary-space vector in block layout
  Eigen::VectorXd tr_a, tr_a1;  // stacked a-endpoint values / momenta
  Eigen::VectorXd tr_b, tr_b1;
};

BoundaryTrace trace(const MetricGraph& g, const std::vector<EdgeFunction>& f,
                    const SLCoefficients& c, double s = 0.0);

MetricGraph segment_graph(double a, double b, int d);
/// Star with m leaves, all edges oriented center -> leaf, center vertex "c".
MetricGraph star_graph(int m, const std::vector<double>& lengths, int d);
/// Two stars with mA and mB leaves joined by a bridge oriented A -> B;
/// lengths ordered (A leaves..., bridge, B leaves...).
MetricGraph two_star(int mA, int mB, const std::vector<double>& lengths,
                     int d);

/// Parse of a graph description document; empty violations means valid.
struct ParsedGraph {
  std::optional<MetricGraph> graph;
  std::optional<SLCoefficients> coefficients;
  VertexConditionSet conditions;
  std::vector<std::string> violations;
};

ParsedGraph parse_graph_document(const nlohmann::json& doc);

}  // namespace graphindex
