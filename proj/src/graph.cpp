#include "graphindex/graph.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace graphindex {

namespace {

bool vertex_exists(const std::vector<Vertex>& vs, const std::string& id) {
  return std::any_of(vs.begin(), vs.end(),
                     [&](const Vertex& v) { return v.id == id; });
}

const Vertex& vertex_by_id(const std::vector<Vertex>& vs,
                           const std::string& id) {
  for (const auto& v : vs)
    if (v.id == id) return v;
  throw std::invalid_argument("unknown vertex " + id);
}

}  // namespace

std::vector<std::string> MetricGraph::check(
    const std::vector<Vertex>& vertices, const std::vector<Edge>& edges,
    int fiber_dim) {
  std::vector<std::string> bad;
  if (fiber_dim < 1) bad.push_back("fiber_dim must be positive");
  if (vertices.empty()) bad.push_back("no vertices");
  if (edges.empty()) bad.push_back("no edges");

  std::set<std::string> vids;
  for (const auto& v : vertices)
    if (!vids.insert(v.id).second)
      bad.push_back("duplicate vertex id " + v.id);
  std::set<int> eids;
  for (const auto& e : edges)
    if (!eids.insert(e.id).second)
      bad.push_back("duplicate edge id " + std::to_string(e.id));

  std::map<std::string, int> degree;
  for (const auto& v : vertices) degree[v.id] = 0;
  for (const auto& e : edges) {
    if (!vids.count(e.tail) || !vids.count(e.head)) {
      bad.push_back("edge " + std::to_string(e.id) +
                    " references unknown vertex");
      continue;
    }
    ++degree[e.tail];
    ++degree[e.head];
    if (e.kind == IntervalKind::Bounded && !(e.b - e.a > 0))
      bad.push_back("edge " + std::to_string(e.id) + " has nonpositive length");
    if (e.kind == IntervalKind::RightHalfLine &&
        !vertex_by_id(vertices, e.head).at_infinity)
      bad.push_back("edge " + std::to_string(e.id) +
                    " is a right half-line but its head is not at infinity");
    if (e.kind == IntervalKind::LeftHalfLine &&
        !vertex_by_id(vertices, e.tail).at_infinity)
      bad.push_back("edge " + std::to_string(e.id) +
                    " is a left half-line but its tail is not at infinity");
    if (e.kind == IntervalKind::Bounded) {
      if (vertex_by_id(vertices, e.tail).at_infinity ||
          vertex_by_id(vertices, e.head).at_infinity)
        bad.push_back("edge " + std::to_string(e.id) +
                      " attaches a bounded edge to a vertex at infinity");
    }
    if (e.kind == IntervalKind::RightHalfLine &&
        vertex_by_id(vertices, e.tail).at_infinity)
      bad.push_back("edge " + std::to_string(e.id) +
                    " attaches its finite endpoint to a vertex at infinity");
    if (e.kind == IntervalKind::LeftHalfLine &&
        vertex_by_id(vertices, e.head).at_infinity)
      bad.push_back("edge " + std::to_string(e.id) +
                    " attaches its finite endpoint to a vertex at infinity");
  }
  for (const auto& v : vertices)
    if (v.at_infinity && degree[v.id] != 1)
      bad.push_back("vertex at infinity " + v.id + " has degree " +
                    std::to_string(degree[v.id]) + ", must be one");

  // connectivity over the whole vertex set
  if (!vertices.empty() && !edges.empty()) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& e : edges) {
      if (!vids.count(e.tail) || !vids.count(e.head)) continue;
      adj[e.tail].push_back(e.head);
      adj[e.head].push_back(e.tail);
    }
    std::set<std::string> seen;
    std::vector<std::string> stack{vertices[0].id};
    while (!stack.empty()) {
      std::string v = stack.back();
      stack.pop_back();
      if (!seen.insert(v).second) continue;
      for (const auto& w : adj[v]) stack.push_back(w);
    }
    if (seen.size() != vertices.size()) bad.push_back("graph is disconnected");
  }
  return bad;
}

MetricGraph::MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges,
                         int fiber_dim)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), d_(fiber_dim) {
  auto bad = check(vertices_, edges_, d_);
  if (!bad.empty()) {
    std::string msg = "invalid metric graph:";
    for (const auto& b : bad) msg += "\n  - " + b;
    throw std::invalid_argument(msg);
  }
  std::vector<int> order(edges_.size());
  for (size_t i = 0; i < edges_.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return edges_[i].id < edges_[j].id; });
  for (int i : order) {
    const Edge& e = edges_[i];
    if (e.has_finite_a()) a_eps_.push_back({i, false, e.a, e.tail});
  }
  for (int i : order) {
    const Edge& e = edges_[i];
    if (e.has_finite_b()) b_eps_.push_back({i, true, e.b, e.head});
  }
  for (size_t k = 0; k < a_eps_.size(); ++k)
    block_index_[{a_eps_[k].edge_index, false}] = static_cast<int>(k);
  for (size_t k = 0; k < b_eps_.size(); ++k)
    block_index_[{b_eps_[k].edge_index, true}] =
        static_cast<int>(a_eps_.size() + k);
}

bool MetricGraph::compact() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) {
    return e.kind == IntervalKind::Bounded;
  });
}

int MetricGraph::degree(const std::string& vertex_id) const {
  int deg = 0;
  for (const auto& e : edges_) {
    if (e.tail == vertex_id) ++deg;
    if (e.head == vertex_id) ++deg;
  }
  return deg;
}

int MetricGraph::block_of(int edge_index, bool is_b) const {
  auto it = block_index_.find({edge_index, is_b});
  return it == block_index_.end() ? -1 : it->second;
}

std::vector<int> MetricGraph::vertex_blocks(const std::string& vertex_id) const {
  std::vector<int> out;
  for (size_t k = 0; k < a_eps_.size(); ++k)
    if (a_eps_[k].vertex == vertex_id) out.push_back(static_cast<int>(k));
  for (size_t k = 0; k < b_eps_.size(); ++k)
    if (b_eps_[k].vertex == vertex_id)
      out.push_back(static_cast<int>(a_eps_.size() + k));
  return out;
}

const EndpointRef& MetricGraph::endpoint_of_block(int block) const {
  const int ma = static_cast<int>(a_eps_.size());
  return block < ma ? a_eps_[block] : b_eps_[block - ma];
}

SymplecticForm boundary_space(const MetricGraph& g) {
  std::vector<SymplecticBlock> blocks;
  for (int i = 0; i < g.m_a(); ++i) blocks.push_back({g.fiber_dim(), -1});
  for (int i = 0; i < g.m_b(); ++i) blocks.push_back({g.fiber_dim(), +1});
  return SymplecticForm(blocks);
}

VertexConditionSet all_dirichlet(const MetricGraph& g) {
  VertexConditionSet vc;
  for (const auto& v : g.vertices())
    if (!v.at_infinity) vc[v.id] = {VertexCondition::Type::Dirichlet, {}};
  return vc;
}

VertexConditionSet dirichlet_leaves_kirchhoff_centers(const MetricGraph& g) {
  VertexConditionSet vc;
  for (const auto& v : g.vertices()) {
    if (v.at_infinity) continue;
    vc[v.id] = {g.degree(v.id) == 1 ? VertexCondition::Type::Dirichlet
                                    : VertexCondition::Type::Kirchhoff,
                {}};
  }
  return vc;
}

LagrangianFrame conditions_to_lagrangian(const MetricGraph& g,
                                         const VertexConditionSet& vc) {
  const int d = g.fiber_dim();
  SymplecticForm sp = boundary_space(g);
  const int n = sp.half_dim();

  std::vector<Eigen::VectorXd> cols;
  for (const auto& v : g.vertices()) {
    if (v.at_infinity) continue;
    auto it = vc.find(v.id);
    if (it == vc.end())
      throw std::invalid_argument("no condition given for vertex " + v.id);
    const VertexCondition& cond = it->second;
    std::vector<int> blocks = g.vertex_blocks(v.id);
    const int nb = static_cast<int>(blocks.size());

    Eigen::MatrixXd Wv;  // (nb*d) x k, rows ordered by the vertex's blocks
    switch (cond.type) {
      case VertexCondition::Type::Dirichlet:
        Wv = Eigen::MatrixXd(nb * d, 0);
        break;
      case VertexCondition::Type::Kirchhoff: {
        Wv = Eigen::MatrixXd::Zero(nb * d, d);
        for (int b = 0; b < nb; ++b)
          Wv.middleRows(b * d, d) = Eigen::MatrixXd::Identity(d, d);
        break;
      }
      case VertexCondition::Type::Conormal:
        if (cond.W.rows() != nb * d)
          throw std::invalid_argument(
              "conormal subspace at vertex " + v.id + " has " +
              std::to_string(cond.W.rows()) + " rows, expected " +
              std::to_string(nb * d));
        if (cond.W.cols() > nb * d)
          throw std::invalid_argument("conormal subspace at vertex " + v.id +
                                      " exceeds the vertex block dimension");
        Wv = cond.W;
        break;
    }
    for (int c = 0; c < Wv.cols(); ++c) {
      Eigen::VectorXd col = Eigen::VectorXd::Zero(n);
      for (int b = 0; b < nb; ++b)
        col.segment(blocks[b] * d, d) = Wv.block(b * d, c, d, 1);
      cols.push_back(std::move(col));
    }
  }
  Eigen::MatrixXd W(n, static_cast<int>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) W.col(static_cast<int>(c)) = cols[c];
  return conormal_lagrangian(sp, W);
}

BoundaryTrace trace(const MetricGraph& g, const std::vector<EdgeFunction>& f,
                    const SLCoefficients& c, double s) {
  (void)s;  // the quasi-Wronskian does not involve C_s
  if (f.size() != g.edges().size())
    throw std::invalid_argument("trace: one function per edge required");
  const int d = g.fiber_dim();
  SymplecticForm sp = boundary_space(g);
  BoundaryTrace out;
  out.full = Eigen::VectorXd::Zero(sp.dim());
  out.tr_a = Eigen::VectorXd::Zero(g.m_a() * d);
  out.tr_a1 = Eigen::VectorXd::Zero(g.m_a() * d);
  out.tr_b = Eigen::VectorXd::Zero(g.m_b() * d);
  out.tr_b1 = Eigen::VectorXd::Zero(g.m_b() * d);

  auto fill = [&](const EndpointRef& ep, int block, Eigen::VectorXd& q_out,
                  Eigen::VectorXd& p_out, int slot) {
    const EdgeFunction& fe = f[ep.edge_index];
    const EdgeCoefficients& ce = c.edge(ep.edge_index);
    Eigen::VectorXd q = fe.value(ep.coord);
    Eigen::VectorXd p = ce.P(ep.coord) * fe.derivative(ep.coord) +
                        ce.Q(ep.coord) * q;
    if (q.size() != d)
      throw std::invalid_argument("trace: fiber dimension mismatch");
    out.full.segment(sp.block_offset(block), d) = p;
    out.full.segment(sp.block_offset(block) + d, d) = q;
    q_out.segment(slot * d, d) = q;
    p_out.segment(slot * d, d) = p;
  };
  for (int k = 0; k < g.m_a(); ++k)
    fill(g.a_endpoints()[k], k, out.tr_a, out.tr_a1, k);
  for (int k = 0; k < g.m_b(); ++k)
    fill(g.b_endpoints()[k], g.m_a() + k, out.tr_b, out.tr_b1, k);
  return out;
}

MetricGraph segment_graph(double a, double b, int d) {
  return MetricGraph({{"v0", false}, {"v1", false}},
                     {{0, "v0", "v1", IntervalKind::Bounded, a, b}}, d);
}

MetricGraph star_graph(int m, const std::vector<double>& lengths, int d) {
  if (m < 1) throw std::invalid_argument("star_graph: m must be >= 1");
  if (lengths.size() != static_cast<size_t>(m))
    throw std::invalid_argument("star_graph: need one length per leaf");
  std::vector<Vertex> vs{{"c", false}};
  std::vector<Edge> es;
  for (int j = 0; j < m; ++j) {
    vs.push_back({"l" + std::to_string(j + 1), false});
    es.push_back({j, "c", vs.back().id, IntervalKind::Bounded, 0.0,
                  lengths[j]});
  }
  return MetricGraph(std::move(vs), std::move(es), d);
}

MetricGraph two_star(int mA, int mB, const std::vector<double>& lengths,
                     int d) {
  if (mA < 1 || mB < 1) throw std::invalid_argument("two_star: mA, mB >= 1");
  if (lengths.size() != static_cast<size_t>(mA + mB + 1))
    throw std::invalid_argument(
        "two_star: need lengths for A leaves, bridge, B leaves");
  std::vector<Vertex> vs{{"A", false}, {"B", false}};
  std::vector<Edge> es;
  int id = 0;
  for (int j = 0; j < mA; ++j, ++id) {
    vs.push_back({"a" + std::to_string(j + 1), false});
    es.push_back({id, "A", vs.back().id, IntervalKind::Bounded, 0.0,
                  lengths[id]});
  }
  es.push_back({id, "A", "B", IntervalKind::Bounded, 0.0, lengths[id]});
  ++id;
  for (int j = 0; j < mB; ++j, ++id) {
    vs.push_back({"b" + std::to_string(j + 1), false});
    es.push_back({id, "B", vs.back().id, IntervalKind::Bounded, 0.0,
                  lengths[id]});
  }
  return MetricGraph(std::move(vs), std::move(es), d);
}

namespace {

Eigen::MatrixXd json_to_matrix(const nlohmann::json& j) {
  const auto rows = j.size();
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  const auto cols = j[0].size();
  Eigen::MatrixXd m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (j[r].size() != cols)
      throw std::invalid_argument("ragged matrix in document");
    for (size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

MatrixFn json_to_matrixfn(const nlohmann::json& j, int d) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return MatrixFn::constant(json_to_matrix(j.at("data")));
  if (kind == "polynomial") {
    std::vector<Eigen::MatrixXd> coeffs;
    for (const auto& c : j.at("data")) coeffs.push_back(json_to_matrix(c));
    return MatrixFn::polynomial(std::move(coeffs));
  }
  if (kind == "table") {
    const auto& t = j.at("t");
    Eigen::VectorXd ts(t.size());
    for (size_t i = 0; i < t.size(); ++i) ts(i) = t[i].get<double>();
    std::vector<Eigen::MatrixXd> vals;
    for (const auto& c : j.at("data")) vals.push_back(json_to_matrix(c));
    return MatrixFn::table(std::move(ts), std::move(vals));
  }
  (void)d;
  throw std::invalid_argument("unknown coefficient kind " + kind);
}

}  // namespace

ParsedGraph parse_graph_document(const nlohmann::json& doc) {
  ParsedGraph out;
  try {
    const int d = doc.at("fiber_dim").get<int>();
    std::vector<Vertex> vs;
    for (const auto& v : doc.at("vertices"))
      vs.push_back({v.at("id").get<std::string>(),
                    v.value("at_infinity", false)});
    std::vector<Edge> es;
    SLCoefficients coeffs;
    coeffs.d = d;
    for (const auto& e : doc.at("edges")) {
      Edge edge;
      edge.id = e.at("id").get<int>();
      edge.tail = e.at("tail").get<std::string>();
      edge.head = e.at("head").get<std::string>();
      const auto& iv = e.at("interval");
      const std::string kind = iv.at("kind").get<std::string>();
      if (kind == "bounded") {
        edge.kind = IntervalKind::Bounded;
        edge.a = iv.at("a").get<double>();
        edge.b = iv.at("b").get<double>();
      } else if (kind == "right_half_line") {
        edge.kind = IntervalKind::RightHalfLine;
        edge.a = iv.at("a").get<double>();
      } else if (kind == "left_half_line") {
        edge.kind = IntervalKind::LeftHalfLine;
        edge.b = iv.at("b").get<double>();
      } else {
        out.violations.push_back("edge " + std::to_string(edge.id) +
                                 ": unknown interval kind " + kind);
        continue;
      }
      es.push_back(edge);

      EdgeCoefficients ec = EdgeCoefficients::free_particle(d);
      if (e.contains("coefficients")) {
        const auto& c = e.at("coefficients");
        if (c.contains("P")) ec.P = json_to_matrixfn(c.at("P"), d);
        if (c.contains("Q")) ec.Q = json_to_matrixfn(c.at("Q"), d);
        if (c.contains("R")) ec.R = json_to_matrixfn(c.at("R"), d);
        if (c.contains("C0")) ec.C0 = json_to_matrixfn(c.at("C0"), d);
        if (c.contains("C1")) ec.C1 = json_to_matrixfn(c.at("C1"), d);
      }
      coeffs.edges.push_back(std::move(ec));
    }

    auto bad = MetricGraph::check(vs, es, d);
    out.violations.insert(out.violations.end(), bad.begin(), bad.end());
    if (!out.violations.empty()) return out;
    out.graph.emplace(std::move(vs), std::move(es), d);
    out.coefficients = std::move(coeffs);

    if (doc.contains("conditions")) {
      for (const auto& c : doc.at("conditions")) {
        const std::string vid = c.at("vertex").get<std::string>();
        const std::string type = c.at("type").get<std::string>();
        VertexCondition cond;
        if (type == "dirichlet") {
          cond.type = VertexCondition::Type::Dirichlet;
        } else if (type == "kirchhoff") {
          cond.type = VertexCondition::Type::Kirchhoff;
        } else if (type == "conormal") {
          cond.type = VertexCondition::Type::Conormal;
          cond.W = json_to_matrix(c.at("W")).transpose();  // rows: basis vecs
        } else {
          out.violations.push_back("unknown condition type " + type);
          continue;
        }
        out.conditions[vid] = std::move(cond);
      }
    } else {
      out.conditions = dirichlet_leaves_kirchhoff_centers(*out.graph);
    }
  } catch (const std::exception& ex) {
    out.violations.push_back(std::string("malformed document: ") + ex.what());
  }
  return out;
}

}  // namespace graphindex
