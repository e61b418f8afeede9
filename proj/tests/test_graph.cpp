#include <cmath>

#include "doctest.h"
#include "graphindex/graph.hpp"

using namespace graphindex;

namespace {
const double pi = std::acos(-1.0);
}

TEST_CASE("builders produce valid graphs") {
  MetricGraph seg = segment_graph(0, 1, 1);
  CHECK(seg.m_a() == 1);
  CHECK(seg.m_b() == 1);
  CHECK(seg.compact());

  MetricGraph s5 = star_graph(5, std::vector<double>(5, 1.0), 1);
  CHECK(s5.degree("c") == 5);
  CHECK(s5.m_a() == 5);
  CHECK(s5.m_b() == 5);

  MetricGraph ts = two_star(3, 4, std::vector<double>(8, 1.0), 1);
  CHECK(ts.degree("A") == 4);
  CHECK(ts.degree("B") == 5);
  CHECK(ts.edges().size() == 8);

  // two_star(1,1) is the segment identification
  MetricGraph ts11 = two_star(1, 1, std::vector<double>(3, 1.0), 2);
  CHECK(ts11.edges().size() == 3);
  CHECK(ts11.degree("A") == 2);
}

TEST_CASE("validation reports violations") {
  // vertex at infinity with degree 2
  std::vector<Vertex> vs{{"v", false}, {"inf", true}};
  std::vector<Edge> es{{0, "v", "inf", IntervalKind::RightHalfLine, 0, 0},
                       {1, "v", "inf", IntervalKind::RightHalfLine, 0, 0}};
  auto bad = MetricGraph::check(vs, es, 1);
  REQUIRE(!bad.empty());
  bool found = false;
  for (const auto& b : bad)
    if (b.find("degree") != std::string::npos) found = true;
  CHECK(found);

  // disconnected
  std::vector<Vertex> vs2{{"a", false}, {"b", false}, {"c", false},
                          {"d", false}};
  std::vector<Edge> es2{{0, "a", "b", IntervalKind::Bounded, 0, 1},
                        {1, "c", "d", IntervalKind::Bounded, 0, 1}};
  bad = MetricGraph::check(vs2, es2, 1);
  REQUIRE(!bad.empty());
  CHECK(bad[0].find("disconnected") != std::string::npos);

  // nonpositive length
  std::vector<Edge> es3{{0, "a", "b", IntervalKind::Bounded, 1, 1}};
  bad = MetricGraph::check({{"a", false}, {"b", false}}, es3, 1);
  REQUIRE(!bad.empty());
  CHECK(bad[0].find("length") != std::string::npos);
}

TEST_CASE("boundary space dimensions and signs") {
  MetricGraph seg = segment_graph(0, 1, 1);
  SymplecticForm sp = boundary_space(seg);
  CHECK(sp.dim() == 4);
  CHECK(sp.blocks()[0].sign == -1);
  CHECK(sp.blocks()[1].sign == +1);

  MetricGraph s3 = star_graph(3, std::vector<double>(3, 1.0), 2);
  SymplecticForm sp3 = boundary_space(s3);
  CHECK(sp3.dim() == 2 * (3 * 2 + 3 * 2));
  for (int i = 0; i < 3; ++i) CHECK(sp3.blocks()[i].sign == -1);
  for (int i = 3; i < 6; ++i) CHECK(sp3.blocks()[i].sign == +1);

  // one bounded edge plus one half-line: three finite endpoints
  std::vector<Vertex> vs{{"l", false}, {"c", false}, {"inf", true}};
  std::vector<Edge> es{{0, "l", "c", IntervalKind::Bounded, 0, 1},
                       {1, "c", "inf", IntervalKind::RightHalfLine, 1, 0}};
  MetricGraph g(vs, es, 1);
  SymplecticForm spx = boundary_space(g);
  CHECK(spx.dim() == 6);
  CHECK(spx.blocks()[0].sign == -1);  // a of edge 0
  CHECK(spx.blocks()[1].sign == -1);  // a of edge 1 (the attachment)
  CHECK(spx.blocks()[2].sign == +1);  // b of edge 0
}

TEST_CASE("trace of explicit functions") {
  MetricGraph seg = segment_graph(0, 1, 1);
  SLCoefficients c = SLCoefficients::free_particle(1, 1);

  // f = 0
  std::vector<EdgeFunction> zero{{[](double) { return Eigen::VectorXd::Zero(1); },
                                  [](double) { return Eigen::VectorXd::Zero(1); }}};
  CHECK(trace(seg, zero, c).full.cwiseAbs().maxCoeff() == 0.0);

  // f = sin(pi t): trace (x^[1](0), x(0), x^[1](1), x(1)) = (pi, 0, -pi, 0)
  std::vector<EdgeFunction> f{{[](double t) {
                                 return Eigen::VectorXd::Constant(
                                     1, std::sin(pi * t));
                               },
                               [](double t) {
                                 return Eigen::VectorXd::Constant(
                                     1, pi * std::cos(pi * t));
                               }}};
  BoundaryTrace tr = trace(seg, f, c);
  CHECK(tr.tr_a1(0) == doctest::Approx(pi));
  CHECK(tr.tr_a(0) == doctest::Approx(0.0));
  CHECK(tr.tr_b1(0) == doctest::Approx(-pi).epsilon(1e-12));
  CHECK(tr.tr_b(0) == doctest::Approx(0.0));
}

TEST_CASE("Green identity via boundary traces") {
  // omega(trace f, trace g) = <f, l g> - <l f, g> for l = -d^2/dt^2
  MetricGraph seg = segment_graph(0, 1, 1);
  SLCoefficients c = SLCoefficients::free_particle(1, 1);
  SymplecticForm sp = boundary_space(seg);

  auto make = [](double al, double be) {
    // f = sin(al t + be): f'' = -al^2 f
    EdgeFunction f;
    f.value = [al, be](double t) {
      return Eigen::VectorXd::Constant(1, std::sin(al * t + be));
    };
    f.derivative = [al, be](double t) {
      return Eigen::VectorXd::Constant(1, al * std::cos(al * t + be));
    };
    return f;
  };
  EdgeFunction f = make(2.0, 0.3), g = make(1.3, -0.7);
  BoundaryTrace tf = trace(seg, {f}, c), tg = trace(seg, {g}, c);

  // quadrature of <f, -g''> - <-f'', g> with Simpson
  const int N = 2000;
  double acc = 0.0;
  for (int i = 0; i <= N; ++i) {
    const double t = double(i) / N;
    const double w = (i == 0 || i == N) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double fv = f.value(t)(0), gv = g.value(t)(0);
    const double lf = 4.0 * fv, lg = 1.69 * gv;  // l = -f'' = al^2 f
    acc += w * (fv * lg - lf * gv);
  }
  acc /= 3.0 * N;
  CHECK(sp.omega(tf.full, tg.full) == doctest::Approx(acc).epsilon(1e-8));
}

TEST_CASE("vertex conditions to Lagrangians") {
  SUBCASE("all Dirichlet on a segment is the momentum plane") {
    MetricGraph seg = segment_graph(0, 1, 2);
    LagrangianFrame l = conditions_to_lagrangian(seg, all_dirichlet(seg));
    SymplecticForm sp = boundary_space(seg);
    CHECK(gap_distance(l, dirichlet_lagrangian(sp)) < 1e-12);
  }

  SUBCASE("star with Kirchhoff center against the paper dimensions") {
    const int m = 3, d = 2;
    MetricGraph s = star_graph(m, std::vector<double>(m, 1.0), d);
    LagrangianFrame l0 =
        conditions_to_lagrangian(s, dirichlet_leaves_kirchhoff_centers(s));
    LagrangianFrame lD = dirichlet_lagrangian(boundary_space(s));
    CHECK(l0.isotropy_residual() < 1e-12);
    CHECK(intersection_dim(l0, lD) == (2 * m - 1) * d);
  }

  SUBCASE("conormal conditions have the stated codimension") {
    // dim(Lambda_W cap Lambda_D) = sum over vertices of (deg*d - dim W)
    MetricGraph seg = segment_graph(0, 1, 3);
    VertexConditionSet vc;
    Eigen::MatrixXd W0(3, 1);
    W0 << 1, 0, 0;
    Eigen::MatrixXd W1(3, 2);
    W1 << 1, 0, 0, 1, 0, 0;
    vc["v0"] = {VertexCondition::Type::Conormal, W0};
    vc["v1"] = {VertexCondition::Type::Conormal, W1};
    LagrangianFrame l = conditions_to_lagrangian(seg, vc);
    LagrangianFrame lD = dirichlet_lagrangian(boundary_space(seg));
    CHECK(intersection_dim(l, lD) == (3 - 1) + (3 - 2));
  }

  SUBCASE("two-star Kirchhoff centers build V_A + V_B") {
    MetricGraph ts = two_star(2, 2, std::vector<double>(5, 1.0), 1);
    LagrangianFrame l0 =
        conditions_to_lagrangian(ts, dirichlet_leaves_kirchhoff_centers(ts));
    CHECK(l0.isotropy_residual() < 1e-12);
    // configuration projection has dimension 2 (one diagonal per center)
    SymplecticForm sp = boundary_space(ts);
    Eigen::MatrixXd q = sp.extract_config(l0.basis());
    CHECK(orthonormal_basis(q).cols() == 2);
  }
}

TEST_CASE("graph document parsing") {
  nlohmann::json doc = {
      {"fiber_dim", 1},
      {"vertices",
       {{{"id", "v0"}}, {{"id", "v1"}}}},
      {"edges",
       {{{"id", 0},
         {"tail", "v0"},
         {"head", "v1"},
         {"interval", {{"kind", "bounded"}, {"a", 0.0}, {"b", 1.0}}},
         {"coefficients",
          {{"R", {{"kind", "constant"}, {"data", {{-9.8696}}}}}}}}}},
      {"conditions",
       {{{"vertex", "v0"}, {"type", "dirichlet"}},
        {{"vertex", "v1"}, {"type", "dirichlet"}}}}};
  ParsedGraph pg = parse_graph_document(doc);
  REQUIRE(pg.violations.empty());
  REQUIRE(pg.graph.has_value());
  CHECK(pg.graph->edges().size() == 1);
  CHECK(pg.coefficients->edge(0).R(0.5)(0, 0) == doctest::Approx(-9.8696));
  CHECK(pg.conditions.at("v0").type == VertexCondition::Type::Dirichlet);

  // invalid: infinity vertex of degree 2
  nlohmann::json bad = {
      {"fiber_dim", 1},
      {"vertices",
       {{{"id", "v"}}, {{"id", "w"}, {"at_infinity", true}}}},
      {"edges",
       {{{"id", 0},
         {"tail", "v"},
         {"head", "w"},
         {"interval", {{"kind", "right_half_line"}, {"a", 0.0}}}},
        {{"id", 1},
         {"tail", "v"},
         {"head", "w"},
         {"interval", {{"kind", "right_half_line"}, {"a", 0.0}}}}}}};
  ParsedGraph pb = parse_graph_document(bad);
  CHECK(!pb.violations.empty());
  CHECK(!pb.graph.has_value());
}
