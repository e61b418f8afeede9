#include <cmath>
#include <random>

#include "doctest.h"
#include "graphindex/spectral.hpp"
#include "test_util.hpp"

using namespace graphindex;
using graphindex::testing::random_symmetric;

namespace {

const double pi = std::acos(-1.0);

SpectralOptions mesh(int n) {
  SpectralOptions o;
  o.mesh_n = n;
  return o;
}

}  // namespace

TEST_CASE("Dirichlet segment spectrum k^2 pi^2") {
  MetricGraph seg = segment_graph(0, 1, 1);
  SLCoefficients c = SLCoefficients::free_particle(1, 1);
  LagrangianFrame lD = dirichlet_lagrangian(boundary_space(seg));
  DiscretizedOperator op = assemble(seg, c, lD, 0.0, mesh(256));
  Eigen::VectorXd ev = eigenvalues(op, 3);
  for (int k = 1; k <= 3; ++k)
    CHECK(std::abs(ev(k - 1) - k * k * pi * pi) / (k * k * pi * pi) < 0.002);
}

TEST_CASE("boundary corrections: Robin condition against the secular root") {
  // x(0) = 0, x'(1) = -theta x(1): eigenvalue mu^2 with
  // mu cos mu + theta sin mu = 0
  const double theta = 2.0;
  auto secular = [&](double mu) {
    return mu * std::cos(mu) + theta * std::sin(mu);
  };
  double lo = 1.5, hi = 3.0;  // first root of the secular equation
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    ((secular(lo) * secular(mid) <= 0) ? hi : lo) = mid;
  }
  const double mu_exact = 0.5 * (lo + hi);

  MetricGraph seg = segment_graph(0, 1, 1);
  SLCoefficients c = SLCoefficients::free_particle(1, 1);
  SymplecticForm sp = boundary_space(seg);
  Eigen::MatrixXd cols(4, 2);
  cols << 1, 0, 0, 0, 0, -theta, 0, 1;  // (p_a free) + (p_b = -theta q_b)
  LagrangianFrame robin(sp, cols);
  DiscretizedOperator op = assemble(seg, c, robin, 0.0, mesh(64));
  Eigen::VectorXd ev = eigenvalues(op, 1);
  CHECK(std::sqrt(ev(0)) == doctest::Approx(mu_exact).epsilon(1e-6));
}

TEST_CASE("Morse indices on the segment") {
  MetricGraph seg = segment_graph(0, 1, 1);
  SymplecticForm sp = boundary_space(seg);
  LagrangianFrame lD = dirichlet_lagrangian(sp);
  LagrangianFrame lN = neumann_lagrangian(sp);

  SUBCASE("omega = 2.5 pi Dirichlet gives 2") {
    SLCoefficients c = SLCoefficients::constant_R(
        1, -6.25 * pi * pi * Eigen::MatrixXd::Identity(1, 1));
    MorseResult m = morse_index(seg, c, lD, 0.0, mesh(24));
    CHECK(m.index == 2);
    CHECK(!m.degenerate);
  }

  SUBCASE("nonnegative R gives 0") {
    SLCoefficients c = SLCoefficients::constant_R(
        1, 1.5 * Eigen::MatrixXd::Identity(1, 1));
    CHECK(morse_index(seg, c, lD, 0.0, mesh(16)).index == 0);
  }

  SUBCASE("d = 2 isotropic doubles the index") {
    MetricGraph seg2 = segment_graph(0, 1, 2);
    SLCoefficients c = SLCoefficients::constant_R(
        1, -6.25 * pi * pi * Eigen::MatrixXd::Identity(2, 2));
    LagrangianFrame lD2 = dirichlet_lagrangian(boundary_space(seg2));
    CHECK(morse_index(seg2, c, lD2, 0.0, mesh(24)).index == 4);
  }

  SUBCASE("Neumann vs Dirichlet below the first Dirichlet level") {
    const double om = 0.3 * pi;
    SLCoefficients c = SLCoefficients::constant_R(
        1, -om * om * Eigen::MatrixXd::Identity(1, 1));
    CHECK(morse_index(seg, c, lD, 0.0, mesh(16)).index == 0);
    CHECK(morse_index(seg, c, lN, 0.0, mesh(16)).index == 1);
  }
}

TEST_CASE("equilateral star with Kirchhoff center") {
  // -x'' on the 3-star, Dirichlet leaves: spectrum wavenumbers are
  // (l + 1/2) pi (simple, symmetric modes) and l pi (double).
  MetricGraph s3 = star_graph(3, std::vector<double>(3, 1.0), 1);
  SLCoefficients c = SLCoefficients::free_particle(3, 1);
  LagrangianFrame l0 =
      conditions_to_lagrangian(s3, dirichlet_leaves_kirchhoff_centers(s3));
  DiscretizedOperator op = assemble(s3, c, l0, 0.0, mesh(64));
  Eigen::VectorXd ev = eigenvalues(op, 4);
  CHECK(std::sqrt(ev(0)) == doctest::Approx(0.5 * pi).epsilon(1e-6));
  CHECK(std::sqrt(ev(1)) == doctest::Approx(pi).epsilon(1e-6));
  CHECK(std::sqrt(ev(2)) == doctest::Approx(pi).epsilon(1e-6));
  CHECK(std::sqrt(ev(3)) == doctest::Approx(1.5 * pi).epsilon(1e-6));

  // Morse index of -x'' - omega^2 equals the count of wavenumbers below
  // omega (closed-form spectrum)
  const double om = 2.3 * pi;
  SLCoefficients cw = SLCoefficients::constant_R(
      3, -om * om * Eigen::MatrixXd::Identity(1, 1));
  CHECK(morse_index(s3, cw, l0, 0.0, mesh(24)).index == 6);
}

TEST_CASE("shift identity") {
  MetricGraph seg = segment_graph(0, 1, 1);
  SymplecticForm sp = boundary_space(seg);
  LagrangianFrame lD = dirichlet_lagrangian(sp);
  SLCoefficients c0 = SLCoefficients::free_particle(1, 1);
  const double shift = 7.25;
  SLCoefficients c1 = SLCoefficients::constant_R(
      1, shift * Eigen::MatrixXd::Identity(1, 1));
  Eigen::VectorXd e0 = eigenvalues(assemble(seg, c0, lD, 0.0, mesh(48)), 5);
  Eigen::VectorXd e1 = eigenvalues(assemble(seg, c1, lD, 0.0, mesh(48)), 5);
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(e1(i) - e0(i) - shift) < 1e-9 * (1.0 + std::abs(e0(i))));
}

TEST_CASE("discrete Green identity against independent quadrature") {
  // u^T A v equals the quadrature of the index form of the Hermite
  // interpolants, checked with fine Simpson sums.
  MetricGraph seg = segment_graph(0, 1, 1);
  SLCoefficients c = SLCoefficients::free_particle(1, 1);
  c.edge(0).R = MatrixFn::polynomial(
      {Eigen::MatrixXd::Constant(1, 1, -3.0),
       Eigen::MatrixXd::Constant(1, 1, 1.5)});
  c.edge(0).Q = MatrixFn::constant(Eigen::MatrixXd::Constant(1, 1, 0.4));
  SymplecticForm sp = boundary_space(seg);
  LagrangianFrame lN = neumann_lagrangian(sp);  // no boundary correction
  const int n_el = 8;
  DiscretizedOperator op = assemble(seg, c, lN, 0.0, mesh(n_el));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  auto hermite_value = [&](const Eigen::VectorXd& dofs, double t,
                           int deriv) -> double {
    const double h = 1.0 / n_el;
    int el = std::min<int>(static_cast<int>(t / h), n_el - 1);
    const double x = (t - el * h) / h;
    const double x2 = x * x, x3 = x2 * x;
    double H[4] = {1 - 3 * x2 + 2 * x3, h * (x - 2 * x2 + x3), 3 * x2 - 2 * x3,
                   h * (-x2 + x3)};
    double dH[4] = {(-6 * x + 6 * x2) / h, 1 - 4 * x + 3 * x2,
                    (6 * x - 6 * x2) / h, -2 * x + 3 * x2};
    const double* S = deriv ? dH : H;
    return S[0] * dofs(2 * el) + S[1] * dofs(2 * el + 1) +
           S[2] * dofs(2 * el + 2) + S[3] * dofs(2 * el + 3);
  };

  for (int trial = 0; trial < 4; ++trial) {
    Eigen::VectorXd u(op.A.rows()), v(op.A.rows());
    for (int i = 0; i < u.size(); ++i) {
      u(i) = gauss(rng);
      v(i) = gauss(rng);
    }
    Eigen::VectorXd uf = op.to_full(u), vf = op.to_full(v);
    const int N = 4000;
    double acc = 0.0;
    for (int i = 0; i <= N; ++i) {
      const double t = double(i) / N;
      const double w = (i == 0 || i == N) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      const double xu = hermite_value(uf, t, 0), du = hermite_value(uf, t, 1);
      const double xv = hermite_value(vf, t, 0), dv = hermite_value(vf, t, 1);
      const double P = 1.0, Q = 0.4, R = -3.0 + 1.5 * t;
      acc += w * (P * du * dv + Q * xu * dv + Q * du * xv + R * xu * xv);
    }
    acc /= 3.0 * N;
    CHECK(u.dot(op.A * v) == doctest::Approx(acc).epsilon(1e-8));
  }
}

TEST_CASE("eigenvalue interlacing under one constraint") {
  std::mt19937_64 rng(11);
  Eigen::MatrixXd A = random_symmetric(6, rng, 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(A);
  // constrain to the orthogonal complement of a random vector
  Eigen::VectorXd w(6);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < 6; ++i) w(i) = gauss(rng);
  Eigen::MatrixXd Z = orthogonal_complement(orthonormal_basis(w), 6);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(
      Eigen::MatrixXd(Z.transpose() * A * Z));
  for (int i = 0; i < 5; ++i) {
    CHECK(ea.eigenvalues()(i) <= eb.eigenvalues()(i) + 1e-12);
    CHECK(eb.eigenvalues()(i) <= ea.eigenvalues()(i + 1) + 1e-12);
  }
}

TEST_CASE("spectral flow of families") {
  MetricGraph seg = segment_graph(0, 1, 1);
  SymplecticForm sp = boundary_space(seg);
  LagrangianFrame lD = dirichlet_lagrangian(sp);

  SUBCASE("constant family is zero") {
    SLCoefficients c = SLCoefficients::constant_R(
        1, -2.0 * Eigen::MatrixXd::Identity(1, 1));
    SpectralFlowResult r = spectral_flow(seg, c, lD, 0.0, 1.0, mesh(24));
    CHECK(r.sf == 0);
    CHECK(r.crossings.empty());
  }

  SUBCASE("downward pencil counts entering eigenvalues") {
    // base -x'' - (2.5 pi)^2, C_s = -s c I: eigenvalues k^2 pi^2 -
    // 61.685 - s c; for c = 30 exactly one eigenvalue (k = 3) crosses
    // zero downward on [0, 1], at s = (9 pi^2 - 6.25 pi^2) / 30.
    const double om2 = 6.25 * pi * pi;
    SLCoefficients c = SLCoefficients::constant_R(
        1, -om2 * Eigen::MatrixXd::Identity(1, 1));
    c.edge(0).C1 =
        MatrixFn::constant(-30.0 * Eigen::MatrixXd::Identity(1, 1));
    SpectralFlowResult r = spectral_flow(seg, c, lD, 0.0, 1.0, mesh(24));
    CHECK(r.sf == -1);
    REQUIRE(r.crossings.size() == 1);
    const double expected = (9 * pi * pi - om2) / 30.0;
    CHECK(r.crossings[0] == doctest::Approx(expected).epsilon(1e-4));
  }

  SUBCASE("path additivity on a random family") {
    std::mt19937_64 rng(13);
    MetricGraph seg2 = segment_graph(0, 1, 2);
    SLCoefficients c = SLCoefficients::free_particle(1, 2);
    c.edge(0).R = MatrixFn::constant(random_symmetric(2, rng, 4.0) -
                                     20.0 * Eigen::MatrixXd::Identity(2, 2));
    c.edge(0).C1 = MatrixFn::constant(random_symmetric(2, rng, 8.0));
    LagrangianFrame lD2 = dirichlet_lagrangian(boundary_space(seg2));
    const int whole = spectral_flow(seg2, c, lD2, 0.0, 1.0, mesh(16)).sf;
    const int a = spectral_flow(seg2, c, lD2, 0.0, 0.5, mesh(16)).sf;
    const int b = spectral_flow(seg2, c, lD2, 0.5, 1.0, mesh(16)).sf;
    CHECK(whole == a + b);
  }
}

TEST_CASE("half-line truncation with the stable boundary condition") {
  // -x'' + kappa^2 with a potential well on the prefix: the truncated
  // problem's Morse index is stable in the horizon.
  std::vector<Vertex> vs{{"o", false}, {"inf", true}};
  std::vector<Edge> es{{0, "o", "inf", IntervalKind::RightHalfLine, 0, 0}};
  MetricGraph g(vs, es, 1);
  SLCoefficients c = SLCoefficients::free_particle(1, 1);
  Eigen::VectorXd ts(3);
  ts << 0.0, 1.0, 2.0;
  c.edge(0).R = MatrixFn::table(
      ts, {Eigen::MatrixXd::Constant(1, 1, -25.0),
           Eigen::MatrixXd::Constant(1, 1, -10.0),
           Eigen::MatrixXd::Constant(1, 1, 4.0)});
  LagrangianFrame lD = dirichlet_lagrangian(boundary_space(g));

  auto run = [&](double horizon) {
    SpectralOptions o = mesh(16);
    TruncatedProblem tp = truncate_halflines(g, c, lD, 0.0, horizon, o);
    return morse_index(tp.graph, tp.coefficients, tp.lambda, 0.0, o).index;
  };
  const int i1 = run(8.0);
  const int i2 = run(16.0);
  CHECK(i1 == i2);
  CHECK(i1 > 0);  // the deep well binds at least one negative mode
}
