#include "graphindex/hamiltonian.hpp"

#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>
#include <cmath>
#include <stdexcept>

namespace graphindex {

namespace {

Eigen::MatrixXd standard_J(int d) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  J.topRightCorner(d, d) = -Eigen::MatrixXd::Identity(d, d);
  J.bottomLeftCorner(d, d) = Eigen::MatrixXd::Identity(d, d);
  return J;
}

double symplectic_residual(const Eigen::MatrixXd& M) {
  const int d = static_cast<int>(M.rows()) / 2;
  Eigen::MatrixXd J = standard_J(d);
  return (M.transpose() * J * M - J).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd integrate_fundamental(const EdgeCoefficients& c, double from,
                                      double to, double s, double rel_tol,
                                      double abs_tol, int* steps) {
  namespace ode = boost::numeric::odeint;
  const int d = static_cast<int>(c.P(from).rows());
  const Eigen::MatrixXd J = standard_J(d);
  using state_type = Eigen::VectorXd;
  int count = 0;
  auto rhs = [&](const state_type& x, state_type& dxdt, double t) {
    if (dxdt.size() != x.size()) dxdt.resize(x.size());
    Eigen::Map<const Eigen::MatrixXd> M(x.data(), 2 * d, 2 * d);
    Eigen::Map<Eigen::MatrixXd> out(dxdt.data(), 2 * d, 2 * d);
    out = J * to_hamiltonian(c, t, s) * M;
    ++count;
  };
  state_type x(4 * d * d);
  Eigen::Map<Eigen::MatrixXd>(x.data(), 2 * d, 2 * d) =
      Eigen::MatrixXd::Identity(2 * d, 2 * d);
  if (to != from) {
    auto stepper = ode::make_controlled(
        abs_tol, rel_tol,
        ode::runge_kutta_dopri5<state_type, double, state_type, double,
                                ode::vector_space_algebra>());
    const double span = to - from;
    ode::integrate_adaptive(stepper, rhs, x, from, to, span / 64.0);
  }
  if (steps) *steps = count;
  return Eigen::Map<Eigen::MatrixXd>(x.data(), 2 * d, 2 * d);
}

// Integrate the frame Z' = J B(t) Z from `from` to `to` (either direction),
// re-orthonormalizing on unit subintervals. Only the span matters; the
// renormalization right-multiplies the frame and keeps hyperbolic growth
// from overflowing. Used to carry stable/unstable bundles along half-line
// prefixes, where the full fundamental matrix is too ill-conditioned to
// invert.
Eigen::MatrixXd transport_frame(const EdgeCoefficients& c, double from,
                                double to, double s, Eigen::MatrixXd Z,
                                double rel_tol, double abs_tol) {
  namespace ode = boost::numeric::odeint;
  const int rows = static_cast<int>(Z.rows());
  const int cols = static_cast<int>(Z.cols());
  const int d = rows / 2;
  const Eigen::MatrixXd J = standard_J(d);
  using state_type = Eigen::VectorXd;
  auto rhs = [&](const state_type& x, state_type& dxdt, double t) {
    if (dxdt.size() != x.size()) dxdt.resize(x.size());
    Eigen::Map<const Eigen::MatrixXd> M(x.data(), rows, cols);
    Eigen::Map<Eigen::MatrixXd> out(dxdt.data(), rows, cols);
    out = J * to_hamiltonian(c, t, s) * M;
  };
  const double dir = (to >= from) ? 1.0 : -1.0;
  double t = from;
  while (dir * (to - t) > 0) {
    double t_next = t + dir * std::min(1.0, dir * (to - t));
    state_type x(rows * cols);
    Eigen::Map<Eigen::MatrixXd>(x.data(), rows, cols) = Z;
    auto stepper = ode::make_controlled(
        abs_tol, rel_tol,
        ode::runge_kutta_dopri5<state_type, double, state_type, double,
                                ode::vector_space_algebra>());
    ode::integrate_adaptive(stepper, rhs, x, t, t_next, dir * 1e-2);
    Z = Eigen::Map<Eigen::MatrixXd>(x.data(), rows, cols);
    Z = orthonormal_basis(Z);
    t = t_next;
  }
  return Z;
}

}  // namespace

Eigen::MatrixXd to_hamiltonian(const EdgeCoefficients& c, double t, double s) {
  Eigen::MatrixXd P = c.P(t);
  const int d = static_cast<int>(P.rows());
  Eigen::LLT<Eigen::MatrixXd> llt(P);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("to_hamiltonian: P(t) is not positive definite");
  Eigen::MatrixXd Pinv = llt.solve(Eigen::MatrixXd::Identity(d, d));
  Eigen::MatrixXd Q = c.Q(t);
  Eigen::MatrixXd Reff = c.effective_R(t, s);
  Eigen::MatrixXd B(2 * d, 2 * d);
  B.topLeftCorner(d, d) = Pinv;
  B.topRightCorner(d, d) = -Pinv * Q;
  B.bottomLeftCorner(d, d) = -Q.transpose() * Pinv;
  B.bottomRightCorner(d, d) = Q.transpose() * Pinv * Q - Reff;
  return 0.5 * (B + B.transpose());
}

MonodromyResult monodromy(const EdgeCoefficients& c, int edge_index,
                          double from, double sigma, double s,
                          const FlowOptions& opt) {
  MonodromyResult out;
  out.edge_index = edge_index;
  out.from = from;
  out.to = sigma;
  double rel = opt.rel_tol, abs = opt.abs_tol;
  for (int attempt = 0; attempt < 3; ++attempt) {
    out.matrix = integrate_fundamental(c, from, sigma, s, rel, abs, &out.steps);
    out.symplectic_residual = symplectic_residual(out.matrix);
    if (out.symplectic_residual <= opt.sympl_tol) return out;
    rel *= 1e-2;
    abs *= 1e-2;
  }
  throw std::runtime_error("monodromy: symplectic residual " +
                           std::to_string(out.symplectic_residual) +
                           " exceeds tolerance after retries");
}

LagrangianFrame stable_subspace(const EdgeCoefficients& c, const Edge& edge,
                                double s, const FlowOptions& opt) {
  if (edge.kind == IntervalKind::Bounded)
    throw std::invalid_argument("stable_subspace: edge is bounded");
  const bool right = (edge.kind == IntervalKind::RightHalfLine);

  Eigen::MatrixXd Pinf = c.P.asymptotic_value(right);
  const int d = static_cast<int>(Pinf.rows());
  Eigen::MatrixXd Qinf = c.Q.asymptotic_value(right);
  Eigen::MatrixXd Rinf = c.R.asymptotic_value(right) +
                         c.C0.asymptotic_value(right) +
                         s * c.C1.asymptotic_value(right);
  EdgeCoefficients limit;
  limit.P = MatrixFn::constant(Pinf);
  limit.Q = MatrixFn::constant(Qinf);
  limit.R = MatrixFn::constant(Rinf);
  limit.C0 = MatrixFn::zero(d);
  limit.C1 = MatrixFn::zero(d);
  Eigen::MatrixXd H = standard_J(d) * to_hamiltonian(limit, 0.0, 0.0);

  Eigen::EigenSolver<Eigen::MatrixXd> es(H);
  int n_stable = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double re = es.eigenvalues()(i).real();
    if (std::abs(re) < 1e-8)
      throw std::runtime_error(
          "stable_subspace: essential spectrum at 0 (limiting system not "
          "hyperbolic)");
    if (re < 0) ++n_stable;
  }
  if (n_stable != d)
    throw std::runtime_error(
        "stable_subspace: stable dimension != d for a Hamiltonian system");

  // spectral projector via the matrix sign function
  Eigen::MatrixXd S = H;
  for (int it = 0; it < 100; ++it) {
    Eigen::MatrixXd Sinv = S.partialPivLu().inverse();
    Eigen::MatrixXd next = 0.5 * (S + Sinv);
    const double delta = (next - S).cwiseAbs().maxCoeff();
    S = next;
    if (delta < 1e-13) break;
  }
  Eigen::MatrixXd proj =
      right ? Eigen::MatrixXd(0.5 * (Eigen::MatrixXd::Identity(2 * d, 2 * d) - S))
            : Eigen::MatrixXd(0.5 * (Eigen::MatrixXd::Identity(2 * d, 2 * d) + S));
  Eigen::MatrixXd Winf = orthonormal_basis(proj);
  if (Winf.cols() != d)
    throw std::runtime_error("stable_subspace: projector rank mismatch");

  const bool constant_coeffs = c.P.kind() == MatrixFn::Kind::Constant &&
                               c.Q.kind() == MatrixFn::Kind::Constant &&
                               c.R.kind() == MatrixFn::Kind::Constant &&
                               c.C0.kind() == MatrixFn::Kind::Constant &&
                               c.C1.kind() == MatrixFn::Kind::Constant;
  Eigen::MatrixXd W = Winf;
  if (!constant_coeffs) {
    // Backward (resp. forward) frame transport follows the expanding
    // direction of the stable (resp. unstable) bundle, which is the
    // well-conditioned arrangement.
    if (right)
      W = transport_frame(c, edge.a + opt.halfline_horizon, edge.a, s, Winf,
                          opt.rel_tol, opt.abs_tol);
    else
      W = transport_frame(c, edge.b - opt.halfline_horizon, edge.b, s, Winf,
                          opt.rel_tol, opt.abs_tol);
  }
  return LagrangianFrame(SymplecticForm::standard(d), W);
}

namespace {

LagrangianFrame assemble_cauchy_data(const MetricGraph& g,
                                     const SLCoefficients& c, double s,
                                     double tau, const FlowOptions& opt) {
  const int d = g.fiber_dim();
  SymplecticForm sp = boundary_space(g);
  Eigen::MatrixXd cols = Eigen::MatrixXd::Zero(sp.dim(), sp.half_dim());
  int col = 0;
  for (size_t i = 0; i < g.edges().size(); ++i) {
    const Edge& e = g.edges()[i];
    if (e.kind == IntervalKind::Bounded) {
      const int ba = g.block_of(static_cast<int>(i), false);
      const int bb = g.block_of(static_cast<int>(i), true);
      Eigen::MatrixXd M;
      if (tau == 0.0) {
        M = Eigen::MatrixXd::Identity(2 * d, 2 * d);
      } else {
        const double sigma = e.a + tau * (e.b - e.a);
        M = monodromy(c.edge(static_cast<int>(i)), static_cast<int>(i), e.a,
                      sigma, s, opt)
                .matrix;
      }
      cols.block(sp.block_offset(ba), col, 2 * d, 2 * d) =
          Eigen::MatrixXd::Identity(2 * d, 2 * d);
      cols.block(sp.block_offset(bb), col, 2 * d, 2 * d) = M;
      col += 2 * d;
    } else {
      const int blk = g.block_of(static_cast<int>(i),
                                 e.kind == IntervalKind::LeftHalfLine);
      LagrangianFrame W =
          stable_subspace(c.edge(static_cast<int>(i)), e, s, opt);
      cols.block(sp.block_offset(blk), col, 2 * d, d) = W.basis();
      col += d;
    }
  }
  return LagrangianFrame(sp, cols);
}

}  // namespace

LagrangianFrame cauchy_data_lagrangian(const MetricGraph& g,
                                       const SLCoefficients& c, double s,
                                       const FlowOptions& opt) {
  return assemble_cauchy_data(g, c, s, 1.0, opt);
}

LagrangianFrame truncated_cauchy_data(const MetricGraph& g,
                                      const SLCoefficients& c, double s,
                                      double tau, const FlowOptions& opt) {
  return assemble_cauchy_data(g, c, s, tau, opt);
}

LagrangianPath cauchy_data_sweep(const MetricGraph& g, const SLCoefficients& c,
                                 double s, const FlowOptions& opt) {
  return LagrangianPath{0.0, 1.0, [g, c, s, opt](double tau) {
                          return assemble_cauchy_data(g, c, s, tau, opt);
                        }};
}

LagrangianPath cauchy_data_family(const MetricGraph& g,
                                  const SLCoefficients& c, double s0,
                                  double s1, const FlowOptions& opt) {
  return LagrangianPath{s0, s1, [g, c, opt](double s) {
                          return assemble_cauchy_data(g, c, s, 1.0, opt);
                        }};
}

std::vector<ConjugateInstant> conjugate_instants(const EdgeCoefficients& c,
                                                 int edge_index, double from,
                                                 double to, double s,
                                                 const FlowOptions& opt) {
  const int d = static_cast<int>(c.P(from).rows());
  SymplecticForm dbl({{d, -1}, {d, +1}});
  LagrangianFrame ld = dirichlet_lagrangian(dbl);
  LagrangianPath sweep{from, to, [&c, edge_index, from, s, opt,
                                  dbl](double sigma) {
                         Eigen::MatrixXd M =
                             (sigma == from)
                                 ? Eigen::MatrixXd::Identity(dbl.dim() / 2,
                                                             dbl.dim() / 2)
                                 : monodromy(c, edge_index, from, sigma, s, opt)
                                       .matrix;
                         return graph_lagrangian(dbl, M, 1e-6);
                       }};
  std::vector<ConjugateInstant> out;
  for (const Crossing& cr :
       detect_crossings(constant_path(from, to, ld), sweep)) {
    if (cr.at_left || cr.at_right) continue;
    out.push_back({cr.t, cr.kernel_dim});
  }
  return out;
}

}  // namespace graphindex
