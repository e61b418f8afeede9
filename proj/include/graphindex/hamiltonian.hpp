#pragma once

#include <vector>

#include "graphindex/graph.hpp"
#include "graphindex/maslov.hpp"

namespace graphindex {

/// Fundamental solution of z' = J B(t) z over a bounded sub-interval.
struct MonodromyResult {
  int edge_index = 0;
  double from = 0.0;
  double to = 0.0;        // the truncation point sigma
  Eigen::MatrixXd matrix; // 2d x 2d
  double symplectic_residual = 0.0;
  int steps = 0;
};

struct FlowOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double sympl_tol = kSymplTol;       // acceptance for ||M^T J M - J||
  double halfline_horizon = 30.0;     // finite transport prefix for tails
  double eps_kernel = 1e-8;           // multiplicity threshold
};

/// Hamiltonian coefficient matrix of the reduced first-order system,
///   B = [[P^-1, -P^-1 Q], [-Q^T P^-1, Q^T P^-1 Q - (R + C_s)]],
/// so that z = (P y' + Q y, y) solves z' = J B z.
Eigen::MatrixXd to_hamiltonian(const EdgeCoefficients& c, double t, double s);

/// Integrate M' = J B(t) M from `from` to `sigma` with M(from) = I.
/// Re-integrates at tightened tolerance if the symplectic residual fails,
/// then throws.
MonodromyResult monodromy(const EdgeCoefficients& c, int edge_index,
                          double from, double sigma, double s,
                          const FlowOptions& opt = {});

/// Stable subspace of the asymptotically constant system on a half-line
/// edge, transported back to the finite attachment point: the initial data
/// of solutions decaying at infinity. Throws "essential spectrum at 0" when
/// the limiting Hamiltonian is not hyperbolic. For left half-lines the
/// roles of stable/unstable swap (decay at -infinity).
LagrangianFrame stable_subspace(const EdgeCoefficients& c, const Edge& edge,
                                double s, const FlowOptions& opt = {});

/// Trace image of ker L_s^*: the direct sum over edges of Graph(M_j) for
/// bounded edges and the stable trace for half-line edges, as a Lagrangian
/// of boundary_space(g).
LagrangianFrame cauchy_data_lagrangian(const MetricGraph& g,
                                       const SLCoefficients& c, double s,
                                       const FlowOptions& opt = {});

/// Same object with every bounded edge truncated at fraction tau in (0, 1]
/// of its length (half-line edges keep their full stable trace). tau -> 0
/// gives the continuity diagonal Graph(I); tau = 1 the Cauchy data space.
LagrangianFrame truncated_cauchy_data(const MetricGraph& g,
                                      const SLCoefficients& c, double s,
                                      double tau, const FlowOptions& opt = {});

/// The conjugate-instant sweep tau in [0, 1] as a Lagrangian path.
LagrangianPath cauchy_data_sweep(const MetricGraph& g, const SLCoefficients& c,
                                 double s, const FlowOptions& opt = {});

/// Path s in [s0, s1] of Cauchy data Lagrangians of the operator family.
LagrangianPath cauchy_data_family(const MetricGraph& g,
                                  const SLCoefficients& c, double s0,
                                  double s1, const FlowOptions& opt = {});

struct ConjugateInstant {
  double sigma = 0.0;
  int multiplicity = 0;
};

/// Interior instants sigma where the Dirichlet problem truncated at sigma
/// has a nontrivial kernel, with multiplicities: zeros of
/// det(q-block of M(sigma) restricted to the vertical subspace).
std::vector<ConjugateInstant> conjugate_instants(const EdgeCoefficients& c,
                                                 int edge_index, double from,
                                                 double to, double s,
                                                 const FlowOptions& opt = {});

}  // namespace graphindex
