#pragma once

#include <vector>

#include "graphindex/graph.hpp"
#include "graphindex/hamiltonian.hpp"

namespace graphindex {

struct SpectralOptions {
  int mesh_n = 32;            // elements per edge
  double eps_kernel = 1e-8;   // zero threshold after mass normalization
  int s_samples = 33;         // initial spectral-flow grid
  double s_locate_tol = 1e-6; // crossing localization in s
  int max_refinements = 4;    // mesh doublings for index stabilization
  FlowOptions flow;           // for half-line truncation data
};

/// Conforming discretization of the index form on the subspace of fields
/// whose configuration trace lies in the q-projection of the boundary
/// Lagrangian; the momentum part of the condition enters through the
/// symmetric boundary correction. Cubic Hermite elements per edge, DOFs
/// (value, derivative) per node.
struct DiscretizedOperator {
  Eigen::MatrixXd A;  // reduced stiffness, boundary term included
  Eigen::MatrixXd M;  // reduced mass (positive definite)
  int total_dofs = 0;       // before constraint reduction
  int config_rank = 0;      // dim of the admissible configuration trace
  double asym_residual = 0; // symmetry defect of the raw assembly
  int elements_per_edge = 0;

  // constraint data: boundary configuration DOFs, the rest, and the
  // admissible-trace basis (reduced dof = (X-coefficients, interior))
  std::vector<int> boundary_dofs;
  std::vector<int> interior_dofs;
  Eigen::MatrixXd X;

  /// Expand a reduced DOF vector to the full (unconstrained) layout.
  Eigen::VectorXd to_full(const Eigen::VectorXd& reduced) const;
};

DiscretizedOperator assemble(const MetricGraph& g, const SLCoefficients& c,
                             const LagrangianFrame& lambda, double s,
                             const SpectralOptions& opt = {});

/// k smallest generalized eigenvalues, residual-checked.
Eigen::VectorXd eigenvalues(const DiscretizedOperator& op, int k);

struct MorseResult {
  int index = 0;
  bool degenerate = false;          // eigenvalue within 10 eps of zero
  std::vector<double> near_zero;    // the flagged eigenvalues
  int mesh_used = 0;
};

/// Count of eigenvalues below -eps_kernel at a fixed mesh.
MorseResult morse_count(const DiscretizedOperator& op,
                        const SpectralOptions& opt = {});

/// Morse index with mesh-doubling stabilization: two consecutive meshes
/// must agree. Throws if the count keeps changing.
MorseResult morse_index(const MetricGraph& g, const SLCoefficients& c,
                        const LagrangianFrame& lambda, double s = 0.0,
                        const SpectralOptions& opt = {});

struct SpectralFlowResult {
  int sf = 0;
  std::vector<double> crossings;  // localized s-instants where the count moves
  bool endpoint_degenerate = false;
};

/// Spectral flow of s -> L_{s, Lambda} over [s0, s1] on a fixed mesh:
/// net count of eigenvalues crossing zero, endpoint kernels excluded from
/// the strictly-negative count (an eigenvalue sitting at zero counts as
/// inside the window [0, a]).
SpectralFlowResult spectral_flow(const MetricGraph& g, const SLCoefficients& c,
                                 const LagrangianFrame& lambda, double s0,
                                 double s1, const SpectralOptions& opt = {});

/// Truncate every half-line edge of g at the horizon and impose the
/// stable-subspace boundary condition on the new endpoint blocks; returns
/// the truncated graph, coefficients, and the extended Lagrangian.
struct TruncatedProblem {
  MetricGraph graph;
  SLCoefficients coefficients;
  LagrangianFrame lambda;
};

TruncatedProblem truncate_halflines(const MetricGraph& g,
                                    const SLCoefficients& c,
                                    const LagrangianFrame& lambda, double s,
                                    double horizon,
                                    const SpectralOptions& opt = {});

}  // namespace graphindex
