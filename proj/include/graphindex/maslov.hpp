#pragma once

#include <functional>
#include <string>
#include <vector>

#include "graphindex/symplectic.hpp"

namespace graphindex {

/// One-parameter family of Lagrangian subspaces on [a, b]. The evaluator
/// must be a pure function of the parameter (safe for repeated and
/// out-of-order invocation); frames it returns may be arbitrary
/// orthonormal representatives of the subspace.
struct LagrangianPath {
  double a = 0.0;
  double b = 1.0;
  std::function<LagrangianFrame(double)> evaluator;

  LagrangianFrame operator()(double t) const { return evaluator(t); }
};

/// Crossing instant of a pair of Lagrangian paths.
struct Crossing {
  double t = 0.0;
  int kernel_dim = 0;
  Eigen::MatrixXd basis;     // orthonormal basis of l1(t) ∩ l2(t)
  Eigen::MatrixXd form;      // crossing form Gamma(l1, l2, t) on that basis
  Inertia signature;
  bool regular = false;
  bool at_left = false;
  bool at_right = false;
};

struct MaslovOptions {
  int initial_samples = 256;
  double crossing_tol = 1e-6;   // sigma_min acceptance threshold
  double t_tol_rel = 1e-10;     // crossing localization, relative to b-a
  double fd_step_rel = 1e-5;    // finite-difference step for Q(L, Ldot)
  double richardson_tol = 1e-4; // relative agreement required at h/2
  int max_perturbations = 5;    // retries for irregular interior crossings
  unsigned perturb_seed = 0x9e3779b9u;
};

/// All crossing instants of the pair on the common interval, endpoint
/// crossings included and flagged. Throws on unresolved clusters (two
/// crossings closer than the localization tolerance allows).
std::vector<Crossing> detect_crossings(const LagrangianPath& l1,
                                       const LagrangianPath& l2,
                                       const MaslovOptions& opt = {});

/// Derivative form Q(L, Ldot) of a single path at parameter t, evaluated on
/// the columns of V (which must lie in l(t)); central differences against a
/// fixed transversal with a Richardson consistency check.
Eigen::MatrixXd path_derivative_form(const LagrangianPath& l, double t,
                                     const Eigen::MatrixXd& V,
                                     const MaslovOptions& opt = {});

/// Crossing form Gamma(l1, l2, t) = Q(l1, l1dot) - Q(l2, l2dot) restricted
/// to l1(t) ∩ l2(t).
Crossing crossing_form(const LagrangianPath& l1, const LagrangianPath& l2,
                       double t, const MaslovOptions& opt = {});

/// Cappell-Lee-Miller index of the pair (l1(t), l2(t)), t in [a, b]:
///   n_+(Gamma(l2,l1,a)) + sum over interior crossings of sgn(Gamma(l2,l1,t))
///   - n_-(Gamma(l2,l1,b)).
/// Irregular interior crossings trigger the perturbation fallback; if two
/// independent perturbed runs disagree, throws.
int clm_index(const LagrangianPath& l1, const LagrangianPath& l2,
              const MaslovOptions& opt = {});

/// CLM index against a fixed first Lagrangian.
int clm_index_fixed(const LagrangianFrame& L0, const LagrangianPath& l2,
                    const MaslovOptions& opt = {});

/// Constant path at a frame.
LagrangianPath constant_path(double a, double b, const LagrangianFrame& L);

/// Crossing table as CSV (t, kernel_dim, n_plus, n_minus, n_zero, regular).
std::string crossings_csv(const std::vector<Crossing>& crossings);

}  // namespace graphindex
