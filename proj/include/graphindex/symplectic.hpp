#pragma once

#include <Eigen/Dense>
#include <vector>

#include "graphindex/subspace.hpp"

namespace graphindex {

// Zero threshold for inertia counts, relative to ||Q||.
inline constexpr double kInertiaTol = 1e-9;
// Absolute floor for the inertia threshold; matrices that are pure roundoff
// noise must count as zero.
inline constexpr double kInertiaFloor = 1e-12;
// Acceptance tolerance for isotropy / symplecticity residuals.
inline constexpr double kSymplTol = 1e-9;
inline constexpr double kIsotropyTol = 1e-7;

/// One direct summand of a signed symplectic form: a standard 2d-dimensional
/// block carrying the form sign * Omega.
struct SymplecticBlock {
  int d;     // half dimension of the block
  int sign;  // +1 or -1
};

/// Finite-dimensional symplectic space given as a direct sum of signed
/// standard blocks. Coordinates inside block i are ordered (p_i, q_i), with
/// omega(x, y) = <J x, y> and J = ⊕ sign_i * [[0, -I], [I, 0]].
class SymplecticForm {
 public:
  explicit SymplecticForm(std::vector<SymplecticBlock> blocks);

  /// Single standard block of half dimension n, sign +1.
  static SymplecticForm standard(int n);

  int dim() const { return 2 * n_; }
  int half_dim() const { return n_; }
  const std::vector<SymplecticBlock>& blocks() const { return blocks_; }

  /// The orthogonal complex structure: omega(x, y) = <J x, y>, J^2 = -I.
  const Eigen::MatrixXd& complex_structure() const { return J_; }
  /// Matrix A of the bilinear form: omega(x, y) = x^T A y (A = J^T).
  Eigen::MatrixXd form_matrix() const { return J_.transpose(); }

  double omega(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  /// Pairing matrix G with G(i,j) = omega(B1.col(i), B2.col(j)).
  Eigen::MatrixXd omega_pairing(const Eigen::MatrixXd& B1,
                                const Eigen::MatrixXd& B2) const;

  /// Start offset of block i in the full coordinate vector.
  int block_offset(int i) const { return offsets_[i]; }

  // The configuration factor stacks the q halves of all blocks; its
  // dimension equals half_dim(). embed_config maps a configuration vector
  // (or a matrix of column vectors) into the full space; embed_momentum
  // fills the p slots instead.
  Eigen::MatrixXd embed_config(const Eigen::MatrixXd& Q) const;
  Eigen::MatrixXd embed_momentum(const Eigen::MatrixXd& P) const;
  /// Extract the stacked configuration components of full-space columns.
  Eigen::MatrixXd extract_config(const Eigen::MatrixXd& X) const;
  Eigen::MatrixXd extract_momentum(const Eigen::MatrixXd& X) const;

  bool same_space(const SymplecticForm& other) const;

 private:
  std::vector<SymplecticBlock> blocks_;
  std::vector<int> offsets_;
  int n_ = 0;           // half dimension
  Eigen::MatrixXd J_;   // complex structure
};

/// A Lagrangian subspace represented by a 2n x n matrix with orthonormal
/// columns. Frames are non-unique; subspace equality is always tested
/// through gap_distance.
class LagrangianFrame {
 public:
  LagrangianFrame(SymplecticForm space, const Eigen::MatrixXd& span_candidate);

  const SymplecticForm& space() const { return space_; }
  const Eigen::MatrixXd& basis() const { return basis_; }
  double isotropy_residual() const { return isotropy_residual_; }

 private:
  SymplecticForm space_;
  Eigen::MatrixXd basis_;
  double isotropy_residual_ = 0.0;
};

/// Signature data of a symmetric matrix at threshold eps0 = kInertiaTol*||Q||.
struct Inertia {
  int n_plus = 0;
  int n_minus = 0;
  int n_zero = 0;
  bool borderline = false;  // some eigenvalue within 10x of the threshold

  int signature() const { return n_plus - n_minus; }
  int dim() const { return n_plus + n_minus + n_zero; }
};

Inertia inertia(const Eigen::MatrixXd& Q, double asym_tol = 1e-8);

/// The quadratic form Q(alpha, beta; gamma)[u] = omega(u, Cu) with
/// u + Cu in gamma, Cu in beta, computed on a basis of alpha ∩ (beta+gamma).
struct QFormResult {
  Eigen::MatrixXd domain;  // orthonormal basis of alpha ∩ (beta + gamma)
  Eigen::MatrixXd matrix;  // symmetric matrix of Q on that basis
  double asymmetry = 0.0;  // symmetrization residual
};

QFormResult q_form(const LagrangianFrame& alpha, const LagrangianFrame& beta,
                   const LagrangianFrame& gamma);

/// Cross-check route: same form computed after symplectic reduction by
/// eps = alpha∩beta + beta∩gamma.
QFormResult q_form_reduced(const LagrangianFrame& alpha,
                           const LagrangianFrame& beta,
                           const LagrangianFrame& gamma);

/// N*(W) = J(config(W_perp)) ⊕ config(W) for a subspace W of the
/// configuration factor; W given by a half_dim x k matrix (k may be 0).
LagrangianFrame conormal_lagrangian(const SymplecticForm& space,
                                    const Eigen::MatrixXd& W);

/// Dirichlet Lagrangian (all configuration traces zero, momenta free).
LagrangianFrame dirichlet_lagrangian(const SymplecticForm& space);
/// Neumann Lagrangian (all momenta zero).
LagrangianFrame neumann_lagrangian(const SymplecticForm& space);

/// Graph of a symplectic matrix M inside a two-block space with opposite
/// signs: {(z, Mz)}. Throws if ||M^T J M - J|| exceeds tol.
LagrangianFrame graph_lagrangian(const SymplecticForm& space,
                                 const Eigen::MatrixXd& M,
                                 double tol = kSymplTol);

int intersection_dim(const LagrangianFrame& L1, const LagrangianFrame& L2);
Eigen::MatrixXd intersection_basis(const LagrangianFrame& L1,
                                   const LagrangianFrame& L2);
double gap_distance(const LagrangianFrame& L1, const LagrangianFrame& L2);

/// Triple index ι(α,β,γ) = n_+ Q(α,β;γ) + dim(α∩γ) − dim(α∩β∩γ).
int triple_index(const LagrangianFrame& alpha, const LagrangianFrame& beta,
                 const LagrangianFrame& gamma);

/// Hörmander index s(l1, l2; m1, m2) = ι(l1,l2,m2) − ι(l1,l2,m1).
/// Also evaluates ι(l1,m1,m2) − ι(l2,m1,m2) and throws on disagreement.
int hormander_index(const LagrangianFrame& l1, const LagrangianFrame& l2,
                    const LagrangianFrame& m1, const LagrangianFrame& m2);

/// Symplectic reduction data for an isotropic subspace eps: the reduced
/// space eps^omega / eps expressed in a computed symplectic basis.
struct SymplecticReduction {
  SymplecticForm reduced_space;
  Eigen::MatrixXd eps;         // orthonormal basis of eps
  Eigen::MatrixXd complement;  // orthonormal basis of eps^omega ∩ eps^perp
  Eigen::MatrixXd sympl_basis; // standardizing basis S inside the complement

  /// Map full-space vectors to reduced standard coordinates.
  Eigen::MatrixXd to_reduced(const Eigen::MatrixXd& X) const;

  SymplecticReduction(SymplecticForm space, Eigen::MatrixXd e,
                      Eigen::MatrixXd c, Eigen::MatrixXd s)
      : reduced_space(std::move(space)), eps(std::move(e)),
        complement(std::move(c)), sympl_basis(std::move(s)) {}
};

SymplecticReduction make_reduction(const SymplecticForm& space,
                                   const Eigen::MatrixXd& eps);

/// ((L ∩ eps^omega) + eps) / eps as a Lagrangian frame of the reduced space.
LagrangianFrame symplectic_reduce(const LagrangianFrame& L,
                                  const Eigen::MatrixXd& eps);
LagrangianFrame symplectic_reduce(const SymplecticReduction& red,
                                  const LagrangianFrame& L);

}  // namespace graphindex
