#pragma once

#include <Eigen/Dense>

namespace graphindex {

// Scale-invariant rank cutoff: singular values below kRankTol * sigma_max
// count as zero.
inline constexpr double kRankTol = 1e-8;
// Principal angles with cosine above 1 - kAngleTol count as intersection
// directions.
inline constexpr double kAngleTol = 1e-10;

/// Orthonormal basis of the column span of A (rank-revealing SVD).
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& A,
                                  double rank_tol = kRankTol);

/// Orthonormal basis of the orthogonal complement of span(B) in R^n.
Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& B, int ambient);

/// dim(span(B1) ∩ span(B2)) via principal angles. Inputs must have
/// orthonormal columns.
int subspace_intersection_dim(const Eigen::MatrixXd& B1,
                              const Eigen::MatrixXd& B2,
                              double angle_tol = kAngleTol);

/// Orthonormal basis of span(B1) ∩ span(B2).
Eigen::MatrixXd subspace_intersection(const Eigen::MatrixXd& B1,
                                      const Eigen::MatrixXd& B2,
                                      double angle_tol = kAngleTol);

/// Orthonormal basis of span(B1) + span(B2).
Eigen::MatrixXd subspace_sum(const Eigen::MatrixXd& B1,
                             const Eigen::MatrixXd& B2);

/// Operator-norm distance between orthogonal projectors, ||P_U - P_V||.
/// Symmetric, zero iff equal subspaces, always <= 1 for subspaces of equal
/// dimension (and <= 1 in general).
double gap_distance(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V);

/// Cosines of the principal angles between span(B1) and span(B2), sorted
/// descending (singular values of B1^T B2).
Eigen::VectorXd principal_angle_cosines(const Eigen::MatrixXd& B1,
                                        const Eigen::MatrixXd& B2);

}  // namespace graphindex
