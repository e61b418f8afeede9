#include "graphindex/subspace.hpp"

#include <stdexcept>

namespace graphindex {

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& A, double rank_tol) {
  if (A.cols() == 0) return Eigen::MatrixXd(A.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return Eigen::MatrixXd(A.rows(), 0);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > rank_tol * sv(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& B, int ambient) {
  if (B.cols() == 0) return Eigen::MatrixXd::Identity(ambient, ambient);
  if (B.rows() != ambient)
    throw std::invalid_argument("orthogonal_complement: ambient mismatch");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv(rank) > kRankTol * sv(0)) ++rank;
  return svd.matrixU().rightCols(ambient - rank);
}

Eigen::VectorXd principal_angle_cosines(const Eigen::MatrixXd& B1,
                                        const Eigen::MatrixXd& B2) {
  if (B1.rows() != B2.rows())
    throw std::invalid_argument("principal angles: ambient dimension mismatch");
  if (B1.cols() == 0 || B2.cols() == 0) return Eigen::VectorXd(0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B1.transpose() * B2);
  return svd.singularValues();
}

int subspace_intersection_dim(const Eigen::MatrixXd& B1,
                              const Eigen::MatrixXd& B2, double angle_tol) {
  Eigen::VectorXd c = principal_angle_cosines(B1, B2);
  int dim = 0;
  while (dim < c.size() && c(dim) > 1.0 - angle_tol) ++dim;
  return dim;
}

Eigen::MatrixXd subspace_intersection(const Eigen::MatrixXd& B1,
                                      const Eigen::MatrixXd& B2,
                                      double angle_tol) {
  if (B1.cols() == 0 || B2.cols() == 0)
    return Eigen::MatrixXd(B1.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B1.transpose() * B2,
                                        Eigen::ComputeFullU);
  const auto& c = svd.singularValues();
  int dim = 0;
  while (dim < c.size() && c(dim) > 1.0 - angle_tol) ++dim;
  // B1 * U_k has orthonormal columns and lies in span(B1), within angle_tol
  // of span(B2).
  return B1 * svd.matrixU().leftCols(dim);
}

Eigen::MatrixXd subspace_sum(const Eigen::MatrixXd& B1,
                             const Eigen::MatrixXd& B2) {
  if (B1.cols() == 0) return B2;
  if (B2.cols() == 0) return B1;
  Eigen::MatrixXd stacked(B1.rows(), B1.cols() + B2.cols());
  stacked << B1, B2;
  return orthonormal_basis(stacked);
}

double gap_distance(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V) {
  if (U.rows() != V.rows())
    throw std::invalid_argument("gap_distance: ambient dimension mismatch");
  Eigen::MatrixXd diff = U * U.transpose() - V * V.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace graphindex
