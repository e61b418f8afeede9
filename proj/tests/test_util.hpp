#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "graphindex/symplectic.hpp"

namespace graphindex::testing {

// Random Lagrangian frame of the standard 2n space, drawn uniformly from the
// unitary-symplectic orbit of the Dirichlet plane: with (p, q) <-> p + i q,
// a complex unitary U = X + iY maps L_D to the span of [X; Y].
inline LagrangianFrame random_lagrangian(const SymplecticForm& space,
                                         std::mt19937_64& rng) {
  const int n = space.half_dim();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      G(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
  Eigen::MatrixXcd U = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXd cols(2 * n, n);
  // standard(n) puts all momenta first, then all configurations
  cols.topRows(n) = U.real();
  cols.bottomRows(n) = U.imag();
  return LagrangianFrame(space, cols);
}

inline Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng,
                                        double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
  return 0.5 * (A + A.transpose());
}

}  // namespace graphindex::testing
