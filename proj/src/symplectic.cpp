#include "graphindex/symplectic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace graphindex {

namespace {

Eigen::MatrixXd standard_J(int d) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  J.topRightCorner(d, d) = -Eigen::MatrixXd::Identity(d, d);
  J.bottomLeftCorner(d, d) = Eigen::MatrixXd::Identity(d, d);
  return J;
}

}  // namespace

SymplecticForm::SymplecticForm(std::vector<SymplecticBlock> blocks)
    : blocks_(std::move(blocks)) {
  if (blocks_.empty())
    throw std::invalid_argument("SymplecticForm: empty block list");
  int off = 0;
  for (const auto& b : blocks_) {
    if (b.d < 1) throw std::invalid_argument("SymplecticForm: block d < 1");
    if (b.sign != 1 && b.sign != -1)
      throw std::invalid_argument("SymplecticForm: sign must be +1 or -1");
    offsets_.push_back(off);
    off += 2 * b.d;
    n_ += b.d;
  }
  J_ = Eigen::MatrixXd::Zero(2 * n_, 2 * n_);
  for (size_t i = 0; i < blocks_.size(); ++i) {
    const int d = blocks_[i].d;
    J_.block(offsets_[i], offsets_[i], 2 * d, 2 * d) =
        blocks_[i].sign * standard_J(d);
  }
}

SymplecticForm SymplecticForm::standard(int n) {
  return SymplecticForm({SymplecticBlock{n, +1}});
}

double SymplecticForm::omega(const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y) const {
  return (J_ * x).dot(y);
}

Eigen::MatrixXd SymplecticForm::omega_pairing(const Eigen::MatrixXd& B1,
                                              const Eigen::MatrixXd& B2) const {
  return (J_ * B1).transpose() * B2;
}

Eigen::MatrixXd SymplecticForm::embed_config(const Eigen::MatrixXd& Q) const {
  if (Q.rows() != n_)
    throw std::invalid_argument("embed_config: expected half_dim rows");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * n_, Q.cols());
  int crow = 0;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    const int d = blocks_[i].d;
    out.middleRows(offsets_[i] + d, d) = Q.middleRows(crow, d);
    crow += d;
  }
  return out;
}

Eigen::MatrixXd SymplecticForm::embed_momentum(const Eigen::MatrixXd& P) const {
  if (P.rows() != n_)
    throw std::invalid_argument("embed_momentum: expected half_dim rows");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * n_, P.cols());
  int crow = 0;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    const int d = blocks_[i].d;
    out.middleRows(offsets_[i], d) = P.middleRows(crow, d);
    crow += d;
  }
  return out;
}

Eigen::MatrixXd SymplecticForm::extract_config(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd out(n_, X.cols());
  int crow = 0;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    const int d = blocks_[i].d;
    out.middleRows(crow, d) = X.middleRows(offsets_[i] + d, d);
    crow += d;
  }
  return out;
}

Eigen::MatrixXd SymplecticForm::extract_momentum(
    const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd out(n_, X.cols());
  int crow = 0;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    const int d = blocks_[i].d;
    out.middleRows(crow, d) = X.middleRows(offsets_[i], d);
    crow += d;
  }
  return out;
}

bool SymplecticForm::same_space(const SymplecticForm& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (size_t i = 0; i < blocks_.size(); ++i)
    if (blocks_[i].d != other.blocks_[i].d ||
        blocks_[i].sign != other.blocks_[i].sign)
      return false;
  return true;
}

LagrangianFrame::LagrangianFrame(SymplecticForm space,
                                 const Eigen::MatrixXd& span_candidate)
    : space_(std::move(space)) {
  if (span_candidate.rows() != space_.dim())
    throw std::invalid_argument("LagrangianFrame: ambient dimension mismatch");
  basis_ = orthonormal_basis(span_candidate);
  if (basis_.cols() != space_.half_dim())
    throw std::invalid_argument(
        "LagrangianFrame: rank " + std::to_string(basis_.cols()) +
        ", expected " + std::to_string(space_.half_dim()));
  isotropy_residual_ =
      basis_.cols() == 0
          ? 0.0
          : space_.omega_pairing(basis_, basis_).cwiseAbs().maxCoeff();
  if (isotropy_residual_ > kIsotropyTol)
    throw std::invalid_argument("LagrangianFrame: isotropy residual " +
                                std::to_string(isotropy_residual_));
}

Inertia inertia(const Eigen::MatrixXd& Q, double asym_tol) {
  Inertia out;
  if (Q.rows() == 0) return out;
  if (Q.rows() != Q.cols())
    throw std::invalid_argument("inertia: matrix not square");
  const double scale = Q.cwiseAbs().maxCoeff();
  const double asym = (Q - Q.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > asym_tol * std::max(1.0, scale))
    throw std::invalid_argument("inertia: matrix asymmetric beyond tolerance");
  Eigen::MatrixXd S = 0.5 * (Q + Q.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  const double eps0 = std::max(kInertiaTol * scale, kInertiaFloor);
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > eps0)
      ++out.n_plus;
    else if (ev < -eps0)
      ++out.n_minus;
    else
      ++out.n_zero;
    // indices are integers; ambiguity must be loud
    if (std::abs(std::abs(ev) - eps0) < 9.0 * eps0) out.borderline = true;
  }
  return out;
}

QFormResult q_form(const LagrangianFrame& alpha, const LagrangianFrame& beta,
                   const LagrangianFrame& gamma) {
  if (!alpha.space().same_space(beta.space()) ||
      !alpha.space().same_space(gamma.space()))
    throw std::invalid_argument("q_form: frames live in different spaces");
  const SymplecticForm& sp = alpha.space();

  QFormResult out;
  Eigen::MatrixXd bg = subspace_sum(beta.basis(), gamma.basis());
  out.domain = subspace_intersection(alpha.basis(), bg);
  const int r = static_cast<int>(out.domain.cols());
  out.matrix = Eigen::MatrixXd::Zero(r, r);
  if (r == 0) return out;

  // Decompose u = g - c with g in gamma, c in beta; then Cu := c and
  // u + Cu = g lies in gamma. Minimum-norm solve keeps the choice
  // deterministic when beta ∩ gamma is nontrivial.
  Eigen::MatrixXd sys(sp.dim(), gamma.basis().cols() + beta.basis().cols());
  sys << gamma.basis(), -beta.basis();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sys);
  Eigen::MatrixXd sol = cod.solve(out.domain);
  Eigen::MatrixXd Cu = beta.basis() * sol.bottomRows(beta.basis().cols());
  const double residual = (sys * sol - out.domain).cwiseAbs().maxCoeff();
  if (residual > 1e-7)
    throw std::runtime_error(
        "q_form: decomposition system rank-deficient, residual " +
        std::to_string(residual));

  Eigen::MatrixXd Q = sp.omega_pairing(out.domain, Cu);
  out.asymmetry = (Q - Q.transpose()).cwiseAbs().maxCoeff();
  out.matrix = 0.5 * (Q + Q.transpose());
  return out;
}

QFormResult q_form_reduced(const LagrangianFrame& alpha,
                           const LagrangianFrame& beta,
                           const LagrangianFrame& gamma) {
  Eigen::MatrixXd ab = intersection_basis(alpha, beta);
  Eigen::MatrixXd bg = intersection_basis(beta, gamma);
  Eigen::MatrixXd eps = subspace_sum(ab, bg);
  if (eps.cols() == 0) return q_form(alpha, beta, gamma);
  if (eps.cols() == alpha.space().half_dim()) return QFormResult{};
  SymplecticReduction red = make_reduction(alpha.space(), eps);
  return q_form(symplectic_reduce(red, alpha), symplectic_reduce(red, beta),
                symplectic_reduce(red, gamma));
}

LagrangianFrame conormal_lagrangian(const SymplecticForm& space,
                                    const Eigen::MatrixXd& W) {
  const int n = space.half_dim();
  if (W.rows() != n && !(W.size() == 0))
    throw std::invalid_argument(
        "conormal_lagrangian: W must live in the configuration factor");
  Eigen::MatrixXd Wb = (W.size() == 0) ? Eigen::MatrixXd(n, 0)
                                       : orthonormal_basis(W);
  Eigen::MatrixXd Wperp = orthogonal_complement(Wb, n);
  Eigen::MatrixXd cols(2 * n, n);
  cols << space.complex_structure() * space.embed_config(Wperp),
      space.embed_config(Wb);
  return LagrangianFrame(space, cols);
}

LagrangianFrame dirichlet_lagrangian(const SymplecticForm& space) {
  return conormal_lagrangian(space,
                             Eigen::MatrixXd(space.half_dim(), 0));
}

LagrangianFrame neumann_lagrangian(const SymplecticForm& space) {
  return conormal_lagrangian(
      space, Eigen::MatrixXd::Identity(space.half_dim(), space.half_dim()));
}

LagrangianFrame graph_lagrangian(const SymplecticForm& space,
                                 const Eigen::MatrixXd& M, double tol) {
  if (space.blocks().size() != 2 ||
      space.blocks()[0].d != space.blocks()[1].d ||
      space.blocks()[0].sign + space.blocks()[1].sign != 0)
    throw std::invalid_argument(
        "graph_lagrangian: space must be two equal blocks of opposite sign");
  const int d = space.blocks()[0].d;
  if (M.rows() != 2 * d || M.cols() != 2 * d)
    throw std::invalid_argument("graph_lagrangian: M must be 2d x 2d");
  Eigen::MatrixXd J = standard_J(d);
  const double res = (M.transpose() * J * M - J).cwiseAbs().maxCoeff();
  if (res > tol)
    throw std::invalid_argument("graph_lagrangian: M not symplectic, ||M^T J M - J|| = " +
                                std::to_string(res));
  Eigen::MatrixXd cols(4 * d, 2 * d);
  cols.topRows(2 * d) = Eigen::MatrixXd::Identity(2 * d, 2 * d);
  cols.bottomRows(2 * d) = M;
  return LagrangianFrame(space, cols);
}

int intersection_dim(const LagrangianFrame& L1, const LagrangianFrame& L2) {
  if (!L1.space().same_space(L2.space()))
    throw std::invalid_argument("intersection_dim: space mismatch");
  return subspace_intersection_dim(L1.basis(), L2.basis());
}

Eigen::MatrixXd intersection_basis(const LagrangianFrame& L1,
                                   const LagrangianFrame& L2) {
  return subspace_intersection(L1.basis(), L2.basis());
}

double gap_distance(const LagrangianFrame& L1, const LagrangianFrame& L2) {
  return gap_distance(L1.basis(), L2.basis());
}

int triple_index(const LagrangianFrame& alpha, const LagrangianFrame& beta,
                 const LagrangianFrame& gamma) {
  QFormResult q = q_form(alpha, beta, gamma);
  Inertia in = inertia(q.matrix);
  Eigen::MatrixXd ag = intersection_basis(alpha, gamma);
  const int dim_ag = static_cast<int>(ag.cols());
  const int dim_abg = subspace_intersection_dim(ag, beta.basis());
  return in.n_plus + dim_ag - dim_abg;
}

int hormander_index(const LagrangianFrame& l1, const LagrangianFrame& l2,
                    const LagrangianFrame& m1, const LagrangianFrame& m2) {
  const int s12 = triple_index(l1, l2, m2) - triple_index(l1, l2, m1);
  const int s34 = triple_index(l1, m1, m2) - triple_index(l2, m1, m2);
  if (s12 != s34)
    throw std::runtime_error(
        "hormander_index: the two triple-index expressions disagree (" +
        std::to_string(s12) + " vs " + std::to_string(s34) + ")");
  return s12;
}

SymplecticReduction make_reduction(const SymplecticForm& space,
                                   const Eigen::MatrixXd& eps_in) {
  Eigen::MatrixXd eps = orthonormal_basis(eps_in);
  if (eps.rows() != space.dim())
    throw std::invalid_argument("make_reduction: ambient mismatch");
  const double iso = space.omega_pairing(eps, eps).cwiseAbs().maxCoeff();
  if (eps.cols() > 0 && iso > kIsotropyTol)
    throw std::invalid_argument("make_reduction: eps not isotropic, residual " +
                                std::to_string(iso));
  // eps^omega = ker(eps^T A), A the form matrix.
  Eigen::MatrixXd constraints =
      (space.form_matrix().transpose() * eps);  // columns A^T e_i
  Eigen::MatrixXd eps_om = orthogonal_complement(constraints, space.dim());
  // complement of eps inside eps^omega
  Eigen::MatrixXd proj = eps_om - eps * (eps.transpose() * eps_om);
  Eigen::MatrixXd C = orthonormal_basis(proj);
  const int twok = static_cast<int>(C.cols());
  if (twok % 2 != 0)
    throw std::runtime_error("make_reduction: odd reduced dimension");
  const int k = twok / 2;

  // Symplectic Gram-Schmidt with pivoting on the reduced form matrix.
  Eigen::MatrixXd A = C.transpose() * space.form_matrix() * C;
  std::vector<Eigen::VectorXd> pool;
  for (int i = 0; i < twok; ++i)
    pool.push_back(Eigen::VectorXd::Unit(twok, i));
  Eigen::MatrixXd S(twok, twok);
  for (int pair = 0; pair < k; ++pair) {
    double best = -1.0;
    size_t bi = 0, bj = 0;
    for (size_t i = 0; i < pool.size(); ++i)
      for (size_t j = i + 1; j < pool.size(); ++j) {
        const double w = std::abs(pool[i].dot(A * pool[j]));
        if (w > best) { best = w; bi = i; bj = j; }
      }
    if (best <= 0.0)
      throw std::runtime_error("make_reduction: degenerate reduced form");
    Eigen::VectorXd e = pool[bi].normalized();
    Eigen::VectorXd f = pool[bj] / e.dot(A * pool[bj]);
    S.col(pair) = e;
    S.col(k + pair) = f;
    std::vector<Eigen::VectorXd> next;
    for (size_t i = 0; i < pool.size(); ++i) {
      if (i == bi || i == bj) continue;
      Eigen::VectorXd v = pool[i];
      v -= e.dot(A * v) * f;
      v += f.dot(A * v) * e;
      next.push_back(v);
    }
    pool.swap(next);
  }
  if (k == 0)
    throw std::invalid_argument(
        "make_reduction: eps is Lagrangian, reduced space is trivial");
  return SymplecticReduction(SymplecticForm::standard(k), eps, C, S);
}

Eigen::MatrixXd SymplecticReduction::to_reduced(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd Y = complement.transpose() * X;
  return sympl_basis.partialPivLu().solve(Y);
}

LagrangianFrame symplectic_reduce(const SymplecticReduction& red,
                                  const LagrangianFrame& L) {
  // (L ∩ eps^omega) + eps, then quotient by eps via the complement chart.
  Eigen::MatrixXd eps_om =
      subspace_sum(red.complement, red.eps);  // == eps^omega
  Eigen::MatrixXd cap = subspace_intersection(L.basis(), eps_om);
  Eigen::MatrixXd reduced = red.to_reduced(cap);
  Eigen::MatrixXd basis = orthonormal_basis(reduced);
  return LagrangianFrame(red.reduced_space, basis);
}

LagrangianFrame symplectic_reduce(const LagrangianFrame& L,
                                  const Eigen::MatrixXd& eps) {
  if (eps.cols() == 0) return L;
  SymplecticReduction red = make_reduction(L.space(), eps);
  return symplectic_reduce(red, L);
}

}  // namespace graphindex
