#include "graphindex/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphindex {

namespace {

// 4-point Gauss-Legendre on [0, 1]
constexpr double kGaussX[4] = {0.06943184420297371, 0.33000947820757187,
                               0.6699905217924281, 0.9305681557970263};
constexpr double kGaussW[4] = {0.17392742256872693, 0.32607257743127305,
                               0.32607257743127305, 0.17392742256872693};

// cubic Hermite shape functions on the unit element, value and d/dx
void hermite(double x, double h, double* H, double* dH) {
  const double x2 = x * x, x3 = x2 * x;
  H[0] = 1 - 3 * x2 + 2 * x3;
  H[1] = h * (x - 2 * x2 + x3);
  H[2] = 3 * x2 - 2 * x3;
  H[3] = h * (-x2 + x3);
  dH[0] = (-6 * x + 6 * x2) / h;
  dH[1] = 1 - 4 * x + 3 * x2;
  dH[2] = (6 * x - 6 * x2) / h;
  dH[3] = -2 * x + 3 * x2;
}

struct Layout {
  int d = 1;
  int elements = 0;
  std::vector<int> edge_offset;  // DOF offset per edge
  int total = 0;

  int node_dof(int edge, int node, int comp, bool deriv) const {
    return edge_offset[edge] + node * 2 * d + (deriv ? d : 0) + comp;
  }
};

Layout make_layout(const MetricGraph& g, int elements) {
  Layout lay;
  lay.d = g.fiber_dim();
  lay.elements = elements;
  int off = 0;
  for (size_t j = 0; j < g.edges().size(); ++j) {
    lay.edge_offset.push_back(off);
    off += (elements + 1) * 2 * lay.d;
  }
  lay.total = off;
  return lay;
}

}  // namespace

DiscretizedOperator assemble(const MetricGraph& g, const SLCoefficients& c,
                             const LagrangianFrame& lambda, double s,
                             const SpectralOptions& opt) {
  if (!g.compact())
    throw std::invalid_argument(
        "assemble: graph has half-line edges; truncate first");
  const int d = g.fiber_dim();
  SymplecticForm sp = boundary_space(g);
  if (!lambda.space().same_space(sp))
    throw std::invalid_argument("assemble: lambda not in boundary space");

  Layout lay = make_layout(g, opt.mesh_n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(lay.total, lay.total);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(lay.total, lay.total);

  for (size_t j = 0; j < g.edges().size(); ++j) {
    const Edge& e = g.edges()[j];
    const EdgeCoefficients& ce = c.edge(static_cast<int>(j));
    const double h = (e.b - e.a) / opt.mesh_n;
    for (int el = 0; el < opt.mesh_n; ++el) {
      const double t0 = e.a + el * h;
      Eigen::MatrixXd Ael = Eigen::MatrixXd::Zero(4 * d, 4 * d);
      Eigen::MatrixXd Mel = Eigen::MatrixXd::Zero(4 * d, 4 * d);
      for (int gq = 0; gq < 4; ++gq) {
        double H[4], dH[4];
        hermite(kGaussX[gq], h, H, dH);
        const double t = t0 + kGaussX[gq] * h;
        const double w = kGaussW[gq] * h;
        Eigen::MatrixXd P = ce.P(t);
        Eigen::MatrixXd Q = ce.Q(t);
        Eigen::MatrixXd R = ce.effective_R(t, s);
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            Eigen::MatrixXd blk =
                w * (dH[a] * dH[b] * P + dH[a] * H[b] * Q +
                     H[a] * dH[b] * Q.transpose() + H[a] * H[b] * R);
            Ael.block(a * d, b * d, d, d) += blk;
            Mel.block(a * d, b * d, d, d) +=
                (w * H[a] * H[b]) * Eigen::MatrixXd::Identity(d, d);
          }
      }
      // scatter: local a = 0..3 -> (node, deriv)
      int rows[4] = {0, 0, 0, 0};
      for (int a = 0; a < 4; ++a)
        rows[a] = lay.node_dof(static_cast<int>(j), el + (a / 2),
                               0, (a % 2) == 1);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          A.block(rows[a], rows[b], d, d) += Ael.block(a * d, b * d, d, d);
          M.block(rows[a], rows[b], d, d) += Mel.block(a * d, b * d, d, d);
        }
    }
  }

  DiscretizedOperator op;
  op.total_dofs = lay.total;
  op.elements_per_edge = opt.mesh_n;
  op.asym_residual = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (op.asym_residual > 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()))
    throw std::runtime_error("assemble: stiffness asymmetry beyond tolerance");
  A = 0.5 * (A + A.transpose()).eval();

  // boundary configuration DOFs in block order (a-endpoints then b's)
  const int K = sp.half_dim();
  std::vector<int> bidx;
  for (int blk = 0; blk < g.m_a() + g.m_b(); ++blk) {
    const EndpointRef& ep = g.endpoint_of_block(blk);
    for (int i = 0; i < d; ++i)
      bidx.push_back(lay.node_dof(ep.edge_index, ep.is_b ? opt.mesh_n : 0, i,
                                  false));
  }
  std::vector<char> is_b(lay.total, 0);
  for (int i : bidx) is_b[i] = 1;
  std::vector<int> iidx;
  for (int i = 0; i < lay.total; ++i)
    if (!is_b[i]) iidx.push_back(i);

  // admissible configuration traces and the boundary correction
  Eigen::MatrixXd q_proj = sp.extract_config(lambda.basis());
  Eigen::MatrixXd X = orthonormal_basis(q_proj);
  const int r = static_cast<int>(X.cols());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(r, r);
  if (r > 0) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(q_proj);
    Eigen::MatrixXd y = cod.solve(X);
    Eigen::MatrixXd Pq = sp.extract_momentum(lambda.basis() * y);
    Eigen::VectorXd signs(K);
    {
      int row = 0;
      for (const auto& blk : sp.blocks()) {
        signs.segment(row, blk.d).setConstant(blk.sign);
        row += blk.d;
      }
    }
    T = Pq.transpose() * signs.asDiagonal() * X;
    const double asym = (T - T.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-7 * std::max(1.0, T.cwiseAbs().maxCoeff()))
      throw std::runtime_error(
          "assemble: boundary condition yields a non-symmetric correction");
    T = 0.5 * (T + T.transpose()).eval();
  }
  op.config_rank = r;

  const int ni = static_cast<int>(iidx.size());
  const int nred = r + ni;
  if (nred == 0) throw std::invalid_argument("assemble: empty constrained space");
  op.A = Eigen::MatrixXd::Zero(nred, nred);
  op.M = Eigen::MatrixXd::Zero(nred, nred);

  Eigen::MatrixXd Abb(K, K), Abi(K, ni), Aii(ni, ni);
  Eigen::MatrixXd Mbb(K, K), Mbi(K, ni), Mii(ni, ni);
  for (int a = 0; a < K; ++a) {
    for (int b = 0; b < K; ++b) {
      Abb(a, b) = A(bidx[a], bidx[b]);
      Mbb(a, b) = M(bidx[a], bidx[b]);
    }
    for (int b = 0; b < ni; ++b) {
      Abi(a, b) = A(bidx[a], iidx[b]);
      Mbi(a, b) = M(bidx[a], iidx[b]);
    }
  }
  for (int a = 0; a < ni; ++a)
    for (int b = 0; b < ni; ++b) {
      Aii(a, b) = A(iidx[a], iidx[b]);
      Mii(a, b) = M(iidx[a], iidx[b]);
    }

  op.A.topLeftCorner(r, r) = X.transpose() * Abb * X - T;
  op.A.topRightCorner(r, ni) = X.transpose() * Abi;
  op.A.bottomLeftCorner(ni, r) = op.A.topRightCorner(r, ni).transpose();
  op.A.bottomRightCorner(ni, ni) = Aii;
  op.M.topLeftCorner(r, r) = X.transpose() * Mbb * X;
  op.M.topRightCorner(r, ni) = X.transpose() * Mbi;
  op.M.bottomLeftCorner(ni, r) = op.M.topRightCorner(r, ni).transpose();
  op.M.bottomRightCorner(ni, ni) = Mii;

  op.boundary_dofs = std::move(bidx);
  op.interior_dofs = std::move(iidx);
  op.X = std::move(X);
  return op;
}

Eigen::VectorXd DiscretizedOperator::to_full(
    const Eigen::VectorXd& reduced) const {
  const int r = config_rank;
  Eigen::VectorXd full = Eigen::VectorXd::Zero(total_dofs);
  Eigen::VectorXd b = X * reduced.head(r);
  for (size_t k = 0; k < boundary_dofs.size(); ++k)
    full(boundary_dofs[k]) = b(static_cast<int>(k));
  for (size_t k = 0; k < interior_dofs.size(); ++k)
    full(interior_dofs[k]) = reduced(r + static_cast<int>(k));
  return full;
}

Eigen::VectorXd eigenvalues(const DiscretizedOperator& op, int k) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(op.A, op.M);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigenvalues: generalized eigensolver failed");
  const int kk = std::min<int>(k, static_cast<int>(es.eigenvalues().size()));
  // residual check on the reported pairs
  const double anorm = op.A.cwiseAbs().maxCoeff();
  const double mnorm = op.M.cwiseAbs().maxCoeff();
  for (int i = 0; i < kk; ++i) {
    const double lam = es.eigenvalues()(i);
    Eigen::VectorXd v = es.eigenvectors().col(i);
    const double res = (op.A * v - lam * op.M * v).norm();
    if (res > 1e-8 * (anorm + std::abs(lam) * mnorm) * v.norm())
      throw std::runtime_error("eigenvalues: residual check failed");
  }
  return es.eigenvalues().head(kk);
}

MorseResult morse_count(const DiscretizedOperator& op,
                        const SpectralOptions& opt) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      op.A, op.M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("morse_count: eigensolver failed");
  MorseResult out;
  out.mesh_used = op.elements_per_edge;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam < -opt.eps_kernel) ++out.index;
    if (std::abs(lam) <= 10.0 * opt.eps_kernel) {
      out.degenerate = true;
      out.near_zero.push_back(lam);
    }
  }
  return out;
}

MorseResult morse_index(const MetricGraph& g, const SLCoefficients& c,
                        const LagrangianFrame& lambda, double s,
                        const SpectralOptions& opt) {
  SpectralOptions o = opt;
  MorseResult prev;
  bool have_prev = false;
  for (int ref = 0; ref <= opt.max_refinements; ++ref) {
    MorseResult cur = morse_count(assemble(g, c, lambda, s, o), o);
    if (have_prev && cur.index == prev.index) {
      cur.degenerate = cur.degenerate || prev.degenerate;
      return cur;
    }
    prev = cur;
    have_prev = true;
    o.mesh_n *= 2;
  }
  throw std::runtime_error(
      "morse_index: count did not stabilize under mesh refinement");
}

SpectralFlowResult spectral_flow(const MetricGraph& g, const SLCoefficients& c,
                                 const LagrangianFrame& lambda, double s0,
                                 double s1, const SpectralOptions& opt) {
  auto count = [&](double s) {
    return morse_count(assemble(g, c, lambda, s, opt), opt);
  };
  SpectralFlowResult out;
  const int n = std::max(3, opt.s_samples);
  std::vector<double> ss(n);
  std::vector<int> cc(n);
  for (int i = 0; i < n; ++i) {
    ss[i] = s0 + (s1 - s0) * i / double(n - 1);
    MorseResult m = count(ss[i]);
    cc[i] = m.index;
    if ((i == 0 || i == n - 1) && m.degenerate) out.endpoint_degenerate = true;
  }
  out.sf = cc.front() - cc.back();
  // localize the instants where the count moves
  const double tol = opt.s_locate_tol * std::abs(s1 - s0);
  for (int i = 0; i + 1 < n; ++i) {
    double lo = ss[i], hi = ss[i + 1];
    int clo = cc[i], chi = cc[i + 1];
    if (clo == chi) continue;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      const int cmid = count(mid).index;
      if (cmid != clo) {
        hi = mid;
        chi = cmid;
      } else {
        lo = mid;
      }
    }
    for (int k = 0; k < std::abs(chi - clo); ++k)
      out.crossings.push_back(0.5 * (lo + hi));
  }
  return out;
}

TruncatedProblem truncate_halflines(const MetricGraph& g,
                                    const SLCoefficients& c,
                                    const LagrangianFrame& lambda, double s,
                                    double horizon,
                                    const SpectralOptions& opt) {
  const int d = g.fiber_dim();
  std::vector<Vertex> vs;
  for (const auto& v : g.vertices())
    if (!v.at_infinity) vs.push_back(v);
  std::vector<Edge> es = g.edges();
  std::vector<std::pair<int, Eigen::MatrixXd>> new_conditions;  // edge, W
  for (size_t j = 0; j < es.size(); ++j) {
    Edge& e = es[j];
    if (e.kind == IntervalKind::Bounded) continue;
    // condition at the horizon endpoint: the stable data of the limit
    // system (the cut happens at the far end, past the varying prefix)
    const bool right = (e.kind == IntervalKind::RightHalfLine);
    const EdgeCoefficients& ce = c.edge(static_cast<int>(j));
    EdgeCoefficients limit;
    limit.P = MatrixFn::constant(ce.P.asymptotic_value(right));
    limit.Q = MatrixFn::constant(ce.Q.asymptotic_value(right));
    limit.R = MatrixFn::constant(ce.R.asymptotic_value(right) +
                                 ce.C0.asymptotic_value(right) +
                                 s * ce.C1.asymptotic_value(right));
    limit.C0 = MatrixFn::zero(d);
    limit.C1 = MatrixFn::zero(d);
    Edge fake = e;  // constant coefficients: no transport happens
    LagrangianFrame winf = stable_subspace(limit, fake, s, opt.flow);

    const std::string nv = "cut" + std::to_string(e.id);
    vs.push_back({nv, false});
    if (e.kind == IntervalKind::RightHalfLine) {
      e.kind = IntervalKind::Bounded;
      e.b = e.a + horizon;
      e.head = nv;
    } else {
      e.kind = IntervalKind::Bounded;
      e.a = e.b - horizon;
      e.tail = nv;
    }
    new_conditions.push_back({static_cast<int>(j), winf.basis()});
  }
  MetricGraph gt(vs, es, d);
  SymplecticForm spt = boundary_space(gt);

  // scatter the old Lagrangian into the new block layout
  SymplecticForm spo = boundary_space(g);
  Eigen::MatrixXd cols = Eigen::MatrixXd::Zero(
      spt.dim(), spt.half_dim());
  int col = 0;
  const Eigen::MatrixXd& old_basis = lambda.basis();
  for (int cidx = 0; cidx < old_basis.cols(); ++cidx, ++col) {
    for (int blk = 0; blk < g.m_a() + g.m_b(); ++blk) {
      const EndpointRef& ep = g.endpoint_of_block(blk);
      const int nblk = gt.block_of(ep.edge_index, ep.is_b);
      cols.block(spt.block_offset(nblk), col, 2 * d, 1) =
          old_basis.block(spo.block_offset(blk), cidx, 2 * d, 1);
    }
  }
  for (const auto& [eidx, W] : new_conditions) {
    const Edge& e = es[eidx];
    const bool is_b = (g.edges()[eidx].kind == IntervalKind::RightHalfLine);
    (void)e;
    const int nblk = gt.block_of(eidx, is_b);
    cols.block(spt.block_offset(nblk), col, 2 * d, W.cols()) = W;
    col += static_cast<int>(W.cols());
  }
  LagrangianFrame lt(spt, cols);
  return TruncatedProblem{std::move(gt), c, std::move(lt)};
}

}  // namespace graphindex
