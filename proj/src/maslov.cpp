#include "graphindex/maslov.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace graphindex {

namespace {

// sin of the smallest principal angle between the two subspaces: the
// smallest singular value of the omega-pairing of the frames. Vanishes
// linearly in t at a regular crossing, which keeps the localization
// well-conditioned.
double separation(const SymplecticForm& sp, const Eigen::MatrixXd& B1,
                  const Eigen::MatrixXd& B2) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sp.omega_pairing(B1, B2));
  return svd.singularValues().minCoeff();
}

struct GridPoint {
  double t;
  LagrangianFrame f1;
  LagrangianFrame f2;
  double sep;
};

// Sampled pair with the resolution contract enforced: consecutive frames of
// either path closer than gap 0.5.
std::vector<GridPoint> sample_pair(const LagrangianPath& l1,
                                   const LagrangianPath& l2, int n_samples) {
  const SymplecticForm sp = l1(l1.a).space();
  auto make_point = [&](double t) {
    LagrangianFrame a = l1(t);
    LagrangianFrame b = l2(t);
    double s = separation(sp, a.basis(), b.basis());
    return GridPoint{t, std::move(a), std::move(b), s};
  };
  std::vector<GridPoint> grid;
  grid.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    double t = l1.a + (l1.b - l1.a) * i / double(n_samples - 1);
    grid.push_back(make_point(t));
  }
  for (int pass = 0; pass < 8; ++pass) {
    bool refined = false;
    std::vector<GridPoint> next;
    next.reserve(grid.size() * 2);
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
      next.push_back(grid[i]);
      const double g = std::max(
          gap_distance(grid[i].f1.basis(), grid[i + 1].f1.basis()),
          gap_distance(grid[i].f2.basis(), grid[i + 1].f2.basis()));
      if (g >= 0.5) {
        next.push_back(make_point(0.5 * (grid[i].t + grid[i + 1].t)));
        refined = true;
      }
    }
    next.push_back(grid.back());
    grid.swap(next);
    if (!refined) break;
  }
  return grid;
}

// golden-section minimization of the separation on [lo, hi]
double minimize_separation(const SymplecticForm& sp, const LagrangianPath& l1,
                           const LagrangianPath& l2, double lo, double hi,
                           double t_tol) {
  auto eval = [&](double t) {
    return separation(sp, l1(t).basis(), l2(t).basis());
  };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = eval(x1), f2 = eval(x2);
  while (hi - lo > t_tol) {
    if (f1 <= f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - phi * (hi - lo); f1 = eval(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + phi * (hi - lo); f2 = eval(x2);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<Crossing> detect_crossings(const LagrangianPath& l1,
                                       const LagrangianPath& l2,
                                       const MaslovOptions& opt) {
  if (std::abs(l1.a - l2.a) > 0 || std::abs(l1.b - l2.b) > 0)
    throw std::invalid_argument("detect_crossings: paths must share interval");
  const double len = l1.b - l1.a;
  if (!(len > 0)) throw std::invalid_argument("detect_crossings: empty interval");
  const double t_tol = opt.t_tol_rel * len;
  const SymplecticForm sp = l1(l1.a).space();

  std::vector<GridPoint> grid = sample_pair(l1, l2, opt.initial_samples);

  std::vector<double> locs;
  // endpoints first
  if (grid.front().sep < opt.crossing_tol) locs.push_back(l1.a);
  if (grid.back().sep < opt.crossing_tol) locs.push_back(l1.b);
  auto probe_window = [&](double lo, double hi) {
    double t = minimize_separation(sp, l1, l2, lo, hi, t_tol);
    double s = separation(sp, l1(t).basis(), l2(t).basis());
    if (s < opt.crossing_tol) {
      if (t - l1.a < 1e3 * t_tol) t = l1.a;
      if (l1.b - t < 1e3 * t_tol) t = l1.b;
      locs.push_back(t);
    }
  };
  // interior local minima of the separation, refined by golden section
  for (size_t i = 1; i + 1 < grid.size(); ++i) {
    if (grid[i].sep > 0.6) continue;
    if (grid[i].sep <= grid[i - 1].sep && grid[i].sep <= grid[i + 1].sep)
      probe_window(grid[i - 1].t, grid[i + 1].t);
  }
  // boundary cells: a crossing there need not show as a sampled local
  // minimum when the separation is monotone toward the endpoint
  if (std::min(grid[0].sep, grid[1].sep) < 0.6)
    probe_window(grid[0].t, grid[1].t);
  if (std::min(grid[grid.size() - 2].sep, grid.back().sep) < 0.6)
    probe_window(grid[grid.size() - 2].t, grid.back().t);
  std::sort(locs.begin(), locs.end());
  // merge duplicates from adjacent local minima of the same crossing
  std::vector<double> merged;
  for (double t : locs) {
    if (!merged.empty() && t - merged.back() < 1e4 * t_tol) {
      if (t == l1.b) merged.back() = t;  // keep the endpoint label
      continue;
    }
    merged.push_back(t);
  }
  // unresolved cluster: distinct crossings too close for the localization
  for (size_t i = 0; i + 1 < merged.size(); ++i)
    if (merged[i + 1] - merged[i] < 1e-5 * len)
      throw std::runtime_error(
          "detect_crossings: unresolved crossing cluster near t = " +
          std::to_string(merged[i]) + "; refine the parameterization");

  std::vector<Crossing> out;
  for (double t : merged) {
    Crossing c = crossing_form(l1, l2, t, opt);
    c.at_left = (t == l1.a);
    c.at_right = (t == l1.b);
    out.push_back(std::move(c));
  }
  return out;
}

Eigen::MatrixXd path_derivative_form(const LagrangianPath& l, double t,
                                     const Eigen::MatrixXd& V,
                                     const MaslovOptions& opt) {
  const LagrangianFrame Lt = l(t);
  const SymplecticForm& sp = Lt.space();
  const int k = static_cast<int>(V.cols());
  if (k == 0) return Eigen::MatrixXd(0, 0);
  // fixed transversal W = J L(t)
  const Eigen::MatrixXd W = sp.complex_structure() * Lt.basis();
  const int n = sp.half_dim();

  // w(s): solve v + w in l(t+s), w in W; returns omega-pairing (V, w(s)).
  auto pairing_at = [&](double s) -> Eigen::MatrixXd {
    Eigen::MatrixXd sys(2 * n, 2 * n);
    sys << l(t + s).basis(), -W;
    Eigen::MatrixXd sol = sys.partialPivLu().solve(V);
    Eigen::MatrixXd w = W * sol.bottomRows(n);
    return sp.omega_pairing(V, w);
  };

  const double len = l.b - l.a;
  double h = opt.fd_step_rel * len;
  // keep the stencil inside the interval near endpoints
  auto derivative = [&](double hh) -> Eigen::MatrixXd {
    if (t - hh >= l.a && t + hh <= l.b)
      return (pairing_at(hh) - pairing_at(-hh)) / (2.0 * hh);
    if (t + 2.0 * hh <= l.b)  // one-sided, second order; pairing(0) = 0
      return (4.0 * pairing_at(hh) - pairing_at(2.0 * hh)) / (2.0 * hh);
    return (pairing_at(-2.0 * hh) - 4.0 * pairing_at(-hh)) / (2.0 * hh);
  };

  Eigen::MatrixXd Qh = derivative(h);
  Eigen::MatrixXd Qh2 = derivative(0.5 * h);
  const double scale = std::max(1.0, Qh2.cwiseAbs().maxCoeff());
  if ((Qh - Qh2).cwiseAbs().maxCoeff() > opt.richardson_tol * scale * 4.0)
    throw std::runtime_error(
        "path_derivative_form: finite-difference stencil did not converge");
  Eigen::MatrixXd Q = (4.0 * Qh2 - Qh) / 3.0;
  return 0.5 * (Q + Q.transpose());
}

Crossing crossing_form(const LagrangianPath& l1, const LagrangianPath& l2,
                       double t, const MaslovOptions& opt) {
  LagrangianFrame f1 = l1(t);
  LagrangianFrame f2 = l2(t);
  Crossing c;
  c.t = t;
  c.basis = subspace_intersection(f1.basis(), f2.basis());
  c.kernel_dim = static_cast<int>(c.basis.cols());
  if (c.kernel_dim == 0) {
    c.form = Eigen::MatrixXd(0, 0);
    c.regular = false;
    return c;
  }
  Eigen::MatrixXd q1 = path_derivative_form(l1, t, c.basis, opt);
  Eigen::MatrixXd q2 = path_derivative_form(l2, t, c.basis, opt);
  c.form = q1 - q2;
  c.signature = inertia(c.form);
  c.regular = (c.signature.n_zero == 0);
  return c;
}

LagrangianPath constant_path(double a, double b, const LagrangianFrame& L) {
  return LagrangianPath{a, b, [L](double) { return L; }};
}

namespace {

int clm_index_impl(const LagrangianPath& l1, const LagrangianPath& l2,
                   const MaslovOptions& opt, int depth) {
  std::vector<Crossing> crossings = detect_crossings(l1, l2, opt);
  bool needs_perturbation = false;
  int total = 0;
  for (const Crossing& c : crossings) {
    // the CLM formula is stated through Gamma(l2, l1, t)
    Crossing rev = crossing_form(l2, l1, c.t, opt);
    if (c.at_left)
      total += rev.signature.n_plus;
    else if (c.at_right)
      total -= rev.signature.n_minus;
    else if (rev.regular)
      total += rev.signature.signature();
    else
      needs_perturbation = true;
  }
  if (!needs_perturbation) return total;
  if (depth >= opt.max_perturbations)
    throw std::runtime_error(
        "clm_index: irregular crossing persists after perturbation attempts");

  // Endpoint-preserving nudge: conjugate the second path by a small
  // symplectic rotation that vanishes at both endpoints. Two independent
  // draws must agree.
  const SymplecticForm sp = l1(l1.a).space();
  const int n = sp.half_dim();
  auto perturbed = [&](unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd S(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i)
      for (int j = 0; j < 2 * n; ++j) S(i, j) = gauss(rng);
    S = (0.5 * (S + S.transpose())).eval();
    Eigen::MatrixXd K = sp.complex_structure() * S;
    const double a = l1.a, b = l1.b;
    auto base = l2.evaluator;
    SymplecticForm space = sp;
    LagrangianPath lp;
    lp.a = a;
    lp.b = b;
    lp.evaluator = [=](double t) {
      const double eps = 1e-7 * std::sin(M_PI * (t - a) / (b - a));
      LagrangianFrame f = base(t);
      Eigen::MatrixXd G = Eigen::MatrixXd::Identity(2 * n, 2 * n) + eps * K +
                          0.5 * eps * eps * K * K;
      return LagrangianFrame(space, G * f.basis());
    };
    return lp;
  };
  const int r1 =
      clm_index_impl(l1, perturbed(opt.perturb_seed + 2 * depth), opt,
                     depth + 1);
  const int r2 =
      clm_index_impl(l1, perturbed(opt.perturb_seed + 2 * depth + 1), opt,
                     depth + 1);
  if (r1 != r2)
    throw std::runtime_error(
        "clm_index: perturbed evaluations disagree (" + std::to_string(r1) +
        " vs " + std::to_string(r2) + ")");
  return r1;
}

}  // namespace

int clm_index(const LagrangianPath& l1, const LagrangianPath& l2,
              const MaslovOptions& opt) {
  return clm_index_impl(l1, l2, opt, 0);
}

int clm_index_fixed(const LagrangianFrame& L0, const LagrangianPath& l2,
                    const MaslovOptions& opt) {
  return clm_index(constant_path(l2.a, l2.b, L0), l2, opt);
}

std::string crossings_csv(const std::vector<Crossing>& crossings) {
  std::ostringstream os;
  os << "t,kernel_dim,n_plus,n_minus,n_zero,regular\n";
  os.precision(16);
  for (const Crossing& c : crossings)
    os << c.t << ',' << c.kernel_dim << ',' << c.signature.n_plus << ','
       << c.signature.n_minus << ',' << c.signature.n_zero << ','
       << (c.regular ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace graphindex
