#pragma once

#include <Eigen/Dense>
#include <vector>

namespace graphindex {

/// d x d matrix-valued coefficient of the arc-length parameter. Three
/// representations: constant, matrix polynomial in t, or a sampled table
/// with linear interpolation (clamped outside the sample range, which is
/// what makes tabulated half-line coefficients asymptotically constant).
class MatrixFn {
 public:
  enum class Kind { Constant, Polynomial, Table };

  static MatrixFn constant(Eigen::MatrixXd value);
  static MatrixFn polynomial(std::vector<Eigen::MatrixXd> coeffs);
  static MatrixFn table(Eigen::VectorXd ts, std::vector<Eigen::MatrixXd> values);
  static MatrixFn zero(int d);

  Eigen::MatrixXd operator()(double t) const;
  Kind kind() const { return kind_; }
  int dim() const { return d_; }
  bool is_zero() const;

  /// Value in the limit t -> +inf (or -inf); throws for non-constant
  /// polynomials.
  Eigen::MatrixXd asymptotic_value(bool at_plus_infinity = true) const;

  const std::vector<Eigen::MatrixXd>& data() const { return data_; }
  const Eigen::VectorXd& knots() const { return ts_; }

 private:
  Kind kind_ = Kind::Constant;
  int d_ = 0;
  std::vector<Eigen::MatrixXd> data_;
  Eigen::VectorXd ts_;
};

/// Sturm-Liouville coefficients of one edge. The s-family enters through
/// C_s(t) = C0(t) + s * C1(t).
struct EdgeCoefficients {
  MatrixFn P, Q, R;
  MatrixFn C0, C1;

  static EdgeCoefficients free_particle(int d);

  /// effective zeroth-order term R + C_s at (t, s)
  Eigen::MatrixXd effective_R(double t, double s) const {
    return R(t) + C0(t) + s * C1(t);
  }

  /// Checks the Legendre condition P > 0 and symmetry of P, R, C at the
  /// given sample points; returns human-readable violations.
  std::vector<std::string> validate(const Eigen::VectorXd& sample_ts) const;
};

/// Per-edge coefficient family for a whole graph (parallel to the edge list).
struct SLCoefficients {
  int d = 1;
  std::vector<EdgeCoefficients> edges;

  const EdgeCoefficients& edge(int idx) const { return edges.at(idx); }
  EdgeCoefficients& edge(int idx) { return edges.at(idx); }

  /// m edges of free particles (P = I, Q = R = 0).
  static SLCoefficients free_particle(int m, int d);
  /// P = I, Q = 0, R = value on every edge.
  static SLCoefficients constant_R(int m, const Eigen::MatrixXd& R);
};

}  // namespace graphindex
