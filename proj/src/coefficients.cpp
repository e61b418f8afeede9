#include "graphindex/coefficients.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace graphindex {

MatrixFn MatrixFn::constant(Eigen::MatrixXd value) {
  MatrixFn f;
  f.kind_ = Kind::Constant;
  f.d_ = static_cast<int>(value.rows());
  if (value.cols() != f.d_)
    throw std::invalid_argument("MatrixFn: value must be square");
  f.data_.push_back(std::move(value));
  return f;
}

MatrixFn MatrixFn::polynomial(std::vector<Eigen::MatrixXd> coeffs) {
  if (coeffs.empty())
    throw std::invalid_argument("MatrixFn::polynomial: no coefficients");
  MatrixFn f;
  f.kind_ = Kind::Polynomial;
  f.d_ = static_cast<int>(coeffs[0].rows());
  for (const auto& c : coeffs)
    if (c.rows() != f.d_ || c.cols() != f.d_)
      throw std::invalid_argument("MatrixFn::polynomial: shape mismatch");
  f.data_ = std::move(coeffs);
  return f;
}

MatrixFn MatrixFn::table(Eigen::VectorXd ts,
                         std::vector<Eigen::MatrixXd> values) {
  if (ts.size() < 2 || static_cast<size_t>(ts.size()) != values.size())
    throw std::invalid_argument("MatrixFn::table: need matching knots/values");
  for (int i = 1; i < ts.size(); ++i)
    if (!(ts(i) > ts(i - 1)))
      throw std::invalid_argument("MatrixFn::table: knots must increase");
  MatrixFn f;
  f.kind_ = Kind::Table;
  f.d_ = static_cast<int>(values[0].rows());
  f.data_ = std::move(values);
  f.ts_ = std::move(ts);
  return f;
}

MatrixFn MatrixFn::zero(int d) {
  return constant(Eigen::MatrixXd::Zero(d, d));
}

Eigen::MatrixXd MatrixFn::operator()(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return data_[0];
    case Kind::Polynomial: {
      Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d_, d_);
      double tk = 1.0;
      for (const auto& c : data_) {
        out += tk * c;
        tk *= t;
      }
      return out;
    }
    case Kind::Table: {
      if (t <= ts_(0)) return data_.front();
      if (t >= ts_(ts_.size() - 1)) return data_.back();
      int lo = 0, hi = static_cast<int>(ts_.size()) - 1;
      while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        (ts_(mid) <= t ? lo : hi) = mid;
      }
      const double w = (t - ts_(lo)) / (ts_(hi) - ts_(lo));
      return (1.0 - w) * data_[lo] + w * data_[hi];
    }
  }
  return Eigen::MatrixXd::Zero(d_, d_);
}

bool MatrixFn::is_zero() const {
  for (const auto& m : data_)
    if (m.cwiseAbs().maxCoeff() != 0.0) return false;
  return true;
}

Eigen::MatrixXd MatrixFn::asymptotic_value(bool at_plus_infinity) const {
  switch (kind_) {
    case Kind::Constant:
      return data_[0];
    case Kind::Table:
      return at_plus_infinity ? data_.back() : data_.front();
    case Kind::Polynomial:
      for (size_t k = 1; k < data_.size(); ++k)
        if (data_[k].cwiseAbs().maxCoeff() != 0.0)
          throw std::runtime_error(
              "MatrixFn: non-constant polynomial has no limit at infinity");
      return data_[0];
  }
  return Eigen::MatrixXd::Zero(d_, d_);
}

EdgeCoefficients EdgeCoefficients::free_particle(int d) {
  EdgeCoefficients c;
  c.P = MatrixFn::constant(Eigen::MatrixXd::Identity(d, d));
  c.Q = MatrixFn::zero(d);
  c.R = MatrixFn::zero(d);
  c.C0 = MatrixFn::zero(d);
  c.C1 = MatrixFn::zero(d);
  return c;
}

std::vector<std::string> EdgeCoefficients::validate(
    const Eigen::VectorXd& sample_ts) const {
  std::vector<std::string> bad;
  const double tol = 1e-9;
  for (int i = 0; i < sample_ts.size(); ++i) {
    const double t = sample_ts(i);
    Eigen::MatrixXd p = P(t);
    if ((p - p.transpose()).cwiseAbs().maxCoeff() > tol * (1 + p.norm()))
      bad.push_back("P not symmetric at t = " + std::to_string(t));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (p + p.transpose()),
                                                      Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0)
      bad.push_back("P not positive definite at t = " + std::to_string(t));
    for (const MatrixFn* f : {&R, &C0, &C1}) {
      Eigen::MatrixXd m = (*f)(t);
      if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * (1 + m.norm()))
        bad.push_back("symmetric coefficient violated at t = " +
                      std::to_string(t));
    }
  }
  return bad;
}

SLCoefficients SLCoefficients::free_particle(int m, int d) {
  SLCoefficients c;
  c.d = d;
  c.edges.assign(m, EdgeCoefficients::free_particle(d));
  return c;
}

SLCoefficients SLCoefficients::constant_R(int m, const Eigen::MatrixXd& R) {
  const int d = static_cast<int>(R.rows());
  SLCoefficients c = free_particle(m, d);
  for (auto& e : c.edges) e.R = MatrixFn::constant(R);
  return c;
}

}  // namespace graphindex
