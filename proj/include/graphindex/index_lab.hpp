#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphindex/spectral.hpp"
#include "json.hpp"

namespace graphindex {

/// One verified integer identity: pass iff lhs == rhs exactly.
struct Identity {
  std::string name;
  long long lhs = 0;
  long long rhs = 0;
  bool pass = false;
  bool indeterminate = false;  // degenerate endpoint detected
  std::string note;
};

struct IndexReport {
  std::string scenario;
  std::vector<Identity> identities;
  nlohmann::json quantities = nlohmann::json::object();
  nlohmann::json provenance = nlohmann::json::object();

  bool all_pass() const;
  Identity& add(const std::string& name, long long lhs, long long rhs);
  nlohmann::json to_json() const;
};

/// Conventions block embedded in every report (orientation, sign of the
/// form, endpoint rules), so results are auditable.
nlohmann::json convention_block();

struct LabOptions {
  SpectralOptions spectral;
  MaslovOptions maslov;
  std::uint64_t seed = 0;

  LabOptions() { spectral.mesh_n = 12; }
};

/// Random Legendre-convex coefficient draw: P = I + S^T S constant,
/// R(t) = R0 + R1 sin(t) (tabulated), Q = 0; s-family C_s = -s c I when
/// family_c != 0.
SLCoefficients random_legendre_coefficients(int m, int d, std::uint64_t seed,
                                            double family_c = 0.0,
                                            double max_length = 2.0);

/// Morse index theorem on a compact graph with Dirichlet conditions:
/// the index equals the total multiplicity of interior conjugate instants.
IndexReport verify_morse_index_theorem(const MetricGraph& g,
                                       const SLCoefficients& c,
                                       const LabOptions& opt = {});

/// Spectral flow formula: sf of the family equals minus the Maslov index
/// of (boundary condition, Cauchy data) over the family parameter.
IndexReport verify_spectral_flow_formula(const MetricGraph& g,
                                         const SLCoefficients& c,
                                         const LagrangianFrame& lambda,
                                         const LabOptions& opt = {});

/// Morse index differences across boundary conditions via the triple
/// index, plus the conormal dimension remark when both conditions are
/// conormal (pass the configuration subspaces).
IndexReport verify_morse_difference(const MetricGraph& g,
                                    const SLCoefficients& c,
                                    const LagrangianFrame& lambda0,
                                    const LagrangianFrame& lambda1,
                                    const LabOptions& opt = {},
                                    const Eigen::MatrixXd* W0 = nullptr,
                                    const Eigen::MatrixXd* W1 = nullptr);

/// Star graph with Dirichlet leaves and Kirchhoff center: the full identity
/// chain for the Morse/Maslov difference.
IndexReport verify_star_formula(int m, int d, const SLCoefficients& c,
                                const LabOptions& opt = {});

/// Two-star graph: difference formula and the intermediate triple index.
IndexReport verify_two_star_formula(int mA, int mB, int d,
                                    const SLCoefficients& c,
                                    const LabOptions& opt = {});

/// Reduction of the one-leaf-star-plus-half-line problem to the half-line:
/// the full-space Maslov index over the family equals the reduced one.
IndexReport verify_reduction_formula(const SLCoefficients& c, int d,
                                     const LabOptions& opt = {});

/// Quadratic-in-velocity Lagrangian density through its fiber derivatives.
struct LagrangianDensity {
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&,
                                const Eigen::VectorXd&)>
      dv;  // dL/dv(t, q, v)
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&,
                                const Eigen::VectorXd&)>
      dq;
};

/// Affine boundary data in the stacked configuration trace space.
struct AffineBoundaryData {
  Eigen::VectorXd offset;
  Eigen::MatrixXd tangent;  // columns span the tangent space
};

/// Max Euler-Lagrange residual over the edges plus boundary membership and
/// transversality distances; certifies extremal candidates before index
/// runs.
double euler_lagrange_residual(const MetricGraph& g,
                               const LagrangianDensity& density,
                               const std::vector<EdgeFunction>& x,
                               const AffineBoundaryData& M);

}  // namespace graphindex
