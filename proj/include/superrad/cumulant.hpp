#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "superrad/model.hpp"
#include "superrad/ode.hpp"

namespace superrad {

using cd = std::complex<double>;

// Second-order cumulant state. Conjugate partners <b^dag s->, <a s+>, <a b^dag>
// are conj(bs), conj(as_), conj(ab).
struct CumulantState {
  double n_a = 0.0;
  double n_b = 0.0;
  cd ab;   // <a^dag b>
  cd as_;  // <a^dag s1->
  cd bs;   // <b s1+>
  double pop = 0.0;  // <s1+ s1->
  cd corr;           // <s1+ s2->
  double pair = 0.0;  // <s1+ s1- s2+ s2->
};

inline constexpr int kStateDim = 12;
inline constexpr double kBoundSlack = 1e-6;

// Real packing: n_a, n_b, ab(re,im), as(re,im), bs(re,im), pop, corr(re,im), pair.
Eigen::VectorXd pack(const CumulantState& s);
CumulantState unpack(const Eigen::VectorXd& v);

// Angular-unit rates used by the equations of motion.
struct Rates {
  double ka, kb, G, g, N, da, db, gamma, eta, gphi, Gamma;
  bool single_cavity;
};
Rates rates_of(const SystemParams& p);

// Time derivative (angular units, per second). Throws Error(NonFinite).
CumulantState rhs(const CumulantState& s, const SystemParams& p);
void rhs_vector(const Eigen::VectorXd& x, const Rates& r, Eigen::VectorXd& dx);
void jacobian_matrix(const Eigen::VectorXd& x, const Rates& r, Eigen::MatrixXd& J);
OdeSystem cumulant_system(const SystemParams& p);

// Dimensionless residual: max_k |dx_k| / (lambda_k * max(|x_k|, 1e-12)) over the
// eight components (complex ones by modulus), where lambda_k is the relaxation
// rate of component k in its own equation.
std::array<double, 8> relaxation_rates(const Rates& r);
double scaled_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& dx, const Rates& r);
double scaled_residual(const CumulantState& x, const CumulantState& dx, const SystemParams& p);

struct TrajectoryPoint {
  double t = 0.0;
  CumulantState state;
};

std::vector<TrajectoryPoint> integrate(const CumulantState& s0, const SystemParams& p, double t_end,
                                       double rel_tol = 1e-10, double abs_tol = 1e-14);

enum class Branch { Auto, Trivial, Lasing };
const char* branch_label(Branch b) noexcept;
Branch parse_branch(const std::string& s);

struct SteadyOptions {
  double tol = 1e-8;
  Branch branch = Branch::Auto;
};

struct SteadyResult {
  CumulantState state;
  double residual = 0.0;
  int newton_iterations = 0;
  bool used_integration = false;
  Branch seed = Branch::Trivial;  // seed family the solve started from
};

SteadyResult steady_state(const SystemParams& p, const SteadyOptions& opt = {});

struct AnalyticSteady {
  double pop = 0.0;
  double corr = 0.0;
  bool valid = false;
};
AnalyticSteady analytic_steady(const SystemParams& p);

// Full state seeds.
CumulantState analytic_seed(const SystemParams& p);
CumulantState trivial_seed(const SystemParams& p);

// Throws Error(ClosureViolation) if the physical bounds are broken by more
// than kBoundSlack.
void check_bounds(const CumulantState& s);

}  // namespace superrad
