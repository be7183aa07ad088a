#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace superrad {

// Autonomous system dy/dt = f(y) with analytic Jacobian.
struct OdeSystem {
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> f;
  std::function<void(const Eigen::VectorXd&, Eigen::MatrixXd&)> jacobian;
};

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double initial_step = 0.0;  // 0 picks from the Jacobian scale
  std::size_t max_steps = 5'000'000;
  bool record = true;
  // Optional early stop, checked after each accepted step.
  std::function<bool(double, const Eigen::VectorXd&)> stop;
};

struct OdeResult {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> y;  // every accepted step when record is set
  Eigen::VectorXd y_end;
  double t_end = 0.0;
  std::size_t steps = 0;
  std::size_t rejected = 0;
  bool stopped = false;
};

// Stiff integration with the L-stable 4th-order Rosenbrock method (RODAS4).
// Throws Error(StiffnessFailure) on step-size underflow and Error(NonFinite)
// on blow-up.
OdeResult integrate_stiff(const OdeSystem& sys, const Eigen::VectorXd& y0, double t_end,
                          const OdeOptions& opt = {});

struct NewtonOptions {
  double tol = 1e-8;
  int max_iter = 80;
  int polish_iter = 4;  // extra iterations after convergence while the step shrinks
};

struct NewtonResult {
  Eigen::VectorXd x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Damped Newton on f(x) = 0 with backtracking on the scaled residual.
// `scaled_norm(x, f)` defines the convergence measure.
NewtonResult newton_solve(
    const OdeSystem& sys, const Eigen::VectorXd& x0,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& scaled_norm,
    const NewtonOptions& opt = {});

// Largest |eigenvalue| of the Jacobian at y, in s^-1.
double fastest_rate(const OdeSystem& sys, const Eigen::VectorXd& y);
// Smallest |Re eigenvalue| of the Jacobian at y, in s^-1.
double slowest_rate(const OdeSystem& sys, const Eigen::VectorXd& y);

}  // namespace superrad
