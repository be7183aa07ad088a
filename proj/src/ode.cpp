#include "superrad/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "superrad/error.hpp"

namespace superrad {

namespace {

// RODAS4 (Hairer & Wanner), stiffly accurate and L-stable, autonomous form.
constexpr double kGam = 0.25;
constexpr double a21 = 1.544, a31 = 0.9466785280815826, a32 = 0.2557011698983284;
constexpr double a41 = 3.314825187068521, a42 = 2.896124015972201, a43 = 0.9986419139977817;
constexpr double a51 = 1.221224509226641, a52 = 6.019134481288629, a53 = 12.53708332932087,
                 a54 = -0.6878860361058950;
constexpr double c21 = -5.66880, c31 = -2.430093356833875, c32 = -0.2063599157091915;
constexpr double c41 = -0.1073529058151375, c42 = -9.594562251023355, c43 = -20.47028614809616;
constexpr double c51 = 7.496443313967647, c52 = -10.24680431464352, c53 = -33.99990352819905,
                 c54 = 11.70890893206160;
constexpr double c61 = 8.083246795921522, c62 = -7.981132988064893, c63 = -31.52159432874371,
                 c64 = 16.31930543123136, c65 = -6.058818238834054;

struct Rodas4 {
  const OdeSystem& sys;
  Eigen::VectorXd f, xt, g1, g2, g3, g4, g5;
  Eigen::MatrixXd J;

  explicit Rodas4(const OdeSystem& s) : sys(s) {}

  // One step of size h from x; writes the new state and the embedded error.
  void step(const Eigen::VectorXd& x, double h, Eigen::VectorXd& xout, Eigen::VectorXd& err) {
    const auto n = x.size();
    J.resize(n, n);
    sys.jacobian(x, J);
    Eigen::MatrixXd W = Eigen::MatrixXd::Identity(n, n) / (kGam * h) - J;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(W);
    sys.f(x, f);
    g1 = lu.solve(f);
    xt = x + a21 * g1;
    sys.f(xt, f);
    g2 = lu.solve(f + c21 * g1 / h);
    xt = x + a31 * g1 + a32 * g2;
    sys.f(xt, f);
    g3 = lu.solve(f + (c31 * g1 + c32 * g2) / h);
    xt = x + a41 * g1 + a42 * g2 + a43 * g3;
    sys.f(xt, f);
    g4 = lu.solve(f + (c41 * g1 + c42 * g2 + c43 * g3) / h);
    xt = x + a51 * g1 + a52 * g2 + a53 * g3 + a54 * g4;
    sys.f(xt, f);
    g5 = lu.solve(f + (c51 * g1 + c52 * g2 + c53 * g3 + c54 * g4) / h);
    xt += g5;
    sys.f(xt, f);
    err = lu.solve(f + (c61 * g1 + c62 * g2 + c63 * g3 + c64 * g4 + c65 * g5) / h);
    xout = xt + err;
  }
};

double error_norm(const Eigen::VectorXd& xnew, const Eigen::VectorXd& xold,
                  const Eigen::VectorXd& err, double atol, double rtol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    double sk = atol + rtol * std::max(std::abs(xold[i]), std::abs(xnew[i]));
    acc += (err[i] / sk) * (err[i] / sk);
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

double fastest_rate(const OdeSystem& sys, const Eigen::VectorXd& y) {
  Eigen::MatrixXd J(y.size(), y.size());
  sys.jacobian(y, J);
  if (!J.allFinite()) return std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<Eigen::MatrixXd> es(J, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double slowest_rate(const OdeSystem& sys, const Eigen::VectorXd& y) {
  Eigen::MatrixXd J(y.size(), y.size());
  sys.jacobian(y, J);
  Eigen::EigenSolver<Eigen::MatrixXd> es(J, false);
  return es.eigenvalues().real().cwiseAbs().minCoeff();
}

OdeResult integrate_stiff(const OdeSystem& sys, const Eigen::VectorXd& y0, double t_end,
                          const OdeOptions& opt) {
  if (!(t_end > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_end must be > 0");
  if (!(opt.rel_tol > 0.0 && opt.rel_tol < 1.0) || !(opt.abs_tol > 0.0 && opt.abs_tol < 1.0))
    throw Error(ErrorKind::InvalidArgument, "tolerances must lie in (0, 1)");
  if (!y0.allFinite()) throw Error(ErrorKind::NonFinite, "non-finite initial state");

  Rodas4 stepper(sys);
  Eigen::VectorXd x = y0, xnew, err;
  double t = 0.0;
  double dt = opt.initial_step;
  if (dt <= 0.0) {
    double rate = fastest_rate(sys, y0);
    dt = std::isfinite(rate) && rate > 0.0 ? 1e-3 / rate : 1e-6 * t_end;
  }
  dt = std::min(dt, t_end);
  const double fast = fastest_rate(sys, y0);
  const double h_min = std::isfinite(fast) && fast > 0.0 ? 1e-10 / fast : 1e-15 * t_end;

  OdeResult res;
  if (opt.record) {
    res.t.push_back(0.0);
    res.y.push_back(y0);
  }
  // Step-size controller with the Gustafsson predictive correction.
  constexpr double safe = 0.9, fac_max = 5.0, fac_min = 1.0 / 6.0;
  bool first = true, last_rejected = false;
  double dt_old = 0.0, err_old = 1.0;
  while (t < t_end) {
    if (res.steps + res.rejected >= opt.max_steps)
      throw Error(ErrorKind::StiffnessFailure,
                  "step budget exhausted at t = " + std::to_string(t) + " s");
    const bool last = dt >= t_end - t;
    const double h = last ? t_end - t : dt;
    stepper.step(x, h, xnew, err);
    double e = xnew.allFinite() ? error_norm(xnew, x, err, opt.abs_tol, opt.rel_tol)
                                : std::numeric_limits<double>::infinity();
    double fac = std::isfinite(e) ? std::max(fac_min, std::min(fac_max, std::pow(e, 0.25) / safe))
                                  : 1.0 / fac_min;
    double dt_new = h / fac;
    if (e <= 1.0) {
      if (!first) {
        double pred = (dt_old / h) * std::pow(e * e / err_old, 0.25) / safe;
        pred = std::max(fac_min, std::min(fac_max, pred));
        fac = std::max(fac, pred);
        dt_new = h / fac;
      }
      first = false;
      dt_old = h;
      err_old = std::max(0.01, e);
      if (last_rejected) dt_new = std::min(dt_new, h);
      last_rejected = false;
      ++res.steps;
      t = last ? t_end : t + h;
      x = xnew;
      if (opt.record) {
        res.t.push_back(t);
        res.y.push_back(x);
      }
      dt = dt_new;
      if (opt.stop && opt.stop(t, x)) {
        res.stopped = true;
        break;
      }
    } else {
      ++res.rejected;
      last_rejected = true;
      dt = dt_new;
      if (dt < std::max(h_min, 16.0 * std::numeric_limits<double>::epsilon() * t)) {
        double rate = fastest_rate(sys, x);
        std::ostringstream os;
        os << "step size underflow at t = " << t << " s (h = " << dt
           << " s); fastest eigenvalue scale |lambda| = " << rate << " s^-1 (time scale "
           << 1.0 / rate << " s)";
        throw Error(ErrorKind::StiffnessFailure, os.str());
      }
    }
  }
  res.y_end = x;
  res.t_end = t;
  return res;
}

NewtonResult newton_solve(
    const OdeSystem& sys, const Eigen::VectorXd& x0,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& scaled_norm,
    const NewtonOptions& opt) {
  const auto n = x0.size();
  NewtonResult r;
  r.x = x0;
  Eigen::VectorXd f(n), f_try(n), x_try(n);
  Eigen::MatrixXd J(n, n);
  sys.f(r.x, f);
  if (!f.allFinite()) {
    r.residual = std::numeric_limits<double>::infinity();
    return r;
  }
  r.residual = scaled_norm(r.x, f);
  // The merit scale is frozen per iteration so the line search compares like with like.
  Eigen::VectorXd scale(n);
  auto merit = [&](const Eigen::VectorXd& fx) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) m += (fx[i] / scale[i]) * (fx[i] / scale[i]);
    return m;
  };
  double last_step = std::numeric_limits<double>::infinity();
  int polish = 0;
  for (int it = 0; it < opt.max_iter; ++it) {
    if (r.residual < opt.tol) {
      r.converged = true;
      if (polish >= opt.polish_iter) break;
      ++polish;
    }
    sys.jacobian(r.x, J);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
    Eigen::VectorXd dx = lu.solve(-f);
    if (!dx.allFinite()) break;
    double step_norm = dx.cwiseAbs().maxCoeff();
    if (r.converged && step_norm >= last_step) break;
    for (Eigen::Index i = 0; i < n; ++i)
      scale[i] = std::max({std::abs(r.x[i]), std::abs(x0[i]), 1e-12});
    double m0 = merit(f);
    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k) {
      x_try = r.x + lambda * dx;
      sys.f(x_try, f_try);
      if (f_try.allFinite()) {
        double m1 = merit(f_try);
        if (m1 <= (1.0 - 1e-4 * lambda) * m0 || (r.converged && m1 <= m0)) {
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    ++r.iterations;
    if (!accepted) {
      if (r.converged) break;
      return r;
    }
    last_step = lambda * step_norm;
    r.x = x_try;
    f = f_try;
    r.residual = scaled_norm(r.x, f);
  }
  if (r.residual < opt.tol) r.converged = true;
  return r;
}

}  // namespace superrad
