#include "superrad/collective.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "superrad/error.hpp"

namespace superrad {

DickePoint dicke_coordinates(const CumulantState& s, double N) {
  if (!(N >= 1.0) || !std::isfinite(N)) throw Error(ErrorKind::InvalidArgument, "atom count must be >= 1");
  DickePoint d;
  if (std::abs(s.corr.imag()) > kImagCorrWarning) {
    std::ostringstream os;
    os << "Im corr = " << s.corr.imag() << " discarded";
    d.warnings.push_back(os.str());
  }
  d.jz = N * (s.pop - 0.5);
  d.m = d.jz;
  double rad = 0.75 * N + N * (N - 1.0) * (s.corr.real() + s.pair - s.pop + 0.25);
  if (rad < -1e-9 * N * N) {
    std::ostringstream os;
    os << "negative <J^2> = " << rad << " from the closed moments";
    throw Error(ErrorKind::ClosureViolation, os.str());
  }
  rad = std::max(rad, 0.0);
  d.j_len = std::sqrt(rad);
  d.j_eff = 0.5 * (std::sqrt(1.0 + 4.0 * rad) - 1.0);
  return d;
}

double kappa_atomic(const SystemParams& p) {
  const double g = p.coupling_g, G = p.coupling_G, ka = p.kappa_a, kb = p.kappa_b;
  if (single_cavity(p)) {
    if (!(ka > 0.0)) throw Error(ErrorKind::EliminationUndefined, "kappa_a must be > 0");
    return 4.0 * g * g / ka;
  }
  if (!(kb > 0.0) || !(ka > 0.0))
    throw Error(ErrorKind::EliminationUndefined, "bright-mode rate needs kappa_a, kappa_b > 0");
  return 4.0 * g * g * (4.0 * G * G + ka * kb) / (ka * ka * kb);
}

BrightDark bright_dark(const SystemParams& p, double t_end, int samples) {
  validate(p);
  if (!(t_end > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_end must be > 0");
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 samples");
  const double N = p.atom_count;
  const double kato = kappa_atomic(p);
  const double rb = to_angular(N * kato + p.gamma + p.gamma_phi - p.eta);
  const double rd = to_angular(p.gamma - p.eta);
  const double gphi = to_angular(p.gamma_phi), eta = to_angular(p.eta);

  BrightDark out;
  out.bright_divergent = p.eta >= N * kato + p.gamma + p.gamma_phi;
  out.dark_divergent = p.eta >= p.gamma;

  OdeSystem sys;
  sys.f = [=](const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
    dx.resize(2);
    dx[0] = -rb * x[0] + eta;
    dx[1] = -rd * x[1] + gphi * x[0] + (N - 1.0) * eta;
  };
  sys.jacobian = [=](const Eigen::VectorXd&, Eigen::MatrixXd& J) {
    J.setZero(2, 2);
    J(0, 0) = -rb;
    J(1, 0) = gphi;
    J(1, 1) = -rd;
  };
  OdeOptions opt;
  opt.record = false;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  const double dt = t_end / (samples - 1);
  out.t.push_back(0.0);
  out.n_bright.push_back(0.0);
  out.n_dark.push_back(0.0);
  const bool divergent = out.bright_divergent || out.dark_divergent;
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (int i = 1; i < samples; ++i) {
    // A divergent mode grows exponentially; past the overflow guard it is
    // reported as +inf. The bright equation does not involve the dark mode,
    // so a convergent bright mode is then propagated exactly on its own.
    bool overflow = divergent && !(x.cwiseAbs().maxCoeff() < kDivergenceGuard);
    if (!overflow) {
      try {
        x = integrate_stiff(sys, x, dt, opt).y_end;
      } catch (const Error&) {
        if (!divergent) throw;
        overflow = true;
      }
    }
    if (overflow) {
      const double c = eta / rb;
      x[0] = out.bright_divergent ? inf : c + (x[0] - c) * std::exp(-rb * dt);
      x[1] = inf;
    }
    out.t.push_back(t_end * i / (samples - 1));
    out.n_bright.push_back(x[0]);
    out.n_dark.push_back(x[1]);
  }
  return out;
}

}  // namespace superrad
