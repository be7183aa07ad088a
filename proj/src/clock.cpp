#include "superrad/clock.hpp"

#include <cmath>
#include <numbers>

#include "superrad/error.hpp"

namespace superrad {

double qpn_instability(const ClockSpec& s) {
  auto positive = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0))
      throw Error(ErrorKind::InvalidParameter, std::string(name) + " must be > 0");
  };
  positive(s.chi_shape, "chi_shape");
  positive(s.t_cycle, "t_cycle");
  positive(s.tau, "tau");
  positive(s.linewidth, "linewidth");
  positive(s.nu_clock, "nu_clock");
  positive(s.atom_count, "atom_count");
  return s.chi_shape * s.linewidth / (std::numbers::pi * s.nu_clock) *
         std::sqrt(s.t_cycle / (s.atom_count * s.tau));
}

double allan_deviation(const std::vector<double>& y, double nu) {
  if (y.size() < 2) throw Error(ErrorKind::InvalidArgument, "Allan deviation needs at least 2 points");
  if (!(std::isfinite(nu) && nu > 0.0)) throw Error(ErrorKind::InvalidParameter, "nu_clock must be > 0");
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    double d = y[i + 1] - y[i];
    acc += d * d;
  }
  return std::sqrt(acc / (2.0 * static_cast<double>(y.size() - 1) * nu * nu));
}

double emission_power(const SystemParams& p, double n_a, PowerRate rate) {
  if (!(n_a >= 0.0)) throw Error(ErrorKind::InvalidArgument, "photon number must be >= 0");
  const double kappa = rate == PowerRate::KappaA ? p.kappa_a : derive(p).kappa_eff;
  const double nu_a = p.nu_sigma + p.delta_a;
  return kHbar * to_angular(nu_a) * to_angular(kappa) * n_a;
}

}  // namespace superrad
