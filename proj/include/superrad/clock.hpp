#pragma once

#include <vector>

#include "superrad/model.hpp"

namespace superrad {

inline constexpr double kHbar = 1.054571817e-34;  // J s

struct ClockSpec {
  double chi_shape = 1.0;
  double t_cycle = 1.0;    // s
  double tau = 1.0;        // s
  double linewidth = 0.0;  // Hz
  double nu_clock = 0.0;   // Hz
  double atom_count = 0.0;
};

// chi dnu / (pi nu) * sqrt(Tc / (N tau)). Throws Error(InvalidParameter)
// unless every field is positive.
double qpn_instability(const ClockSpec& spec);

// sqrt(sum (y[n+1] - y[n])^2 / (2 (L - 1) nu^2)) over the series.
double allan_deviation(const std::vector<double>& freq_hz, double nu_clock);

enum class PowerRate { KappaA, KappaEff };

// hbar (2 pi nu_a) (2 pi kappa) n_a with nu_a = nu_sigma + delta_a. Watts.
double emission_power(const SystemParams& p, double n_a, PowerRate rate = PowerRate::KappaA);

}  // namespace superrad
