#pragma once

#include <string>
#include <vector>

#include "superrad/cumulant.hpp"

namespace superrad {

// Position of a mean-field state on the Dicke ladder.
struct DickePoint {
  double jz = 0.0;     // <Jz>/hbar = N (pop - 1/2)
  double j_len = 0.0;  // sqrt(<J^2>)/hbar
  double j_eff = 0.0;  // J with J (J + 1) = <J^2>/hbar^2
  double m = 0.0;      // M = <Jz>/hbar
  std::vector<std::string> warnings;
};

inline constexpr double kImagCorrWarning = 1e-6;

// Uses Re(corr). Throws Error(ClosureViolation) when the J^2 radicand is
// below -1e-9 N^2; smaller negative values are clamped to zero.
DickePoint dicke_coordinates(const CumulantState& s, double atom_count);

// Collective decay rate of the bright mode per atom.
// 4 g^2 (4 G^2 + ka kb) / (ka^2 kb), or 4 g^2 / ka with cavity b removed. Hz.
double kappa_atomic(const SystemParams& p);

struct BrightDark {
  std::vector<double> t;        // s
  std::vector<double> n_bright;
  std::vector<double> n_dark;
  bool bright_divergent = false;  // eta >= N kappa_ato + gamma + gamma_phi
  bool dark_divergent = false;    // eta >= gamma
};

inline constexpr double kDivergenceGuard = 1e250;

// Low-excitation bright/dark populations from the ground state, sampled at
// `samples` evenly spaced times in [0, t_end]. When a mode is divergent the
// samples after its population passes kDivergenceGuard are +inf.
BrightDark bright_dark(const SystemParams& p, double t_end, int samples = 101);

}  // namespace superrad
