#pragma once

#include <complex>
#include <vector>

#include "superrad/model.hpp"

namespace superrad {

// Exact master-equation reference for a handful of atoms and truncated
// photon spaces. Basis order: cavity a, cavity b, atom 1 ... atom N.
struct OracleConfig {
  SystemParams params;
  int fock_cutoff_a = 4;
  int fock_cutoff_b = 4;
  double t_end = 1.0;          // s
  int samples = 21;            // evenly spaced times in [0, t_end]
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  // Initial product state; zero means vacuum / ground.
  int initial_fock_a = 0;
  int initial_fock_b = 0;
  int initial_excited = 0;  // atoms 1..k start excited
};

inline constexpr int kOracleMaxAtoms = 3;
inline constexpr int kOracleMaxDim = 4096;
// The steady state is solved on the full Liouvillian; this bounds its size.
inline constexpr int kOracleMaxSteadyDim = 1024;

struct OracleObservables {
  double t = 0.0;
  double n_a = 0.0;
  double n_b = 0.0;
  double pop = 0.0;               // <s1+ s1->
  std::complex<double> corr;      // <s1+ s2->, zero for one atom
  double trace = 0.0;
  double min_eigenvalue = 0.0;
  double excitations = 0.0;       // <a^dag a + b^dag b + sum s+ s->
};

// Throws Error(InvalidArgument) for too many atoms or an oversized space.
int oracle_dimension(const OracleConfig& cfg);

// Time series from the configured initial state.
std::vector<OracleObservables> evolve_exact(const OracleConfig& cfg);

// Kernel of the Liouvillian normalised to unit trace. Throws
// Error(CutoffSaturation) when a mean photon number comes within two levels
// of its cutoff.
OracleObservables steady_exact(const OracleConfig& cfg);

}  // namespace superrad
