#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "superrad/model.hpp"

namespace superrad {

using cd = std::complex<double>;

enum class PtPhase { PTSymmetric, ExceptionalPoint, PTBroken, Unclassified };

const char* phase_label(PtPhase phase) noexcept;  // "PTSP", "EP", "PTBP", "unclassified"

struct PtEigensystem {
  cd lambda_plus;
  cd lambda_minus;
  Eigen::Vector2cd vec_plus;
  Eigen::Vector2cd vec_minus;
  PtPhase phase = PtPhase::Unclassified;
  double ep_distance = 0.0;  // G - G_PT, Hz
  bool defective = false;
};

inline constexpr double kEpTolerance = 1e-9;

// Cavity-pair matrix in the gauge frame:
// [[delta_a - i G_PT, G], [G, delta_b + i G_PT]], G_PT = (ka - kb) / 4. Hz.
Eigen::Matrix2cd effective_hamiltonian(const SystemParams& p);

// Phase is classified on the symmetric-detuning line; with delta_a != delta_b
// it is reported as Unclassified.
PtEigensystem eigensystem(const SystemParams& p, double tol_rel = kEpTolerance);

// Throws Error(UnsupportedClassification) when delta_a != delta_b.
PtPhase classify(const SystemParams& p, double tol_rel = kEpTolerance);

struct PhaseRow {
  double G = 0.0;
  cd plus;
  cd minus;
  PtPhase phase = PtPhase::Unclassified;
};

// Throws Error(InvalidArgument) for an empty or non-ascending grid.
std::vector<PhaseRow> phase_diagram(const SystemParams& p, const std::vector<double>& g_grid,
                                    double tol_rel = kEpTolerance);

// Unconjugated product u^T v. The eigenvectors of the complex-symmetric
// matrix are orthogonal under this product.
cd bilinear(const Eigen::Vector2cd& u, const Eigen::Vector2cd& v);

}  // namespace superrad
