#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "superrad/cumulant.hpp"

namespace superrad {

// Regression matrix for (<a^dag(t)a>, <s1+(t)a>, <b^dag(t)a>), angular units.
struct QrtSystem {
  Eigen::Matrix3cd matrix = Eigen::Matrix3cd::Zero();
  Eigen::Vector3cd r0 = Eigen::Vector3cd::Zero();
  Eigen::Vector3cd eigenvalues = Eigen::Vector3cd::Zero();
  Eigen::Matrix3cd right_vecs = Eigen::Matrix3cd::Zero();  // columns |i>
  Eigen::Matrix3cd left_vecs = Eigen::Matrix3cd::Zero();   // rows <~i|
  Eigen::Vector3cd weights = Eigen::Vector3cd::Zero();
  bool decomposed = false;
  bool defective = false;
};

inline constexpr double kDefectiveGap = 1e-6;

QrtSystem build_qrt(const SystemParams& p, const CumulantState& steady);

// Eigenvalues, biorthogonal triples and weights. A near-degenerate spectrum
// (min gap < 1e-6 * spectral radius) sets `defective` and leaves the weights
// at zero; the spectrum then comes from the resolvent.
void decompose(QrtSystem& q);

// S at cyclic offsets (Hz) from the atomic frame.
std::vector<double> spectrum_curve(const QrtSystem& q, const std::vector<double>& offsets_hz);
double spectrum_at(const QrtSystem& q, double offset_hz);

struct QrtLinewidth {
  std::array<double, 3> per_pole{};  // 2|Re lambda_i| / 2pi, Hz
  std::array<double, 3> centers{};   // Im lambda_i / 2pi, Hz
  double narrowest = 0.0;
  int narrowest_index = 0;
  double composite_fwhm = 0.0;
  double peak_offset = 0.0;
  bool unresolved = false;
};

inline constexpr double kFwhmFloor = 1e-9;

QrtLinewidth linewidth_qrt(const QrtSystem& q);

struct AnalyticLinewidth {
  double value = 0.0;     // Hz
  double expanded = 0.0;  // Hz, rearranged form
  double ep_form = 0.0;   // Hz, EP specialisation (NaN away from the EP)
  bool ep_checked = false;
  bool ep_consistent = true;
};

AnalyticLinewidth linewidth_analytic_full(const SystemParams& p, const CumulantState& steady);
double linewidth_analytic(const SystemParams& p, const CumulantState& steady);

}  // namespace superrad
