#pragma once

#include <string>
#include <vector>

#include "superrad/cumulant.hpp"
#include "superrad/error.hpp"

namespace superrad {

// Weakly coupled filter cavity. Zero beta or kappa_f means "choose the default":
// kappa_f = max(linewidth estimate / 10, 1e-9 Hz), beta = min(g / 100, the
// back-coupling limit below).
struct FilterParams {
  double delta_f = 0.0;  // Hz, filter frequency relative to the atoms
  double beta = 0.0;     // Hz
  double kappa_f = 0.0;  // Hz
};

inline constexpr double kMinFilterWidth = 1e-9;

struct AugmentedState {
  CumulantState main;
  double n_f = 0.0;  // <f^dag f>
  cd af;             // <a^dag f>
  cd bf;             // <b^dag f>
  cd sf;             // <s1+ f>
};

inline constexpr int kAugmentedDim = 19;

Eigen::VectorXd pack(const AugmentedState& s);
AugmentedState unpack_augmented(const Eigen::VectorXd& x);

// Time derivative of the main plus filter system. Throws Error(NonFinite).
AugmentedState augmented_rhs(const AugmentedState& s, const SystemParams& p, const FilterParams& f);
OdeSystem augmented_system(const SystemParams& p, const FilterParams& f);

// Filter photons leak back into the source through the i beta <f^dag f> term,
// adding roughly 2 beta^2 Re G(delta) to the filter damping, where G is the
// cavity-a response of the regression matrix. The limit is the beta at which
// that extra damping reaches 1% of kappa_f at the line centre.
inline constexpr double kBackCouplingFraction = 0.01;
double back_coupling_limit(const SystemParams& p, const CumulantState& main, double kappa_f,
                           double center_hz);

struct ResolvedFilter {
  FilterParams filter;
  double linewidth_estimate = 0.0;  // Hz
  double beta_limit = 0.0;          // Hz
  std::vector<std::string> advisories;
};

// Fills defaulted beta/kappa_f around the filter-free steady state `main`.
ResolvedFilter resolve_filter(const SystemParams& p, const FilterParams& f, const CumulantState& main);

struct FilterSteady {
  AugmentedState state;
  double residual = 0.0;
  int newton_iterations = 0;
};

// Steady state with the filter attached, started from a filter-free fixed
// point. The filter block is linear given the main state, so it is seeded
// exactly and the joint system is then polished by Newton.
FilterSteady filter_steady(const SystemParams& p, const FilterParams& f, const CumulantState& main,
                           double tol = 1e-8);

struct LorentzFit {
  double peak_freq = 0.0;  // Hz
  double fwhm_raw = 0.0;   // Hz
  double fwhm_deconvolved = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double fit_residual = 0.0;  // RMS residual / amplitude
};

// Least-squares fit of A / (1 + (2 (x - x0) / w)^2) + c on the linear scale.
LorentzFit fit_lorentzian(const std::vector<double>& x, const std::vector<double>& y);

inline constexpr double kPoorFitThreshold = 0.1;

struct FilterScan {
  FilterParams filter;  // resolved beta and kappa_f
  std::vector<double> delta;
  std::vector<double> n_f;
  std::vector<double> n_a;
  LorentzFit fit;
  double n_a_free = 0.0;     // filter-free photon number
  double back_action = 0.0;  // |n_a - n_a_free| / n_a_free at the scan peak
  double estimate_center = 0.0;
  double estimate_width = 0.0;
  std::vector<std::string> advisories;
};

// Carries the raw scan when the Lorentzian fit is rejected.
class PoorFitError : public Error {
 public:
  PoorFitError(const std::string& what, FilterScan scan)
      : Error(ErrorKind::PoorFit, what), scan_(std::move(scan)) {}
  const FilterScan& scan() const noexcept { return scan_; }

 private:
  FilterScan scan_;
};

// One filter solve per grid point, then the fit.
FilterScan spectrum_scan(const SystemParams& p, const FilterParams& filter_base,
                         const std::vector<double>& delta_grid, int jobs = 1);

// Coarse pass of 31 points over +-20 estimated widths, then 61 points over
// +-4 widths around the coarse maximum. The estimate comes from the QRT
// spectrum of the filter-free steady state.
FilterScan auto_scan(const SystemParams& p, const FilterParams& filter_base, int jobs = 1);

struct PullingRow {
  double offset = 0.0;  // Hz, delta_a relative to the base parameters
  double peak = 0.0;    // Hz, fitted peak relative to the atoms
  double fwhm = 0.0;    // Hz, deconvolved
  double corr = 0.0;    // steady Re <s1+ s2->
  bool lasing = false;  // corr above kCollectiveCorr; only these rows enter the slope
};

// Below this atom-atom correlation the emission is not collective and the
// line has no lasing peak to pull.
inline constexpr double kCollectiveCorr = 1e-3;

struct PullingResult {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<PullingRow> rows;
};

// Least-squares slope of the fitted peak against the cavity-a offset over the
// lasing rows. Fewer than two lasing rows is an error.
PullingResult pulling_factor(const SystemParams& p, const FilterParams& filter_base,
                             const std::vector<double>& offsets_hz, int jobs = 1);

struct AtomRow {
  double atom_count = 0.0;
  double linewidth = 0.0;  // Hz, deconvolved filter width; NaN when flagged
  bool ok = false;
  std::string error;
};

struct AtomSweep {
  std::vector<AtomRow> rows;
  double spread = 0.0;  // half of (max - min) over the usable rows
  bool monotone_nonincreasing = true;
};

AtomSweep linewidth_vs_atoms(const SystemParams& p, const FilterParams& filter_base,
                             const std::vector<double>& n_grid, int jobs = 1);

}  // namespace superrad
