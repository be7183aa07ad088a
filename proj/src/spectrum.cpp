#include "superrad/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "superrad/error.hpp"
#include "superrad/ptsym.hpp"

namespace superrad {

namespace {

const cd kI(0.0, 1.0);

double spectrum_angular(const QrtSystem& q, double nu) {
  if (!q.defective) {
    cd acc = 0.0;
    for (int i = 0; i < 3; ++i) acc += 2.0 * q.weights[i] / (kI * nu - q.eigenvalues[i]);
    return acc.real();
  }
  // Laplace transform of the propagated correlation vector.
  using cl = std::complex<long double>;
  Eigen::Matrix<cl, 3, 3> A = -q.matrix.cast<cl>();
  A.diagonal().array() += cl(0.0L, nu);
  Eigen::Matrix<cl, 3, 1> y = A.fullPivLu().solve(q.r0.cast<cl>());
  return 2.0 * static_cast<double>(y[0].real());
}

double golden_max(const QrtSystem& q, double lo, double hi) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = spectrum_at(q, c), fd = spectrum_at(q, d);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(std::abs(a) + std::abs(b), 1e-30); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = spectrum_at(q, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = spectrum_at(q, d);
    }
  }
  return 0.5 * (a + b);
}

// Distance from the peak to the half-maximum crossing in direction dir.
double half_width(const QrtSystem& q, double peak, double half, double dir, double guess) {
  double inner = 0.0, outer = std::max(guess, 1e-300);
  int expand = 0;
  while (spectrum_at(q, peak + dir * outer) > half) {
    inner = outer;
    outer *= 2.0;
    if (++expand > 400) return std::numeric_limits<double>::infinity();
  }
  for (int it = 0; it < 200 && outer - inner > 1e-13 * outer; ++it) {
    double mid = 0.5 * (inner + outer);
    if (spectrum_at(q, peak + dir * mid) > half)
      inner = mid;
    else
      outer = mid;
  }
  return 0.5 * (inner + outer);
}

}  // namespace

QrtSystem build_qrt(const SystemParams& p, const CumulantState& s) {
  const Rates r = rates_of(p);
  QrtSystem q;
  q.matrix(0, 0) = -r.ka / 2.0 + kI * r.da;
  q.matrix(0, 1) = kI * r.N * r.g;
  q.matrix(0, 2) = kI * r.G;
  q.matrix(1, 0) = kI * r.g - 2.0 * kI * r.g * s.pop;
  q.matrix(1, 1) = -r.Gamma / 2.0;
  q.matrix(1, 2) = 0.0;
  q.matrix(2, 0) = kI * r.G;
  q.matrix(2, 1) = 0.0;
  // With cavity b removed its row only needs to be a decoupled, decaying mode.
  // The full rate keeps it clear of the cavity-a pole.
  q.matrix(2, 2) = kI * r.db - (r.single_cavity ? r.ka : r.kb / 2.0);
  q.r0 << cd(s.n_a, 0.0), std::conj(s.as_), std::conj(s.ab);
  return q;
}

void decompose(QrtSystem& q) {
  // The narrow atomic pole sits ~13 decades below the cavity rates, so the
  // eigenproblem is solved in extended precision.
  using cl = std::complex<long double>;
  using Mat = Eigen::Matrix<cl, 3, 3>;
  const Mat M = q.matrix.cast<cl>();
  Eigen::ComplexEigenSolver<Mat> es(M, true);
  const Eigen::Matrix<cl, 3, 1> lam = es.eigenvalues();
  const Mat right = es.eigenvectors();
  q.eigenvalues = lam.cast<cd>();
  q.right_vecs = right.cast<cd>();
  double radius = q.eigenvalues.cwiseAbs().maxCoeff();
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) gap = std::min(gap, std::abs(q.eigenvalues[i] - q.eigenvalues[j]));
  q.defective = radius > 0.0 ? gap < kDefectiveGap * radius : false;
  q.decomposed = true;
  if (q.defective) {
    q.left_vecs.setZero();
    q.weights.setZero();
    return;
  }
  const Mat left = right.inverse();
  q.left_vecs = left.cast<cd>();
  const Eigen::Matrix<cl, 3, 1> proj = left * q.r0.cast<cl>();
  for (int i = 0; i < 3; ++i) q.weights[i] = cd(right(0, i) * proj[i]);
}

double spectrum_at(const QrtSystem& q, double offset_hz) {
  return spectrum_angular(q, to_angular(offset_hz));
}

std::vector<double> spectrum_curve(const QrtSystem& q, const std::vector<double>& offsets_hz) {
  if (offsets_hz.empty()) throw Error(ErrorKind::InvalidArgument, "empty frequency grid");
  if (!q.decomposed) throw Error(ErrorKind::InvalidArgument, "QRT system not decomposed");
  std::vector<double> out;
  out.reserve(offsets_hz.size());
  for (double v : offsets_hz) out.push_back(spectrum_at(q, v));
  return out;
}

QrtLinewidth linewidth_qrt(const QrtSystem& q) {
  if (!q.decomposed) throw Error(ErrorKind::InvalidArgument, "QRT system not decomposed");
  QrtLinewidth lw;
  for (int i = 0; i < 3; ++i) {
    lw.per_pole[i] = 2.0 * std::abs(q.eigenvalues[i].real()) / kTwoPi;
    lw.centers[i] = q.eigenvalues[i].imag() / kTwoPi;
  }
  lw.narrowest_index = static_cast<int>(std::min_element(lw.per_pole.begin(), lw.per_pole.end()) -
                                        lw.per_pole.begin());
  lw.narrowest = lw.per_pole[lw.narrowest_index];

  // Coarse look around every pole, then refine the best candidate.
  double best_x = lw.centers[0], best_s = -std::numeric_limits<double>::infinity(), best_w = 1.0;
  for (int i = 0; i < 3; ++i) {
    double w = std::max(lw.per_pole[i], 1e-300);
    for (int k = -6; k <= 6; ++k) {
      double x = lw.centers[i] + 0.5 * k * w;
      double s = spectrum_at(q, x);
      if (s > best_s) {
        best_s = s;
        best_x = x;
        best_w = w;
      }
    }
  }
  lw.peak_offset = golden_max(q, best_x - 0.5 * best_w, best_x + 0.5 * best_w);
  double peak_val = spectrum_at(q, lw.peak_offset);
  double half = 0.5 * peak_val;
  double right = half_width(q, lw.peak_offset, half, +1.0, 0.25 * best_w);
  double left = half_width(q, lw.peak_offset, half, -1.0, 0.25 * best_w);
  lw.composite_fwhm = left + right;
  if (!(lw.composite_fwhm >= kFwhmFloor) || !std::isfinite(lw.composite_fwhm)) {
    lw.unresolved = true;
    lw.composite_fwhm = lw.narrowest;
  }
  return lw;
}

AnalyticLinewidth linewidth_analytic_full(const SystemParams& p, const CumulantState& s) {
  const DerivedParams d = derive(p);
  const double ka = p.kappa_a, kb = p.kappa_b, G = p.coupling_G, g = p.coupling_g;
  const double N = p.atom_count, Gam = d.gamma_total, Gc = d.gamma_c;
  const double jz = N * (s.pop - 0.5);
  AnalyticLinewidth a;
  a.ep_form = std::numeric_limits<double>::quiet_NaN();
  if (single_cavity(p)) {
    // Cavity b absent: only the terms that survive without it remain.
    a.value = (Gam - 2.0 * Gc * jz) / (1.0 + Gam / ka);
    a.expanded = (ka * Gam + 4.0 * g * g * N * (1.0 - 2.0 * s.pop)) / (ka + Gam);
    return a;
  }
  const double D = 4.0 * G * G + ka * kb;
  a.value = (Gam - 2.0 * Gc * jz) / (1.0 + (ka + kb) * Gam / D - 2.0 * jz * Gc / kb);
  a.expanded = (D * Gam + 4.0 * g * g * N * kb * (1.0 - 2.0 * s.pop)) /
          (4.0 * G * G + (ka + kb) * Gam + ka * kb + 4.0 * g * g * N * (1.0 - 2.0 * s.pop));
  if (p.delta_a == p.delta_b && classify(p) == PtPhase::ExceptionalPoint) {
    const double Gc_ep = 16.0 * g * g * kb / ((ka + kb) * (ka + kb));
    a.ep_form = (Gam - 2.0 * Gc_ep * jz) / (1.0 + 4.0 * Gam / (ka + kb) - 2.0 * jz * Gc_ep / kb);
    a.ep_checked = true;
    a.ep_consistent = std::abs(a.ep_form - a.value) <= 1e-9 * std::abs(a.value);
  }
  return a;
}

double linewidth_analytic(const SystemParams& p, const CumulantState& s) {
  return linewidth_analytic_full(p, s).value;
}

}  // namespace superrad
