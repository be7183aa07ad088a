#include <doctest.h>

#include <cmath>

#include "superrad/error.hpp"
#include "superrad/cumulant.hpp"
#include "superrad/spectrum.hpp"

using namespace superrad;

namespace {

const cd kI(0, 1);

SystemParams with(const char* name, double eta = 18.0) {
  SystemParams p = preset(name);
  p.eta = eta;
  return p;
}

// Direct resolvent evaluation 2 Re[e0^T (i w - M)^{-1} r0], no eigen-decomposition.
// Near the narrow pole double precision cancels away, so this runs in long double.
double resolvent_spectrum(const QrtSystem& q, double offset_hz) {
  using cl = std::complex<long double>;
  const long double w = 2.0L * 3.141592653589793238462643383279502884L * offset_hz;
  Eigen::Matrix<cl, 3, 3> A = -q.matrix.cast<cl>();
  for (int i = 0; i < 3; ++i) A(i, i) += cl(0.0L, w);
  const Eigen::Matrix<cl, 3, 1> y = A.fullPivLu().solve(q.r0.cast<cl>());
  return 2.0 * static_cast<double>(y[0].real());
}

QrtSystem diagonal_system(double kappa_hz, double W) {
  QrtSystem q;
  q.matrix.setZero();
  q.matrix(0, 0) = -to_angular(kappa_hz) / 2.0;
  q.matrix(1, 1) = -to_angular(50.0 * kappa_hz);
  q.matrix(2, 2) = -to_angular(80.0 * kappa_hz);
  q.r0 << W, 0.0, 0.0;
  decompose(q);
  return q;
}

}  // namespace

TEST_CASE("decoupled matrix has the bare rates as eigenvalues") {
  SystemParams p = with("ep");
  p.coupling_g = 0;
  p.coupling_G = 0;
  p.delta_a = 3.0;
  p.delta_b = -7.0;
  const QrtSystem q = build_qrt(p, steady_state(p).state);
  const Rates r = rates_of(p);
  CHECK(q.matrix(0, 0) == cd(-r.ka / 2, r.da));
  CHECK(q.matrix(1, 1) == cd(-r.Gamma / 2, 0));
  CHECK(q.matrix(2, 2) == cd(-r.kb / 2, r.db));
  CHECK((q.matrix - Eigen::Matrix3cd(q.matrix.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("gain transparency at half inversion") {
  CumulantState s;
  s.pop = 0.5;
  const QrtSystem q = build_qrt(with("ep"), s);
  CHECK(std::abs(q.matrix(1, 0)) == 0.0);
}

TEST_CASE("diagonal system gives the standard basis and a single Lorentzian") {
  const double kappa = 2.0, W = 3.0;
  const QrtSystem q = diagonal_system(kappa, W);
  CHECK_FALSE(q.defective);
  CHECK(std::abs(q.weights[0] - W) + std::abs(q.weights[1]) + std::abs(q.weights[2]) <= 1e-12 * W);
  const double peak = spectrum_at(q, 0.0);
  const double ka = to_angular(kappa);
  CHECK(peak == doctest::Approx(4 * W / ka).epsilon(1e-12));
  CHECK(spectrum_at(q, kappa / 2) == doctest::Approx(peak / 2).epsilon(1e-12));
  const QrtLinewidth lw = linewidth_qrt(q);
  CHECK(lw.composite_fwhm == doctest::Approx(kappa).epsilon(1e-9));
  CHECK(lw.narrowest == doctest::Approx(kappa).epsilon(1e-12));
}

TEST_CASE("spectral decomposition identities on real steady states") {
  for (const char* name : {"ep", "ptbp", "ptsp", "no-ep"}) {
    CAPTURE(name);
    const SystemParams p = with(name, name == std::string("ptsp") ? 1e-2 : 18.0);
    const CumulantState s = steady_state(p).state;
    QrtSystem q = build_qrt(p, s);
    decompose(q);
    if (q.defective) continue;
    // Reconstruction and biorthonormality.
    const Eigen::Matrix3cd rec = q.right_vecs * q.eigenvalues.asDiagonal() * q.left_vecs;
    CHECK((rec - q.matrix).norm() <= 1e-9 * q.matrix.norm());
    CHECK((q.left_vecs * q.right_vecs - Eigen::Matrix3cd::Identity()).norm() < 1e-10);
    // Weight sum equals the photon number.
    const cd sum = q.weights.sum();
    CHECK(std::abs(sum - s.n_a) <= 1e-8 * s.n_a);
    // Pole stability.
    for (int i = 0; i < 3; ++i) CHECK(q.eigenvalues[i].real() < 0.0);
    // Pole expansion equals the direct resolvent.
    const QrtLinewidth lw = linewidth_qrt(q);
    for (double k : {-3.0, -0.5, 0.0, 0.7, 4.0}) {
      const double x = lw.peak_offset + k * lw.composite_fwhm;
      const double ref = resolvent_spectrum(q, x);
      CHECK(spectrum_at(q, x) == doctest::Approx(ref).epsilon(1e-6));
    }
  }
}

TEST_CASE("spectrum integrates to the photon number") {
  const SystemParams p = with("ptbp");
  const CumulantState s = steady_state(p).state;
  QrtSystem q = build_qrt(p, s);
  decompose(q);
  // Integrate over the narrow line, then the broad cavity pedestal.
  const QrtLinewidth lw = linewidth_qrt(q);
  double total = 0.0;
  auto trapz = [&](double a, double b, int n) {
    const double h = (b - a) / n;
    double acc = 0.5 * (spectrum_at(q, a) + spectrum_at(q, b));
    for (int i = 1; i < n; ++i) acc += spectrum_at(q, a + i * h);
    return acc * h;
  };
  const double w = lw.composite_fwhm;
  const double lim = 1e9;
  total += trapz(-200 * w, 200 * w, 400000);
  // Far tails on a log grid.
  for (double sign : {-1.0, 1.0}) {
    double a = 200 * w;
    for (int k = 0; k < 4000; ++k) {
      const double b = a * std::pow(lim / (200 * w), 1.0 / 4000);
      total += 0.5 * (b - a) * (spectrum_at(q, sign * a) + spectrum_at(q, sign * b));
      a = b;
    }
  }
  CHECK(total == doctest::Approx(s.n_a).epsilon(2e-3));
}

TEST_CASE("linewidths at eta = 18 Hz") {
  const SystemParams p = with("ep");
  const CumulantState s = steady_state(p).state;
  QrtSystem q = build_qrt(p, s);
  decompose(q);
  const QrtLinewidth lw = linewidth_qrt(q);
  // Narrow pole of order microhertz.
  CHECK(lw.narrowest > 1e-7);
  CHECK(lw.narrowest < 1e-4);
  CHECK(lw.composite_fwhm == doctest::Approx(lw.narrowest).epsilon(0.05));
  const AnalyticLinewidth an = linewidth_analytic_full(p, s);
  CHECK(std::abs(an.value - lw.narrowest) / lw.narrowest < 0.2);
  CHECK(an.expanded == doctest::Approx(an.value).epsilon(1e-9));
  CHECK(an.ep_checked);
  CHECK(an.ep_consistent);
  CHECK(an.ep_form == doctest::Approx(an.value).epsilon(1e-9));
}

TEST_CASE("zero-inversion reduction of the analytic linewidth") {
  SystemParams p = with("ptbp");
  CumulantState s;
  s.pop = 0.5;
  const double Gam = p.eta + p.gamma + p.gamma_phi;
  const double ka = p.kappa_a, kb = p.kappa_b, G = p.coupling_G;
  const double ref = Gam / (1 + (ka + kb) * Gam / (4 * G * G + ka * kb));
  CHECK(linewidth_analytic(p, s) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("empty grid and undecomposed system are rejected") {
  QrtSystem q = diagonal_system(1.0, 1.0);
  CHECK_THROWS_AS(spectrum_curve(q, {}), Error);
  QrtSystem raw;
  CHECK_THROWS_AS(linewidth_qrt(raw), Error);
}

TEST_CASE("near-degenerate poles fall back to the resolvent") {
  QrtSystem q;
  q.matrix << cd(-1.0, 0), cd(1e-9, 0), 0, 0, cd(-1.0, 0), 0, 0, 0, cd(-50.0, 0);
  q.r0 << 1.0, 0.5, 0.0;
  decompose(q);
  CHECK(q.defective);
  for (double x : {-1.0, 0.0, 0.3}) CHECK(spectrum_at(q, x) == doctest::Approx(resolvent_spectrum(q, x)).epsilon(1e-12));
  const QrtLinewidth lw = linewidth_qrt(q);
  CHECK(std::isfinite(lw.composite_fwhm));
}
