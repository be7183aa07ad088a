#include <doctest.h>

#include <cmath>
#include <complex>

#include "superrad/error.hpp"
#include "superrad/ptsym.hpp"

using namespace superrad;

namespace {

// Roots of the 2x2 characteristic polynomial, solved by hand.
std::pair<cd, cd> char_roots(const Eigen::Matrix2cd& M) {
  const cd tr = M.trace(), det = M.determinant();
  const cd disc = std::sqrt(tr * tr - 4.0 * det);
  return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

SystemParams with_G(double G) {
  SystemParams p = preset(Preset::ExceptionalPoint);
  p.coupling_G = G;
  return p;
}

}  // namespace

TEST_CASE("closed-form eigenvalues in both phases") {
  PtEigensystem es = eigensystem(with_G(50e3));
  CHECK(es.lambda_plus.real() == doctest::Approx(std::sqrt(50e3 * 50e3 - 39750.0 * 39750.0)));
  CHECK(es.lambda_plus.real() == doctest::Approx(30.33e3).epsilon(1e-3));
  CHECK(es.lambda_plus.imag() == 0.0);
  CHECK(es.phase == PtPhase::PTSymmetric);

  es = eigensystem(with_G(20e3));
  CHECK(es.lambda_plus.real() == 0.0);
  CHECK(std::abs(es.lambda_plus.imag()) == doctest::Approx(34.35e3).epsilon(1e-3));
  CHECK(es.phase == PtPhase::PTBroken);
}

TEST_CASE("coalescence at the exceptional point") {
  const PtEigensystem es = eigensystem(with_G(39750.0));
  CHECK(std::abs(es.lambda_plus) < 1e-12);
  CHECK(std::abs(es.lambda_minus) < 1e-12);
  CHECK(es.defective);
  CHECK(es.phase == PtPhase::ExceptionalPoint);
  // (1, i)/sqrt(2) up to a global phase.
  const Eigen::Vector2cd ref(1.0 / std::sqrt(2.0), cd(0, 1) / std::sqrt(2.0));
  const cd overlap = es.vec_plus.dot(ref);
  CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((es.vec_plus - es.vec_minus).norm() < 1e-15);
}

TEST_CASE("classification of the three presets") {
  CHECK(classify(preset("ptbp")) == PtPhase::PTBroken);
  CHECK(classify(preset("ep")) == PtPhase::ExceptionalPoint);
  CHECK(classify(preset("ptsp")) == PtPhase::PTSymmetric);
  SystemParams p = preset("ep");
  p.delta_a = 1.0;
  CHECK_THROWS_AS(classify(p), Error);
  try {
    classify(p);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedClassification);
  }
  CHECK(eigensystem(p).phase == PtPhase::Unclassified);
}

TEST_CASE("eigenvectors are orthogonal under the bilinear product") {
  for (double G : {1e3, 20e3, 39e3, 41e3, 50e3, 3975e3}) {
    const PtEigensystem es = eigensystem(with_G(G));
    const double scale = es.vec_plus.norm() * es.vec_minus.norm();
    CHECK(std::abs(bilinear(es.vec_plus, es.vec_minus)) < 1e-12 * scale);
    // Each is a true eigenvector of the matrix.
    const Eigen::Matrix2cd M = effective_hamiltonian(with_G(G));
    CHECK((M * es.vec_plus - es.lambda_plus * es.vec_plus).norm() < 1e-9 * std::abs(G) * es.vec_plus.norm());
  }
}

TEST_CASE("detuned eigenvalues match the characteristic polynomial and keep the trace") {
  for (double da : {-3e3, 0.0, 5e3})
    for (double db : {-1e3, 2e3})
      for (double G : {0.0, 10e3, 39750.0, 90e3}) {
        SystemParams p = with_G(G);
        p.delta_a = da;
        p.delta_b = db;
        const Eigen::Matrix2cd M = effective_hamiltonian(p);
        const PtEigensystem es = eigensystem(p);
        const auto [r1, r2] = char_roots(M);
        const double tol = 1e-9 * (std::abs(r1) + std::abs(r2) + 1.0);
        const bool same = std::abs(es.lambda_plus - r1) < tol && std::abs(es.lambda_minus - r2) < tol;
        const bool swapped = std::abs(es.lambda_plus - r2) < tol && std::abs(es.lambda_minus - r1) < tol;
        CHECK((same || swapped));
        CHECK(std::abs(es.lambda_plus + es.lambda_minus - M.trace()) < 1e-9 * (std::abs(M.trace()) + 1));
      }
}

TEST_CASE("square-root splitting near the EP") {
  const double gpt = 39750.0;
  std::vector<double> lx, ly;
  for (int k = 0; k < 20; ++k) {
    const double d = gpt * 1e-2 * std::pow(10.0, -3.0 * k / 19.0);
    const PtEigensystem es = eigensystem(with_G(gpt + d));
    lx.push_back(std::log(d));
    ly.push_back(std::log(std::abs(es.lambda_plus - es.lambda_minus)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i] / lx.size(), my += ly[i] / ly.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
  CHECK(sxy / sxx == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("phase diagram structure") {
  const SystemParams p = preset("ep");
  std::vector<double> grid;
  for (int i = 0; i <= 80; ++i) grid.push_back(1e3 * i);
  const auto rows = phase_diagram(p, grid);
  REQUIRE(rows.size() == grid.size());
  for (const auto& r : rows) {
    if (r.G < 39750.0) {
      CHECK(r.plus.real() == 0.0);
      CHECK(r.phase == PtPhase::PTBroken);
    } else if (r.G > 39750.0) {
      CHECK(r.plus.imag() == 0.0);
      CHECK(r.phase == PtPhase::PTSymmetric);
    }
  }
  const auto ep_rows = phase_diagram(p, {20e3, 39750.0, 50e3});
  CHECK(std::abs(ep_rows[1].plus) < 1e-6);
  CHECK(ep_rows[1].phase == PtPhase::ExceptionalPoint);
  CHECK(std::abs(ep_rows[0].plus.imag()) == doctest::Approx(34.35e3).epsilon(1e-3));
  CHECK(ep_rows[2].plus.real() == doctest::Approx(30.33e3).epsilon(1e-3));

  CHECK_THROWS_AS(phase_diagram(p, {}), Error);
  CHECK_THROWS_AS(phase_diagram(p, {2.0, 1.0}), Error);
}
