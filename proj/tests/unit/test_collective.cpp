#include <doctest.h>

#include <cmath>

#include "superrad/collective.hpp"
#include "superrad/error.hpp"

using namespace superrad;

TEST_CASE("top and bottom of the Dicke ladder") {
  const double N = 1e7;
  CumulantState full;
  full.pop = 1;
  full.pair = 1;
  DickePoint d = dicke_coordinates(full, N);
  CHECK(d.jz == doctest::Approx(N / 2));
  CHECK(d.j_len == doctest::Approx(std::sqrt((N / 2) * (N / 2 + 1))).epsilon(1e-12));
  CHECK(d.j_eff == doctest::Approx(N / 2).epsilon(1e-12));
  const CumulantState ground;
  d = dicke_coordinates(ground, N);
  CHECK(d.jz == doctest::Approx(-N / 2));
  CHECK(d.j_len == doctest::Approx(std::sqrt((N / 2) * (N / 2 + 1))).epsilon(1e-12));
  CHECK(d.warnings.empty());
}

TEST_CASE("imaginary correlation is dropped with a warning") {
  CumulantState s;
  s.pop = 0.5;
  s.pair = 0.25;
  s.corr = cd(0.1, 1e-3);
  const DickePoint d = dicke_coordinates(s, 100);
  CHECK(d.warnings.size() == 1);
}

TEST_CASE("negative J^2 is a closure violation") {
  CumulantState s;
  s.pop = 0.5;
  s.pair = 0.0;
  s.corr = -0.5;
  try {
    dicke_coordinates(s, 1000);
    FAIL("expected closure violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ClosureViolation);
  }
}

TEST_CASE("EP steady states stay inside the Dicke triangle") {
  SystemParams p = preset(Preset::ExceptionalPoint);
  double prev = -1e300;
  for (double eta : {1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0, 18.0, 30.0, 100.0}) {
    p.eta = eta;
    const DickePoint d = dicke_coordinates(steady_state(p).state, p.atom_count);
    CHECK(std::abs(d.m) <= d.j_len + 1e-6 * p.atom_count);
    CHECK(d.j_len <= p.atom_count / 2 + 1 + 1e-6 * p.atom_count);
    CHECK(d.jz >= prev);
    prev = d.jz;
  }
}

TEST_CASE("bright and dark populations follow the closed-form solution") {
  SystemParams p = preset(Preset::ExceptionalPoint);
  p.eta = 5e-4;  // below gamma so both modes are bounded
  const BrightDark bd = bright_dark(p, 200.0, 41);
  CHECK_FALSE(bd.bright_divergent);
  CHECK_FALSE(bd.dark_divergent);
  const double N = p.atom_count;
  const double kato = 4 * p.coupling_g * p.coupling_g * (4 * p.coupling_G * p.coupling_G + p.kappa_a * p.kappa_b) /
                      (p.kappa_a * p.kappa_a * p.kappa_b);
  const double rb = kTwoPi * (N * kato + p.gamma + p.gamma_phi - p.eta);
  const double rd = kTwoPi * (p.gamma - p.eta);
  const double eta = kTwoPi * p.eta, gphi = kTwoPi * p.gamma_phi;
  const double c = eta / rb, S0 = gphi * c + (N - 1) * eta, S1 = gphi * c;
  for (std::size_t i = 0; i < bd.t.size(); ++i) {
    const double t = bd.t[i];
    const double nb = c * (1 - std::exp(-rb * t));
    const double nd = S0 / rd * (1 - std::exp(-rd * t)) - S1 * (std::exp(-rb * t) - std::exp(-rd * t)) / (rd - rb);
    CHECK(bd.n_bright[i] == doctest::Approx(nb).epsilon(1e-6));
    CHECK(bd.n_dark[i] == doctest::Approx(nd).epsilon(1e-6));
  }
  CHECK(bd.n_bright.back() == doctest::Approx(p.eta / (N * kato + p.gamma + p.gamma_phi - p.eta)).epsilon(1e-6));
}

TEST_CASE("bright-dark validity flags and trivial limits") {
  SystemParams p = preset(Preset::ExceptionalPoint);
  p.eta = 0;
  BrightDark bd = bright_dark(p, 1.0, 5);
  for (std::size_t i = 0; i < bd.t.size(); ++i) {
    CHECK(bd.n_bright[i] == 0.0);
    CHECK(bd.n_dark[i] == 0.0);
  }
  p.eta = 18.0;
  bd = bright_dark(p, 0.01, 3);
  CHECK(bd.dark_divergent);
  CHECK_FALSE(bd.bright_divergent);
  CHECK(std::isfinite(bd.n_dark.back()));
  CHECK_THROWS_AS(bright_dark(p, 0.0, 3), Error);
}

TEST_CASE("without dephasing the dark mode ignores the bright one") {
  SystemParams p = preset(Preset::ExceptionalPoint);
  p.eta = 5e-4;
  p.gamma_phi = 0;
  const BrightDark bd = bright_dark(p, 50.0, 11);
  const double rd = kTwoPi * (p.gamma - p.eta), src = (p.atom_count - 1) * kTwoPi * p.eta;
  for (std::size_t i = 0; i < bd.t.size(); ++i)
    CHECK(bd.n_dark[i] == doctest::Approx(src / rd * (1 - std::exp(-rd * bd.t[i]))).epsilon(1e-6));
}

TEST_CASE("collective rate in the one-cavity limit") {
  const SystemParams p = preset(Preset::NoExceptionalPoint);
  CHECK(kappa_atomic(p) == doctest::Approx(4 * p.coupling_g * p.coupling_g / p.kappa_a));
}

TEST_CASE("divergent dark mode saturates to infinity without failing") {
  const SystemParams p = preset(Preset::ExceptionalPoint);
  const BrightDark bd = bright_dark(p, 10.0, 101);
  CHECK(bd.dark_divergent);
  CHECK_FALSE(bd.bright_divergent);
  CHECK(std::isinf(bd.n_dark.back()));
  const double rb = to_angular(p.atom_count * kappa_atomic(p) + p.gamma + p.gamma_phi - p.eta);
  CHECK(bd.n_bright.back() == doctest::Approx(to_angular(p.eta) / rb).epsilon(1e-9));
}
