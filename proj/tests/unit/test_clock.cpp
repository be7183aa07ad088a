#include <doctest.h>

#include <cmath>

#include "superrad/clock.hpp"
#include "superrad/error.hpp"

using namespace superrad;

TEST_CASE("projection-noise instability") {
  ClockSpec s{1.0, 1.0, 1.0, 1e-6, 1e14, 1e7};
  const double v = qpn_instability(s);
  CHECK(v == doctest::Approx(1e-6 / (M_PI * 1e14) / std::sqrt(1e7)).epsilon(1e-14));
  CHECK(v == doctest::Approx(1.0e-24).epsilon(0.1));
  ClockSpec t{1.0, 1.0, 1.0, 1e-3, 1e14, 1e6};
  CHECK(qpn_instability(t) == doctest::Approx(3.2e-21).epsilon(0.02));

  ClockSpec u = s;
  u.tau *= 4;
  CHECK(qpn_instability(u) == doctest::Approx(v / 2).epsilon(1e-14));
  u = s;
  u.atom_count *= 4;
  CHECK(qpn_instability(u) == doctest::Approx(v / 2).epsilon(1e-14));
  u = s;
  u.linewidth *= 2;
  CHECK(qpn_instability(u) == doctest::Approx(2 * v).epsilon(1e-14));
  u = s;
  u.atom_count = 0;
  CHECK_THROWS_AS(qpn_instability(u), Error);
}

TEST_CASE("Allan deviation") {
  const double nu = 4e14;
  CHECK(allan_deviation({nu, nu, nu, nu}, nu) == 0.0);
  CHECK(allan_deviation({nu * (1 - 1e-15), nu * (1 + 1e-15)}, nu) == doctest::Approx(std::sqrt(2.0) * 1e-15).epsilon(1e-3));
  const double d = 0.3;
  for (int L : {2, 5, 50}) {
    std::vector<double> y;
    for (int i = 0; i < L; ++i) y.push_back(i % 2 ? d : -d);
    CHECK(allan_deviation(y, nu) == doctest::Approx(2 * d / (std::sqrt(2.0) * nu)).epsilon(1e-12));
  }
  std::vector<double> a = {1.0, 4.0, 2.5, 3.0}, b = a;
  for (auto& x : b) x += 1e3;
  CHECK(allan_deviation(b, nu) == doctest::Approx(allan_deviation(a, nu)).epsilon(1e-9));
  CHECK_THROWS_AS(allan_deviation({1.0}, nu), Error);
}

TEST_CASE("emission power") {
  SystemParams p = preset(Preset::ExceptionalPoint);
  CHECK(emission_power(p, 0.0) == 0.0);
  p.nu_sigma = 4.3e14;
  const double ref = 1.0546e-34 * (2 * M_PI * 4.3e14) * (2 * M_PI * 160e3) * 10;
  CHECK(emission_power(p, 10.0) == doctest::Approx(ref).epsilon(1e-3));
  CHECK(emission_power(p, 10.0) == doctest::Approx(2.86e-12).epsilon(5e-3));
  CHECK(emission_power(p, 20.0) == doctest::Approx(2 * emission_power(p, 10.0)).epsilon(1e-15));
  CHECK(emission_power(p, 10.0, PowerRate::KappaEff) / emission_power(p, 10.0) ==
        doctest::Approx(derive(p).kappa_eff / p.kappa_a).epsilon(1e-12));
  CHECK_THROWS_AS(emission_power(p, -1.0), Error);
}
