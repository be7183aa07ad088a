#include <doctest.h>

#include <cmath>
#include <limits>

#include "superrad/cumulant.hpp"
#include "superrad/error.hpp"

using namespace superrad;

namespace {

SystemParams ep(double eta = 18.0) {
  SystemParams p = preset(Preset::ExceptionalPoint);
  p.eta = eta;
  return p;
}

// Closed-form steady values of the eliminated model, evaluated by hand.
std::pair<double, double> analytic_ref(const SystemParams& p) {
  const double gc = 4 * p.coupling_g * p.coupling_g * p.kappa_b /
                    (4 * p.coupling_G * p.coupling_G + p.kappa_a * p.kappa_b);
  const double NCg = p.atom_count * gc;
  const double Gam = p.eta + p.gamma + p.gamma_phi;
  const double corr = (-(NCg + Gam) * (p.eta + p.gamma) + 2 * NCg * p.eta) / (2 * NCg * NCg);
  return {(NCg + Gam) / (2 * NCg), corr};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("dark fixed point") {
  SystemParams p = ep(0.0);
  p.coupling_g = 0;
  p.coupling_G = 0;
  const CumulantState d = rhs(CumulantState{}, p);
  CHECK(pack(d).norm() == 0.0);
}

TEST_CASE("decoupled Bloch equation and bare cavity decay") {
  SystemParams p = ep(5.0);
  p.coupling_g = 0;
  p.coupling_G = 0;
  CumulantState s;
  s.pop = 0.3;
  s.pair = 0.09;
  s.n_a = 2.0;
  s.n_b = 1.0;
  s.as_ = cd(0.1, 0.2);
  const CumulantState d = rhs(s, p);
  CHECK(d.pop == doctest::Approx(kTwoPi * (p.eta - (p.gamma + p.eta) * s.pop)).epsilon(1e-12));
  CHECK(d.n_a == doctest::Approx(-kTwoPi * p.kappa_a * s.n_a).epsilon(1e-12));
  CHECK(d.n_b == doctest::Approx(-kTwoPi * p.kappa_b * s.n_b).epsilon(1e-12));
  // <a^dag s-> only decays.
  CHECK(std::abs(d.as_ + s.as_ * kTwoPi * (p.kappa_a / 2 + (p.eta + p.gamma + p.gamma_phi) / 2)) <
        1e-9 * std::abs(d.as_));
}

TEST_CASE("analytic Jacobian matches finite differences") {
  const SystemParams p = ep();
  const Rates r = rates_of(p);
  Eigen::VectorXd x = pack(analytic_seed(p));
  x += 0.01 * Eigen::VectorXd::LinSpaced(kStateDim, 0.1, 1.0).cwiseProduct(x.cwiseAbs() + Eigen::VectorXd::Ones(kStateDim));
  Eigen::MatrixXd J;
  jacobian_matrix(x, r, J);
  Eigen::VectorXd fp(kStateDim), fm(kStateDim);
  for (int k = 0; k < kStateDim; ++k) {
    const double h = 1e-6 * std::max(std::abs(x[k]), 1e-3);
    Eigen::VectorXd xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    rhs_vector(xp, r, fp);
    rhs_vector(xm, r, fm);
    const Eigen::VectorXd col = (fp - fm) / (2 * h);
    CHECK((col - J.col(k)).norm() <= 1e-6 * (J.col(k).norm() + 1.0));
  }
}

TEST_CASE("non-finite state is rejected") {
  CumulantState s;
  s.pop = std::numeric_limits<double>::infinity();
  try {
    rhs(s, ep());
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFinite);
  }
}

TEST_CASE("analytic steady formula") {
  const auto a = analytic_steady(ep());
  const auto [pop, corr] = analytic_ref(ep());
  CHECK(a.pop == doctest::Approx(pop).epsilon(1e-12));
  CHECK(a.corr == doctest::Approx(corr).epsilon(1e-12));
  CHECK(a.pop == doctest::Approx(0.751).epsilon(1e-3));
  CHECK(a.corr == doctest::Approx(0.125).epsilon(1e-2));
  CHECK(a.valid);
  CHECK_FALSE(analytic_steady(ep(1e-3)).valid);
  for (double eta : {0.01, 1.0, 100.0}) {
    SystemParams p = preset(Preset::SymmetricPhase);
    p.eta = eta;
    CHECK_FALSE(analytic_steady(p).valid);
  }
}

TEST_CASE("g = 0 steady state is the bare Bloch fixed point") {
  SystemParams p = ep(3e-3);
  p.coupling_g = 0;
  const SteadyResult r = steady_state(p);
  CHECK(r.state.pop == doctest::Approx(p.eta / (p.eta + p.gamma)).epsilon(1e-9));
  CHECK(std::abs(r.state.corr) < 1e-12);
  CHECK(r.state.n_a < 1e-12);
  p.eta = p.gamma;
  CHECK(steady_state(p).state.pop == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("EP steady state agrees with the analytic regime") {
  const SystemParams p = ep();
  const SteadyResult r = steady_state(p);
  CHECK(r.residual < 1e-8);
  CHECK(r.seed == Branch::Lasing);
  const auto a = analytic_steady(p);
  CHECK(rel(r.state.pop, a.pop) < 0.05);
  CHECK(rel(r.state.corr.real(), a.corr) < 0.05);
  // Realness at resonance.
  CHECK(std::abs(r.state.corr.imag()) <= 1e-8 * std::abs(r.state.corr.real()));
  // Independent residual evaluation.
  CHECK(scaled_residual(r.state, rhs(r.state, p), p) < 1e-8);
  CHECK_NOTHROW(check_bounds(r.state));
}

TEST_CASE("above the upper threshold the correlation collapses") {
  const SteadyResult r = steady_state(ep(50.0));
  CHECK(std::abs(r.state.corr) < 1e-3);
}

TEST_CASE("forced branches") {
  const SystemParams p = ep();
  // Inside the lasing window the non-collective root has negative photon
  // numbers, so forcing it is reported rather than returned.
  try {
    steady_state(p, {1e-8, Branch::Trivial});
    FAIL("expected a closure violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ClosureViolation);
  }
  const SteadyResult trivial = steady_state(ep(50.0), {1e-8, Branch::Trivial});
  CHECK(trivial.seed == Branch::Trivial);
  CHECK(std::abs(trivial.state.corr) < 1e-5);
  const SteadyResult lasing = steady_state(p, {1e-8, Branch::Lasing});
  CHECK(lasing.state.corr.real() > 0.1);
  CHECK(parse_branch("lasing") == Branch::Lasing);
  CHECK_THROWS_AS(parse_branch("sideways"), Error);
  CHECK_THROWS_AS(steady_state(p, {0.0, Branch::Auto}), Error);
}

TEST_CASE("bounds check") {
  CumulantState s;
  s.pop = 1.2;
  CHECK_THROWS_AS(check_bounds(s), Error);
  s.pop = 0.2;
  s.pair = 0.5;
  CHECK_THROWS_AS(check_bounds(s), Error);
}

TEST_CASE("pure cavity decay") {
  SystemParams p = ep(0.0);
  p.coupling_g = 0;
  p.coupling_G = 0;
  p.kappa_a = 10.0;
  CumulantState s0;
  s0.n_a = 1.0;
  const auto traj = integrate(s0, p, 0.05, 1e-10, 1e-14);
  REQUIRE(traj.size() > 2);
  for (const auto& pt : traj) CHECK(pt.state.n_a == doctest::Approx(std::exp(-kTwoPi * 10.0 * pt.t)).epsilon(1e-7));
}

TEST_CASE("passive photon exchange never gains energy") {
  SystemParams p = ep(0.0);
  p.coupling_g = 0;
  p.coupling_G = 5e3;
  p.kappa_a = 1e3;
  p.kappa_b = 1e3;
  CumulantState s0;
  s0.n_a = 1.0;
  const auto traj = integrate(s0, p, 2e-4, 1e-10, 1e-14);
  double prev = 1.0 + 1e-12;
  double peak_b = 0.0;
  for (const auto& pt : traj) {
    const double total = pt.state.n_a + pt.state.n_b;
    CHECK(total <= prev + 1e-10);
    prev = total;
    peak_b = std::max(peak_b, pt.state.n_b);
  }
  CHECK(peak_b > 0.1);
}

TEST_CASE("time integration relaxes to the Newton fixed point") {
  const SystemParams p = ep();
  const SteadyResult ss = steady_state(p);
  CumulantState ground, half, full;
  half.pop = 0.5;
  half.pair = 0.25;
  full.pop = 1.0;
  full.pair = 1.0;
  for (const CumulantState& s0 : {ground, half, full}) {
    const auto traj = integrate(s0, p, 30.0, 1e-9, 1e-14);
    const CumulantState& end = traj.back().state;
    CHECK(rel(end.pop, ss.state.pop) < 1e-6);
    CHECK(rel(end.corr.real(), ss.state.corr.real()) < 1e-6);
    CHECK(rel(end.n_a, ss.state.n_a) < 1e-6);
  }
}

TEST_CASE("single-cavity configuration") {
  const SystemParams p = preset(Preset::NoExceptionalPoint);
  const SteadyResult r = steady_state(p);
  CHECK(r.state.n_b == 0.0);
  CHECK(std::abs(r.state.ab) == 0.0);
  CHECK(r.state.corr.real() > 0.0);
  const auto a = analytic_steady(p);
  REQUIRE(a.valid);
  CHECK(rel(r.state.pop, a.pop) < 0.05);
}

TEST_CASE("detuning reversal conjugates the state") {
  SystemParams p = ep();
  p.delta_a = 2e3;
  p.delta_b = -500.0;
  SystemParams q = p;
  q.delta_a = -p.delta_a;
  q.delta_b = -p.delta_b;
  const CumulantState s = steady_state(p).state, t = steady_state(q).state;
  CHECK(rel(t.n_a, s.n_a) < 1e-7);
  CHECK(rel(t.pop, s.pop) < 1e-7);
  CHECK(std::abs(t.corr - std::conj(s.corr)) < 1e-7 * std::abs(s.corr));
  CHECK(std::abs(t.as_) == doctest::Approx(std::abs(s.as_)).epsilon(1e-7));
}
