#include "superrad/cumulant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "cblock.hpp"
#include "superrad/error.hpp"

namespace superrad {

using namespace detail;

namespace {

const cd kI(0.0, 1.0);

enum Idx { NA = 0, NB = 1, AB = 2, AS = 4, BS = 6, POP = 8, CORR = 9, PAIR = 11 };

void check_finite(const CumulantState& s) {
  const double v[] = {s.n_a, s.n_b, s.ab.real(), s.ab.imag(), s.as_.real(), s.as_.imag(),
                      s.bs.real(), s.bs.imag(), s.pop, s.corr.real(), s.corr.imag(), s.pair};
  for (double x : v)
    if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, "non-finite state component");
}

}  // namespace

Eigen::VectorXd pack(const CumulantState& s) {
  Eigen::VectorXd x(kStateDim);
  x[NA] = s.n_a;
  x[NB] = s.n_b;
  cset(x, AB, s.ab);
  cset(x, AS, s.as_);
  cset(x, BS, s.bs);
  x[POP] = s.pop;
  cset(x, CORR, s.corr);
  x[PAIR] = s.pair;
  return x;
}

CumulantState unpack(const Eigen::VectorXd& x) {
  CumulantState s;
  s.n_a = x[NA];
  s.n_b = x[NB];
  s.ab = cget(x, AB);
  s.as_ = cget(x, AS);
  s.bs = cget(x, BS);
  s.pop = x[POP];
  s.corr = cget(x, CORR);
  s.pair = x[PAIR];
  return s;
}

Rates rates_of(const SystemParams& p) {
  Rates r;
  r.ka = to_angular(p.kappa_a);
  r.kb = to_angular(p.kappa_b);
  r.G = to_angular(p.coupling_G);
  r.g = to_angular(p.coupling_g);
  r.N = p.atom_count;
  r.da = to_angular(p.delta_a);
  r.db = to_angular(p.delta_b);
  r.gamma = to_angular(p.gamma);
  r.eta = to_angular(p.eta);
  r.gphi = to_angular(p.gamma_phi);
  r.Gamma = r.eta + r.gamma + r.gphi;
  r.single_cavity = single_cavity(p);
  return r;
}

void rhs_vector(const Eigen::VectorXd& x, const Rates& r, Eigen::VectorXd& dx) {
  dx.resize(kStateDim);
  const double na = x[NA], nb = x[NB], pop = x[POP], pair = x[PAIR];
  const cd ab = cget(x, AB), as = cget(x, AS), bs = cget(x, BS), corr = cget(x, CORR);
  const double g = r.g, G = r.G, N = r.N;

  dx[NA] = 2.0 * G * ab.imag() + 2.0 * g * N * as.imag() - r.ka * na;
  cset(dx, AS,
       (-(r.Gamma + r.ka) / 2.0 + kI * r.da) * as + kI * g * pop + kI * G * std::conj(bs) -
           kI * g * na + kI * g * (N - 1.0) * corr + 2.0 * kI * g * pop * na);
  dx[POP] = r.eta - (r.gamma + r.eta) * pop - 2.0 * g * as.imag();
  cset(dx, CORR, -r.Gamma * corr - 2.0 * g * as.imag() + 4.0 * g * (pop * as).imag());
  dx[PAIR] = -2.0 * r.gamma * pair + 2.0 * r.eta * (pop - pair) - 4.0 * g * pop * as.imag();

  if (r.single_cavity) {
    // Cavity b removed: its sector relaxes to zero and never feeds back.
    dx[NB] = -r.ka * nb;
    cset(dx, AB, -r.ka * ab);
    cset(dx, BS, -r.ka * bs);
    return;
  }
  dx[NB] = -2.0 * G * ab.imag() - r.kb * nb;
  cset(dx, AB,
       (-(r.ka + r.kb) / 2.0 + kI * (r.da - r.db)) * ab + kI * G * (nb - na) + kI * N * g * bs);
  cset(dx, BS,
       (-(r.Gamma + r.kb) / 2.0 - kI * r.db) * bs + kI * g * ab - kI * G * std::conj(as) -
           2.0 * kI * g * pop * ab);
}

void jacobian_matrix(const Eigen::VectorXd& x, const Rates& r, Eigen::MatrixXd& J) {
  J.setZero(kStateDim, kStateDim);
  const double na = x[NA], pop = x[POP];
  const cd ab = cget(x, AB), as = cget(x, AS);
  const double g = r.g, G = r.G, N = r.N;

  J(NA, NA) = -r.ka;
  J(NA, AB + 1) += 2.0 * G;
  J(NA, AS + 1) += 2.0 * g * N;

  add_cw(J, AS, AS, -(r.Gamma + r.ka) / 2.0 + kI * r.da);
  add_creal(J, AS, POP, kI * g + 2.0 * kI * g * na);
  add_cconj(J, AS, BS, kI * G);
  add_creal(J, AS, NA, -kI * g + 2.0 * kI * g * pop);
  add_cw(J, AS, CORR, kI * g * (N - 1.0));

  J(POP, POP) = -(r.gamma + r.eta);
  J(POP, AS + 1) -= 2.0 * g;

  add_cw(J, CORR, CORR, cd(-r.Gamma, 0.0));
  J(CORR, AS + 1) += -2.0 * g + 4.0 * g * pop;
  J(CORR, POP) += 4.0 * g * as.imag();

  J(PAIR, PAIR) = -2.0 * r.gamma - 2.0 * r.eta;
  J(PAIR, POP) = 2.0 * r.eta - 4.0 * g * as.imag();
  J(PAIR, AS + 1) = -4.0 * g * pop;

  if (r.single_cavity) {
    J(NB, NB) = -r.ka;
    add_cw(J, AB, AB, cd(-r.ka, 0.0));
    add_cw(J, BS, BS, cd(-r.ka, 0.0));
    return;
  }
  J(NB, NB) = -r.kb;
  J(NB, AB + 1) -= 2.0 * G;

  add_cw(J, AB, AB, -(r.ka + r.kb) / 2.0 + kI * (r.da - r.db));
  add_creal(J, AB, NB, kI * G);
  add_creal(J, AB, NA, -kI * G);
  add_cw(J, AB, BS, kI * N * g);

  add_cw(J, BS, BS, -(r.Gamma + r.kb) / 2.0 - kI * r.db);
  add_cw(J, BS, AB, kI * g - 2.0 * kI * g * pop);
  add_cconj(J, BS, AS, -kI * G);
  add_creal(J, BS, POP, -2.0 * kI * g * ab);
}

OdeSystem cumulant_system(const SystemParams& p) {
  Rates r = rates_of(p);
  OdeSystem sys;
  sys.f = [r](const Eigen::VectorXd& x, Eigen::VectorXd& dx) { rhs_vector(x, r, dx); };
  sys.jacobian = [r](const Eigen::VectorXd& x, Eigen::MatrixXd& J) { jacobian_matrix(x, r, J); };
  return sys;
}

CumulantState rhs(const CumulantState& s, const SystemParams& p) {
  check_finite(s);
  Eigen::VectorXd dx;
  rhs_vector(pack(s), rates_of(p), dx);
  CumulantState d = unpack(dx);
  check_finite(d);
  return d;
}

std::array<double, 8> relaxation_rates(const Rates& r) {
  auto nz = [](double v) { return v > 0.0 ? v : 1.0; };
  const double kb = r.single_cavity ? r.ka : r.kb;
  const double ab_rate = r.single_cavity ? r.ka : std::hypot((r.ka + r.kb) / 2.0, r.da - r.db);
  const double bs_rate = r.single_cavity ? r.ka : std::hypot((r.Gamma + r.kb) / 2.0, r.db);
  return {nz(r.ka),
          nz(kb),
          nz(ab_rate),
          nz(std::hypot((r.Gamma + r.ka) / 2.0, r.da)),
          nz(bs_rate),
          nz(r.gamma + r.eta),
          nz(r.Gamma),
          nz(2.0 * (r.gamma + r.eta))};
}

double scaled_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& dx, const Rates& rates) {
  constexpr double floor = 1e-12;
  const auto lam = relaxation_rates(rates);
  auto term = [&](double num, double den, double rate) { return num / (rate * std::max(den, floor)); };
  double r = 0.0;
  r = std::max(r, term(std::abs(dx[NA]), std::abs(x[NA]), lam[0]));
  r = std::max(r, term(std::abs(dx[NB]), std::abs(x[NB]), lam[1]));
  r = std::max(r, term(std::hypot(dx[AB], dx[AB + 1]), std::hypot(x[AB], x[AB + 1]), lam[2]));
  r = std::max(r, term(std::hypot(dx[AS], dx[AS + 1]), std::hypot(x[AS], x[AS + 1]), lam[3]));
  r = std::max(r, term(std::hypot(dx[BS], dx[BS + 1]), std::hypot(x[BS], x[BS + 1]), lam[4]));
  r = std::max(r, term(std::abs(dx[POP]), std::abs(x[POP]), lam[5]));
  r = std::max(r, term(std::hypot(dx[CORR], dx[CORR + 1]), std::hypot(x[CORR], x[CORR + 1]), lam[6]));
  r = std::max(r, term(std::abs(dx[PAIR]), std::abs(x[PAIR]), lam[7]));
  return r;
}

double scaled_residual(const CumulantState& x, const CumulantState& dx, const SystemParams& p) {
  return scaled_residual(pack(x), pack(dx), rates_of(p));
}

std::vector<TrajectoryPoint> integrate(const CumulantState& s0, const SystemParams& p, double t_end,
                                       double rel_tol, double abs_tol) {
  validate(p);
  check_finite(s0);
  OdeOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = abs_tol;
  OdeResult res = integrate_stiff(cumulant_system(p), pack(s0), t_end, opt);
  std::vector<TrajectoryPoint> out;
  out.reserve(res.t.size());
  for (std::size_t i = 0; i < res.t.size(); ++i) out.push_back({res.t[i], unpack(res.y[i])});
  return out;
}

const char* branch_label(Branch b) noexcept {
  switch (b) {
    case Branch::Auto: return "auto";
    case Branch::Trivial: return "trivial";
    case Branch::Lasing: return "lasing";
  }
  return "auto";
}

Branch parse_branch(const std::string& s) {
  if (s == "auto") return Branch::Auto;
  if (s == "trivial") return Branch::Trivial;
  if (s == "lasing") return Branch::Lasing;
  throw Error(ErrorKind::InvalidArgument, "unknown branch '" + s + "' (auto|trivial|lasing)");
}

AnalyticSteady analytic_steady(const SystemParams& p) {
  DerivedParams d = derive(p);
  AnalyticSteady a;
  const double N = p.atom_count, gamma = p.gamma, eta = p.eta, Gam = d.gamma_total;
  const double NCg = N * d.gamma_c;
  a.corr = (-(NCg + Gam) * (eta + gamma) + 2.0 * NCg * eta) / (2.0 * NCg * NCg);
  a.pop = (NCg + Gam) / (2.0 * NCg);
  a.valid = gamma < eta && eta < NCg;
  return a;
}

CumulantState trivial_seed(const SystemParams& p) {
  CumulantState s;
  double denom = p.eta + p.gamma;
  s.pop = denom > 0.0 ? p.eta / denom : 0.0;
  s.pair = s.pop * s.pop;
  return s;
}

CumulantState analytic_seed(const SystemParams& p) {
  DerivedParams d = derive(p);
  AnalyticSteady a = analytic_steady(p);
  const double N = p.atom_count, g = p.coupling_g, G = p.coupling_G;
  const double ka = p.kappa_a, kb = p.kappa_b;
  CumulantState s;
  s.pop = a.pop;
  s.corr = a.corr;
  s.pair = a.pop * a.pop;
  if (single_cavity(p)) {
    s.as_ = kI * (2.0 * N * g / ka) * a.corr;
  } else {
    s.as_ = kI * (2.0 * N * g * kb / (4.0 * G * G + ka * kb)) * a.corr;
    // <b^dag s-> = 2iG/kb <a^dag s->, stored as its conjugate.
    s.bs = std::conj(kI * (2.0 * G / kb) * s.as_);
  }
  s.n_a = d.kappa_eff > 0.0 ? 2.0 * g * N * s.as_.imag() / d.kappa_eff : 0.0;
  if (!single_cavity(p)) {
    s.n_b = 4.0 * G * G / (kb * kb) * s.n_a;
    s.ab = kI * (G * (s.n_b - s.n_a) + N * g * s.bs) / ((ka + kb) / 2.0);
  }
  return s;
}

void check_bounds(const CumulantState& s) {
  std::ostringstream os;
  if (s.n_a < -kBoundSlack) os << "n_a = " << s.n_a << " < 0; ";
  if (s.n_b < -kBoundSlack) os << "n_b = " << s.n_b << " < 0; ";
  if (s.pop < -kBoundSlack || s.pop > 1.0 + kBoundSlack) os << "pop = " << s.pop << " outside [0,1]; ";
  if (s.pair < -kBoundSlack || s.pair > 1.0 + kBoundSlack)
    os << "pair = " << s.pair << " outside [0,1]; ";
  if (s.pair > s.pop + kBoundSlack) os << "pair = " << s.pair << " exceeds pop = " << s.pop << "; ";
  std::string msg = os.str();
  if (!msg.empty()) throw Error(ErrorKind::ClosureViolation, "closure bounds violated: " + msg);
}

SteadyResult steady_state(const SystemParams& p, const SteadyOptions& opt) {
  validate(p);
  if (!(opt.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "steady tol must be > 0");
  const OdeSystem sys = cumulant_system(p);
  const Rates rates = rates_of(p);
  auto norm = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& f) {
    return scaled_residual(x, f, rates);
  };

  std::vector<Branch> seeds;
  if (opt.branch == Branch::Auto) {
    bool elim = single_cavity(p) || p.kappa_b > 0.0;
    if (p.coupling_g > 0.0 && elim && analytic_steady(p).valid) seeds.push_back(Branch::Lasing);
    seeds.push_back(Branch::Trivial);
  } else {
    seeds.push_back(opt.branch);
  }

  NewtonOptions nopt;
  nopt.tol = opt.tol;
  std::string failures;
  for (Branch seed_kind : seeds) {
    const CumulantState seed = seed_kind == Branch::Lasing ? analytic_seed(p) : trivial_seed(p);
    SteadyResult out;
    out.seed = seed_kind;
    NewtonResult nr = newton_solve(sys, pack(seed), norm, nopt);
    out.newton_iterations = nr.iterations;
    if (!nr.converged) {
      // Relax in time until the residual criterion is met, then polish.
      out.used_integration = true;
      OdeOptions io;
      io.record = false;
      Eigen::VectorXd f(kStateDim);
      io.stop = [&](double, const Eigen::VectorXd& y) {
        sys.f(y, f);
        return norm(y, f) < opt.tol;
      };
      try {
        OdeResult orr = integrate_stiff(sys, pack(seed), 1e7, io);
        nr = newton_solve(sys, orr.y_end, norm, nopt);
        out.newton_iterations += nr.iterations;
      } catch (const Error& e) {
        failures += std::string(branch_label(seed_kind)) + " seed: " + e.what() + "; ";
        continue;
      }
    }
    if (!nr.converged) {
      std::ostringstream os;
      os << branch_label(seed_kind) << " seed: final scaled residual " << nr.residual << "; ";
      failures += os.str();
      continue;
    }
    out.state = unpack(nr.x);
    out.residual = nr.residual;
    try {
      check_bounds(out.state);
    } catch (const Error& e) {
      if (seeds.size() == 1) throw;
      failures += std::string(branch_label(seed_kind)) + " seed: " + e.what() + "; ";
      continue;
    }
    return out;
  }
  std::ostringstream os;
  os << "steady state not found (tol " << opt.tol << "): " << failures;
  throw Error(ErrorKind::NoConvergence, os.str());
}

}  // namespace superrad
