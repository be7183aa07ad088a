#include "superrad/filtercav.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "cblock.hpp"
#include "superrad/parallel.hpp"
#include "superrad/spectrum.hpp"

namespace superrad {

using namespace detail;

namespace {

const cd kI(0.0, 1.0);

enum Idx { NA = 0, AB = 2, AS = 4, POP = 8, NF = 12, AF = 13, BF = 15, SF = 17 };

struct FilterRates {
  double beta, kf, delta;
};

FilterRates filter_rates(const FilterParams& f) {
  return {to_angular(f.beta), to_angular(f.kappa_f), to_angular(f.delta_f)};
}

void check_filter(const FilterParams& f) {
  if (!(std::isfinite(f.beta) && f.beta > 0.0))
    throw Error(ErrorKind::InvalidParameter, "filter beta must be > 0");
  if (!(std::isfinite(f.kappa_f) && f.kappa_f > 0.0))
    throw Error(ErrorKind::InvalidParameter, "filter kappa_f must be > 0");
  if (!std::isfinite(f.delta_f)) throw Error(ErrorKind::InvalidParameter, "filter delta_f is not finite");
}

void aug_rhs(const Eigen::VectorXd& x, const Rates& r, const FilterRates& fr, Eigen::VectorXd& dx) {
  Eigen::VectorXd base;
  rhs_vector(x.head(kStateDim), r, base);
  dx.resize(kAugmentedDim);
  dx.head(kStateDim) = base;
  const double na = x[NA], pop = x[POP], nf = x[NF];
  const cd ab = cget(x, AB), as = cget(x, AS);
  const cd af = cget(x, AF), bf = cget(x, BF), sf = cget(x, SF);
  const double b = fr.beta, kf = fr.kf, d = fr.delta;

  dx[NA] += 2.0 * b * af.imag();
  cadd(dx, AS, kI * b * std::conj(sf));
  dx[NF] = -2.0 * b * af.imag() - kf * nf;
  cset(dx, AF,
       kI * r.G * bf + (-(r.ka + kf) / 2.0 + kI * (r.da - d)) * af + kI * b * (nf - na) +
           kI * r.N * r.g * sf);
  cset(dx, SF,
       kI * r.g * af - kI * b * std::conj(as) + (-(r.Gamma + kf) / 2.0 - kI * d) * sf -
           2.0 * kI * r.g * pop * af);
  if (r.single_cavity) {
    cset(dx, BF, -r.ka * bf);
    return;
  }
  cadd(dx, AB, kI * b * std::conj(bf));
  cset(dx, BF, (-(r.kb + kf) / 2.0 + kI * (r.db - d)) * bf + kI * r.G * af - kI * b * std::conj(ab));
}

void aug_jac(const Eigen::VectorXd& x, const Rates& r, const FilterRates& fr, Eigen::MatrixXd& J) {
  Eigen::MatrixXd base;
  jacobian_matrix(x.head(kStateDim), r, base);
  J.setZero(kAugmentedDim, kAugmentedDim);
  J.topLeftCorner(kStateDim, kStateDim) = base;
  const double pop = x[POP];
  const cd af = cget(x, AF);
  const double b = fr.beta, kf = fr.kf, d = fr.delta;

  J(NA, AF + 1) += 2.0 * b;
  add_cconj(J, AS, SF, kI * b);

  J(NF, NF) = -kf;
  J(NF, AF + 1) = -2.0 * b;

  add_cw(J, AF, BF, kI * r.G);
  add_cw(J, AF, AF, -(r.ka + kf) / 2.0 + kI * (r.da - d));
  add_creal(J, AF, NF, kI * b);
  add_creal(J, AF, NA, -kI * b);
  add_cw(J, AF, SF, kI * r.N * r.g);

  add_cw(J, SF, AF, kI * r.g - 2.0 * kI * r.g * pop);
  add_cconj(J, SF, AS, -kI * b);
  add_cw(J, SF, SF, -(r.Gamma + kf) / 2.0 - kI * d);
  add_creal(J, SF, POP, -2.0 * kI * r.g * af);

  if (r.single_cavity) {
    add_cw(J, BF, BF, cd(-r.ka, 0.0));
    return;
  }
  add_cconj(J, AB, BF, kI * b);
  add_cw(J, BF, BF, -(r.kb + kf) / 2.0 + kI * (r.db - d));
  add_cw(J, BF, AF, kI * r.G);
  add_cconj(J, BF, AB, -kI * b);
}

double aug_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& dx, const Rates& r,
                    const FilterRates& fr) {
  constexpr double floor = 1e-12;
  auto nz = [](double v) { return v > 0.0 ? v : 1.0; };
  auto term = [&](double num, double den, double rate) { return num / (nz(rate) * std::max(den, floor)); };
  auto cabs = [](const Eigen::VectorXd& v, int k) { return std::hypot(v[k], v[k + 1]); };
  double res = scaled_residual(x.head(kStateDim), dx.head(kStateDim), r);
  const double kb = r.single_cavity ? 2.0 * r.ka : r.kb;
  res = std::max(res, term(std::abs(dx[NF]), std::abs(x[NF]), fr.kf));
  res = std::max(res, term(cabs(dx, AF), cabs(x, AF), std::hypot((r.ka + fr.kf) / 2.0, r.da - fr.delta)));
  res = std::max(res, term(cabs(dx, BF), cabs(x, BF), std::hypot((kb + fr.kf) / 2.0, r.db - fr.delta)));
  res = std::max(res, term(cabs(dx, SF), cabs(x, SF), std::hypot((r.Gamma + fr.kf) / 2.0, fr.delta)));
  return res;
}

// Least-squares functor on normalised data.
struct LorentzFunctor : Eigen::DenseFunctor<double> {
  const Eigen::VectorXd& u;
  const Eigen::VectorXd& v;
  LorentzFunctor(const Eigen::VectorXd& uu, const Eigen::VectorXd& vv)
      : Eigen::DenseFunctor<double>(4, static_cast<int>(uu.size())), u(uu), v(vv) {}
  // p = (x0, w, A, c)
  int operator()(const InputType& p, ValueType& fvec) const {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      double z = 2.0 * (u[i] - p[0]) / p[1];
      fvec[i] = p[2] / (1.0 + z * z) + p[3] - v[i];
    }
    return 0;
  }
  int df(const InputType& p, JacobianType& fjac) const {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      double z = 2.0 * (u[i] - p[0]) / p[1];
      double den = 1.0 + z * z;
      double l = 1.0 / den;
      double dl_dz = -2.0 * z / (den * den);
      fjac(i, 0) = p[2] * dl_dz * (-2.0 / p[1]);
      fjac(i, 1) = p[2] * dl_dz * (-z / p[1]);
      fjac(i, 2) = l;
      fjac(i, 3) = 1.0;
    }
    return 0;
  }
};

struct Estimate {
  CumulantState main;
  double n_a_free = 0.0;
  double center = 0.0;
  double width = 0.0;  // QRT composite width plus the filter width
  FilterParams filter;
  std::vector<std::string> advisories;
};

Estimate estimate(const SystemParams& p, const FilterParams& base) {
  Estimate e;
  e.main = steady_state(p).state;
  e.n_a_free = e.main.n_a;
  QrtSystem q = build_qrt(p, e.main);
  decompose(q);
  QrtLinewidth lw = linewidth_qrt(q);
  ResolvedFilter rf = resolve_filter(p, base, e.main);
  e.filter = rf.filter;
  e.advisories = rf.advisories;
  e.center = lw.peak_offset;
  e.width = lw.composite_fwhm + e.filter.kappa_f;
  return e;
}

void run_grid(const SystemParams& p, const Estimate& e, const std::vector<double>& grid, int jobs,
              std::vector<double>& n_f, std::vector<double>& n_a) {
  n_f.assign(grid.size(), 0.0);
  n_a.assign(grid.size(), 0.0);
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    FilterParams f = e.filter;
    f.delta_f = grid[i];
    FilterSteady fs = filter_steady(p, f, e.main);
    n_f[i] = fs.state.n_f;
    n_a[i] = fs.state.main.n_a;
  });
}

FilterScan finish_scan(const Estimate& e, std::vector<double> grid, std::vector<double> n_f,
                       std::vector<double> n_a) {
  FilterScan s;
  s.filter = e.filter;
  s.delta = std::move(grid);
  s.n_f = std::move(n_f);
  s.n_a = std::move(n_a);
  s.n_a_free = e.n_a_free;
  s.estimate_center = e.center;
  s.estimate_width = e.width;
  s.advisories = e.advisories;
  for (std::size_t i = 0; i < s.n_f.size(); ++i)
    if (s.n_f[i] < -kBoundSlack) {
      std::ostringstream os;
      os << "filter photon number " << s.n_f[i] << " < 0 at delta_f = " << s.delta[i] << " Hz";
      throw Error(ErrorKind::ClosureViolation, os.str());
    }
  auto imax = std::max_element(s.n_f.begin(), s.n_f.end()) - s.n_f.begin();
  s.back_action = s.n_a_free > 0.0 ? std::abs(s.n_a[imax] - s.n_a_free) / s.n_a_free : 0.0;
  s.fit = fit_lorentzian(s.delta, s.n_f);
  s.fit.fwhm_deconvolved = s.fit.fwhm_raw - s.filter.kappa_f;
  if (!(s.fit.fit_residual <= kPoorFitThreshold)) {
    std::ostringstream os;
    os << "Lorentzian fit residual " << s.fit.fit_residual << " exceeds " << kPoorFitThreshold
       << " of the peak amplitude";
    throw PoorFitError(os.str(), std::move(s));
  }
  return s;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace

Eigen::VectorXd pack(const AugmentedState& s) {
  Eigen::VectorXd x(kAugmentedDim);
  x.head(kStateDim) = pack(s.main);
  x[NF] = s.n_f;
  cset(x, AF, s.af);
  cset(x, BF, s.bf);
  cset(x, SF, s.sf);
  return x;
}

AugmentedState unpack_augmented(const Eigen::VectorXd& x) {
  AugmentedState s;
  s.main = unpack(x.head(kStateDim));
  s.n_f = x[NF];
  s.af = cget(x, AF);
  s.bf = cget(x, BF);
  s.sf = cget(x, SF);
  return s;
}

AugmentedState augmented_rhs(const AugmentedState& s, const SystemParams& p, const FilterParams& f) {
  Eigen::VectorXd x = pack(s);
  if (!x.allFinite()) throw Error(ErrorKind::NonFinite, "non-finite state component");
  Eigen::VectorXd dx;
  aug_rhs(x, rates_of(p), filter_rates(f), dx);
  if (!dx.allFinite()) throw Error(ErrorKind::NonFinite, "non-finite derivative");
  return unpack_augmented(dx);
}

OdeSystem augmented_system(const SystemParams& p, const FilterParams& f) {
  const Rates r = rates_of(p);
  const FilterRates fr = filter_rates(f);
  OdeSystem sys;
  sys.f = [r, fr](const Eigen::VectorXd& x, Eigen::VectorXd& dx) { aug_rhs(x, r, fr, dx); };
  sys.jacobian = [r, fr](const Eigen::VectorXd& x, Eigen::MatrixXd& J) { aug_jac(x, r, fr, J); };
  return sys;
}

double back_coupling_limit(const SystemParams& p, const CumulantState& main, double kappa_f,
                           double center_hz) {
  QrtSystem q = build_qrt(p, main);
  const cd z(to_angular(kappa_f) / 2.0, to_angular(center_hz));
  Eigen::Matrix3cd A = z * Eigen::Matrix3cd::Identity() - q.matrix;
  Eigen::Vector3cd e0 = Eigen::Vector3cd::Zero();
  e0[0] = 1.0;
  const double resp = std::abs(A.partialPivLu().solve(e0)[0]);
  if (!(resp > 0.0) || !std::isfinite(resp)) return std::numeric_limits<double>::infinity();
  return to_cyclic(std::sqrt(kBackCouplingFraction * to_angular(kappa_f) / (2.0 * resp)));
}

ResolvedFilter resolve_filter(const SystemParams& p, const FilterParams& f, const CumulantState& main) {
  ResolvedFilter out;
  out.filter = f;
  QrtSystem q = build_qrt(p, main);
  decompose(q);
  QrtLinewidth lw = linewidth_qrt(q);
  double analytic = linewidth_analytic(p, main);
  out.linewidth_estimate = std::isfinite(analytic) && analytic > 0.0 ? analytic : lw.composite_fwhm;
  if (out.filter.kappa_f == 0.0) out.filter.kappa_f = std::max(out.linewidth_estimate / 10.0, kMinFilterWidth);
  if (!(std::isfinite(out.filter.kappa_f) && out.filter.kappa_f > 0.0))
    throw Error(ErrorKind::InvalidParameter, "filter kappa_f must be > 0");
  out.beta_limit = back_coupling_limit(p, main, out.filter.kappa_f, lw.peak_offset);
  if (out.filter.beta == 0.0) out.filter.beta = std::min(p.coupling_g / 100.0, out.beta_limit);
  check_filter(out.filter);
  if (out.filter.kappa_f > 0.2 * out.linewidth_estimate) {
    std::ostringstream os;
    os << "kappa_f = " << out.filter.kappa_f << " Hz exceeds 0.2 x the estimated linewidth ("
       << out.linewidth_estimate << " Hz); the filter resolves the line poorly";
    out.advisories.push_back(os.str());
  }
  if (out.filter.beta > out.beta_limit) {
    std::ostringstream os;
    os << "beta = " << out.filter.beta << " Hz exceeds the back-coupling limit " << out.beta_limit
       << " Hz; the filter line is broadened by absorption into the source";
    out.advisories.push_back(os.str());
  }
  return out;
}

FilterSteady filter_steady(const SystemParams& p, const FilterParams& f, const CumulantState& main,
                           double tol) {
  check_filter(f);
  const Rates r = rates_of(p);
  const FilterRates fr = filter_rates(f);
  const OdeSystem sys = augmented_system(p, f);

  AugmentedState seed;
  seed.main = main;
  Eigen::VectorXd x = pack(seed), dx;
  Eigen::MatrixXd J;
  sys.f(x, dx);
  sys.jacobian(x, J);
  constexpr int nfil = kAugmentedDim - kStateDim;
  // Filter block with the main state frozen: exact linear solve.
  Eigen::VectorXd y = J.bottomRightCorner(nfil, nfil).partialPivLu().solve(-dx.tail(nfil));
  x.tail(nfil) = y;

  NewtonOptions nopt;
  nopt.tol = tol;
  auto norm = [&](const Eigen::VectorXd& xx, const Eigen::VectorXd& ff) {
    return aug_residual(xx, ff, r, fr);
  };
  NewtonResult nr = newton_solve(sys, x, norm, nopt);
  if (!nr.converged) {
    std::ostringstream os;
    os << "filter steady state not found at delta_f = " << f.delta_f << " Hz (scaled residual "
       << nr.residual << ")";
    throw Error(ErrorKind::NoConvergence, os.str());
  }
  FilterSteady out;
  out.state = unpack_augmented(nr.x);
  out.residual = nr.residual;
  out.newton_iterations = nr.iterations;
  return out;
}

LorentzFit fit_lorentzian(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "fit data length mismatch");
  if (x.size() < 5) throw Error(ErrorKind::InvalidArgument, "Lorentzian fit needs at least 5 points");
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  const double xmin = *std::min_element(x.begin(), x.end());
  const double xmax = *std::max_element(x.begin(), x.end());
  const double ymax = *std::max_element(y.begin(), y.end());
  const double ymin = *std::min_element(y.begin(), y.end());
  const double xs = 0.5 * (xmax - xmin), xc = 0.5 * (xmax + xmin);
  const double ys = ymax != 0.0 ? std::abs(ymax) : 1.0;
  if (!(xs > 0.0)) throw Error(ErrorKind::InvalidArgument, "fit abscissae span zero width");

  Eigen::VectorXd u(n), v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    u[i] = (x[i] - xc) / xs;
    v[i] = y[i] / ys;
  }
  // Starting point from the sampled maximum and its half-max extent.
  Eigen::Index im = 0;
  v.maxCoeff(&im);
  const double base = ymin / ys, amp = v[im] - base, half = base + 0.5 * amp;
  Eigen::Index lo = im, hi = im;
  while (lo > 0 && v[lo] > half) --lo;
  while (hi < n - 1 && v[hi] > half) ++hi;
  double w0 = std::max(u[hi] - u[lo], 2.0 / static_cast<double>(n));

  Eigen::VectorXd prm(4);
  prm << u[im], w0, amp, base;
  LorentzFunctor fn(u, v);
  Eigen::LevenbergMarquardt<LorentzFunctor> lm(fn);
  lm.setXtol(1e-15);
  lm.setFtol(1e-15);
  lm.setMaxfev(4000);
  lm.minimize(prm);

  LorentzFit fit;
  fit.peak_freq = xc + prm[0] * xs;
  fit.fwhm_raw = std::abs(prm[1]) * xs;
  fit.amplitude = prm[2] * ys;
  fit.offset = prm[3] * ys;
  fit.fwhm_deconvolved = fit.fwhm_raw;
  Eigen::VectorXd res(n);
  fn(prm, res);
  double rms = std::sqrt(res.squaredNorm() / static_cast<double>(n));
  fit.fit_residual = prm[2] != 0.0 ? rms / std::abs(prm[2]) : std::numeric_limits<double>::infinity();
  return fit;
}

FilterScan spectrum_scan(const SystemParams& p, const FilterParams& filter_base,
                         const std::vector<double>& delta_grid, int jobs) {
  if (delta_grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty filter detuning grid");
  for (double d : delta_grid)
    if (!std::isfinite(d)) throw Error(ErrorKind::InvalidArgument, "non-finite filter detuning");
  validate(p);
  Estimate e = estimate(p, filter_base);
  std::vector<double> n_f, n_a;
  run_grid(p, e, delta_grid, jobs, n_f, n_a);
  return finish_scan(e, delta_grid, std::move(n_f), std::move(n_a));
}

FilterScan auto_scan(const SystemParams& p, const FilterParams& filter_base, int jobs) {
  validate(p);
  Estimate e = estimate(p, filter_base);
  std::vector<double> n_f, n_a;
  std::vector<double> coarse = linspace(e.center - 20.0 * e.width, e.center + 20.0 * e.width, 31);
  run_grid(p, e, coarse, jobs, n_f, n_a);
  std::size_t im = std::max_element(n_f.begin(), n_f.end()) - n_f.begin();
  if (im == 0 || im + 1 == coarse.size()) {
    std::ostringstream os;
    os << "filter maximum at the edge of the coarse grid (" << coarse[im] << " Hz)";
    throw Error(ErrorKind::PeakNotBracketed, os.str());
  }
  const double c = coarse[im];
  std::vector<double> fine = linspace(c - 4.0 * e.width, c + 4.0 * e.width, 61);
  run_grid(p, e, fine, jobs, n_f, n_a);
  return finish_scan(e, std::move(fine), std::move(n_f), std::move(n_a));
}

PullingResult pulling_factor(const SystemParams& p, const FilterParams& filter_base,
                             const std::vector<double>& offsets_hz, int jobs) {
  if (offsets_hz.size() < 3) throw Error(ErrorKind::InvalidArgument, "pulling needs at least 3 offsets");
  PullingResult out;
  out.rows.resize(offsets_hz.size());
  for (std::size_t i = 0; i < offsets_hz.size(); ++i) {
    SystemParams q = p;
    q.delta_a = p.delta_a + offsets_hz[i];
    PullingRow& row = out.rows[i];
    row.offset = offsets_hz[i];
    row.corr = steady_state(q).state.corr.real();
    row.lasing = row.corr > kCollectiveCorr;
    row.peak = row.fwhm = std::numeric_limits<double>::quiet_NaN();
    try {
      FilterScan s = auto_scan(q, filter_base, jobs);
      if (s.fit.peak_freq < s.delta.front() || s.fit.peak_freq > s.delta.back()) {
        std::ostringstream os;
        os << "fitted peak " << s.fit.peak_freq << " Hz lies outside the scan at offset "
           << offsets_hz[i] << " Hz";
        throw Error(ErrorKind::PeakNotBracketed, os.str());
      }
      row.peak = s.fit.peak_freq;
      row.fwhm = s.fit.fwhm_deconvolved;
    } catch (const Error&) {
      // A non-lasing row has no line to locate; its failure is not fatal.
      if (row.lasing) throw;
    }
  }
  // Ordinary least squares of peak against cavity detuning.
  double mx = 0.0, my = 0.0;
  int used = 0;
  for (const auto& r : out.rows) {
    if (!r.lasing) continue;
    mx += r.offset;
    my += r.peak;
    ++used;
  }
  if (used < 2) throw Error(ErrorKind::InvalidArgument, "fewer than two offsets leave the system lasing");
  mx /= used;
  my /= used;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& r : out.rows) {
    if (!r.lasing) continue;
    sxx += (r.offset - mx) * (r.offset - mx);
    sxy += (r.offset - mx) * (r.peak - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::InvalidArgument, "pulling offsets must not all coincide");
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  return out;
}

AtomSweep linewidth_vs_atoms(const SystemParams& p, const FilterParams& filter_base,
                             const std::vector<double>& n_grid, int jobs) {
  if (n_grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty atom-number grid");
  AtomSweep out;
  out.rows.resize(n_grid.size());
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    AtomRow& row = out.rows[i];
    row.atom_count = n_grid[i];
    row.linewidth = std::numeric_limits<double>::quiet_NaN();
    SystemParams q = p;
    q.atom_count = n_grid[i];
    try {
      validate(q);
      if (!analytic_steady(q).valid) {
        row.error = "outside the lasing window";
        continue;
      }
      row.linewidth = auto_scan(q, filter_base, jobs).fit.fwhm_deconvolved;
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, prev = hi;
  bool any = false;
  for (const auto& r : out.rows) {
    if (!r.ok) continue;
    any = true;
    lo = std::min(lo, r.linewidth);
    hi = std::max(hi, r.linewidth);
    if (prev != -std::numeric_limits<double>::infinity() && r.linewidth > prev)
      out.monotone_nonincreasing = false;
    prev = r.linewidth;
  }
  out.spread = any ? 0.5 * (hi - lo) : 0.0;
  return out;
}

}  // namespace superrad
