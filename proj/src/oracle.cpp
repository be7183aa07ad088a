#include "superrad/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "superrad/error.hpp"

namespace superrad {

namespace {

using cd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cd>;
const cd kI(0.0, 1.0);

struct Jump {
  double rate;
  SpMat op;
};

struct Model {
  int dim = 0;
  int atoms = 0;
  SpMat a, b;
  std::vector<SpMat> sm;  // lowering operator of each atom
  SpMat heff;             // H - (i/2) sum_k r_k C_k^dag C_k
  std::vector<Jump> jumps;
  SpMat num_a, num_b, num_exc;
};

SpMat identity(int n) {
  SpMat m(n, n);
  m.setIdentity();
  return m;
}

SpMat lowering(int cutoff) {
  SpMat m(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) m.insert(n - 1, n) = std::sqrt(static_cast<double>(n));
  m.makeCompressed();
  return m;
}

// op acting on subsystem k of the product space with factor sizes dims.
SpMat embed(const SpMat& op, std::size_t k, const std::vector<int>& dims) {
  SpMat out = k == 0 ? op : identity(dims[0]);
  for (std::size_t i = 1; i < dims.size(); ++i) {
    SpMat next = i == k ? op : identity(dims[i]);
    SpMat tmp = Eigen::kroneckerProduct(out, next);
    out = tmp;
  }
  return out;
}

int checked_dimension(const OracleConfig& cfg) {
  const double n = cfg.params.atom_count;
  if (!(n >= 1.0 && n <= kOracleMaxAtoms && n == std::floor(n)))
    throw Error(ErrorKind::InvalidArgument, "oracle atom_count must be an integer in [1, 3]");
  if (cfg.fock_cutoff_a < 1 || cfg.fock_cutoff_b < 1)
    throw Error(ErrorKind::InvalidArgument, "oracle Fock cutoffs must be >= 1");
  long dim = static_cast<long>(cfg.fock_cutoff_a + 1) * (cfg.fock_cutoff_b + 1) << static_cast<int>(n);
  if (dim > kOracleMaxDim) {
    std::ostringstream os;
    os << "oracle Hilbert dimension " << dim << " exceeds " << kOracleMaxDim;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  return static_cast<int>(dim);
}

Model build_model(const OracleConfig& cfg) {
  validate(cfg.params);
  Model m;
  m.dim = checked_dimension(cfg);
  m.atoms = static_cast<int>(cfg.params.atom_count);
  std::vector<int> dims = {cfg.fock_cutoff_a + 1, cfg.fock_cutoff_b + 1};
  for (int j = 0; j < m.atoms; ++j) dims.push_back(2);

  SpMat s2(2, 2);
  s2.insert(0, 1) = 1.0;  // |g><e| with |g> = 0, |e> = 1
  m.a = embed(lowering(cfg.fock_cutoff_a), 0, dims);
  m.b = embed(lowering(cfg.fock_cutoff_b), 1, dims);
  for (int j = 0; j < m.atoms; ++j) m.sm.push_back(embed(s2, 2 + j, dims));

  const SystemParams& p = cfg.params;
  const double da = to_angular(p.delta_a), db = to_angular(p.delta_b);
  const double G = to_angular(p.coupling_G), g = to_angular(p.coupling_g);
  SpMat ad = m.a.adjoint(), bd = m.b.adjoint();
  m.num_a = ad * m.a;
  m.num_b = bd * m.b;
  SpMat H = da * m.num_a + db * m.num_b + G * (SpMat(ad * m.b) + SpMat(bd * m.a));
  m.num_exc = m.num_a + m.num_b;
  for (const SpMat& s : m.sm) {
    SpMat sp = s.adjoint();
    H += g * (SpMat(ad * s) + SpMat(sp * m.a));
    m.num_exc += sp * s;
  }

  auto add_jump = [&](double cyclic_rate, const SpMat& op) {
    if (cyclic_rate > 0.0) m.jumps.push_back({to_angular(cyclic_rate), op});
  };
  add_jump(p.kappa_a, m.a);
  add_jump(p.kappa_b, m.b);
  for (const SpMat& s : m.sm) {
    SpMat sp = s.adjoint();
    add_jump(p.gamma, s);
    add_jump(p.eta, sp);
    // Pure dephasing as L[s+ s-]: coherences decay at gamma_phi / 2.
    add_jump(p.gamma_phi, SpMat(sp * s));
  }
  m.heff = H;
  for (const Jump& j : m.jumps) m.heff -= (0.5 * j.rate) * kI * SpMat(j.op.adjoint() * j.op);
  m.heff.makeCompressed();
  return m;
}

// Tr(A rho) without forming the product.
cd expect(const SpMat& A, const Eigen::MatrixXcd& rho) {
  cd acc = 0.0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) acc += it.value() * rho(it.col(), it.row());
  return acc;
}

OracleObservables observe(const Model& m, const Eigen::MatrixXcd& rho, double t) {
  OracleObservables o;
  o.t = t;
  o.trace = rho.trace().real();
  o.n_a = expect(m.num_a, rho).real();
  o.n_b = expect(m.num_b, rho).real();
  const SpMat& s1 = m.sm[0];
  o.pop = expect(SpMat(SpMat(s1.adjoint()) * s1), rho).real();
  if (m.atoms >= 2) o.corr = expect(SpMat(SpMat(s1.adjoint()) * m.sm[1]), rho);
  o.excitations = expect(m.num_exc, rho).real();
  Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  o.min_eigenvalue = es.eigenvalues().minCoeff();
  return o;
}

void check_cutoff(const OracleConfig& cfg, const OracleObservables& o) {
  auto saturated = [](double n, int c) { return n > 1e-9 && n > c - 2.0; };
  std::ostringstream os;
  if (saturated(o.n_a, cfg.fock_cutoff_a))
    os << "<a^dag a> = " << o.n_a << " within 2 levels of cutoff " << cfg.fock_cutoff_a << "; ";
  if (saturated(o.n_b, cfg.fock_cutoff_b))
    os << "<b^dag b> = " << o.n_b << " within 2 levels of cutoff " << cfg.fock_cutoff_b << "; ";
  std::string msg = os.str();
  if (!msg.empty()) throw Error(ErrorKind::CutoffSaturation, msg + "increase the Fock cutoff");
}

Eigen::MatrixXcd initial_state(const OracleConfig& cfg, const Model& m) {
  if (cfg.initial_fock_a < 0 || cfg.initial_fock_a > cfg.fock_cutoff_a || cfg.initial_fock_b < 0 ||
      cfg.initial_fock_b > cfg.fock_cutoff_b || cfg.initial_excited < 0 || cfg.initial_excited > m.atoms)
    throw Error(ErrorKind::InvalidArgument, "oracle initial state outside the truncated space");
  // Index of the product basis state: a is the slowest factor.
  long idx = cfg.initial_fock_a;
  idx = idx * (cfg.fock_cutoff_b + 1) + cfg.initial_fock_b;
  for (int j = 0; j < m.atoms; ++j) idx = idx * 2 + (j < cfg.initial_excited ? 1 : 0);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(m.dim, m.dim);
  rho(idx, idx) = 1.0;
  return rho;
}

// Column-stacked vec: vec(A rho B) = (B^T kron A) vec(rho).
SpMat liouvillian(const Model& m) {
  const SpMat I = identity(m.dim);
  SpMat L = -kI * SpMat(Eigen::kroneckerProduct(I, m.heff));
  L += kI * SpMat(Eigen::kroneckerProduct(SpMat(m.heff.conjugate()), I));
  for (const Jump& j : m.jumps)
    L += j.rate * SpMat(Eigen::kroneckerProduct(SpMat(j.op.conjugate()), j.op));
  L.makeCompressed();
  return L;
}

// Above this dimension the superoperator gets too large and the evolution
// applies the operators to rho directly.
constexpr int kSuperoperatorDim = 256;

}  // namespace

int oracle_dimension(const OracleConfig& cfg) { return checked_dimension(cfg); }

std::vector<OracleObservables> evolve_exact(const OracleConfig& cfg) {
  if (!(cfg.t_end > 0.0)) throw Error(ErrorKind::InvalidArgument, "oracle t_end must be > 0");
  if (cfg.samples < 2) throw Error(ErrorKind::InvalidArgument, "oracle needs at least 2 samples");
  if (!(cfg.rel_tol > 0.0 && cfg.rel_tol < 1.0 && cfg.abs_tol > 0.0 && cfg.abs_tol < 1.0))
    throw Error(ErrorKind::InvalidArgument, "tolerances must lie in (0, 1)");
  const Model m = build_model(cfg);
  const int D = m.dim;
  Eigen::MatrixXcd rho0 = initial_state(cfg, m);

  // The state is rho stored as interleaved re/im doubles, column major.
  using State = std::vector<double>;
  State x(2 * static_cast<std::size_t>(D) * D);
  Eigen::Map<Eigen::MatrixXcd>(reinterpret_cast<cd*>(x.data()), D, D) = rho0;

  const SpMat L = D <= kSuperoperatorDim ? liouvillian(m) : SpMat();
  auto rhs = [&m, &L, D](const State& xs, State& dxs, double) {
    const long n = static_cast<long>(D) * D;
    if (L.rows() == n) {
      Eigen::Map<const Eigen::VectorXcd> v(reinterpret_cast<const cd*>(xs.data()), n);
      Eigen::Map<Eigen::VectorXcd>(reinterpret_cast<cd*>(dxs.data()), n).noalias() = L * v;
      return;
    }
    Eigen::Map<const Eigen::MatrixXcd> rho(reinterpret_cast<const cd*>(xs.data()), D, D);
    Eigen::Map<Eigen::MatrixXcd> d(reinterpret_cast<cd*>(dxs.data()), D, D);
    // -i (Heff rho - rho Heff^dag), using rho = rho^dag.
    Eigen::MatrixXcd X = m.heff * rho;
    d = -kI * X + kI * X.adjoint();
    for (const Jump& j : m.jumps) {
      Eigen::MatrixXcd Y = j.op * rho;
      d += j.rate * (j.op * Y.adjoint()).adjoint();
    }
  };

  std::vector<double> times(cfg.samples);
  for (int i = 0; i < cfg.samples; ++i) times[i] = cfg.t_end * i / (cfg.samples - 1);
  std::vector<OracleObservables> out;
  out.reserve(times.size());
  auto observer = [&](const State& xs, double t) {
    Eigen::Map<const Eigen::MatrixXcd> rho(reinterpret_cast<const cd*>(xs.data()), D, D);
    out.push_back(observe(m, rho, t));
  };
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_dense_output(cfg.abs_tol, cfg.rel_tol, ode::runge_kutta_dopri5<State>());
  ode::integrate_times(stepper, rhs, x, times.begin(), times.end(), cfg.t_end / 1000.0, observer);
  for (const auto& o : out)
    if (!std::isfinite(o.trace)) throw Error(ErrorKind::NonFinite, "oracle evolution diverged");
  check_cutoff(cfg, out.back());
  return out;
}

OracleObservables steady_exact(const OracleConfig& cfg) {
  const Model m = build_model(cfg);
  const int D = m.dim;
  if (D > kOracleMaxSteadyDim) {
    std::ostringstream os;
    os << "steady solve limited to dimension " << kOracleMaxSteadyDim << " (got " << D << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  const SpMat L = liouvillian(m);
  // Replace the first equation by the trace condition.
  const long n = static_cast<long>(D) * D;
  std::vector<Eigen::Triplet<cd>> trip;
  trip.reserve(L.nonZeros() + D);
  for (int k = 0; k < L.outerSize(); ++k)
    for (SpMat::InnerIterator it(L, k); it; ++it)
      if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < D; ++i) trip.emplace_back(0, static_cast<long>(i) * D + i, 1.0);
  SpMat A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs[0] = 1.0;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw Error(ErrorKind::NoConvergence, "Liouvillian factorisation failed: " + lu.lastErrorMessage());
  Eigen::VectorXcd v = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !v.allFinite())
    throw Error(ErrorKind::NoConvergence, "Liouvillian kernel solve failed");
  Eigen::MatrixXcd rho = Eigen::Map<Eigen::MatrixXcd>(v.data(), D, D);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  OracleObservables o = observe(m, rho, std::numeric_limits<double>::infinity());
  check_cutoff(cfg, o);
  return o;
}

}  // namespace superrad
