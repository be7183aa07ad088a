#include "superrad/ptsym.hpp"

#include <cmath>

#include "superrad/error.hpp"

namespace superrad {

namespace {

Eigen::Vector2cd unit(cd a, cd b) {
  Eigen::Vector2cd v(a, b);
  return v / v.norm();
}

PtPhase classify_symmetric(double G, double g_ep, double tol_rel) {
  double scale = std::abs(g_ep);
  if (std::abs(G - std::abs(g_ep)) <= tol_rel * scale) return PtPhase::ExceptionalPoint;
  return G > std::abs(g_ep) ? PtPhase::PTSymmetric : PtPhase::PTBroken;
}

// Eigenvector of M for eigenvalue lam, built from the first row when possible.
Eigen::Vector2cd eigvec(const Eigen::Matrix2cd& M, cd lam) {
  if (std::abs(M(0, 1)) > 0.0) return unit(M(0, 1), lam - M(0, 0));
  if (std::abs(M(1, 0)) > 0.0) return unit(lam - M(1, 1), M(1, 0));
  return std::abs(lam - M(0, 0)) <= std::abs(lam - M(1, 1)) ? unit(1.0, 0.0) : unit(0.0, 1.0);
}

}  // namespace

const char* phase_label(PtPhase phase) noexcept {
  switch (phase) {
    case PtPhase::PTSymmetric: return "PTSP";
    case PtPhase::ExceptionalPoint: return "EP";
    case PtPhase::PTBroken: return "PTBP";
    case PtPhase::Unclassified: return "unclassified";
  }
  return "unclassified";
}

Eigen::Matrix2cd effective_hamiltonian(const SystemParams& p) {
  const double g_ep = (p.kappa_a - p.kappa_b) / 4.0;
  Eigen::Matrix2cd M;
  M << cd(p.delta_a, -g_ep), cd(p.coupling_G, 0.0), cd(p.coupling_G, 0.0), cd(p.delta_b, g_ep);
  return M;
}

cd bilinear(const Eigen::Vector2cd& u, const Eigen::Vector2cd& v) { return u(0) * v(0) + u(1) * v(1); }

PtEigensystem eigensystem(const SystemParams& p, double tol_rel) {
  const double G = p.coupling_G;
  const double g_ep = (p.kappa_a - p.kappa_b) / 4.0;
  const Eigen::Matrix2cd M = effective_hamiltonian(p);
  PtEigensystem es;
  es.ep_distance = G - g_ep;

  if (p.delta_a == 0.0 && p.delta_b == 0.0) {
    // Closed form: omega = +-sqrt(G^2 - G_PT^2).
    double s = G * G - g_ep * g_ep;
    cd root = s >= 0.0 ? cd(std::sqrt(s), 0.0) : cd(0.0, std::sqrt(-s));
    es.lambda_plus = root;
    es.lambda_minus = -root;
  } else {
    cd half_tr = 0.5 * (M(0, 0) + M(1, 1));
    cd half_diff = 0.5 * (M(0, 0) - M(1, 1));
    cd root = std::sqrt(half_diff * half_diff + M(0, 1) * M(1, 0));
    es.lambda_plus = half_tr + root;
    es.lambda_minus = half_tr - root;
  }

  es.phase = p.delta_a == p.delta_b ? classify_symmetric(G, g_ep, tol_rel) : PtPhase::Unclassified;

  // (G, lambda - M00) is the closed-form eigenvector, e.g. (1, e^{i phi}) in the
  // symmetric phase and (1, i e^{phi}) in the broken phase.
  es.vec_plus = eigvec(M, es.lambda_plus);
  es.vec_minus = eigvec(M, es.lambda_minus);

  if (es.phase == PtPhase::ExceptionalPoint && G > 0.0) {
    es.defective = true;
    cd lam = 0.5 * (M(0, 0) + M(1, 1));
    es.vec_plus = eigvec(M, lam);
    es.vec_minus = es.vec_plus;
  }
  return es;
}

PtPhase classify(const SystemParams& p, double tol_rel) {
  if (p.delta_a != p.delta_b)
    throw Error(ErrorKind::UnsupportedClassification,
                "phase classification requires delta_a == delta_b");
  return classify_symmetric(p.coupling_G, (p.kappa_a - p.kappa_b) / 4.0, tol_rel);
}

std::vector<PhaseRow> phase_diagram(const SystemParams& p, const std::vector<double>& g_grid,
                                    double tol_rel) {
  if (g_grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty G grid");
  for (std::size_t i = 1; i < g_grid.size(); ++i)
    if (!(g_grid[i] > g_grid[i - 1]))
      throw Error(ErrorKind::InvalidArgument, "G grid must be strictly ascending");
  std::vector<PhaseRow> rows;
  rows.reserve(g_grid.size());
  SystemParams q = p;
  for (double G : g_grid) {
    q.coupling_G = G;
    PtEigensystem es = eigensystem(q, tol_rel);
    rows.push_back({G, es.lambda_plus, es.lambda_minus, es.phase});
  }
  return rows;
}

}  // namespace superrad
