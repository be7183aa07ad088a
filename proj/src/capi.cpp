#include "superrad.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "superrad/clock.hpp"
#include "superrad/collective.hpp"
#include "superrad/cumulant.hpp"
#include "superrad/error.hpp"
#include "superrad/filtercav.hpp"
#include "superrad/model.hpp"
#include "superrad/oracle.hpp"
#include "superrad/ptsym.hpp"
#include "superrad/spectrum.hpp"
#include "superrad/sweep.hpp"
#include "superrad/table.hpp"

struct srl_params {
  superrad::SystemParams p;
  std::vector<std::string> advisories;
};

struct srl_table {
  superrad::Table t;
};

using namespace superrad;

namespace {

thread_local std::string g_last_error;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

srl_status to_status(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidParameter: return SRL_INVALID_PARAMETER;
    case ErrorKind::InvalidArgument: return SRL_INVALID_ARGUMENT;
    case ErrorKind::EliminationUndefined: return SRL_ELIMINATION_UNDEFINED;
    case ErrorKind::NonFinite: return SRL_NON_FINITE;
    case ErrorKind::StiffnessFailure: return SRL_STIFFNESS_FAILURE;
    case ErrorKind::NoConvergence: return SRL_NO_CONVERGENCE;
    case ErrorKind::UnsupportedClassification: return SRL_UNSUPPORTED_CLASSIFICATION;
    case ErrorKind::CutoffSaturation: return SRL_CUTOFF_SATURATION;
    case ErrorKind::PoorFit: return SRL_POOR_FIT;
    case ErrorKind::PeakNotBracketed: return SRL_PEAK_NOT_BRACKETED;
    case ErrorKind::ClosureViolation: return SRL_CLOSURE_VIOLATION;
    case ErrorKind::Io: return SRL_IO;
  }
  return SRL_INTERNAL;
}

srl_status fail(srl_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs `body`, mapping exceptions onto status codes.
template <class F>
srl_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return SRL_OK;
  } catch (const Error& e) {
    return fail(to_status(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SRL_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SRL_INTERNAL, e.what());
  }
}

template <class... T>
bool any_null(const T*... ptrs) {
  return ((ptrs == nullptr) || ...);
}

srl_complex to_c(cd z) { return {z.real(), z.imag()}; }
cd from_c(srl_complex z) { return {z.re, z.im}; }

srl_state to_c(const CumulantState& s) {
  srl_state o{};
  o.n_a = s.n_a;
  o.n_b = s.n_b;
  o.ab = to_c(s.ab);
  o.as_ = to_c(s.as_);
  o.bs = to_c(s.bs);
  o.pop = s.pop;
  o.corr = to_c(s.corr);
  o.pair = s.pair;
  return o;
}

CumulantState from_c(const srl_state& s) {
  CumulantState o;
  o.n_a = s.n_a;
  o.n_b = s.n_b;
  o.ab = from_c(s.ab);
  o.as_ = from_c(s.as_);
  o.bs = from_c(s.bs);
  o.pop = s.pop;
  o.corr = from_c(s.corr);
  o.pair = s.pair;
  return o;
}

FilterParams from_c(const srl_filter* f) {
  FilterParams o;
  if (f) {
    o.delta_f = f->delta_f;
    o.beta = f->beta;
    o.kappa_f = f->kappa_f;
  }
  return o;
}

Branch to_branch(int b) {
  switch (b) {
    case SRL_BRANCH_AUTO: return Branch::Auto;
    case SRL_BRANCH_TRIVIAL: return Branch::Trivial;
    case SRL_BRANCH_LASING: return Branch::Lasing;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown branch code " + std::to_string(b));
}

int from_branch(Branch b) {
  switch (b) {
    case Branch::Auto: return SRL_BRANCH_AUTO;
    case Branch::Trivial: return SRL_BRANCH_TRIVIAL;
    case Branch::Lasing: return SRL_BRANCH_LASING;
  }
  return SRL_BRANCH_AUTO;
}

int from_phase(PtPhase ph) {
  switch (ph) {
    case PtPhase::PTSymmetric: return SRL_PTSP;
    case PtPhase::ExceptionalPoint: return SRL_EP;
    case PtPhase::PTBroken: return SRL_PTBP;
    case PtPhase::Unclassified: return SRL_UNCLASSIFIED;
  }
  return SRL_UNCLASSIFIED;
}

srl_table* wrap(Table t) { return new srl_table{std::move(t)}; }

srl_fit to_c(const FilterScan& s) {
  srl_fit f{};
  f.peak_freq = s.fit.peak_freq;
  f.fwhm_raw = s.fit.fwhm_raw;
  f.fwhm_deconvolved = s.fit.fwhm_deconvolved;
  f.amplitude = s.fit.amplitude;
  f.offset = s.fit.offset;
  f.fit_residual = s.fit.fit_residual;
  f.beta = s.filter.beta;
  f.kappa_f = s.filter.kappa_f;
  f.back_action = s.back_action;
  return f;
}

Table scan_table(const SystemParams& p, const FilterScan& s) {
  Table t({"delta_f_Hz", "n_f", "n_a"});
  for (std::size_t i = 0; i < s.delta.size(); ++i) t.add_row({s.delta[i], s.n_f[i], s.n_a[i]});
  t.attach_params(p);
  t.add_meta("beta", format_number(s.filter.beta));
  t.add_meta("kappa_f", format_number(s.filter.kappa_f));
  for (std::size_t i = 0; i < s.advisories.size(); ++i)
    t.add_meta("advisory_" + std::to_string(i), s.advisories[i]);
  return t;
}

std::vector<std::string> split_outputs(const char* csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

Axis from_c(const srl_axis& a) {
  if (!a.name) throw Error(ErrorKind::InvalidArgument, "axis name is null");
  Axis o;
  o.name = a.name;
  o.scale = a.log_scale ? Scale::Log : Scale::Linear;
  o.start = a.start;
  o.stop = a.stop;
  o.points = a.points;
  return o;
}

SweepOptions from_c(const srl_sweep_options* opt) {
  SweepOptions o;
  if (!opt) return o;
  o.jobs = opt->jobs;
  o.branch = to_branch(opt->branch);
  o.steady_tol = opt->steady_tol;
  o.ep_lock = opt->ep_lock != 0;
  if (opt->journal) o.journal = opt->journal;
  return o;
}

OracleConfig from_c(const SystemParams& p, const srl_oracle_config* c) {
  OracleConfig o;
  o.params = p;
  if (c) {
    o.fock_cutoff_a = c->fock_cutoff_a;
    o.fock_cutoff_b = c->fock_cutoff_b;
    o.t_end = c->t_end;
    o.samples = c->samples;
    o.rel_tol = c->rel_tol;
    o.abs_tol = c->abs_tol;
    o.initial_fock_a = c->initial_fock_a;
    o.initial_fock_b = c->initial_fock_b;
    o.initial_excited = c->initial_excited;
  }
  return o;
}

srl_oracle_obs to_c(const OracleObservables& o) {
  return {o.t, o.n_a, o.n_b, o.pop, to_c(o.corr), o.trace, o.min_eigenvalue, o.excitations};
}

constexpr const char* kNull = "null argument";

}  // namespace

extern "C" {

const char* srl_version(void) { return superrad::version(); }

const char* srl_last_error(void) { return g_last_error.c_str(); }

const char* srl_status_name(srl_status status) {
  switch (status) {
    case SRL_OK: return "ok";
    case SRL_INVALID_PARAMETER: return "invalid-parameter";
    case SRL_INVALID_ARGUMENT: return "invalid-argument";
    case SRL_ELIMINATION_UNDEFINED: return "elimination-undefined";
    case SRL_NON_FINITE: return "non-finite";
    case SRL_STIFFNESS_FAILURE: return "stiffness-failure";
    case SRL_NO_CONVERGENCE: return "no-convergence";
    case SRL_UNSUPPORTED_CLASSIFICATION: return "unsupported-classification";
    case SRL_CUTOFF_SATURATION: return "cutoff-saturation";
    case SRL_POOR_FIT: return "poor-fit";
    case SRL_PEAK_NOT_BRACKETED: return "peak-not-bracketed";
    case SRL_CLOSURE_VIOLATION: return "closure-violation";
    case SRL_IO: return "io";
    case SRL_NULL_POINTER: return "null-pointer";
    case SRL_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* srl_phase_name(int phase) {
  switch (phase) {
    case SRL_PTSP: return phase_label(PtPhase::PTSymmetric);
    case SRL_EP: return phase_label(PtPhase::ExceptionalPoint);
    case SRL_PTBP: return phase_label(PtPhase::PTBroken);
    default: return phase_label(PtPhase::Unclassified);
  }
}

srl_status srl_params_create(srl_params** out) {
  if (!out) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] { *out = new srl_params{}; });
}

srl_status srl_params_preset(const char* name, srl_params** out) {
  if (any_null(name, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] { *out = new srl_params{preset(std::string_view(name)), {}}; });
}

srl_status srl_params_clone(const srl_params* p, srl_params** out) {
  if (any_null(p, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] { *out = new srl_params(*p); });
}

void srl_params_destroy(srl_params* p) { delete p; }

srl_status srl_params_set(srl_params* p, const char* key, double value) {
  if (any_null(p, key)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] { set_param(p->p, key, value); });
}

srl_status srl_params_get(const srl_params* p, const char* key, double* out) {
  if (any_null(p, key, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] { *out = get_param(p->p, key); });
}

srl_status srl_params_assign(srl_params* p, const char* assignment) {
  if (any_null(p, assignment)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] { apply_assignment(p->p, assignment); });
}

srl_status srl_params_load_file(srl_params* p, const char* path) {
  if (any_null(p, path)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] { load_params_file(p->p, path); });
}

srl_status srl_params_load_text(srl_params* p, const char* text) {
  if (any_null(p, text)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] { load_params_text(p->p, text); });
}

size_t srl_param_key_count(void) { return param_keys().size(); }

const char* srl_param_key(size_t i) {
  const auto& keys = param_keys();
  return i < keys.size() ? keys[i].c_str() : nullptr;
}

size_t srl_preset_count(void) { return preset_names().size(); }

const char* srl_preset_name(size_t i) {
  static const std::vector<std::string> names = preset_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

srl_status srl_validate(srl_params* p, size_t* advisory_count) {
  if (!p) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    p->advisories.clear();
    p->advisories = validate(p->p).advisories;
    if (advisory_count) *advisory_count = p->advisories.size();
  });
}

const char* srl_advisory(const srl_params* p, size_t i) {
  if (!p || i >= p->advisories.size()) return nullptr;
  return p->advisories[i].c_str();
}

srl_status srl_derive(const srl_params* p, srl_derived* out) {
  if (any_null(p, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    const DerivedParams d = derive(p->p);
    *out = {d.chi_gauge, d.g_ep, d.kappa_eff, d.cooperativity, d.gamma_c, d.gamma_total, d.eta_max,
            d.caption_rate};
  });
}

srl_status srl_eigen(const srl_params* p, srl_eigensystem* out) {
  if (any_null(p, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    const PtEigensystem es = eigensystem(p->p);
    out->lambda_plus = to_c(es.lambda_plus);
    out->lambda_minus = to_c(es.lambda_minus);
    for (int i = 0; i < 2; ++i) {
      out->vec_plus[i] = to_c(es.vec_plus(i));
      out->vec_minus[i] = to_c(es.vec_minus(i));
    }
    out->phase = from_phase(es.phase);
    out->ep_distance = es.ep_distance;
    out->defective = es.defective ? 1 : 0;
  });
}

srl_status srl_classify(const srl_params* p, int* phase) {
  if (any_null(p, phase)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] { *phase = from_phase(classify(p->p)); });
}

srl_status srl_phase_diagram(const srl_params* p, const double* g_grid, size_t n, srl_table** out) {
  if (any_null(p, g_grid, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    const auto rows = phase_diagram(p->p, std::vector<double>(g_grid, g_grid + n));
    Table t({"G_Hz", "re_plus", "im_plus", "re_minus", "im_minus", "phase"});
    for (const auto& r : rows)
      t.add_row({r.G, r.plus.real(), r.plus.imag(), r.minus.real(), r.minus.imag(),
                 std::string(phase_label(r.phase))});
    t.attach_params(p->p);
    *out = wrap(std::move(t));
  });
}

srl_status srl_rhs(const srl_params* p, const srl_state* s, srl_state* out) {
  if (any_null(p, s, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] { *out = to_c(rhs(from_c(*s), p->p)); });
}

srl_status srl_integrate(const srl_params* p, const srl_state* s0, double t_end, double rel_tol,
                         double abs_tol, srl_table** out) {
  if (any_null(p, s0, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    const auto traj = integrate(from_c(*s0), p->p, t_end, rel_tol, abs_tol);
    Table t({"t", "n_a", "n_b", "ab_re", "ab_im", "as_re", "as_im", "bs_re", "bs_im", "pop", "corr_re",
             "corr_im", "pair"});
    for (const auto& pt : traj) {
      const auto& s = pt.state;
      t.add_row({pt.t, s.n_a, s.n_b, s.ab.real(), s.ab.imag(), s.as_.real(), s.as_.imag(), s.bs.real(),
                 s.bs.imag(), s.pop, s.corr.real(), s.corr.imag(), s.pair});
    }
    t.attach_params(p->p);
    *out = wrap(std::move(t));
  });
}

srl_status srl_steady_state(const srl_params* p, double tol, int branch, srl_state* out,
                            srl_steady_info* info) {
  if (any_null(p, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    SteadyOptions opt;
    opt.tol = tol > 0 ? tol : opt.tol;
    opt.branch = to_branch(branch);
    const SteadyResult r = steady_state(p->p, opt);
    *out = to_c(r.state);
    if (info) *info = {r.residual, r.newton_iterations, r.used_integration ? 1 : 0, from_branch(r.seed)};
  });
}

srl_status srl_analytic_steady(const srl_params* p, double* pop, double* corr, int* valid) {
  if (any_null(p, pop, corr, valid)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    const AnalyticSteady a = analytic_steady(p->p);
    *pop = a.pop;
    *corr = a.corr;
    *valid = a.valid ? 1 : 0;
  });
}

srl_status srl_residual(const srl_params* p, const srl_state* s, double* out) {
  if (any_null(p, s, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    const CumulantState x = from_c(*s);
    *out = scaled_residual(x, rhs(x, p->p), p->p);
  });
}

srl_status srl_linewidths(const srl_params* p, const srl_state* steady, srl_linewidth* out) {
  if (any_null(p, steady, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    const CumulantState s = from_c(*steady);
    QrtSystem q = build_qrt(p->p, s);
    decompose(q);
    const QrtLinewidth lw = linewidth_qrt(q);
    const AnalyticLinewidth an = linewidth_analytic_full(p->p, s);
    for (int i = 0; i < 3; ++i) {
      out->per_pole[i] = lw.per_pole[i];
      out->centers[i] = lw.centers[i];
    }
    out->narrowest = lw.narrowest;
    out->composite_fwhm = lw.composite_fwhm;
    out->peak_offset = lw.peak_offset;
    out->unresolved = lw.unresolved ? 1 : 0;
    out->defective = q.defective ? 1 : 0;
    out->analytic = an.value;
    out->analytic_expanded = an.expanded;
    out->analytic_ep = an.ep_checked ? an.ep_form : kNaN;
    out->ep_consistent = an.ep_consistent ? 1 : 0;
  });
}

srl_status srl_spectrum(const srl_params* p, const srl_state* steady, const double* offsets_hz, size_t n,
                        double* out) {
  if (any_null(p, steady, offsets_hz, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    QrtSystem q = build_qrt(p->p, from_c(*steady));
    decompose(q);
    const auto s = spectrum_curve(q, std::vector<double>(offsets_hz, offsets_hz + n));
    std::copy(s.begin(), s.end(), out);
  });
}

srl_status srl_poles(const srl_params* p, const srl_state* steady, srl_table** out) {
  if (any_null(p, steady, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    QrtSystem q = build_qrt(p->p, from_c(*steady));
    decompose(q);
    Table t({"pole", "re_lambda", "im_lambda", "fwhm_Hz", "center_Hz", "weight_re", "weight_im"});
    for (int i = 0; i < 3; ++i) {
      const cd l = q.eigenvalues(i);
      t.add_row({double(i), l.real(), l.imag(), 2.0 * std::abs(l.real()) / kTwoPi, l.imag() / kTwoPi,
                 q.weights(i).real(), q.weights(i).imag()});
    }
    t.add_meta("defective", q.defective ? "true" : "false");
    t.attach_params(p->p);
    *out = wrap(std::move(t));
  });
}

}  // extern "C"

namespace {

template <class F>
srl_status run_scan(const SystemParams& p, srl_fit* fit, srl_table** rows, F&& scan) {
  try {
    g_last_error.clear();
    const FilterScan s = scan();
    if (fit) *fit = to_c(s);
    if (rows) *rows = wrap(scan_table(p, s));
    return SRL_OK;
  } catch (const PoorFitError& e) {
    // The raw scan is still returned so the caller can inspect it.
    if (fit) *fit = to_c(e.scan());
    if (rows) *rows = wrap(scan_table(p, e.scan()));
    return fail(SRL_POOR_FIT, e.what());
  } catch (const Error& e) {
    return fail(to_status(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail(SRL_INTERNAL, e.what());
  }
}

}  // namespace

extern "C" {

srl_status srl_filter_scan(const srl_params* p, const srl_filter* f, const double* grid, size_t n, int jobs,
                           srl_fit* fit, srl_table** rows) {
  if (any_null(p, grid)) return fail(SRL_NULL_POINTER, kNull);
  return run_scan(p->p, fit, rows, [&] {
    return spectrum_scan(p->p, from_c(f), std::vector<double>(grid, grid + n), jobs);
  });
}

srl_status srl_filter_scan_auto(const srl_params* p, const srl_filter* f, int jobs, srl_fit* fit,
                                srl_table** rows) {
  if (!p) return fail(SRL_NULL_POINTER, kNull);
  return run_scan(p->p, fit, rows, [&] { return auto_scan(p->p, from_c(f), jobs); });
}

srl_status srl_pulling(const srl_params* p, const srl_filter* f, const double* offsets_hz, size_t n, int jobs,
                       double* slope, srl_table** rows) {
  if (any_null(p, offsets_hz, slope)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    const PullingResult r = pulling_factor(p->p, from_c(f), std::vector<double>(offsets_hz, offsets_hz + n), jobs);
    *slope = r.slope;
    if (rows) {
      Table t({"offset_Hz", "peak_Hz", "fwhm_Hz", "corr", "lasing"});
      for (const auto& row : r.rows)
        t.add_row({row.offset, row.peak, row.fwhm, row.corr, row.lasing ? 1.0 : 0.0});
      t.attach_params(p->p);
      t.add_meta("slope", format_number(r.slope));
      t.add_meta("intercept", format_number(r.intercept));
      *rows = wrap(std::move(t));
    }
  });
}

srl_status srl_linewidth_vs_atoms(const srl_params* p, const srl_filter* f, const double* n_grid, size_t n,
                                  int jobs, double* spread, int* monotone, srl_table** rows) {
  if (any_null(p, n_grid)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    const AtomSweep s = linewidth_vs_atoms(p->p, from_c(f), std::vector<double>(n_grid, n_grid + n), jobs);
    if (spread) *spread = s.spread;
    if (monotone) *monotone = s.monotone_nonincreasing ? 1 : 0;
    if (rows) {
      Table t({"atom_count", "linewidth_Hz", "ok", "error"});
      for (const auto& r : s.rows) t.add_row({r.atom_count, r.linewidth, r.ok ? 1.0 : 0.0, r.error});
      t.attach_params(p->p);
      t.add_meta("spread", format_number(s.spread));
      t.add_meta("monotone_nonincreasing", s.monotone_nonincreasing ? "true" : "false");
      *rows = wrap(std::move(t));
    }
  });
}

srl_status srl_dicke_point(const srl_state* s, double atom_count, srl_dicke* out) {
  if (any_null(s, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    const DickePoint d = dicke_coordinates(from_c(*s), atom_count);
    *out = {d.jz, d.j_len, d.j_eff, d.m};
  });
}

srl_status srl_bright_dark(const srl_params* p, double t_end, int samples, int* bright_divergent,
                           int* dark_divergent, srl_table** out) {
  if (!p) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    const BrightDark bd = bright_dark(p->p, t_end, samples);
    if (bright_divergent) *bright_divergent = bd.bright_divergent ? 1 : 0;
    if (dark_divergent) *dark_divergent = bd.dark_divergent ? 1 : 0;
    if (out) {
      Table t({"t", "n_bright", "n_dark"});
      for (std::size_t i = 0; i < bd.t.size(); ++i) t.add_row({bd.t[i], bd.n_bright[i], bd.n_dark[i]});
      t.attach_params(p->p);
      t.add_meta("bright_divergent", bd.bright_divergent ? "true" : "false");
      t.add_meta("dark_divergent", bd.dark_divergent ? "true" : "false");
      *out = wrap(std::move(t));
    }
  });
}

void srl_oracle_defaults(srl_oracle_config* cfg) {
  if (!cfg) return;
  const OracleConfig d;
  *cfg = {d.fock_cutoff_a, d.fock_cutoff_b, d.t_end,          d.samples,         d.rel_tol,
          d.abs_tol,       d.initial_fock_a, d.initial_fock_b, d.initial_excited};
}

srl_status srl_oracle_steady(const srl_params* p, const srl_oracle_config* cfg, srl_oracle_obs* out) {
  if (any_null(p, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] { *out = to_c(steady_exact(from_c(p->p, cfg))); });
}

srl_status srl_oracle_evolve(const srl_params* p, const srl_oracle_config* cfg, srl_table** out) {
  if (any_null(p, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    const OracleConfig c = from_c(p->p, cfg);
    const auto series = evolve_exact(c);
    Table t({"t", "n_a", "n_b", "pop", "corr_re", "corr_im", "trace", "min_eigenvalue", "excitations"});
    for (const auto& o : series)
      t.add_row({o.t, o.n_a, o.n_b, o.pop, o.corr.real(), o.corr.imag(), o.trace, o.min_eigenvalue,
                 o.excitations});
    t.attach_params(p->p);
    t.add_meta("fock_cutoff_a", std::to_string(c.fock_cutoff_a));
    t.add_meta("fock_cutoff_b", std::to_string(c.fock_cutoff_b));
    *out = wrap(std::move(t));
  });
}

srl_status srl_qpn(const srl_clock_spec* spec, double* out) {
  if (any_null(spec, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    ClockSpec c;
    c.chi_shape = spec->chi_shape;
    c.t_cycle = spec->t_cycle;
    c.tau = spec->tau;
    c.linewidth = spec->linewidth;
    c.nu_clock = spec->nu_clock;
    c.atom_count = spec->atom_count;
    *out = qpn_instability(c);
  });
}

srl_status srl_allan(const double* freq_hz, size_t n, double nu_clock, double* out) {
  if (any_null(out) || (n > 0 && !freq_hz)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    *out = allan_deviation(n ? std::vector<double>(freq_hz, freq_hz + n) : std::vector<double>{}, nu_clock);
  });
}

srl_status srl_power(const srl_params* p, double n_a, int use_kappa_eff, double* out) {
  if (any_null(p, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded(
      [&] { *out = emission_power(p->p, n_a, use_kappa_eff ? PowerRate::KappaEff : PowerRate::KappaA); });
}

void srl_sweep_defaults(srl_sweep_options* opt) {
  if (!opt) return;
  const SweepOptions d;
  *opt = {d.jobs, SRL_BRANCH_AUTO, d.steady_tol, 0, nullptr};
}

size_t srl_observable_count(void) { return observable_names().size(); }

const char* srl_observable_name(size_t i) {
  const auto& names = observable_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

srl_status srl_sweep(const srl_params* fixed, const srl_axis* axis, const char* outputs,
                     const srl_sweep_options* opt, srl_table** out) {
  if (any_null(fixed, axis, outputs, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    SweepSpec spec{from_c(*axis), fixed->p, split_outputs(outputs)};
    *out = wrap(run_sweep(spec, from_c(opt)));
  });
}

srl_status srl_sweep_2d(const srl_params* fixed, const srl_axis* x, const srl_axis* y, const char* outputs,
                        const srl_sweep_options* opt, srl_table** out) {
  if (any_null(fixed, x, y, outputs, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    const auto outs = split_outputs(outputs);
    SweepSpec sx{from_c(*x), fixed->p, outs};
    SweepSpec sy{from_c(*y), fixed->p, outs};
    *out = wrap(run_2d_sweep(sx, sy, from_c(opt)));
  });
}

srl_status srl_table_create(const char* const* columns, size_t n, srl_table** out) {
  if (any_null(columns, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    std::vector<std::string> cols;
    for (size_t i = 0; i < n; ++i) {
      if (!columns[i]) throw Error(ErrorKind::InvalidArgument, "null column name");
      cols.emplace_back(columns[i]);
    }
    *out = wrap(Table(std::move(cols)));
  });
}

srl_status srl_table_add_row(srl_table* t, const double* values) {
  if (any_null(t, values)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] { t->t.add_row(std::vector<Cell>(values, values + t->t.cols())); });
}

srl_status srl_table_attach_params(srl_table* t, const srl_params* p) {
  if (any_null(t, p)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] { t->t.attach_params(p->p); });
}

void srl_table_destroy(srl_table* t) { delete t; }

size_t srl_table_rows(const srl_table* t) { return t ? t->t.rows() : 0; }

size_t srl_table_cols(const srl_table* t) { return t ? t->t.cols() : 0; }

const char* srl_table_column(const srl_table* t, size_t col) {
  if (!t || col >= t->t.cols()) return nullptr;
  return t->t.columns()[col].c_str();
}

srl_status srl_table_number(const srl_table* t, size_t row, size_t col, double* out) {
  if (any_null(t, out)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] { *out = t->t.number(row, col); });
}

const char* srl_table_text(const srl_table* t, size_t row, size_t col) {
  if (!t || row >= t->t.rows() || col >= t->t.cols()) return nullptr;
  const Cell& c = t->t.at(row, col);
  const std::string* s = std::get_if<std::string>(&c);
  return s ? s->c_str() : nullptr;
}

size_t srl_table_meta_count(const srl_table* t) { return t ? t->t.meta().size() : 0; }

srl_status srl_table_meta(const srl_table* t, size_t i, const char** key, const char** value) {
  if (any_null(t, key, value)) return fail(SRL_NULL_POINTER, kNull);
  if (i >= t->t.meta().size()) return fail(SRL_INVALID_ARGUMENT, "meta index out of range");
  *key = t->t.meta()[i].first.c_str();
  *value = t->t.meta()[i].second.c_str();
  return SRL_OK;
}

srl_status srl_table_set_meta(srl_table* t, const char* key, const char* value) {
  if (any_null(t, key, value)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] { t->t.add_meta(key, value); });
}

srl_status srl_table_write(const srl_table* t, const char* path, const char* format) {
  if (any_null(t, path, format)) return fail(SRL_NULL_POINTER, kNull);
  return guarded([&] {
    const std::string fmt = format;
    if (fmt != "csv" && fmt != "json") throw Error(ErrorKind::InvalidArgument, "unknown format '" + fmt + "'");
    auto emit = [&](std::ostream& os) {
      if (fmt == "csv")
        t->t.write_csv(os);
      else
        t->t.write_json(os);
    };
    if (std::strcmp(path, "-") == 0) {
      emit(std::cout);
      std::cout.flush();
      return;
    }
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::Io, std::string("cannot open '") + path + "' for writing");
    emit(f);
    if (!f) throw Error(ErrorKind::Io, std::string("write failed for '") + path + "'");
  });
}

}  // extern "C"
