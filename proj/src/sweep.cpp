#include "superrad/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>

#include "superrad/clock.hpp"
#include "superrad/collective.hpp"
#include "superrad/error.hpp"
#include "superrad/parallel.hpp"
#include "superrad/ptsym.hpp"
#include "superrad/spectrum.hpp"

namespace superrad {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Lazily computed quantities shared by the observables of one point.
struct PointContext {
  const SystemParams& p;
  const SweepOptions& opt;
  std::optional<DerivedParams> derived;
  std::optional<SteadyResult> steady;
  std::optional<QrtLinewidth> qrt;
  std::optional<DickePoint> dicke;
  std::optional<PtEigensystem> eig;
  std::optional<AnalyticSteady> analytic;

  const DerivedParams& d() {
    if (!derived) derived = derive(p);
    return *derived;
  }
  const SteadyResult& s() {
    if (!steady) {
      SteadyOptions so;
      so.tol = opt.steady_tol;
      so.branch = opt.branch;
      steady = steady_state(p, so);
    }
    return *steady;
  }
  const QrtLinewidth& q() {
    if (!qrt) {
      QrtSystem sys = build_qrt(p, s().state);
      decompose(sys);
      qrt = linewidth_qrt(sys);
    }
    return *qrt;
  }
  const DickePoint& dk() {
    if (!dicke) dicke = dicke_coordinates(s().state, p.atom_count);
    return *dicke;
  }
  const PtEigensystem& e() {
    if (!eig) eig = eigensystem(p);
    return *eig;
  }
  const AnalyticSteady& a() {
    if (!analytic) analytic = analytic_steady(p);
    return *analytic;
  }
};

using Getter = std::function<double(PointContext&)>;

const std::vector<std::pair<std::string, Getter>>& observables() {
  static const std::vector<std::pair<std::string, Getter>> table = {
      {"n_a", [](PointContext& c) { return c.s().state.n_a; }},
      {"n_b", [](PointContext& c) { return c.s().state.n_b; }},
      {"ab_re", [](PointContext& c) { return c.s().state.ab.real(); }},
      {"ab_im", [](PointContext& c) { return c.s().state.ab.imag(); }},
      {"as_re", [](PointContext& c) { return c.s().state.as_.real(); }},
      {"as_im", [](PointContext& c) { return c.s().state.as_.imag(); }},
      {"bs_re", [](PointContext& c) { return c.s().state.bs.real(); }},
      {"bs_im", [](PointContext& c) { return c.s().state.bs.imag(); }},
      {"pop", [](PointContext& c) { return c.s().state.pop; }},
      {"corr", [](PointContext& c) { return c.s().state.corr.real(); }},
      {"corr_im", [](PointContext& c) { return c.s().state.corr.imag(); }},
      {"pair", [](PointContext& c) { return c.s().state.pair; }},
      {"residual", [](PointContext& c) { return c.s().residual; }},
      {"chi_gauge", [](PointContext& c) { return c.d().chi_gauge; }},
      {"g_ep", [](PointContext& c) { return c.d().g_ep; }},
      {"kappa_eff", [](PointContext& c) { return c.d().kappa_eff; }},
      {"cooperativity", [](PointContext& c) { return c.d().cooperativity; }},
      {"gamma_c", [](PointContext& c) { return c.d().gamma_c; }},
      {"gamma_total", [](PointContext& c) { return c.d().gamma_total; }},
      {"eta_max", [](PointContext& c) { return c.d().eta_max; }},
      {"caption_rate", [](PointContext& c) { return c.d().caption_rate; }},
      {"analytic_pop", [](PointContext& c) { return c.a().pop; }},
      {"analytic_corr", [](PointContext& c) { return c.a().corr; }},
      {"analytic_valid", [](PointContext& c) { return c.a().valid ? 1.0 : 0.0; }},
      {"linewidth_analytic", [](PointContext& c) { return linewidth_analytic(c.p, c.s().state); }},
      {"linewidth_qrt", [](PointContext& c) { return c.q().composite_fwhm; }},
      {"linewidth_pole", [](PointContext& c) { return c.q().narrowest; }},
      {"peak_offset", [](PointContext& c) { return c.q().peak_offset; }},
      {"dicke_jz", [](PointContext& c) { return c.dk().jz; }},
      {"dicke_j", [](PointContext& c) { return c.dk().j_len; }},
      {"dicke_jeff", [](PointContext& c) { return c.dk().j_eff; }},
      {"dicke_m_shifted", [](PointContext& c) { return c.dk().m + 0.5 * c.p.atom_count; }},
      {"power", [](PointContext& c) { return emission_power(c.p, std::max(c.s().state.n_a, 0.0)); }},
      {"power_eff",
       [](PointContext& c) {
         return emission_power(c.p, std::max(c.s().state.n_a, 0.0), PowerRate::KappaEff);
       }},
      {"re_plus", [](PointContext& c) { return c.e().lambda_plus.real(); }},
      {"im_plus", [](PointContext& c) { return c.e().lambda_plus.imag(); }},
      {"re_minus", [](PointContext& c) { return c.e().lambda_minus.real(); }},
      {"im_minus", [](PointContext& c) { return c.e().lambda_minus.imag(); }},
  };
  return table;
}

const Getter& getter(const std::string& name) {
  for (const auto& [k, g] : observables())
    if (k == name) return g;
  throw Error(ErrorKind::InvalidArgument, "unknown observable '" + name + "'");
}

std::string one_line(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return s;
}

struct Row {
  std::vector<double> values;
  std::string error;
};

std::string fingerprint(const std::vector<Axis>& axes, const SweepSpec& base, const SweepOptions& opt) {
  std::ostringstream os;
  os << "v=" << version();
  for (const Axis& a : axes)
    os << ";axis=" << a.name << ',' << scale_label(a.scale) << ',' << format_exact(a.start) << ','
       << format_exact(a.stop) << ',' << a.points;
  for (const auto& k : param_keys()) os << ';' << k << '=' << format_exact(get_param(base.fixed, k));
  os << ";outputs=";
  for (const auto& o : base.outputs) os << o << ',';
  os << ";branch=" << branch_label(opt.branch) << ";tol=" << format_exact(opt.steady_tol)
     << ";ep_lock=" << opt.ep_lock;
  return os.str();
}

constexpr const char* kJournalTag = "# superrad-journal ";

// Completed rows from an existing journal with a matching fingerprint.
std::map<std::size_t, Row> load_journal(const std::string& path, const std::string& fp, std::size_t n,
                                        std::size_t width) {
  std::map<std::size_t, Row> done;
  std::ifstream in(path);
  if (!in) return done;
  std::string line;
  if (!std::getline(in, line)) return done;
  if (line != kJournalTag + fp)
    throw Error(ErrorKind::Io, "journal '" + path + "' belongs to a different sweep; remove it or change --journal");
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, '\t')) f.push_back(tok);
    if (line.empty() || line.back() == '\t') f.emplace_back();
    // A torn final line from an interrupted write is ignored.
    if (f.size() != width + 2) continue;
    try {
      std::size_t idx = std::stoul(f[0]);
      if (idx >= n) continue;
      Row r;
      for (std::size_t k = 0; k < width; ++k) r.values.push_back(std::stod(f[k + 1]));
      r.error = f.back();
      done[idx] = std::move(r);
    } catch (const std::exception&) {
      continue;
    }
  }
  return done;
}

// Evaluates every point, resuming from and appending to the journal.
std::vector<Row> run_points(const std::vector<SystemParams>& points, const SweepSpec& base,
                            const std::vector<Axis>& axes, const SweepOptions& opt) {
  const std::size_t n = points.size(), width = base.outputs.size();
  std::vector<Row> rows(n);
  std::vector<bool> have(n, false);
  std::ofstream journal;
  std::mutex mu;
  if (!opt.journal.empty()) {
    const std::string fp = fingerprint(axes, base, opt);
    auto done = load_journal(opt.journal, fp, n, width);
    for (auto& [i, r] : done) {
      rows[i] = std::move(r);
      have[i] = true;
    }
    bool fresh = done.empty();
    journal.open(opt.journal, fresh ? std::ios::trunc : std::ios::app);
    if (!journal) throw Error(ErrorKind::Io, "cannot open journal '" + opt.journal + "'");
    if (fresh) journal << kJournalTag << fp << "\n" << std::flush;
  }
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < n; ++i)
    if (!have[i]) todo.push_back(i);
  const int jobs = opt.jobs > 0 ? opt.jobs : default_jobs();
  parallel_for(todo.size(), jobs, [&](std::size_t k) {
    const std::size_t i = todo[k];
    Row r;
    try {
      r.values = evaluate_point(points[i], base.outputs, opt);
    } catch (const std::exception& e) {
      r.values.assign(width, kNaN);
      r.error = one_line(e.what());
    }
    if (journal.is_open()) {
      std::ostringstream os;
      os << i;
      for (double v : r.values) os << '\t' << format_exact(v);
      os << '\t' << r.error << '\n';
      std::lock_guard<std::mutex> lock(mu);
      journal << os.str() << std::flush;
    }
    rows[i] = std::move(r);
  });
  return rows;
}

void add_axis_meta(Table& t, const char* prefix, const Axis& a) {
  std::string p(prefix);
  t.add_meta(p + "axis", a.name);
  t.add_meta(p + "scale", scale_label(a.scale));
  t.add_meta(p + "start", format_number(a.start));
  t.add_meta(p + "stop", format_number(a.stop));
  t.add_meta(p + "points", std::to_string(a.points));
}

SystemParams point_params(SystemParams p, const SweepOptions& opt) {
  if (opt.ep_lock) p.coupling_G = (p.kappa_a - p.kappa_b) / 4.0;
  return p;
}

}  // namespace

Scale parse_scale(const std::string& s) {
  if (s == "linear" || s == "lin") return Scale::Linear;
  if (s == "log") return Scale::Log;
  throw Error(ErrorKind::InvalidArgument, "unknown scale '" + s + "' (linear|log)");
}

const char* scale_label(Scale s) noexcept { return s == Scale::Log ? "log" : "linear"; }

const std::vector<std::string>& observable_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& kv : observables()) v.push_back(kv.first);
    return v;
  }();
  return names;
}

void validate_axis(const Axis& a) {
  if (!is_param_key(a.name)) throw Error(ErrorKind::InvalidArgument, "unknown sweep axis '" + a.name + "'");
  if (a.points < 2) throw Error(ErrorKind::InvalidArgument, "sweep needs at least 2 points");
  if (!(std::isfinite(a.start) && std::isfinite(a.stop) && a.start < a.stop))
    throw Error(ErrorKind::InvalidArgument, "sweep range needs start < stop");
  if (a.scale == Scale::Log && !(a.start > 0.0))
    throw Error(ErrorKind::InvalidArgument, "log sweep needs start > 0");
}

void validate_outputs(const std::vector<std::string>& outputs) {
  if (outputs.empty()) throw Error(ErrorKind::InvalidArgument, "no sweep outputs requested");
  for (const auto& o : outputs) getter(o);
}

std::vector<double> axis_grid(const Axis& a) {
  validate_axis(a);
  std::vector<double> v(a.points);
  for (int i = 0; i < a.points; ++i) {
    double f = static_cast<double>(i) / (a.points - 1);
    v[i] = a.scale == Scale::Log ? a.start * std::pow(a.stop / a.start, f) : a.start + (a.stop - a.start) * f;
  }
  v.back() = a.stop;
  return v;
}

std::vector<double> evaluate_point(const SystemParams& p, const std::vector<std::string>& outputs,
                                   const SweepOptions& opt) {
  validate(p);
  PointContext ctx{p, opt, {}, {}, {}, {}, {}, {}};
  std::vector<double> out;
  out.reserve(outputs.size());
  for (const auto& name : outputs) out.push_back(getter(name)(ctx));
  return out;
}

Table run_sweep(const SweepSpec& spec, const SweepOptions& opt) {
  validate_outputs(spec.outputs);
  const std::vector<double> grid = axis_grid(spec.axis);
  std::vector<SystemParams> points;
  for (double v : grid) {
    SystemParams p = spec.fixed;
    set_param(p, spec.axis.name, v);
    points.push_back(point_params(p, opt));
  }
  std::vector<Row> rows = run_points(points, spec, {spec.axis}, opt);

  std::vector<std::string> cols = {spec.axis.name};
  cols.insert(cols.end(), spec.outputs.begin(), spec.outputs.end());
  cols.push_back("error");
  Table t(cols);
  t.attach_params(spec.fixed);
  add_axis_meta(t, "", spec.axis);
  t.add_meta("branch", branch_label(opt.branch));
  if (opt.ep_lock) t.add_meta("ep_lock", "G = (kappa_a - kappa_b) / 4");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<Cell> row = {grid[i]};
    for (double v : rows[i].values) row.emplace_back(v);
    row.emplace_back(rows[i].error);
    t.add_row(std::move(row));
  }
  return t;
}

Table run_2d_sweep(const SweepSpec& x, const SweepSpec& y, const SweepOptions& opt) {
  validate_outputs(x.outputs);
  if (x.axis.name == y.axis.name) throw Error(ErrorKind::InvalidArgument, "2D sweep axes must differ");
  const std::vector<double> gx = axis_grid(x.axis), gy = axis_grid(y.axis);
  std::vector<SystemParams> points;
  for (double vy : gy)
    for (double vx : gx) {
      SystemParams p = x.fixed;
      set_param(p, x.axis.name, vx);
      set_param(p, y.axis.name, vy);
      points.push_back(point_params(p, opt));
    }
  std::vector<Row> rows = run_points(points, x, {x.axis, y.axis}, opt);

  std::vector<std::string> cols = {x.axis.name, y.axis.name};
  cols.insert(cols.end(), x.outputs.begin(), x.outputs.end());
  cols.push_back("error");
  Table t(cols);
  t.attach_params(x.fixed);
  add_axis_meta(t, "x_", x.axis);
  add_axis_meta(t, "y_", y.axis);
  t.add_meta("branch", branch_label(opt.branch));
  if (opt.ep_lock) t.add_meta("ep_lock", "G = (kappa_a - kappa_b) / 4");
  std::size_t i = 0;
  for (double vy : gy)
    for (double vx : gx) {
      std::vector<Cell> row = {vx, vy};
      for (double v : rows[i].values) row.emplace_back(v);
      row.emplace_back(rows[i].error);
      t.add_row(std::move(row));
      ++i;
    }
  return t;
}

}  // namespace superrad
