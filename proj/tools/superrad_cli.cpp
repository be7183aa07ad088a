// Command-line front end. Talks to the library only through the C interface.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "superrad.h"

namespace {

using json = nlohmann::ordered_json;

// Carries a library status out to main().
struct CliError : std::runtime_error {
  srl_status status;
  CliError(srl_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(srl_status s, const char* context) {
  if (s != SRL_OK)
    throw CliError(s, std::string(context) + ": " + srl_status_name(s) + ": " + srl_last_error());
}

struct ParamsDeleter {
  void operator()(srl_params* p) const { srl_params_destroy(p); }
};
struct TableDeleter {
  void operator()(srl_table* t) const { srl_table_destroy(t); }
};
using ParamsPtr = std::unique_ptr<srl_params, ParamsDeleter>;
using TablePtr = std::unique_ptr<srl_table, TableDeleter>;

struct Globals {
  std::string config;
  std::string out = "-";
  std::string format;  // empty: csv for tables, json for reports
  int jobs = 0;
  std::vector<std::string> sets;
  std::string preset;
  std::string branch = "auto";
  std::string journal;
  std::map<std::string, double> overrides;
};

int branch_code(const std::string& b) {
  if (b == "auto") return SRL_BRANCH_AUTO;
  if (b == "trivial") return SRL_BRANCH_TRIVIAL;
  if (b == "lasing") return SRL_BRANCH_LASING;
  throw CliError(SRL_INVALID_ARGUMENT, "unknown branch '" + b + "'");
}

// preset, then config file, then --<key>, then --set, in that order.
ParamsPtr resolve_params(const Globals& g, const std::string& default_preset) {
  srl_params* raw = nullptr;
  check(srl_params_preset(g.preset.empty() ? default_preset.c_str() : g.preset.c_str(), &raw), "preset");
  ParamsPtr p(raw);
  if (!g.config.empty()) check(srl_params_load_file(p.get(), g.config.c_str()), "config");
  for (const auto& [k, v] : g.overrides) check(srl_params_set(p.get(), k.c_str(), v), "override");
  for (const auto& s : g.sets) check(srl_params_assign(p.get(), s.c_str()), "--set");
  size_t n = 0;
  check(srl_validate(p.get(), &n), "parameters");
  for (size_t i = 0; i < n; ++i) std::cerr << "advisory: " << srl_advisory(p.get(), i) << "\n";
  return p;
}

double param(const srl_params* p, const char* key) {
  double v = 0.0;
  check(srl_params_get(p, key, &v), "parameter");
  return v;
}

json params_json(const srl_params* p) {
  json j = json::object();
  for (size_t i = 0; i < srl_param_key_count(); ++i) j[srl_param_key(i)] = param(p, srl_param_key(i));
  return j;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json complex_json(srl_complex z) { return json{{"re", number(z.re)}, {"im", number(z.im)}}; }

json state_json(const srl_state& s) {
  return json{{"n_a", number(s.n_a)},       {"n_b", number(s.n_b)},   {"ab", complex_json(s.ab)},
              {"as", complex_json(s.as_)},  {"bs", complex_json(s.bs)}, {"pop", number(s.pop)},
              {"corr", complex_json(s.corr)}, {"pair", number(s.pair)}};
}

std::ostream* open_out(const std::string& path, std::ofstream& file) {
  if (path == "-") return &std::cout;
  file.open(path);
  if (!file) throw CliError(SRL_IO, "cannot open '" + path + "' for writing");
  return &file;
}

// Scalar reports are JSON; with --format csv they become key,value rows.
void emit_report(const Globals& g, const srl_params* p, json body) {
  json doc;
  doc["version"] = srl_version();
  doc["params"] = params_json(p);
  for (auto& [k, v] : body.items()) doc[k] = v;
  std::ofstream file;
  std::ostream& os = *open_out(g.out, file);
  if (g.format == "csv") {
    os << "# superrad " << srl_version() << "\n";
    for (auto& [k, v] : doc["params"].items()) os << "# " << k << " = " << v.dump() << "\n";
    os << "key,value\n";
    const json flat = body.flatten();
    for (auto& [k, v] : flat.items()) os << k << "," << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  } else {
    os << doc.dump(2) << "\n";
  }
}

void emit_table(const Globals& g, const srl_table* t, const std::string& path) {
  check(srl_table_write(t, path.c_str(), g.format.empty() ? "csv" : g.format.c_str()), "write");
}

void emit_table(const Globals& g, const srl_table* t) { emit_table(g, t, g.out); }

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw CliError(SRL_INVALID_ARGUMENT, "not a number: '" + item + "'");
    }
  }
  return out;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

srl_sweep_options sweep_options(const Globals& g, bool ep_lock) {
  srl_sweep_options o;
  srl_sweep_defaults(&o);
  o.jobs = g.jobs;
  o.branch = branch_code(g.branch);
  o.ep_lock = ep_lock ? 1 : 0;
  o.journal = g.journal.empty() ? nullptr : g.journal.c_str();
  return o;
}

srl_state solve_steady(const Globals& g, const srl_params* p, srl_steady_info* info = nullptr) {
  srl_state s{};
  srl_steady_info local{};
  check(srl_steady_state(p, 1e-8, branch_code(g.branch), &s, info ? info : &local), "steady state");
  return s;
}

const char* branch_name(int code) {
  switch (code) {
    case SRL_BRANCH_TRIVIAL: return "trivial";
    case SRL_BRANCH_LASING: return "lasing";
    default: return "auto";
  }
}

// One-dimensional sweep subcommand with editable defaults.
struct SweepCmd {
  std::string axis;
  std::string scale;
  double start;
  double stop;
  int points;
  std::string outputs;
  bool ep_lock = false;
};

void add_sweep_options(CLI::App* sub, SweepCmd& c) {
  sub->add_option("--scale", c.scale, "linear or log")->capture_default_str();
  sub->add_option("--start", c.start, "first grid value")->capture_default_str();
  sub->add_option("--stop", c.stop, "last grid value")->capture_default_str();
  sub->add_option("--points", c.points, "grid points")->capture_default_str();
  sub->add_option("--outputs", c.outputs, "comma-separated observables")->capture_default_str();
  sub->add_flag("--ep-lock", c.ep_lock, "re-derive G at the exceptional point for every grid value");
}

void run_1d(const Globals& g, const SweepCmd& c) {
  ParamsPtr p = resolve_params(g, "ep");
  srl_axis axis{c.axis.c_str(), c.scale == "log" ? 1 : 0, c.start, c.stop, c.points};
  if (c.scale != "log" && c.scale != "linear") throw CliError(SRL_INVALID_ARGUMENT, "scale must be linear or log");
  const srl_sweep_options o = sweep_options(g, c.ep_lock);
  srl_table* raw = nullptr;
  check(srl_sweep(p.get(), &axis, c.outputs.c_str(), &o, &raw), "sweep");
  TablePtr t(raw);
  emit_table(g, t.get());
}

struct FilterOpts {
  double delta_f = 0.0;
  double beta = 0.0;
  double kappa_f = 0.0;
};

void add_filter_options(CLI::App* sub, FilterOpts& f) {
  sub->add_option("--delta-f", f.delta_f, "filter detuning from the atoms, Hz");
  sub->add_option("--beta", f.beta, "filter coupling, Hz (0: default)");
  sub->add_option("--kappa-f", f.kappa_f, "filter linewidth, Hz (0: default)");
}

srl_filter to_filter(const FilterOpts& f) { return {f.delta_f, f.beta, f.kappa_f}; }

json fit_json(const srl_fit& f) {
  return json{{"peak_Hz", number(f.peak_freq)},
              {"fwhm_raw_Hz", number(f.fwhm_raw)},
              {"fwhm_deconvolved_Hz", number(f.fwhm_deconvolved)},
              {"amplitude", number(f.amplitude)},
              {"offset", number(f.offset)},
              {"fit_residual", number(f.fit_residual)},
              {"beta_Hz", number(f.beta)},
              {"kappa_f_Hz", number(f.kappa_f)},
              {"back_action", number(f.back_action)}};
}

double rel_dev(double a, double ref) { return ref == 0.0 ? std::abs(a) : std::abs(a - ref) / std::abs(ref); }

std::vector<double> read_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(SRL_IO, "cannot open '" + path + "'");
  std::vector<double> v;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    try {
      size_t used = 0;
      v.push_back(std::stod(line.substr(b), &used));
    } catch (const std::exception&) {
      throw CliError(SRL_IO, path + ":" + std::to_string(lineno) + ": not a number");
    }
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state superradiant lasing in a PT-symmetric cavity pair"};
  app.set_version_flag("--version", std::string(srl_version()));
  app.require_subcommand(1);

  Globals g;
  app.add_option("--config", g.config, "flat key = value parameter file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output path, '-' for stdout")->capture_default_str();
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--jobs", g.jobs, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
  app.add_option("--set", g.sets, "parameter override key=value (repeatable)");
  std::vector<std::string> presets;
  for (size_t i = 0; i < srl_preset_count(); ++i) presets.emplace_back(srl_preset_name(i));
  app.add_option("--preset", g.preset, "base parameter set")->check(CLI::IsMember(presets));
  app.add_option("--branch", g.branch, "steady-state branch")
      ->check(CLI::IsMember({"auto", "trivial", "lasing"}))
      ->capture_default_str();
  app.add_option("--journal", g.journal, "progress journal for resumable sweeps");
  // Every parameter can also be given directly, e.g. --eta=18.
  for (size_t i = 0; i < srl_param_key_count(); ++i) {
    const std::string key = srl_param_key(i);
    app.add_option_function<double>("--" + key, [&g, key](double v) { g.overrides[key] = v; },
                                    "override " + key)
        ->group("Parameters");
  }
  app.fallthrough();

  std::function<void()> action;

  // phase-diagram
  double pd_min = 0.0, pd_max = 80e3;
  int pd_points = 161;
  auto* pd = app.add_subcommand("phase-diagram", "eigenvalues and phase of the cavity pair over G");
  pd->add_option("--g-min", pd_min, "Hz")->capture_default_str();
  pd->add_option("--g-max", pd_max, "Hz")->capture_default_str();
  pd->add_option("--points", pd_points)->capture_default_str()->check(CLI::Range(2, 1000000));
  pd->callback([&] {
    action = [&] {
      ParamsPtr p = resolve_params(g, "ep");
      const auto grid = linspace(pd_min, pd_max, pd_points);
      srl_table* raw = nullptr;
      check(srl_phase_diagram(p.get(), grid.data(), grid.size(), &raw), "phase diagram");
      TablePtr t(raw);
      emit_table(g, t.get());
    };
  });

  // steady
  auto* st = app.add_subcommand("steady", "steady state and derived parameters");
  st->callback([&] {
    action = [&] {
      ParamsPtr p = resolve_params(g, "ep");
      srl_steady_info info{};
      const srl_state s = solve_steady(g, p.get(), &info);
      json body;
      body["state"] = state_json(s);
      srl_derived d{};
      if (srl_derive(p.get(), &d) == SRL_OK)
        body["derived"] = json{{"chi_gauge", d.chi_gauge},       {"g_ep", d.g_ep},
                               {"kappa_eff", d.kappa_eff},       {"cooperativity", d.cooperativity},
                               {"gamma_c", d.gamma_c},           {"gamma_total", d.gamma_total},
                               {"eta_max", d.eta_max},           {"caption_rate", d.caption_rate}};
      else
        body["derived"] = std::string(srl_last_error());
      double pop = 0, corr = 0;
      int valid = 0;
      check(srl_analytic_steady(p.get(), &pop, &corr, &valid), "analytic steady state");
      body["analytic"] = json{{"pop", pop}, {"corr", corr}, {"valid", valid != 0}};
      body["solver"] = json{{"residual", info.residual},
                            {"newton_iterations", info.newton_iterations},
                            {"used_integration", info.used_integration != 0},
                            {"seed", branch_name(info.seed)}};
      emit_report(g, p.get(), body);
    };
  });

  // sweep-eta / sweep-G / dicke-map
  SweepCmd se{"eta", "log", 1e-4, 1e3, 60, "pop,corr,n_a,n_b,linewidth_analytic,linewidth_qrt"};
  auto* se_cmd = app.add_subcommand("sweep-eta", "steady observables over the pump rate");
  add_sweep_options(se_cmd, se);
  se_cmd->callback([&] { action = [&] { run_1d(g, se); }; });

  SweepCmd sg{"coupling_G", "linear", 0.0, 80e3, 81, "pop,corr,n_a,n_b,linewidth_analytic,linewidth_qrt"};
  auto* sg_cmd = app.add_subcommand("sweep-G", "steady observables over the inter-cavity coupling");
  add_sweep_options(sg_cmd, sg);
  sg_cmd->callback([&] { action = [&] { run_1d(g, sg); }; });

  SweepCmd dm{"eta", "log", 1e-4, 1e3, 60, "dicke_m_shifted,dicke_j,dicke_jeff,pop,corr"};
  auto* dm_cmd = app.add_subcommand("dicke-map", "Dicke-ladder coordinates over the pump rate");
  add_sweep_options(dm_cmd, dm);
  dm_cmd->callback([&] { action = [&] { run_1d(g, dm); }; });

  // spectrum
  double sp_span = 0.0;
  int sp_points = 401;
  std::string sp_poles;
  auto* sp = app.add_subcommand("spectrum", "emission spectrum and pole table");
  sp->add_option("--span", sp_span, "half-width of the offset grid, Hz (0: 10 composite widths)");
  sp->add_option("--points", sp_points)->capture_default_str()->check(CLI::Range(2, 10000000));
  sp->add_option("--poles", sp_poles, "pole table JSON path (default: <out>.poles.json when --out is a file)");
  sp->callback([&] {
    action = [&] {
      ParamsPtr p = resolve_params(g, "ep");
      const srl_state s = solve_steady(g, p.get());
      srl_linewidth lw{};
      check(srl_linewidths(p.get(), &s, &lw), "linewidth");
      const double span = sp_span > 0 ? sp_span : 10.0 * lw.composite_fwhm;
      const auto grid = linspace(lw.peak_offset - span, lw.peak_offset + span, sp_points);
      std::vector<double> S(grid.size());
      check(srl_spectrum(p.get(), &s, grid.data(), grid.size(), S.data()), "spectrum");
      const char* cols[] = {"offset_Hz", "S"};
      srl_table* raw = nullptr;
      check(srl_table_create(cols, 2, &raw), "table");
      TablePtr t(raw);
      for (size_t i = 0; i < grid.size(); ++i) {
        const double row[] = {grid[i], S[i]};
        check(srl_table_add_row(t.get(), row), "table");
      }
      check(srl_table_attach_params(t.get(), p.get()), "table");
      emit_table(g, t.get());
      std::string poles = sp_poles;
      if (poles.empty() && g.out != "-") poles = g.out + ".poles.json";
      if (!poles.empty()) {
        srl_table* praw = nullptr;
        check(srl_poles(p.get(), &s, &praw), "poles");
        TablePtr pt(praw);
        check(srl_table_write(pt.get(), poles.c_str(), "json"), "write");
      }
    };
  });

  // linewidth
  auto* lw_cmd = app.add_subcommand("linewidth", "per-pole, composite and analytic linewidths");
  lw_cmd->callback([&] {
    action = [&] {
      ParamsPtr p = resolve_params(g, "ep");
      const srl_state s = solve_steady(g, p.get());
      srl_linewidth lw{};
      check(srl_linewidths(p.get(), &s, &lw), "linewidth");
      json poles = json::array();
      for (int i = 0; i < 3; ++i)
        poles.push_back(json{{"fwhm_Hz", number(lw.per_pole[i])}, {"center_Hz", number(lw.centers[i])}});
      json body;
      body["poles"] = poles;
      body["narrowest_Hz"] = number(lw.narrowest);
      body["composite_fwhm_Hz"] = number(lw.composite_fwhm);
      body["peak_offset_Hz"] = number(lw.peak_offset);
      body["unresolved"] = lw.unresolved != 0;
      body["defective"] = lw.defective != 0;
      body["analytic_Hz"] = number(lw.analytic);
      body["analytic_expanded_Hz"] = number(lw.analytic_expanded);
      body["analytic_ep_Hz"] = number(lw.analytic_ep);
      body["ep_consistent"] = lw.ep_consistent != 0;
      emit_report(g, p.get(), body);
    };
  });

  // filter-scan
  FilterOpts fs;
  std::string fs_grid;
  auto* fs_cmd = app.add_subcommand("filter-scan", "filter-cavity spectrum scan and Lorentzian fit");
  add_filter_options(fs_cmd, fs);
  fs_cmd->add_option("--grid", fs_grid, "comma-separated filter detunings, Hz (default: adaptive)");
  fs_cmd->callback([&] {
    action = [&] {
      ParamsPtr p = resolve_params(g, "ep");
      const srl_filter f = to_filter(fs);
      srl_fit fit{};
      srl_table* raw = nullptr;
      srl_status st;
      if (fs_grid.empty()) {
        st = srl_filter_scan_auto(p.get(), &f, g.jobs, &fit, &raw);
      } else {
        const auto grid = parse_list(fs_grid);
        st = srl_filter_scan(p.get(), &f, grid.data(), grid.size(), g.jobs, &fit, &raw);
      }
      TablePtr t(raw);
      const std::string err = srl_last_error();
      if (t) {
        const json fj = fit_json(fit);
        for (const auto& [k, v] : fj.items()) {
          const std::string text = v.dump();
          const std::string key = k.rfind("fit_", 0) == 0 ? k : "fit_" + k;
          check(srl_table_set_meta(t.get(), key.c_str(), text.c_str()), "table");
        }
        emit_table(g, t.get());
      }
      if (st != SRL_OK) throw CliError(st, std::string("filter scan: ") + srl_status_name(st) + ": " + err);
    };
  });

  // pulling
  FilterOpts pf;
  std::string pf_offsets = "100,1000,10000,100000,1000000";
  auto* pf_cmd = app.add_subcommand("pulling", "cavity pulling factor from filter-scan peaks");
  add_filter_options(pf_cmd, pf);
  pf_cmd->add_option("--offsets", pf_offsets, "comma-separated cavity-a offsets, Hz")->capture_default_str();
  pf_cmd->callback([&] {
    action = [&] {
      ParamsPtr p = resolve_params(g, "ep");
      const srl_filter f = to_filter(pf);
      const auto offsets = parse_list(pf_offsets);
      double slope = 0.0;
      srl_table* raw = nullptr;
      check(srl_pulling(p.get(), &f, offsets.data(), offsets.size(), g.jobs, &slope, &raw), "pulling");
      TablePtr t(raw);
      emit_table(g, t.get());
    };
  });

  // linewidth-vs-n
  FilterOpts an;
  double an_min = 0.8e7, an_max = 1.2e7;
  int an_points = 5;
  auto* an_cmd = app.add_subcommand("linewidth-vs-n", "filter linewidth over the atom number");
  add_filter_options(an_cmd, an);
  an_cmd->add_option("--n-min", an_min)->capture_default_str();
  an_cmd->add_option("--n-max", an_max)->capture_default_str();
  an_cmd->add_option("--points", an_points)->capture_default_str()->check(CLI::Range(2, 100000));
  an_cmd->callback([&] {
    action = [&] {
      ParamsPtr p = resolve_params(g, "ep");
      const srl_filter f = to_filter(an);
      const auto grid = linspace(an_min, an_max, an_points);
      double spread = 0.0;
      int monotone = 0;
      srl_table* raw = nullptr;
      check(srl_linewidth_vs_atoms(p.get(), &f, grid.data(), grid.size(), g.jobs, &spread, &monotone, &raw),
            "linewidth vs atoms");
      TablePtr t(raw);
      emit_table(g, t.get());
    };
  });

  // bright-dark
  double bd_t = 1.0;
  int bd_samples = 101;
  auto* bd = app.add_subcommand("bright-dark", "low-excitation bright and dark mode populations");
  bd->add_option("--t-end", bd_t, "s")->capture_default_str()->check(CLI::PositiveNumber);
  bd->add_option("--samples", bd_samples)->capture_default_str()->check(CLI::Range(2, 10000000));
  bd->callback([&] {
    action = [&] {
      ParamsPtr p = resolve_params(g, "ep");
      int bdiv = 0, ddiv = 0;
      srl_table* raw = nullptr;
      check(srl_bright_dark(p.get(), bd_t, bd_samples, &bdiv, &ddiv, &raw), "bright-dark");
      TablePtr t(raw);
      if (bdiv) std::cerr << "note: bright mode outside its low-excitation validity range\n";
      if (ddiv) std::cerr << "note: dark mode outside its low-excitation validity range\n";
      emit_table(g, t.get());
    };
  });

  // oracle-check
  srl_oracle_config oc;
  srl_oracle_defaults(&oc);
  auto* oc_cmd = app.add_subcommand("oracle-check", "exact master equation against the cumulant model");
  oc_cmd->add_option("--cutoff-a", oc.fock_cutoff_a, "Fock cutoff of cavity a")->capture_default_str();
  oc_cmd->add_option("--cutoff-b", oc.fock_cutoff_b, "Fock cutoff of cavity b")->capture_default_str();
  oc_cmd->callback([&] {
    action = [&] {
      ParamsPtr p = resolve_params(g, "oracle");
      srl_oracle_obs ex{};
      check(srl_oracle_steady(p.get(), &oc, &ex), "oracle");
      const srl_state s = solve_steady(g, p.get());
      auto row = [](double exact, double cumulant) {
        return json{{"oracle", number(exact)}, {"cumulant", number(cumulant)},
                    {"rel_deviation", number(rel_dev(cumulant, exact))}};
      };
      json body;
      body["n_a"] = row(ex.n_a, s.n_a);
      body["n_b"] = row(ex.n_b, s.n_b);
      body["pop"] = row(ex.pop, s.pop);
      body["corr_re"] = row(ex.corr.re, s.corr.re);
      body["trace_error"] = number(std::abs(ex.trace - 1.0));
      body["min_eigenvalue"] = number(ex.min_eigenvalue);
      body["fock_cutoff_a"] = oc.fock_cutoff_a;
      body["fock_cutoff_b"] = oc.fock_cutoff_b;
      emit_report(g, p.get(), body);
    };
  });

  // qpn
  srl_clock_spec cs{1.0, 1.0, 1.0, 0.0, 0.0, 0.0};
  auto* qpn = app.add_subcommand("qpn", "projection-noise-limited fractional instability");
  qpn->add_option("--chi", cs.chi_shape, "line-shape factor")->capture_default_str();
  qpn->add_option("--t-cycle", cs.t_cycle, "cycle time, s")->capture_default_str();
  qpn->add_option("--tau", cs.tau, "averaging time, s")->capture_default_str();
  qpn->add_option("--linewidth", cs.linewidth, "Hz")->required();
  qpn->add_option("--nu", cs.nu_clock, "clock frequency, Hz (default: nu_sigma)");
  qpn->add_option("--atoms", cs.atom_count, "atom number (default: atom_count)");
  qpn->callback([&] {
    action = [&] {
      ParamsPtr p = resolve_params(g, "ep");
      srl_clock_spec spec = cs;
      if (spec.nu_clock == 0.0) spec.nu_clock = param(p.get(), "nu_sigma");
      if (spec.atom_count == 0.0) spec.atom_count = param(p.get(), "atom_count");
      double sigma = 0.0;
      check(srl_qpn(&spec, &sigma), "qpn");
      emit_report(g, p.get(),
                  json{{"chi_shape", spec.chi_shape}, {"t_cycle_s", spec.t_cycle}, {"tau_s", spec.tau},
                       {"linewidth_Hz", spec.linewidth}, {"nu_clock_Hz", spec.nu_clock},
                       {"atom_count", spec.atom_count}, {"sigma_qpn", sigma}});
    };
  });

  // allan
  std::string al_in;
  double al_nu = 0.0;
  auto* al = app.add_subcommand("allan", "fractional Allan deviation of a frequency series");
  al->add_option("--input", al_in, "one-column frequency file, Hz")->required()->check(CLI::ExistingFile);
  al->add_option("--nu", al_nu, "clock frequency, Hz (default: nu_sigma)");
  al->callback([&] {
    action = [&] {
      ParamsPtr p = resolve_params(g, "ep");
      const double nu = al_nu != 0.0 ? al_nu : param(p.get(), "nu_sigma");
      const auto series = read_column(al_in);
      double sigma = 0.0;
      check(srl_allan(series.data(), series.size(), nu, &sigma), "allan");
      emit_report(g, p.get(),
                  json{{"input", al_in}, {"points", series.size()}, {"nu_clock_Hz", nu}, {"allan_deviation", sigma}});
    };
  });

  // power
  std::optional<double> pw_na;
  bool pw_eff = false;
  auto* pw = app.add_subcommand("power", "emitted power");
  pw->add_option("--n-a", pw_na, "intracavity photon number (default: steady state)");
  pw->add_flag("--kappa-eff", pw_eff, "use the effective decay rate instead of kappa_a");
  pw->callback([&] {
    action = [&] {
      ParamsPtr p = resolve_params(g, "ep");
      const double n_a = pw_na ? *pw_na : solve_steady(g, p.get()).n_a;
      double watts = 0.0;
      check(srl_power(p.get(), n_a, pw_eff ? 1 : 0, &watts), "power");
      emit_report(g, p.get(),
                  json{{"n_a", n_a}, {"rate", pw_eff ? "kappa_eff" : "kappa_a"}, {"power_W", watts}});
    };
  });

  // map2d
  SweepCmd mx{"eta", "log", 1e-2, 1e2, 21, ""};
  SweepCmd my{"atom_count", "log", 1e5, 1e8, 16, ""};
  std::string m_outputs = "linewidth_qrt,power,n_a,corr";
  bool m_lock = false;
  auto* m2 = app.add_subcommand("map2d", "two-parameter map; x varies fastest");
  m2->add_option("--x", mx.axis, "x axis parameter")->capture_default_str();
  m2->add_option("--x-scale", mx.scale)->capture_default_str();
  m2->add_option("--x-start", mx.start)->capture_default_str();
  m2->add_option("--x-stop", mx.stop)->capture_default_str();
  m2->add_option("--x-points", mx.points)->capture_default_str();
  m2->add_option("--y", my.axis, "y axis parameter")->capture_default_str();
  m2->add_option("--y-scale", my.scale)->capture_default_str();
  m2->add_option("--y-start", my.start)->capture_default_str();
  m2->add_option("--y-stop", my.stop)->capture_default_str();
  m2->add_option("--y-points", my.points)->capture_default_str();
  m2->add_option("--outputs", m_outputs, "comma-separated observables")->capture_default_str();
  m2->add_flag("--ep-lock", m_lock, "re-derive G at the exceptional point for every grid point");
  m2->callback([&] {
    action = [&] {
      ParamsPtr p = resolve_params(g, "ep");
      for (const auto* c : {&mx, &my})
        if (c->scale != "log" && c->scale != "linear")
          throw CliError(SRL_INVALID_ARGUMENT, "scale must be linear or log");
      srl_axis x{mx.axis.c_str(), mx.scale == "log", mx.start, mx.stop, mx.points};
      srl_axis y{my.axis.c_str(), my.scale == "log", my.start, my.stop, my.points};
      const srl_sweep_options o = sweep_options(g, m_lock);
      srl_table* raw = nullptr;
      check(srl_sweep_2d(p.get(), &x, &y, m_outputs.c_str(), &o, &raw), "map2d");
      TablePtr t(raw);
      emit_table(g, t.get());
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    if (action) action();
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2 + static_cast<int>(e.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
