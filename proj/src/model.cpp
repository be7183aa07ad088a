#include "superrad/model.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <limits>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "superrad/error.hpp"

namespace superrad {

namespace {

struct FieldRef {
  const char* name;
  double SystemParams::*member;
};

constexpr FieldRef kFields[] = {
    {"delta_a", &SystemParams::delta_a},       {"delta_b", &SystemParams::delta_b},
    {"coupling_G", &SystemParams::coupling_G}, {"coupling_g", &SystemParams::coupling_g},
    {"atom_count", &SystemParams::atom_count}, {"kappa_a", &SystemParams::kappa_a},
    {"kappa_b", &SystemParams::kappa_b},       {"gamma", &SystemParams::gamma},
    {"eta", &SystemParams::eta},               {"gamma_phi", &SystemParams::gamma_phi},
    {"nu_sigma", &SystemParams::nu_sigma},
};

const FieldRef* find_field(std::string_view key) {
  for (const auto& f : kFields)
    if (key == f.name) return &f;
  return nullptr;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text, std::string_view key) {
  std::string s(trim(text));
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    s = s.substr(1, s.size() - 2);
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw Error(ErrorKind::InvalidParameter,
                "cannot parse value '" + s + "' for " + std::string(key));
  return v;
}

}  // namespace

SystemParams preset(Preset which) {
  SystemParams p;
  p.kappa_a = 160e3;
  p.kappa_b = 1e3;
  p.coupling_g = 2.41;
  p.atom_count = 1e7;
  p.gamma = 1e-3;
  p.gamma_phi = 1e-3;
  p.eta = 18.0;
  p.nu_sigma = 429.228004229873e12;
  switch (which) {
    case Preset::ExceptionalPoint: p.coupling_G = 39.75e3; break;
    case Preset::BrokenPhase: p.coupling_G = 3.975e3; break;
    case Preset::SymmetricPhase: p.coupling_G = 3975e3; break;
    case Preset::NoExceptionalPoint:
      p.coupling_G = 0.0;
      p.kappa_b = 0.0;
      break;
    case Preset::OracleScaled:
      p.kappa_a = 100.0;
      p.kappa_b = 10.0;
      p.coupling_G = 22.5;
      p.coupling_g = 1.0;
      p.atom_count = 2.0;
      p.gamma = 0.1;
      p.gamma_phi = 0.1;
      p.eta = 0.1;
      break;
  }
  return p;
}

std::vector<std::string> preset_names() { return {"ep", "ptbp", "ptsp", "no-ep", "oracle"}; }

SystemParams preset(std::string_view name) {
  if (name == "ep") return preset(Preset::ExceptionalPoint);
  if (name == "ptbp") return preset(Preset::BrokenPhase);
  if (name == "ptsp") return preset(Preset::SymmetricPhase);
  if (name == "no-ep") return preset(Preset::NoExceptionalPoint);
  if (name == "oracle") return preset(Preset::OracleScaled);
  throw Error(ErrorKind::InvalidArgument, "unknown preset '" + std::string(name) + "'");
}

bool single_cavity(const SystemParams& p) noexcept { return p.kappa_b == 0.0 && p.coupling_G == 0.0; }

Validation validate(const SystemParams& p) {
  for (const auto& f : kFields) {
    double v = p.*f.member;
    if (!std::isfinite(v))
      throw Error(ErrorKind::InvalidParameter, std::string(f.name) + " is not finite");
  }
  const FieldRef nonneg[] = {
      {"coupling_G", &SystemParams::coupling_G}, {"coupling_g", &SystemParams::coupling_g},
      {"kappa_a", &SystemParams::kappa_a},       {"kappa_b", &SystemParams::kappa_b},
      {"gamma", &SystemParams::gamma},           {"eta", &SystemParams::eta},
      {"gamma_phi", &SystemParams::gamma_phi},   {"nu_sigma", &SystemParams::nu_sigma},
  };
  for (const auto& f : nonneg)
    if (p.*f.member < 0.0)
      throw Error(ErrorKind::InvalidParameter, std::string(f.name) + " must be >= 0");
  if (p.atom_count < 1.0)
    throw Error(ErrorKind::InvalidParameter, "atom_count must be >= 1");
  if (p.atom_count != std::floor(p.atom_count))
    throw Error(ErrorKind::InvalidParameter, "atom_count must be an integer");

  Validation out;
  // Atoms couple to cavity a only, so the bad-cavity ratio is taken against kappa_a.
  double collective = p.coupling_g * std::sqrt(p.atom_count);
  if (collective > 0.1 * p.kappa_a) {
    std::ostringstream os;
    os << "bad-cavity condition not met: g*sqrt(N) = " << collective
       << " Hz exceeds 0.1*kappa_a = " << 0.1 * p.kappa_a << " Hz";
    out.advisories.push_back(os.str());
  }
  return out;
}

DerivedParams derive(const SystemParams& p) {
  const double ka = p.kappa_a, kb = p.kappa_b, G = p.coupling_G, g = p.coupling_g;
  DerivedParams d;
  d.chi_gauge = (ka + kb) / 4.0;
  d.g_ep = (ka - kb) / 4.0;
  d.gamma_total = p.eta + p.gamma + p.gamma_phi;
  if (single_cavity(p)) {
    // Cavity b is inert: the elimination reduces to the one-cavity limit.
    d.kappa_eff = ka;
    d.gamma_c = ka > 0.0 ? 4.0 * g * g / ka : 0.0;
    d.caption_rate = d.gamma_c;
  } else {
    if (kb <= 0.0)
      throw Error(ErrorKind::EliminationUndefined,
                  "kappa_b = 0: adiabatic elimination of cavity b is undefined");
    const double denom = 4.0 * G * G + ka * kb;
    d.kappa_eff = ka + 4.0 * G * G / kb;
    d.gamma_c = 4.0 * g * g * kb / denom;
    d.caption_rate = 4.0 * g * g * (ka + kb) / denom;
  }
  d.cooperativity = p.gamma > 0.0 ? d.gamma_c / p.gamma
                                  : (d.gamma_c > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  // Keep gamma_c = C * gamma bit-exact.
  if (p.gamma > 0.0) d.gamma_c = d.cooperativity * p.gamma;
  d.eta_max = p.atom_count * d.gamma_c;
  return d;
}

const std::vector<std::string>& param_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : kFields) k.emplace_back(f.name);
    return k;
  }();
  return keys;
}

bool is_param_key(std::string_view key) { return find_field(key) != nullptr; }

double get_param(const SystemParams& p, std::string_view key) {
  const FieldRef* f = find_field(key);
  if (!f) throw Error(ErrorKind::InvalidArgument, "unknown parameter '" + std::string(key) + "'");
  return p.*f->member;
}

void set_param(SystemParams& p, std::string_view key, double value) {
  const FieldRef* f = find_field(key);
  if (!f) throw Error(ErrorKind::InvalidArgument, "unknown parameter '" + std::string(key) + "'");
  p.*f->member = value;
}

void apply_assignment(SystemParams& p, std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw Error(ErrorKind::InvalidArgument,
                "expected key=value, got '" + std::string(assignment) + "'");
  auto key = trim(assignment.substr(0, eq));
  double v = parse_number(assignment.substr(eq + 1), key);
  set_param(p, key, v);
}

void load_params_text(SystemParams& p, std::string_view text, const std::string& origin) {
  std::size_t lineno = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    auto cut = line.find_first_of("#;");
    if (cut != std::string_view::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    try {
      apply_assignment(p, line);
    } catch (const Error& e) {
      throw Error(e.kind(), origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void load_params_file(SystemParams& p, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  load_params_text(p, ss.str(), path);
}

double to_angular(double cyclic) noexcept { return kTwoPi * cyclic; }
double to_cyclic(double angular) noexcept { return angular / kTwoPi; }

}  // namespace superrad
