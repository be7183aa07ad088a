#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace superrad {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// All frequencies are cyclic (Hz). Dynamics convert to angular rates
// internally so that time is in seconds.
struct SystemParams {
  double delta_a = 0.0;
  double delta_b = 0.0;
  double coupling_G = 0.0;
  double coupling_g = 0.0;
  double atom_count = 1.0;
  double kappa_a = 0.0;
  double kappa_b = 0.0;
  double gamma = 0.0;
  double eta = 0.0;
  double gamma_phi = 0.0;
  double nu_sigma = 0.0;
};

struct DerivedParams {
  double chi_gauge = 0.0;      // (ka + kb) / 4
  double g_ep = 0.0;           // (ka - kb) / 4
  double kappa_eff = 0.0;      // ka + 4 G^2 / kb
  double cooperativity = 0.0;  // 4 g^2 kb / ((ka kb + 4 G^2) gamma)
  double gamma_c = 0.0;        // cooperativity * gamma
  double gamma_total = 0.0;    // eta + gamma + gamma_phi
  double eta_max = 0.0;        // N * gamma_c
  double caption_rate = 0.0;   // 4 g^2 (ka + kb) / (4 G^2 + ka kb)
};

struct Validation {
  std::vector<std::string> advisories;
};

// Named parameter sets.
enum class Preset { ExceptionalPoint, BrokenPhase, SymmetricPhase, NoExceptionalPoint, OracleScaled };

SystemParams preset(Preset which);
SystemParams preset(std::string_view name);
std::vector<std::string> preset_names();

// Throws Error(InvalidParameter) naming the offending field.
Validation validate(const SystemParams& p);

// Throws Error(EliminationUndefined) when kappa_b = 0, except for the
// single-cavity configuration (kappa_b = 0 and G = 0) where cavity b is inert.
DerivedParams derive(const SystemParams& p);

bool single_cavity(const SystemParams& p) noexcept;

// Keyed access by field name ("kappa_a", "coupling_G", ...).
const std::vector<std::string>& param_keys();
bool is_param_key(std::string_view key);
double get_param(const SystemParams& p, std::string_view key);
void set_param(SystemParams& p, std::string_view key, double value);

// "key=value" assignment; value parsed as a double.
void apply_assignment(SystemParams& p, std::string_view assignment);

// Flat "key = value" file. '#' and ';' start comments, [section] lines are
// ignored. Unknown keys are an error.
void load_params_file(SystemParams& p, const std::string& path);
void load_params_text(SystemParams& p, std::string_view text, const std::string& origin = "<text>");

double to_angular(double cyclic) noexcept;
double to_cyclic(double angular) noexcept;

}  // namespace superrad
