#pragma once

#include <string>
#include <vector>

#include "superrad/cumulant.hpp"
#include "superrad/table.hpp"

namespace superrad {

enum class Scale { Linear, Log };

Scale parse_scale(const std::string& s);
const char* scale_label(Scale s) noexcept;

struct Axis {
  std::string name;  // a SystemParams key
  Scale scale = Scale::Linear;
  double start = 0.0;
  double stop = 1.0;
  int points = 2;
};

struct SweepSpec {
  Axis axis;
  SystemParams fixed;
  std::vector<std::string> outputs;
};

struct SweepOptions {
  int jobs = 0;  // 0 picks the hardware concurrency
  Branch branch = Branch::Auto;
  double steady_tol = 1e-8;
  // Re-derive G = (kappa_a - kappa_b) / 4 at every point.
  bool ep_lock = false;
  // Progress journal; empty disables resumption.
  std::string journal;
};

// Names accepted in SweepSpec::outputs.
const std::vector<std::string>& observable_names();

// Throws Error(InvalidArgument) for an unknown axis, bad range or point count.
void validate_axis(const Axis& a);
void validate_outputs(const std::vector<std::string>& outputs);
std::vector<double> axis_grid(const Axis& a);

// Values of `outputs` at one parameter point, in order.
std::vector<double> evaluate_point(const SystemParams& p, const std::vector<std::string>& outputs,
                                   const SweepOptions& opt = {});

// Columns: axis, outputs..., error. Failed points keep their row with NaN
// values and the error text.
Table run_sweep(const SweepSpec& spec, const SweepOptions& opt = {});

// Columns: x axis, y axis, outputs..., error; x varies fastest.
Table run_2d_sweep(const SweepSpec& x, const SweepSpec& y, const SweepOptions& opt = {});

}  // namespace superrad
