#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "superrad/error.hpp"
#include "superrad/sweep.hpp"

using namespace superrad;

namespace {

std::string csv(const Table& t) {
  std::ostringstream os;
  t.write_csv(os);
  return os.str();
}

SweepSpec eta_spec(int points = 6) {
  SweepSpec s;
  s.axis = {"eta", Scale::Log, 1e-2, 30.0, points};
  s.fixed = preset(Preset::ExceptionalPoint);
  s.outputs = {"pop", "corr", "n_a", "linewidth_analytic"};
  return s;
}

}  // namespace

TEST_CASE("axis and output validation") {
  CHECK_THROWS_AS(validate_axis({"kappa_c", Scale::Linear, 0, 1, 3}), Error);
  CHECK_THROWS_AS(validate_axis({"eta", Scale::Linear, 1, 0, 3}), Error);
  CHECK_THROWS_AS(validate_axis({"eta", Scale::Linear, 0, 1, 1}), Error);
  CHECK_THROWS_AS(validate_axis({"eta", Scale::Log, 0, 1, 3}), Error);
  CHECK_NOTHROW(validate_axis({"eta", Scale::Log, 1e-3, 1, 3}));
  CHECK_THROWS_AS(validate_outputs({"pop", "banana"}), Error);
  CHECK_THROWS_AS(validate_outputs({}), Error);
  for (const auto& name : observable_names()) CHECK_NOTHROW(validate_outputs({name}));
  CHECK(parse_scale("log") == Scale::Log);
  CHECK_THROWS_AS(parse_scale("cubic"), Error);
}

TEST_CASE("grids") {
  const auto lin = axis_grid({"eta", Scale::Linear, 0, 1, 5});
  CHECK(lin == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  const auto lg = axis_grid({"eta", Scale::Log, 1e-4, 1e3, 8});
  REQUIRE(lg.size() == 8);
  CHECK(lg.front() == 1e-4);
  CHECK(lg.back() == 1e3);
  for (std::size_t i = 1; i < lg.size(); ++i) CHECK(lg[i] / lg[i - 1] == doctest::Approx(10.0));
}

TEST_CASE("rows come back in axis order and are deterministic") {
  SweepOptions one, many;
  one.jobs = 1;
  many.jobs = 4;
  const Table a = run_sweep(eta_spec(), one);
  const Table b = run_sweep(eta_spec(), many);
  CHECK(csv(a) == csv(b));
  REQUIRE(a.rows() == 6);
  for (std::size_t i = 1; i < a.rows(); ++i) CHECK(a.number(i, 0) > a.number(i - 1, 0));
  CHECK(a.columns() == std::vector<std::string>{"eta", "pop", "corr", "n_a", "linewidth_analytic", "error"});
  // Header block carries the resolved parameters.
  const std::string text = csv(a);
  CHECK(text.find("# kappa_a = 160000") != std::string::npos);
  CHECK(text.find("# superrad ") == 0);
}

TEST_CASE("failed points keep their row") {
  SweepSpec s = eta_spec(3);
  s.axis = {"kappa_b", Scale::Linear, 0.0, 1e3, 3};
  s.outputs = {"gamma_c", "n_a"};
  const Table t = run_sweep(s, {});
  REQUIRE(t.rows() == 3);
  CHECK(std::isnan(t.number(0, 1)));
  CHECK_FALSE(std::get<std::string>(t.at(0, 3)).empty());
  CHECK(std::get<std::string>(t.at(2, 3)).empty());
}

TEST_CASE("evaluate_point agrees with the sweep") {
  SweepSpec s = eta_spec(2);
  const Table t = run_sweep(s, {});
  SystemParams p = s.fixed;
  p.eta = 30.0;
  const auto v = evaluate_point(p, s.outputs);
  for (std::size_t k = 0; k < v.size(); ++k) CHECK(v[k] == t.number(1, k + 1));
}

TEST_CASE("EP lock re-derives G at every point") {
  SweepSpec s;
  s.axis = {"kappa_a", Scale::Linear, 50e3, 200e3, 4};
  s.fixed = preset(Preset::ExceptionalPoint);
  s.outputs = {"g_ep", "re_plus", "im_plus"};
  SweepOptions opt;
  opt.ep_lock = true;
  const Table t = run_sweep(s, opt);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    CHECK(std::abs(t.number(i, 2)) < 1e-6);
    CHECK(std::abs(t.number(i, 3)) < 1e-6);
  }
}

TEST_CASE("two-dimensional sweep order") {
  SweepSpec x = eta_spec(3), y = eta_spec(2);
  y.axis = {"atom_count", Scale::Log, 1e6, 1e7, 2};
  x.outputs = {"pop"};
  const Table t = run_2d_sweep(x, y, {});
  REQUIRE(t.rows() == 6);
  CHECK(t.columns().front() == "eta");
  CHECK(t.columns()[1] == "atom_count");
  CHECK(t.number(0, 1) == t.number(2, 1));
  CHECK(t.number(0, 0) < t.number(1, 0));
  CHECK(t.number(3, 1) == doctest::Approx(1e7));
}

TEST_CASE("journal resumes and skips finished rows") {
  const std::string path = "test_sweep_journal.txt";
  std::remove(path.c_str());
  SweepOptions opt;
  opt.journal = path;
  const Table full = run_sweep(eta_spec(), opt);

  // Keep the header and two rows, plant a sentinel in the first, add a torn line.
  std::ifstream in(path);
  std::string header, r0, r1;
  std::getline(in, header);
  std::getline(in, r0);
  std::getline(in, r1);
  in.close();
  // Replace only the first value with the sentinel.
  std::vector<std::string> fields;
  {
    std::stringstream ss(r0);
    std::string tok;
    while (std::getline(ss, tok, '\t')) fields.push_back(tok);
  }
  std::string planted = fields[0] + "\t0.5";
  for (std::size_t k = 2; k < fields.size(); ++k) planted += "\t" + fields[k];
  planted += "\t";
  {
    std::ofstream out(path, std::ios::trunc);
    out << header << "\n" << planted << "\n" << r1 << "\n" << "3\t0.1\t0.2";
  }
  const Table resumed = run_sweep(eta_spec(), opt);
  CHECK(resumed.number(0, 1) == 0.5);
  for (std::size_t i = 1; i < full.rows(); ++i)
    for (std::size_t k = 0; k + 1 < full.cols(); ++k) CHECK(resumed.number(i, k) == full.number(i, k));

  // A journal from a different sweep is refused.
  SweepSpec other = eta_spec();
  other.axis.points = 7;
  CHECK_THROWS_AS(run_sweep(other, opt), Error);
  std::remove(path.c_str());
}
