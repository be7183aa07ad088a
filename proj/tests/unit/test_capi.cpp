#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <thread>

#include "superrad.h"

TEST_CASE("null handles are rejected") {
  CHECK(srl_params_create(nullptr) == SRL_NULL_POINTER);
  CHECK(srl_params_set(nullptr, "eta", 1.0) == SRL_NULL_POINTER);
  double v = 0;
  CHECK(srl_params_get(nullptr, "eta", &v) == SRL_NULL_POINTER);
  srl_derived d;
  CHECK(srl_derive(nullptr, &d) == SRL_NULL_POINTER);
  CHECK(std::strlen(srl_last_error()) > 0);
  CHECK(srl_table_rows(nullptr) == 0);
  srl_params_destroy(nullptr);
  srl_table_destroy(nullptr);
}

TEST_CASE("presets and parameter keys") {
  CHECK(srl_preset_count() == 5);
  for (size_t i = 0; i < srl_preset_count(); ++i) {
    srl_params* p = nullptr;
    REQUIRE(srl_params_preset(srl_preset_name(i), &p) == SRL_OK);
    srl_params_destroy(p);
  }
  srl_params* p = nullptr;
  CHECK(srl_params_preset("nonsense", &p) == SRL_INVALID_ARGUMENT);
  CHECK(p == nullptr);
  CHECK(srl_param_key_count() > 10);
  CHECK(srl_param_key(srl_param_key_count()) == nullptr);
}

TEST_CASE("set, get and assignment") {
  srl_params* p = nullptr;
  REQUIRE(srl_params_preset("ep", &p) == SRL_OK);
  double v = 0;
  REQUIRE(srl_params_get(p, "coupling_G", &v) == SRL_OK);
  CHECK(v == doctest::Approx(39.75e3));
  CHECK(srl_params_set(p, "eta", 7.0) == SRL_OK);
  CHECK(srl_params_get(p, "eta", &v) == SRL_OK);
  CHECK(v == 7.0);
  CHECK(srl_params_assign(p, "eta = 3") == SRL_OK);
  CHECK(srl_params_get(p, "eta", &v) == SRL_OK);
  CHECK(v == 3.0);
  CHECK(srl_params_set(p, "nope", 1.0) == SRL_INVALID_ARGUMENT);
  CHECK(srl_params_load_text(p, "eta = 5\nkappa_b = 2e3\n") == SRL_OK);
  CHECK(srl_params_get(p, "kappa_b", &v) == SRL_OK);
  CHECK(v == 2e3);
  srl_params* c = nullptr;
  REQUIRE(srl_params_clone(p, &c) == SRL_OK);
  CHECK(srl_params_set(c, "eta", 9.0) == SRL_OK);
  CHECK(srl_params_get(p, "eta", &v) == SRL_OK);
  CHECK(v == 5.0);
  srl_params_destroy(c);
  srl_params_destroy(p);
}

TEST_CASE("status mapping") {
  srl_params* p = nullptr;
  REQUIRE(srl_params_preset("ep", &p) == SRL_OK);
  srl_params_set(p, "kappa_a", -1.0);
  size_t n = 0;
  CHECK(srl_validate(p, &n) == SRL_INVALID_PARAMETER);
  srl_params_set(p, "kappa_a", 160e3);
  CHECK(srl_validate(p, &n) == SRL_OK);
  CHECK(srl_advisory(p, n) == nullptr);

  int phase = -1;
  CHECK(srl_classify(p, &phase) == SRL_OK);
  CHECK(phase == SRL_EP);
  srl_params_set(p, "delta_a", 10.0);
  CHECK(srl_classify(p, &phase) == SRL_UNSUPPORTED_CLASSIFICATION);
  srl_eigensystem es;
  CHECK(srl_eigen(p, &es) == SRL_OK);
  CHECK(es.phase == SRL_UNCLASSIFIED);
  srl_params_destroy(p);

  CHECK(std::string(srl_status_name(SRL_POOR_FIT)) == "poor-fit");
  CHECK(std::string(srl_phase_name(SRL_EP)).size() > 0);
}

TEST_CASE("steady state and linewidth through the C interface") {
  srl_params* p = nullptr;
  REQUIRE(srl_params_preset("ep", &p) == SRL_OK);
  srl_state s;
  srl_steady_info info;
  REQUIRE(srl_steady_state(p, 1e-8, SRL_BRANCH_AUTO, &s, &info) == SRL_OK);
  CHECK(s.corr.re > 0);
  CHECK(info.residual < 1e-8);
  double pop = 0, corr = 0;
  int valid = 0;
  REQUIRE(srl_analytic_steady(p, &pop, &corr, &valid) == SRL_OK);
  CHECK(valid == 1);
  CHECK(std::abs(s.corr.re - corr) / corr < 0.05);
  srl_linewidth lw;
  REQUIRE(srl_linewidths(p, &s, &lw) == SRL_OK);
  CHECK(lw.composite_fwhm > 0);
  CHECK(std::isfinite(lw.analytic_ep));
  double out[3];
  const double offsets[3] = {-1e-5, 0.0, 1e-5};
  REQUIRE(srl_spectrum(p, &s, offsets, 3, out) == SRL_OK);
  CHECK(out[1] > out[0]);
  CHECK(srl_steady_state(p, 1e-8, 7, &s, &info) == SRL_INVALID_ARGUMENT);
  srl_params_destroy(p);
}

TEST_CASE("table round trip") {
  const char* cols[] = {"x", "y"};
  srl_table* t = nullptr;
  REQUIRE(srl_table_create(cols, 2, &t) == SRL_OK);
  const double r0[] = {1.0, 2.5}, r1[] = {3.0, -4.0};
  srl_table_add_row(t, r0);
  srl_table_add_row(t, r1);
  CHECK(srl_table_rows(t) == 2);
  CHECK(srl_table_cols(t) == 2);
  CHECK(std::string(srl_table_column(t, 1)) == "y");
  double v = 0;
  CHECK(srl_table_number(t, 1, 1, &v) == SRL_OK);
  CHECK(v == -4.0);
  CHECK(srl_table_number(t, 5, 0, &v) == SRL_INVALID_ARGUMENT);
  CHECK(srl_table_set_meta(t, "note", "hello") == SRL_OK);
  const char *k = nullptr, *val = nullptr;
  REQUIRE(srl_table_meta(t, srl_table_meta_count(t) - 1, &k, &val) == SRL_OK);
  CHECK(std::string(k) == "note");
  CHECK(std::string(val) == "hello");
  CHECK(srl_table_write(t, "capi_table.json", "json") == SRL_OK);
  CHECK(srl_table_write(t, "capi_table.csv", "xml") == SRL_INVALID_ARGUMENT);
  CHECK(srl_table_write(t, "/nonexistent-dir/x.csv", "csv") == SRL_IO);
  std::remove("capi_table.json");
  srl_table_destroy(t);
}

TEST_CASE("sweep through the C interface") {
  srl_params* p = nullptr;
  REQUIRE(srl_params_preset("ep", &p) == SRL_OK);
  srl_sweep_options opt;
  srl_sweep_defaults(&opt);
  opt.jobs = 2;
  srl_axis ax{"eta", 1, 1.0, 10.0, 3};
  srl_table* t = nullptr;
  REQUIRE(srl_sweep(p, &ax, "pop,corr", &opt, &t) == SRL_OK);
  CHECK(srl_table_rows(t) == 3);
  CHECK(srl_table_cols(t) == 4);
  srl_table_destroy(t);
  t = nullptr;
  CHECK(srl_sweep(p, &ax, "pop,bogus", &opt, &t) == SRL_INVALID_ARGUMENT);
  CHECK(t == nullptr);
  srl_params_destroy(p);
}

TEST_CASE("last error is per thread") {
  srl_params_set(nullptr, "eta", 1.0);
  const std::string here = srl_last_error();
  std::string there = "unset";
  std::thread th([&] { there = srl_last_error(); });
  th.join();
  CHECK_FALSE(here.empty());
  CHECK(there.empty());
}
