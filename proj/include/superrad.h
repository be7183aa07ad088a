/* C interface to the superradiant-lasing simulation library.
 *
 * All frequencies are cyclic (Hz). Functions return an srl_status; on failure
 * srl_last_error() holds a message for the calling thread. Handles are opaque
 * and owned by the caller, who releases them with the matching _destroy. */
#ifndef SUPERRAD_H
#define SUPERRAD_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(SRL_BUILDING_LIBRARY)
#define SRL_API __declspec(dllexport)
#else
#define SRL_API __declspec(dllimport)
#endif
#else
#define SRL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum srl_status {
  SRL_OK = 0,
  SRL_INVALID_PARAMETER = 1,
  SRL_INVALID_ARGUMENT = 2,
  SRL_ELIMINATION_UNDEFINED = 3,
  SRL_NON_FINITE = 4,
  SRL_STIFFNESS_FAILURE = 5,
  SRL_NO_CONVERGENCE = 6,
  SRL_UNSUPPORTED_CLASSIFICATION = 7,
  SRL_CUTOFF_SATURATION = 8,
  SRL_POOR_FIT = 9,
  SRL_PEAK_NOT_BRACKETED = 10,
  SRL_CLOSURE_VIOLATION = 11,
  SRL_IO = 12,
  SRL_NULL_POINTER = 13,
  SRL_INTERNAL = 14
} srl_status;

typedef enum srl_phase { SRL_PTSP = 0, SRL_EP = 1, SRL_PTBP = 2, SRL_UNCLASSIFIED = 3 } srl_phase;
typedef enum srl_branch { SRL_BRANCH_AUTO = 0, SRL_BRANCH_TRIVIAL = 1, SRL_BRANCH_LASING = 2 } srl_branch;

typedef struct srl_params srl_params;
typedef struct srl_table srl_table;

typedef struct srl_complex {
  double re;
  double im;
} srl_complex;

typedef struct srl_derived {
  double chi_gauge;
  double g_ep;
  double kappa_eff;
  double cooperativity;
  double gamma_c;
  double gamma_total;
  double eta_max;
  double caption_rate;
} srl_derived;

typedef struct srl_state {
  double n_a;
  double n_b;
  srl_complex ab;
  srl_complex as_;
  srl_complex bs;
  double pop;
  srl_complex corr;
  double pair;
} srl_state;

typedef struct srl_steady_info {
  double residual;
  int newton_iterations;
  int used_integration;
  int seed; /* srl_branch the solve started from */
} srl_steady_info;

typedef struct srl_eigensystem {
  srl_complex lambda_plus;
  srl_complex lambda_minus;
  srl_complex vec_plus[2];
  srl_complex vec_minus[2];
  int phase; /* srl_phase */
  double ep_distance;
  int defective;
} srl_eigensystem;

typedef struct srl_linewidth {
  double per_pole[3];
  double centers[3];
  double narrowest;
  double composite_fwhm;
  double peak_offset;
  int unresolved;
  int defective;
  double analytic;
  double analytic_expanded;
  double analytic_ep; /* NaN unless the point is an exceptional point */
  int ep_consistent;
} srl_linewidth;

typedef struct srl_dicke {
  double jz;
  double j_len;
  double j_eff;
  double m;
} srl_dicke;

/* Zero beta or kappa_f selects the library default. */
typedef struct srl_filter {
  double delta_f;
  double beta;
  double kappa_f;
} srl_filter;

typedef struct srl_fit {
  double peak_freq;
  double fwhm_raw;
  double fwhm_deconvolved;
  double amplitude;
  double offset;
  double fit_residual;
  double beta;
  double kappa_f;
  double back_action;
} srl_fit;

typedef struct srl_clock_spec {
  double chi_shape;
  double t_cycle;
  double tau;
  double linewidth;
  double nu_clock;
  double atom_count;
} srl_clock_spec;

typedef struct srl_oracle_config {
  int fock_cutoff_a;
  int fock_cutoff_b;
  double t_end;
  int samples;
  double rel_tol;
  double abs_tol;
  int initial_fock_a;
  int initial_fock_b;
  int initial_excited;
} srl_oracle_config;

typedef struct srl_oracle_obs {
  double t;
  double n_a;
  double n_b;
  double pop;
  srl_complex corr;
  double trace;
  double min_eigenvalue;
  double excitations;
} srl_oracle_obs;

typedef struct srl_sweep_options {
  int jobs;   /* 0: hardware concurrency */
  int branch; /* srl_branch */
  double steady_tol;
  int ep_lock;
  const char* journal; /* NULL or "" disables resumption */
} srl_sweep_options;

typedef struct srl_axis {
  const char* name;
  int log_scale;
  double start;
  double stop;
  int points;
} srl_axis;

/* Library information and errors. */
SRL_API const char* srl_version(void);
SRL_API const char* srl_last_error(void);
SRL_API const char* srl_status_name(srl_status status);
SRL_API const char* srl_phase_name(int phase);

/* Parameter sets. */
SRL_API srl_status srl_params_create(srl_params** out);
SRL_API srl_status srl_params_preset(const char* name, srl_params** out);
SRL_API srl_status srl_params_clone(const srl_params* p, srl_params** out);
SRL_API void srl_params_destroy(srl_params* p);
SRL_API srl_status srl_params_set(srl_params* p, const char* key, double value);
SRL_API srl_status srl_params_get(const srl_params* p, const char* key, double* out);
SRL_API srl_status srl_params_assign(srl_params* p, const char* assignment);
SRL_API srl_status srl_params_load_file(srl_params* p, const char* path);
SRL_API srl_status srl_params_load_text(srl_params* p, const char* text);
SRL_API size_t srl_param_key_count(void);
SRL_API const char* srl_param_key(size_t i);
SRL_API size_t srl_preset_count(void);
SRL_API const char* srl_preset_name(size_t i);

/* Validation stores the advisories on the handle. */
SRL_API srl_status srl_validate(srl_params* p, size_t* advisory_count);
SRL_API const char* srl_advisory(const srl_params* p, size_t i);
SRL_API srl_status srl_derive(const srl_params* p, srl_derived* out);

/* PT-symmetric cavity pair. */
SRL_API srl_status srl_eigen(const srl_params* p, srl_eigensystem* out);
SRL_API srl_status srl_classify(const srl_params* p, int* phase);
SRL_API srl_status srl_phase_diagram(const srl_params* p, const double* g_grid, size_t n, srl_table** out);

/* Mean-field dynamics. */
SRL_API srl_status srl_rhs(const srl_params* p, const srl_state* s, srl_state* out);
SRL_API srl_status srl_integrate(const srl_params* p, const srl_state* s0, double t_end, double rel_tol,
                                 double abs_tol, srl_table** out);
SRL_API srl_status srl_steady_state(const srl_params* p, double tol, int branch, srl_state* out,
                                    srl_steady_info* info);
SRL_API srl_status srl_analytic_steady(const srl_params* p, double* pop, double* corr, int* valid);
SRL_API srl_status srl_residual(const srl_params* p, const srl_state* s, double* out);

/* Spectrum and linewidth of a steady state. */
SRL_API srl_status srl_linewidths(const srl_params* p, const srl_state* steady, srl_linewidth* out);
SRL_API srl_status srl_spectrum(const srl_params* p, const srl_state* steady, const double* offsets_hz,
                                size_t n, double* out);
SRL_API srl_status srl_poles(const srl_params* p, const srl_state* steady, srl_table** out);

/* Filter cavity. */
SRL_API srl_status srl_filter_scan(const srl_params* p, const srl_filter* f, const double* grid, size_t n,
                                   int jobs, srl_fit* fit, srl_table** rows);
SRL_API srl_status srl_filter_scan_auto(const srl_params* p, const srl_filter* f, int jobs, srl_fit* fit,
                                        srl_table** rows);
SRL_API srl_status srl_pulling(const srl_params* p, const srl_filter* f, const double* offsets_hz, size_t n,
                               int jobs, double* slope, srl_table** rows);
SRL_API srl_status srl_linewidth_vs_atoms(const srl_params* p, const srl_filter* f, const double* n_grid,
                                          size_t n, int jobs, double* spread, int* monotone,
                                          srl_table** rows);

/* Collective coordinates. */
SRL_API srl_status srl_dicke_point(const srl_state* s, double atom_count, srl_dicke* out);
SRL_API srl_status srl_bright_dark(const srl_params* p, double t_end, int samples, int* bright_divergent,
                                   int* dark_divergent, srl_table** out);

/* Exact master-equation reference. */
SRL_API void srl_oracle_defaults(srl_oracle_config* cfg);
SRL_API srl_status srl_oracle_steady(const srl_params* p, const srl_oracle_config* cfg, srl_oracle_obs* out);
SRL_API srl_status srl_oracle_evolve(const srl_params* p, const srl_oracle_config* cfg, srl_table** out);

/* Clock metrics. */
SRL_API srl_status srl_qpn(const srl_clock_spec* spec, double* out);
SRL_API srl_status srl_allan(const double* freq_hz, size_t n, double nu_clock, double* out);
SRL_API srl_status srl_power(const srl_params* p, double n_a, int use_kappa_eff, double* out);

/* Sweeps. */
SRL_API void srl_sweep_defaults(srl_sweep_options* opt);
SRL_API size_t srl_observable_count(void);
SRL_API const char* srl_observable_name(size_t i);
/* outputs: comma-separated observable names. */
SRL_API srl_status srl_sweep(const srl_params* fixed, const srl_axis* axis, const char* outputs,
                             const srl_sweep_options* opt, srl_table** out);
SRL_API srl_status srl_sweep_2d(const srl_params* fixed, const srl_axis* x, const srl_axis* y,
                                const char* outputs, const srl_sweep_options* opt, srl_table** out);

/* Result tables. Text pointers stay valid until the table is destroyed. */
SRL_API srl_status srl_table_create(const char* const* columns, size_t n, srl_table** out);
SRL_API srl_status srl_table_add_row(srl_table* t, const double* values);
SRL_API srl_status srl_table_attach_params(srl_table* t, const srl_params* p);
SRL_API void srl_table_destroy(srl_table* t);
SRL_API size_t srl_table_rows(const srl_table* t);
SRL_API size_t srl_table_cols(const srl_table* t);
SRL_API const char* srl_table_column(const srl_table* t, size_t col);
SRL_API srl_status srl_table_number(const srl_table* t, size_t row, size_t col, double* out);
SRL_API const char* srl_table_text(const srl_table* t, size_t row, size_t col);
SRL_API size_t srl_table_meta_count(const srl_table* t);
SRL_API srl_status srl_table_meta(const srl_table* t, size_t i, const char** key, const char** value);
SRL_API srl_status srl_table_set_meta(srl_table* t, const char* key, const char* value);
/* format: "csv" or "json"; path "-" writes to standard output. */
SRL_API srl_status srl_table_write(const srl_table* t, const char* path, const char* format);

#ifdef __cplusplus
}
#endif

#endif /* SUPERRAD_H */
