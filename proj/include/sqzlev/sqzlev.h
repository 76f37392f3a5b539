// Copyright 2026 The sqzlev Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the sqzlev library. All handles are opaque; every function
 * that can fail returns an sqz_status and leaves a thread-local message that
 * sqz_last_error() returns. Output pointers are written only on success. */
#ifndef SQZLEV_SQZLEV_H
#define SQZLEV_SQZLEV_H

#include <stddef.h>
#include <stdint.h>

#if defined(SQZ_BUILDING_LIBRARY)
#define SQZ_API __attribute__((visibility("default")))
#else
#define SQZ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sqz_status {
  SQZ_OK = 0,
  SQZ_ERR_INVALID_ARGUMENT = 2,
  SQZ_ERR_NUMERICAL = 3,
  SQZ_ERR_IO = 4,
  SQZ_ERR_INTERNAL = 5
} sqz_status;

typedef enum sqz_axis { SQZ_AXIS_X = 0, SQZ_AXIS_Y = 1, SQZ_AXIS_Z = 2 } sqz_axis;
typedef enum sqz_mode_kind { SQZ_MODE_MOTION = 0, SQZ_MODE_LIBRATION = 1 } sqz_mode_kind;
typedef enum sqz_objective { SQZ_OBJECTIVE_RECOIL_RATIO = 0, SQZ_OBJECTIVE_S_MIN_OPT = 1 } sqz_objective;

typedef struct sqz_rule sqz_rule;
typedef struct sqz_distribution sqz_distribution;
typedef struct sqz_table sqz_table;
typedef struct sqz_problem sqz_problem;
typedef struct sqz_opt_result sqz_opt_result;

SQZ_API const char* sqz_version(void);
SQZ_API const char* sqz_last_error(void);

typedef void (*sqz_warning_fn)(const char* message, void* user);
/* NULL restores the default stderr sink. */
SQZ_API void sqz_set_warning_callback(sqz_warning_fn fn, void* user);

/* ---- quadrature ---- */

SQZ_API sqz_status sqz_rule_create(int n_theta, int n_phi, sqz_rule** out);
SQZ_API void sqz_rule_free(sqz_rule* rule);
SQZ_API size_t sqz_rule_size(const sqz_rule* rule);

/* ---- angular distributions ---- */

typedef struct sqz_beam_spec {
  double na;
  double axis[3];
  double polarization_angle;
  int has_polarization_vector;
  double polarization_vector[3];
  int full_support; /* 0: hemisphere around the axis, 1: whole sphere */
} sqz_beam_spec;

/* NA 0.8, axis -z, x polarization, hemisphere support. */
SQZ_API sqz_beam_spec sqz_beam_spec_default(void);

SQZ_API sqz_status sqz_motion_distribution(sqz_axis axis, double arg_alpha0, sqz_distribution** out);
SQZ_API sqz_status sqz_libration_distribution(sqz_axis axis, double arg_alpha0, sqz_distribution** out);
SQZ_API sqz_status sqz_gaussian_beam(const sqz_beam_spec* spec, const sqz_rule* rule, sqz_distribution** out);
SQZ_API sqz_status sqz_superposition(size_t n, const double* coef_re, const double* coef_im,
                                     const sqz_distribution* const* terms, const sqz_rule* rule,
                                     sqz_distribution** out);
SQZ_API sqz_status sqz_load_tabulated(const char* path, const sqz_rule* rule, sqz_distribution** out,
                                      double* pre_normalization_norm);
/* Writes the distribution on the nodes of `rule` as tabulated CSV text. */
SQZ_API sqz_status sqz_tabulated_csv(const sqz_distribution* dist, const sqz_rule* rule, char** text,
                                     size_t* length);
SQZ_API const char* sqz_distribution_label(const sqz_distribution* dist);
SQZ_API void sqz_distribution_free(sqz_distribution* dist);

/* Bilinear overlap int sum_pol a b; with hermitian != 0, int sum_pol a conj(b). */
SQZ_API sqz_status sqz_overlap(const sqz_distribution* a, const sqz_distribution* b, const sqz_rule* rule,
                               int hermitian, double* re, double* im);
SQZ_API sqz_status sqz_norm_squared(const sqz_distribution* a, const sqz_rule* rule, double* out);

/* ---- physics ---- */

typedef struct sqz_particle {
  double radius;
  double density;
  double permittivity;
} sqz_particle;

typedef struct sqz_rotor {
  double alpha_parallel;
  double alpha_perp;
  double moment_of_inertia;
  double permittivity;
} sqz_rotor;

typedef struct sqz_laser {
  double power;
  double waist;
  double wavelength;
  double alpha0_phase;
} sqz_laser;

typedef struct sqz_mode {
  sqz_mode_kind kind;
  sqz_axis axis;
  double frequency;
  double zero_point;
  double damping;
  double bare_recoil;
  double geometry_factor;
} sqz_mode;

typedef struct sqz_constants {
  double hbar;
  double speed_of_light;
  double vacuum_permittivity;
} sqz_constants;

SQZ_API sqz_constants sqz_physical_constants(void);
SQZ_API sqz_status sqz_particle_properties(const sqz_particle* p, double* volume, double* mass,
                                           double* polarizability);
SQZ_API sqz_status sqz_alpha0(const sqz_laser* laser, double* modulus_sq, double* omega0, double* k0);
SQZ_API sqz_status sqz_motion_modes(const sqz_particle* p, const sqz_laser* laser, double damping_fraction,
                                    sqz_mode out[3]);
/* out[0] is libration about y, out[1] about z. */
SQZ_API sqz_status sqz_libration_modes(const sqz_rotor* r, const sqz_laser* laser, double damping_fraction,
                                       sqz_mode out[2]);

/* ---- squeezing and recoil ---- */

SQZ_API sqz_status sqz_db_to_r(double db, double* r);
/* phi_s absolute; the relative phase is phi_s - 2 arg(xi). */
SQZ_API sqz_status sqz_recoil_ratio(double xi_re, double xi_im, double r, double phi_s, double* out);
SQZ_API sqz_status sqz_recoil_ratio_relative(double xi_modulus_sq, double r, double relative_phase,
                                             double* out);
SQZ_API sqz_status sqz_cross_rate(double xi_a_re, double xi_a_im, double xi_b_re, double xi_b_im,
                                  double bare_a, double bare_b, double r, double phi_s, int same_mode,
                                  double* out);

/* Columns r_db, phase, [ratio_perfect], ratio_<name>... */
SQZ_API sqz_status sqz_recoil_sweep(const sqz_distribution* target, size_t n_beams,
                                    const sqz_distribution* const* beams, const char* const* names,
                                    const double* db, size_t n_db, const double* relative_phase,
                                    size_t n_phase, int include_perfect, const sqz_rule* rule, int threads,
                                    sqz_table** out);
SQZ_API sqz_status sqz_reheating_trajectory(const sqz_mode* mode, double ratio, double n0, const double* times,
                                            size_t n, sqz_table** out);

/* ---- scattering ---- */

typedef struct sqz_irp_meta {
  double xi_re;
  double xi_im;
  double g_re;
  double g_im;
  double recoil_ratio;
  double normalization;
  double normalization_expected;
  double normalization_relative_error;
  double dsigma_min;
  double dsigma_max;
  double irp_grid_integral;
  double unit_scale;
  int has_negative;
} sqz_irp_meta;

typedef struct sqz_scatter_spec {
  double r;
  double phi_s;
  double alpha0_modulus;
  double alpha0_phase;
  double bare_recoil;
  int absolute_units;
  int n_theta;
  int n_phi;
  int threads;
} sqz_scatter_spec;

SQZ_API sqz_scatter_spec sqz_scatter_spec_default(void);
SQZ_API sqz_status sqz_irp_grid(const sqz_distribution* target, const sqz_distribution* beam,
                                const sqz_scatter_spec* spec, const sqz_rule* rule, sqz_table** out,
                                sqz_irp_meta* meta);

/* ---- detection ---- */

typedef struct sqz_spectra {
  double sxx;
  double syy;
  double scross;
} sqz_spectra;

typedef struct sqz_susceptibility {
  double omega;
  double mechanical_frequency;
  double damping;
  double chi_re;
  double chi_im;
} sqz_susceptibility;

typedef struct sqz_covariance {
  double xx;
  double xy;
  double yy;
} sqz_covariance;

SQZ_API sqz_status sqz_input_spectra(double xi_modulus, double r, double relative_phase, sqz_spectra* out);
SQZ_API sqz_status sqz_susceptibility_at(double omega, double mechanical_frequency, double damping,
                                         sqz_susceptibility* out);
SQZ_API sqz_status sqz_s_min(const sqz_spectra* in, const sqz_susceptibility* chi, double u, double* out);
SQZ_API sqz_status sqz_s_min_opt_u(const sqz_spectra* in, const sqz_susceptibility* chi, double* u,
                                   double* value);
SQZ_API sqz_status sqz_s_min_opt_u_phase(double xi_re, double xi_im, double r, const sqz_susceptibility* chi,
                                         double* relative_phase, double* phi_s, double* u, double* value,
                                         int* global);
/* Exact minimum over u and phase (equals the call above when `global` is 1). */
SQZ_API sqz_status sqz_s_min_opt_global(double xi_re, double xi_im, double r, const sqz_susceptibility* chi,
                                        double* relative_phase, double* phi_s, double* u, double* value);
SQZ_API sqz_status sqz_backaction_psd(const sqz_mode* mode, const sqz_spectra* in,
                                      const sqz_susceptibility* chi, double* out);
SQZ_API sqz_status sqz_correlation_psd(const sqz_mode* mode, const sqz_spectra* in,
                                       const sqz_susceptibility* chi, double* out);
SQZ_API sqz_status sqz_sensitivity_curve(size_t n, const sqz_spectra* spectra, const char* const* names,
                                         const sqz_susceptibility* chi, const double* u, size_t n_u,
                                         sqz_table** out);
SQZ_API sqz_status sqz_sensitivity_heatmap(const double* e2r, size_t n_e2r, const double* xi, size_t n_xi,
                                           const sqz_susceptibility* chi, sqz_table** out);
SQZ_API sqz_status sqz_wigner_covariance_interacting(const sqz_spectra* in, sqz_covariance* out);
SQZ_API sqz_status sqz_wigner_covariance_bare(double r, double phi, sqz_covariance* out);
SQZ_API sqz_status sqz_wigner_grid(const sqz_covariance* c, double half_width, int n, sqz_table** out);

/* ---- optimization ---- */

typedef struct sqz_problem_options {
  sqz_objective objective;
  sqz_mode_kind target_kind;
  sqz_axis target_axis;
  double r;
  int two_beams;
  int perfect_overlap;
  int full_support;
  double omega_ratio;
  double damping_ratio;
  int threads;
} sqz_problem_options;

SQZ_API sqz_problem_options sqz_problem_options_default(void);
SQZ_API sqz_status sqz_problem_create(const sqz_problem_options* options, const sqz_rule* rule,
                                      sqz_problem** out);
SQZ_API sqz_status sqz_problem_add_free(sqz_problem* p, const char* name, double lower, double upper);
SQZ_API sqz_status sqz_problem_set_fixed(sqz_problem* p, const char* name, double value);
SQZ_API void sqz_problem_free(sqz_problem* p);

SQZ_API sqz_status sqz_optimize(const sqz_problem* p, size_t budget, uint64_t seed, sqz_opt_result** out);
SQZ_API size_t sqz_opt_result_dimension(const sqz_opt_result* r);
SQZ_API const char* sqz_opt_result_name(const sqz_opt_result* r, size_t i);
SQZ_API double sqz_opt_result_best(const sqz_opt_result* r, size_t i);
SQZ_API void sqz_opt_result_summary(const sqz_opt_result* r, double* best_value, double* xi_re, double* xi_im,
                                    size_t* evaluations);
/* Caller frees the table. */
SQZ_API sqz_status sqz_opt_result_trace(const sqz_opt_result* r, sqz_table** out);
SQZ_API void sqz_opt_result_free(sqz_opt_result* r);

typedef struct sqz_scan_summary {
  double argmin;
  double min_value;
  double argmax;
  double max_value;
  int nondecreasing;
  int nonincreasing;
} sqz_scan_summary;

SQZ_API sqz_status sqz_scan_1d(const sqz_problem* p, const char* parameter, double lower, double upper, int n,
                               sqz_table** out, sqz_scan_summary* summary);

/* ---- tables and formatting ---- */

SQZ_API size_t sqz_table_rows(const sqz_table* t);
SQZ_API size_t sqz_table_columns(const sqz_table* t);
SQZ_API const char* sqz_table_column_name(const sqz_table* t, size_t column);
SQZ_API double sqz_table_value(const sqz_table* t, size_t row, size_t column);
/* CSV with header, 12 significant digits, LF line endings. Free with sqz_string_free. */
SQZ_API sqz_status sqz_table_csv(const sqz_table* t, char** text, size_t* length);
SQZ_API void sqz_table_free(sqz_table* t);
SQZ_API void sqz_string_free(char* s);
/* Locale-independent, 12 significant digits; buffer of at least 32 bytes. */
SQZ_API sqz_status sqz_format_number(double value, char* buffer, size_t size);

#ifdef __cplusplus
}
#endif

#endif /* SQZLEV_SQZLEV_H */
