/* Charge-driven pre-trial assessment audit library: C interface.
 *
 * Every function returning ca_status leaves a description of the most recent
 * failure on the calling thread, readable with ca_last_error_message().
 * Handles are opaque; free them with the matching *_free function.
 */
#ifndef CHARGEAUDIT_CHARGEAUDIT_H
#define CHARGEAUDIT_CHARGEAUDIT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(CHARGEAUDIT_BUILDING_LIBRARY)
#define CA_API __attribute__((visibility("default")))
#else
#define CA_API
#endif

typedef enum ca_status {
  CA_OK = 0,
  CA_ERR_INVALID_ARGUMENT = 1,
  CA_ERR_PARSE = 2,
  CA_ERR_CONFIG = 3,
  CA_ERR_SCHEMA = 4,
  CA_ERR_IO = 5,
  CA_ERR_EMPTY_INPUT = 6,
  CA_ERR_DEGENERATE_INPUT = 7,
  CA_ERR_LENGTH_MISMATCH = 8,
  CA_ERR_NOT_DISPOSED = 9,
  CA_ERR_INTERNAL = 10
} ca_status;

typedef struct ca_engine ca_engine;
typedef struct ca_report ca_report;

/* Tri-state switches: -1 keeps the catalog's setting, 0 off, 1 on. */
typedef struct ca_engine_options {
  int ambiguous_bumpup;
  int violent_includes_derivatives;
} ca_engine_options;

CA_API const char* ca_version(void);
CA_API const char* ca_status_name(ca_status status);
CA_API const char* ca_last_error_message(void);
CA_API const char* ca_schema_text(void);

/* Loads catalog.csv, dmf.json, weights.json and disposition.json from
 * config_dir. options may be NULL. */
CA_API ca_status ca_engine_load(const char* config_dir, const ca_engine_options* options,
                                ca_engine** out);
CA_API ca_status ca_engine_load_files(const char* catalog, const char* dmf, const char* weights,
                                      const char* disposition, const ca_engine_options* options,
                                      ca_engine** out);
CA_API void ca_engine_free(ca_engine* engine);

/* Writes the normalized text (NUL terminated) when it fits; *needed always
 * receives the required size including the terminator. */
CA_API ca_status ca_charge_normalize(const char* text, char* buf, size_t buf_len, size_t* needed);
CA_API ca_status ca_charge_flags(const ca_engine* engine, const char* charge, int* violent,
                                 int* exclusion, int* bumpup);

typedef struct ca_assess_input {
  int fta;
  int nca;
  int nvca_flag;
  const char* charges; /* ';'-separated, may be NULL or empty */
  int extradited;
} ca_assess_input;

#define CA_REASON_LEN 160

/* Levels are ranks: 1 OR-NAS, 2 OR-Minimum, 3 SFPDP-ACM, 4 Release Not Recommended. */
typedef struct ca_assess_output {
  int exclusion;
  int bumpup;
  int initial_level;
  int final_level;
  char exclusion_reason[CA_REASON_LEN];
  char bumpup_reason[CA_REASON_LEN];
} ca_assess_output;

CA_API ca_status ca_assess(const ca_engine* engine, const ca_assess_input* input,
                           ca_assess_output* output);

typedef struct ca_risk_factors {
  int age_at_arrest; /* negative when unknown */
  int pending_charge;
  int prior_misdemeanor_conviction;
  int prior_felony_conviction;
  int prior_conviction;
  int prior_violent_convictions;
  int ftas_past_two_years;
  int fta_older_than_two_years;
  int prior_incarceration;
  int current_offense_violent;
} ca_risk_factors;

CA_API ca_status ca_compute_subscores(const ca_engine* engine, const ca_risk_factors* factors,
                                      int* fta, int* nca, int* nvca_flag);

CA_API ca_status ca_two_proportion_test(long x1, long n1, long x2, long n2, double* z, double* p);
CA_API ca_status ca_wilcoxon_rank_sum(const double* a, size_t na, const double* b, size_t nb,
                                      double* rank_sum, double* z, double* p);

typedef struct ca_audit_options {
  const char* psa_path;
  const char* court_path;
  const char* out_dir;
  int sensitivity;      /* also write tables without plea-to-other-case-only records */
  int group_by_race;    /* B / non-B disaggregation */
  int booking_from_psa; /* booking charges from the form instead of the court file */
} ca_audit_options;

CA_API ca_status ca_run_score(const ca_engine* engine, const char* psa_path, const char* out_dir,
                              int from_factors, ca_report** report);
CA_API ca_status ca_run_audit(const ca_engine* engine, const ca_audit_options* options,
                              ca_report** report);
/* court_path may be NULL. */
CA_API ca_status ca_run_validate(const ca_engine* engine, const char* psa_path,
                                 const char* court_path, const char* out_dir, ca_report** report);
CA_API ca_status ca_run_dedupe(const ca_engine* engine, const char* psa_path, const char* out_dir,
                               ca_report** report);
CA_API ca_status ca_run_link(const ca_engine* engine, const char* psa_path, const char* court_path,
                             const char* out_dir, ca_report** report);
CA_API ca_status ca_run_consistency(const ca_engine* engine, const char* court_path,
                                    const char* out_dir, ca_report** report);
/* generator_json: JSON object of generator settings, NULL for defaults. */
CA_API ca_status ca_run_simulate(const ca_engine* engine, const char* generator_json,
                                 const char* out_dir, ca_report** report);

CA_API size_t ca_report_count_size(const ca_report* report);
CA_API ca_status ca_report_count_at(const ca_report* report, size_t index, const char** name,
                                    long long* value);
CA_API size_t ca_report_row_error_size(const ca_report* report);
CA_API ca_status ca_report_row_error_at(const ca_report* report, size_t index,
                                        const char** source, size_t* line, const char** message);
CA_API size_t ca_report_output_size(const ca_report* report);
CA_API const char* ca_report_output_at(const ca_report* report, size_t index);
CA_API int ca_report_empty_result(const ca_report* report);
CA_API const char* ca_report_message(const ca_report* report);
CA_API void ca_report_free(ca_report* report);

#ifdef __cplusplus
}
#endif

#endif /* CHARGEAUDIT_CHARGEAUDIT_H */
