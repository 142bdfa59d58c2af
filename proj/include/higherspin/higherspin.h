#ifndef HIGHERSPIN_H
#define HIGHERSPIN_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define HS_API __attribute__((visibility("default")))
#else
#define HS_API
#endif

/* Status codes returned by every fallible call. */
typedef enum hs_status {
  HS_OK = 0,
  HS_INVALID_ARGUMENT = 1,
  HS_DIMENSION_MISMATCH = 2,
  HS_SINGULAR = 3,
  HS_DOMAIN_VIOLATION = 4,
  HS_NON_FINITE = 5,
  HS_IO = 6,
  HS_NOT_CALIBRATED = 7,
  HS_INTERNAL = 99
} hs_status;

typedef struct hs_multivector hs_multivector;
typedef struct hs_config hs_config;
typedef struct hs_report hs_report;
typedef struct hs_suite hs_suite;

HS_API const char* hs_version(void);
/* Message of the last failed call on this thread; empty after a success. */
HS_API const char* hs_last_error(void);
HS_API const char* hs_status_name(hs_status status);

/* Multivectors in Cl_m, 2^m blade coefficients indexed by bitmask. */
HS_API hs_status hs_mv_new(int m, const double* coeffs, size_t count, hs_multivector** out);
HS_API void hs_mv_free(hs_multivector* mv);
HS_API int hs_mv_dim(const hs_multivector* mv);
HS_API hs_status hs_mv_coeffs(const hs_multivector* mv, double* out, size_t count);
HS_API hs_status hs_mv_product(const hs_multivector* a, const hs_multivector* b,
                               hs_multivector** out);
HS_API hs_status hs_mv_reversion(const hs_multivector* a, hs_multivector** out);
HS_API hs_status hs_mv_conjugation(const hs_multivector* a, hs_multivector** out);
/* Copies the rendering into buf (truncated, NUL-terminated); *needed gets the full length. */
HS_API hs_status hs_mv_to_string(const hs_multivector* mv, char* buf, size_t cap,
                                 size_t* needed);

/* Scenario names. */
HS_API int hs_scenario_count(void);
HS_API const char* hs_scenario_name(int index);

/* Scenario configuration. Keys follow the suite file: scenario, m, k, j, radius,
   seed, degree, tol, samples, center, quad_orders, family, lambda_table. */
HS_API hs_status hs_config_new(const char* scenario, hs_config** out);
HS_API void hs_config_free(hs_config* cfg);
HS_API hs_status hs_config_set_int(hs_config* cfg, const char* key, long long value);
HS_API hs_status hs_config_set_double(hs_config* cfg, const char* key, double value);
HS_API hs_status hs_config_set_string(hs_config* cfg, const char* key, const char* value);

/* Suites loaded from an INI file, one section per run. */
HS_API hs_status hs_suite_load(const char* path, hs_suite** out);
HS_API hs_status hs_suite_parse(const char* text, hs_suite** out);
HS_API void hs_suite_free(hs_suite* suite);
HS_API size_t hs_suite_size(const hs_suite* suite);
/* Returns a copy of entry i; free it with hs_config_free. */
HS_API hs_status hs_suite_config(const hs_suite* suite, size_t index, hs_config** out);

/* Runs one scenario. The report owns the strings it returns. */
HS_API hs_status hs_run(const hs_config* cfg, hs_report** out);
HS_API void hs_report_free(hs_report* report);
HS_API int hs_report_passed(const hs_report* report);
HS_API const char* hs_report_json(const hs_report* report);
HS_API const char* hs_report_text(const hs_report* report);

/* Calibrates lambda_1 .. lambda_{2j-1} for (m, k). Entries already present in
   table_path are kept; the merged table is written back. */
HS_API hs_status hs_calibrate(int m, int k, int j, const char* table_path, double* lambda_out);

#ifdef __cplusplus
}
#endif

#endif
