/* ffv: multi-finger fuzzy vault toolkit — public C interface.
 *
 * All functions returning ffv_status set a thread-local message readable via
 * ffv_last_error() on failure. Handles are opaque; every *_free accepts NULL.
 * Verification or attack failure is a normal result (FFV_OK with success=0),
 * not an error status.
 */
#ifndef FFV_H
#define FFV_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ffv_status {
    FFV_OK = 0,
    FFV_E_ARGUMENT,
    FFV_E_IO,
    FFV_E_CONFIG,
    FFV_E_VAULT,
    FFV_E_IMAGE,
    FFV_E_POINTSET,
    FFV_E_DUP_ABSCISSA,
    FFV_E_DUP_POINT,
    FFV_E_BELOW_CHI,     /* a finger had fewer than chi reliable minutiae */
    FFV_E_NOT_ENOUGH,    /* pooled reliable minutiae below t */
    FFV_E_PLACEMENT,     /* point placement rejection budget exhausted */
    FFV_E_EMPTY_FOREGROUND,
    FFV_E_INFEASIBLE,
    FFV_E_NO_PARAMS,
    FFV_E_INTERNAL
} ffv_status;

const char* ffv_last_error(void);
void ffv_string_free(char* s);
uint64_t ffv_derive_seed(uint64_t base, uint64_t tag);

/* ---- configuration ----------------------------------------------------- */
typedef struct ffv_config ffv_config;

ffv_config* ffv_config_new(void);
ffv_status ffv_config_load(const char* path, ffv_config** out);
ffv_status ffv_config_set(ffv_config* c, const char* key, const char* value);
ffv_status ffv_config_get_int(const ffv_config* c, const char* key, long long* out);
/* Validates all parameter invariants; called implicitly by load. */
ffv_status ffv_config_validate(const ffv_config* c);
char* ffv_config_dump(const ffv_config* c);
void ffv_config_free(ffv_config* c);

/* ---- minutiae point sets ------------------------------------------------ */
/* Text format, one minutia per line: "<a> <b> [quality]". */
typedef struct ffv_pointset ffv_pointset;

ffv_status ffv_pointset_parse(const char* text, ffv_pointset** out);
ffv_status ffv_pointset_load(const char* path, ffv_pointset** out);
char* ffv_pointset_serialize(const ffv_pointset* p);
int ffv_pointset_size(const ffv_pointset* p);
ffv_status ffv_pointset_get(const ffv_pointset* p, int i, int* a, int* b, double* quality);
void ffv_pointset_free(ffv_pointset* p);

/* ---- synthetic population ------------------------------------------------ */
typedef struct ffv_population ffv_population;

ffv_status ffv_population_gen(const ffv_config* c, int n_users, uint64_t seed,
                              ffv_population** out);
int ffv_population_users(const ffv_population* p);
/* Truth dump with per-finger sections ("finger <i>" then "<a> <b>" lines). */
char* ffv_population_user_text(const ffv_population* p, int user);
ffv_status ffv_population_parse_user(const char* text, ffv_population** out);
ffv_status ffv_population_truth(const ffv_population* p, int user, int finger,
                                ffv_pointset** out);
/* One noisy capture of a finger under the config's noise model. */
ffv_status ffv_sample_impression(const ffv_config* c, const ffv_population* p, int user,
                                 int finger, uint64_t seed, ffv_pointset** out);
void ffv_population_free(ffv_population* p);

/* ---- vault and secret ---------------------------------------------------- */
typedef struct ffv_vault ffv_vault;
typedef struct ffv_secret ffv_secret;

/* impressions: finger-major array of f*u point sets (finger 1 first). On
 * FFV_E_BELOW_CHI, *failed_finger (when non-NULL) holds the 1-based finger
 * so callers can re-capture it. */
ffv_status ffv_enroll(const ffv_config* c, const ffv_pointset* const* impressions, int count,
                      uint64_t seed, ffv_vault** out_vault, ffv_secret** out_secret,
                      int* failed_finger);
ffv_status ffv_vault_parse(const char* text, ffv_vault** out);
ffv_status ffv_vault_load(const char* path, ffv_vault** out);
char* ffv_vault_serialize(const ffv_vault* v);
ffv_status ffv_vault_params(const ffv_vault* v, uint64_t* q, int* f, int* r, int* k, int* d);
/* Vault point at 1-based position i (lexicographic order). */
ffv_status ffv_vault_point(const ffv_vault* v, int i, int* finger, int* a, int* b,
                           uint64_t* y);
void ffv_vault_free(ffv_vault* v);

int ffv_secret_len(const ffv_secret* s);
uint64_t ffv_secret_coeff(const ffv_secret* s, int i);
/* Evaluate the secret polynomial at x over its own field. */
ffv_status ffv_secret_eval(const ffv_secret* s, uint64_t x, uint64_t* y);
void ffv_secret_free(ffv_secret* s);

/* ---- verification --------------------------------------------------------- */
typedef struct ffv_verify_result {
    int success;
    uint64_t decode_trials;
    int collected; /* matched vault positions fed to recovery */
} ffv_verify_result;

/* queries: one point set per finger. Optional per-finger arrays (length f)
 * receive match counts, recovered rotations, and gate decisions;
 * matched_positions (capacity r) receives the collected 1-based vault
 * positions. On success and when out_secret is non-NULL, the recovered
 * polynomial is returned. */
ffv_status ffv_verify(const ffv_config* c, const ffv_vault* v,
                      const ffv_pointset* const* queries, int n_queries, uint64_t seed,
                      ffv_verify_result* out, int* finger_matches, double* finger_phi,
                      int* finger_gated, int* matched_positions, ffv_secret** out_secret);

/* ---- matcher (debug) ------------------------------------------------------- */
typedef struct ffv_match_result {
    double phi_deg, vx, vy;
    int pairs;
} ffv_match_result;

/* delta <= 0 uses the config's delta_verify. */
ffv_status ffv_match(const ffv_config* c, const ffv_pointset* reference,
                     const ffv_pointset* query, double delta, ffv_match_result* out);

/* ---- attack ----------------------------------------------------------------- */
typedef struct ffv_attack_result {
    uint64_t trials;
    int success;
    double elapsed_s;
    double measured_trials_log2;
    double measured_ops_log2;
    double predicted_bits;
} ffv_attack_result;

ffv_status ffv_attack(const ffv_vault* v, uint64_t max_trials, uint64_t seed,
                      ffv_attack_result* out);
/* Full measured-vs-predicted comparison; t and chi are out-of-band secrets.
 * Fails with FFV_E_INFEASIBLE when the prediction exceeds 40 bits. */
ffv_status ffv_attack_compare(const ffv_vault* v, int t, int chi, double log_base,
                              uint64_t seed, ffv_attack_result* out);

/* ---- security calculations --------------------------------------------------- */
typedef struct ffv_security_summary {
    double zeta;
    double zeta_cross_check;
    double attack_ops_log2;
    double m_c, m_f;
    double mu, tau;
    long long max_chaff_per_finger;
    long long safe_r_per_finger;
} ffv_security_summary;

ffv_status ffv_security(const ffv_config* c, ffv_security_summary* out);

typedef struct ffv_param_row {
    double delta_e, delta_v;
    int t, r, k, chi, d;
    double quality_min, bits, m_c, m_f;
} ffv_param_row;
typedef struct ffv_param_rows ffv_param_rows;

ffv_status ffv_param_search(const ffv_config* c, double target_bits, ffv_param_rows** out);
long long ffv_param_rows_count(const ffv_param_rows* rows);
ffv_status ffv_param_rows_get(const ffv_param_rows* rows, long long i, ffv_param_row* out);
void ffv_param_rows_free(ffv_param_rows* rows);

/* ---- image utilities (binary PGM) --------------------------------------------- */
ffv_status ffv_prealign_pgm(const char* in_path, const char* aligned_out_or_null,
                            int threshold, int downscale, int* total_rotation_deg,
                            int* iterations, int* shift_dx, int* shift_dy);
ffv_status ffv_rotate_pgm(const char* in_path, const char* out_path, double degrees);

#ifdef __cplusplus
}
#endif

#endif /* FFV_H */
