#ifndef MATCHLAB_H
#define MATCHLAB_H

/* C interface to matchlab. Every call takes JSON text and leaves its answer, also
 * JSON, in the session; read it with ml_session_result. Strings returned by the
 * library stay valid until the next call on the same session. */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(MATCHLAB_BUILDING)
#define ML_API __attribute__((visibility("default")))
#else
#define ML_API
#endif

typedef struct ml_session ml_session;

typedef enum ml_status {
  ML_OK = 0,
  ML_NEGATIVE = 1,          /* query answered "no" (no matching, not primitive, ...) */
  ML_THEOREM_VIOLATION = 2, /* a proven statement failed, or internal contradiction */
  ML_USAGE = 3,             /* bad arguments or configuration */
  ML_INVALID_INPUT = 4,     /* malformed or non-canonical JSON payload */
  ML_BUDGET = 5,            /* enumeration over budget */
  ML_VERIFY_FAILED = 6,     /* certificate rejected */
  ML_INTERNAL = 7
} ml_status;

ML_API const char* ml_version(void);
ML_API const char* ml_status_name(ml_status s);
/* 0, 1, 2 or 3: the command-line exit code for a status. */
ML_API int ml_exit_code(ml_status s);

ML_API ml_session* ml_session_create(void);
ML_API void ml_session_destroy(ml_session* s);
ML_API const char* ml_session_result(const ml_session* s);
ML_API const char* ml_session_last_error(const ml_session* s);

/* {"group":..,"A":..,"B":..} */
ML_API ml_status ml_group_find_matching(ml_session* s, const char* instance_json);
ML_API ml_status ml_group_check_local(ml_session* s, const char* instance_json);
ML_API ml_status ml_verify_kneser(ml_session* s, const char* instance_json);
/* {"free_rank":r,"torsion":[..]} */
ML_API ml_status ml_group_decide_property(ml_session* s, const char* group_json);
ML_API ml_status ml_group_counterexample(ml_session* s, const char* group_json);

/* {"field":..,"A":..,"B":..,"a_basis":[..]?} */
ML_API ml_status ml_field_find_matched_basis(ml_session* s, const char* instance_json);
ML_API ml_status ml_field_check_matched(ml_session* s, const char* instance_json, const char* options_json);
ML_API ml_status ml_field_check_primitive(ml_session* s, const char* instance_json);
ML_API ml_status ml_field_check_local(ml_session* s, const char* instance_json, const char* options_json);
ML_API ml_status ml_verify_linear_kneser(ml_session* s, const char* instance_json);

ML_API ml_status ml_campaign_run(ml_session* s, const char* config_json);
ML_API ml_status ml_hunt(ml_session* s, const char* config_json);

ML_API ml_status ml_cert_verify(ml_session* s, const char* certificate_json);
ML_API ml_status ml_cert_verify_file(ml_session* s, const char* path);

#ifdef __cplusplus
}
#endif

#endif
