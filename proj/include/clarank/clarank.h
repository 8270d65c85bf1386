/* C interface to the clarank library.
 *
 * Every function returning clarank_status reports failures through the
 * status code; clarank_last_error() then holds a message for the calling
 * thread. Objects are opaque handles released with the matching _destroy.
 */
#ifndef CLARANK_CLARANK_H
#define CLARANK_CLARANK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CLARANK_BUILDING_LIBRARY)
#    define CLARANK_API __declspec(dllexport)
#  else
#    define CLARANK_API __declspec(dllimport)
#  endif
#else
#  define CLARANK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum clarank_status {
  CLARANK_OK = 0,
  CLARANK_E_INVALID_ARGUMENT = 1,
  CLARANK_E_CONFIG = 2,
  CLARANK_E_IO = 3,
  CLARANK_E_FORMAT = 4,
  CLARANK_E_VERSION_MISMATCH = 5,
  CLARANK_E_TRUNCATED = 6,
  CLARANK_E_PARSE = 7,
  CLARANK_E_MISSING_FIELD = 8,
  CLARANK_E_DUPLICATE_ID = 9,
  CLARANK_E_EMPTY_QUERY = 10,
  CLARANK_E_MISSING_JUDGMENTS = 11,
  CLARANK_E_INSUFFICIENT_DATA = 12,
  CLARANK_E_DEGENERATE_VARIANCE = 13,
  CLARANK_E_UNDEFINED_CORRELATION = 14,
  CLARANK_E_RANK_GAP = 15,
  CLARANK_E_KEY_MISMATCH = 16,
  CLARANK_E_MISSING_RUN = 17,
  CLARANK_E_UNSEEN_TERM = 18,
  CLARANK_E_INTERNAL = 99
} clarank_status;

typedef enum clarank_polarity {
  CLARANK_POSITIVE = 0,
  CLARANK_NEGATIVE = 1,
  CLARANK_IDK = 2,
  CLARANK_OTHER = 3
} clarank_polarity;

typedef enum clarank_answer_length { CLARANK_SINGLE = 0, CLARANK_MULTI = 1 } clarank_answer_length;

typedef struct clarank_config clarank_config;
typedef struct clarank_stoplist clarank_stoplist;
typedef struct clarank_index clarank_index;
typedef struct clarank_policy clarank_policy;

CLARANK_API const char* clarank_version(void);
CLARANK_API const char* clarank_last_error(void);
CLARANK_API const char* clarank_status_name(clarank_status status);
/* Non-zero for usage/configuration failures, zero for data failures. */
CLARANK_API int clarank_status_is_config_error(clarank_status status);

/* Experiment configuration ---------------------------------------------- */

CLARANK_API clarank_status clarank_config_create(clarank_config** out);
CLARANK_API void clarank_config_destroy(clarank_config* config);
CLARANK_API clarank_status clarank_config_set(clarank_config* config, const char* key, const char* value);
CLARANK_API clarank_status clarank_config_load_file(clarank_config* config, const char* path);

/* Pipeline commands. On success clarank_last_report() holds a summary. ---- */

CLARANK_API clarank_status clarank_cmd_index_build(const clarank_config* config);
CLARANK_API clarank_status clarank_cmd_split(const clarank_config* config);
CLARANK_API clarank_status clarank_cmd_rank(const clarank_config* config);
CLARANK_API clarank_status clarank_cmd_eval(const clarank_config* config, const char* const* run_paths,
                                            size_t n_runs);
CLARANK_API clarank_status clarank_cmd_analyze(const clarank_config* config, const char* which);
CLARANK_API const char* clarank_last_report(void);

/* Text processing --------------------------------------------------------- */

CLARANK_API clarank_status clarank_stoplist_default(clarank_stoplist** out);
CLARANK_API clarank_status clarank_stoplist_load(const char* path, clarank_stoplist** out);
CLARANK_API void clarank_stoplist_destroy(clarank_stoplist* stoplist);

/* Writes the space-joined tokens of `text` (stopwords removed when
 * `stoplist` is non-null) into buf. *needed receives the size including the
 * terminating NUL; a too-small buffer yields CLARANK_E_INVALID_ARGUMENT. */
CLARANK_API clarank_status clarank_tokenize(const char* text, const clarank_stoplist* stoplist, char* buf,
                                            size_t buf_len, size_t* needed);

CLARANK_API clarank_status clarank_classify_answer(const char* answer, clarank_polarity* polarity,
                                                   clarank_answer_length* length);

/* Index ---------------------------------------------------------------------- */

CLARANK_API clarank_status clarank_index_build_jsonl(const char* corpus_path, const clarank_stoplist* stoplist,
                                                     unsigned threads, clarank_index** out);
CLARANK_API clarank_status clarank_index_load(const char* path, clarank_index** out);
CLARANK_API clarank_status clarank_index_save(const clarank_index* index, const char* path);
CLARANK_API void clarank_index_destroy(clarank_index* index);
CLARANK_API uint64_t clarank_index_doc_count(const clarank_index* index);
CLARANK_API uint64_t clarank_index_collection_length(const clarank_index* index);
CLARANK_API clarank_status clarank_index_term_stats(const clarank_index* index, const char* term,
                                                    uint64_t* document_frequency,
                                                    uint64_t* collection_frequency);

/* Returns CLARANK_E_UNSEEN_TERM when the term is not in the collection. */
CLARANK_API clarank_status clarank_smoothed_log_prob(const clarank_index* index, const char* term,
                                                     const char* doc_id, double mu, double* out);
/* `query` is raw text, tokenized and filtered with `stoplist` (may be null). */
CLARANK_API clarank_status clarank_ql_score(const clarank_index* index, const char* query,
                                            const clarank_stoplist* stoplist, const char* doc_id, double mu,
                                            double* out);

/* Policy ------------------------------------------------------------------- */

CLARANK_API clarank_status clarank_policy_default(clarank_policy** out);
CLARANK_API clarank_status clarank_policy_load(const char* path, clarank_policy** out);
CLARANK_API void clarank_policy_destroy(clarank_policy* policy);
CLARANK_API clarank_status clarank_policy_select(const clarank_policy* policy, clarank_polarity polarity,
                                                 clarank_answer_length length, int* use_question,
                                                 int* use_answer);

/* Statistics ------------------------------------------------------------- */

CLARANK_API clarank_status clarank_paired_t_test(const double* a, const double* b, size_t n, double* t,
                                                 double* p);
CLARANK_API clarank_status clarank_pearson(const double* x, const double* y, size_t n, double* r, double* p);

#ifdef __cplusplus
}
#endif

#endif /* CLARANK_CLARANK_H */
