#include "clarank/clarank.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "clarank/conversation.hpp"
#include "clarank/error.hpp"
#include "clarank/experiment.hpp"
#include "clarank/index.hpp"
#include "clarank/policy.hpp"
#include "clarank/ranker.hpp"
#include "clarank/stats.hpp"
#include "clarank/textproc.hpp"

struct clarank_config {
  clarank::ExperimentConfig value;
};
struct clarank_stoplist {
  clarank::Stoplist value;
};
struct clarank_index {
  clarank::Index value;
};
struct clarank_policy {
  clarank::PolicyTable value;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_report;

template <typename Fn>
clarank_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return CLARANK_OK;
  } catch (const clarank::Error& e) {
    g_last_error = e.what();
    return static_cast<clarank_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return CLARANK_E_INTERNAL;
}

void require(const void* p, const char* what) {
  if (!p) throw clarank::Error(clarank::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

const clarank::Stoplist& stoplist_or_empty(const clarank_stoplist* s) {
  static const clarank::Stoplist empty;
  return s ? s->value : empty;
}

}  // namespace

extern "C" {

const char* clarank_version(void) { return "1.0.0"; }

const char* clarank_last_error(void) { return g_last_error.c_str(); }

const char* clarank_last_report(void) { return g_last_report.c_str(); }

const char* clarank_status_name(clarank_status status) {
  return clarank::error_code_name(static_cast<clarank::ErrorCode>(status));
}

int clarank_status_is_config_error(clarank_status status) {
  return clarank::is_config_error(static_cast<clarank::ErrorCode>(status)) ? 1 : 0;
}

clarank_status clarank_config_create(clarank_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new clarank_config{};
  });
}

void clarank_config_destroy(clarank_config* config) { delete config; }

clarank_status clarank_config_set(clarank_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    config->value.set(key, value);
  });
}

clarank_status clarank_config_load_file(clarank_config* config, const char* path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    config->value.load_file(path);
  });
}

clarank_status clarank_cmd_index_build(const clarank_config* config) {
  return guarded([&] {
    require(config, "config");
    g_last_report = clarank::cmd_index_build(config->value);
  });
}

clarank_status clarank_cmd_split(const clarank_config* config) {
  return guarded([&] {
    require(config, "config");
    g_last_report = clarank::cmd_split(config->value);
  });
}

clarank_status clarank_cmd_rank(const clarank_config* config) {
  return guarded([&] {
    require(config, "config");
    g_last_report = clarank::cmd_rank(config->value);
  });
}

clarank_status clarank_cmd_eval(const clarank_config* config, const char* const* run_paths, size_t n_runs) {
  return guarded([&] {
    require(config, "config");
    if (n_runs > 0) require(run_paths, "run_paths");
    std::vector<std::filesystem::path> runs;
    for (size_t i = 0; i < n_runs; ++i) {
      require(run_paths[i], "run path");
      runs.emplace_back(run_paths[i]);
    }
    g_last_report = clarank::cmd_eval(config->value, runs);
  });
}

clarank_status clarank_cmd_analyze(const clarank_config* config, const char* which) {
  return guarded([&] {
    require(config, "config");
    require(which, "which");
    g_last_report = clarank::cmd_analyze(config->value, which);
  });
}

clarank_status clarank_stoplist_default(clarank_stoplist** out) {
  return guarded([&] {
    require(out, "out");
    *out = new clarank_stoplist{clarank::Stoplist::english()};
  });
}

clarank_status clarank_stoplist_load(const char* path, clarank_stoplist** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new clarank_stoplist{clarank::Stoplist::load(path)};
  });
}

void clarank_stoplist_destroy(clarank_stoplist* stoplist) { delete stoplist; }

clarank_status clarank_tokenize(const char* text, const clarank_stoplist* stoplist, char* buf, size_t buf_len,
                                size_t* needed) {
  return guarded([&] {
    require(text, "text");
    auto tokens = clarank::tokenize(text);
    if (stoplist) tokens = clarank::remove_stopwords(tokens, stoplist->value);
    const auto joined = clarank::join_tokens(tokens);
    if (needed) *needed = joined.size() + 1;
    if (!buf || buf_len < joined.size() + 1) {
      throw clarank::Error(clarank::ErrorCode::kInvalidArgument, "token buffer too small");
    }
    std::memcpy(buf, joined.c_str(), joined.size() + 1);
  });
}

clarank_status clarank_classify_answer(const char* answer, clarank_polarity* polarity,
                                       clarank_answer_length* length) {
  return guarded([&] {
    require(answer, "answer");
    const auto type = clarank::classify(answer);
    if (polarity) *polarity = static_cast<clarank_polarity>(type.polarity);
    if (length) *length = static_cast<clarank_answer_length>(type.length);
  });
}

clarank_status clarank_index_build_jsonl(const char* corpus_path, const clarank_stoplist* stoplist,
                                         unsigned threads, clarank_index** out) {
  return guarded([&] {
    require(corpus_path, "corpus_path");
    require(out, "out");
    auto docs = clarank::Index::read_corpus(corpus_path);
    *out = new clarank_index{clarank::Index::build(std::move(docs), stoplist_or_empty(stoplist), threads)};
  });
}

clarank_status clarank_index_load(const char* path, clarank_index** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new clarank_index{clarank::Index::load(path)};
  });
}

clarank_status clarank_index_save(const clarank_index* index, const char* path) {
  return guarded([&] {
    require(index, "index");
    require(path, "path");
    index->value.save(path);
  });
}

void clarank_index_destroy(clarank_index* index) { delete index; }

uint64_t clarank_index_doc_count(const clarank_index* index) { return index ? index->value.doc_count() : 0; }

uint64_t clarank_index_collection_length(const clarank_index* index) {
  return index ? index->value.collection_length() : 0;
}

clarank_status clarank_index_term_stats(const clarank_index* index, const char* term, uint64_t* df,
                                        uint64_t* cf) {
  return guarded([&] {
    require(index, "index");
    require(term, "term");
    const auto stats = index->value.term_stats(term);
    if (df) *df = stats.document_frequency;
    if (cf) *cf = stats.collection_frequency;
  });
}

clarank_status clarank_smoothed_log_prob(const clarank_index* index, const char* term, const char* doc_id,
                                         double mu, double* out) {
  return guarded([&] {
    require(index, "index");
    require(term, "term");
    require(doc_id, "doc_id");
    require(out, "out");
    const auto value = clarank::smoothed_log_prob(index->value, term, doc_id, mu);
    if (!value) {
      throw clarank::Error(clarank::ErrorCode::kUnseenTerm,
                           std::string("term '") + term + "' does not occur in the collection");
    }
    *out = *value;
  });
}

clarank_status clarank_ql_score(const clarank_index* index, const char* query, const clarank_stoplist* stoplist,
                                const char* doc_id, double mu, double* out) {
  return guarded([&] {
    require(index, "index");
    require(query, "query");
    require(doc_id, "doc_id");
    require(out, "out");
    const auto tokens = clarank::analyze_text(query, stoplist_or_empty(stoplist));
    *out = clarank::ql_score(index->value, tokens, doc_id, mu);
  });
}

clarank_status clarank_policy_default(clarank_policy** out) {
  return guarded([&] {
    require(out, "out");
    *out = new clarank_policy{clarank::PolicyTable::heuristic()};
  });
}

clarank_status clarank_policy_load(const char* path, clarank_policy** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new clarank_policy{clarank::PolicyTable::load(path)};
  });
}

void clarank_policy_destroy(clarank_policy* policy) { delete policy; }

clarank_status clarank_policy_select(const clarank_policy* policy, clarank_polarity polarity,
                                     clarank_answer_length length, int* use_question, int* use_answer) {
  return guarded([&] {
    require(policy, "policy");
    if (polarity < CLARANK_POSITIVE || polarity > CLARANK_OTHER || length < CLARANK_SINGLE ||
        length > CLARANK_MULTI) {
      throw clarank::Error(clarank::ErrorCode::kInvalidArgument, "answer type out of range");
    }
    const auto spec = policy->value.select(
        {static_cast<clarank::Polarity>(polarity), static_cast<clarank::AnswerLength>(length)});
    if (use_question) *use_question = spec.use_question ? 1 : 0;
    if (use_answer) *use_answer = spec.use_answer ? 1 : 0;
  });
}

clarank_status clarank_paired_t_test(const double* a, const double* b, size_t n, double* t, double* p) {
  return guarded([&] {
    if (n > 0) {
      require(a, "a");
      require(b, "b");
    }
    const auto result = clarank::paired_t_test({a, n}, {b, n});
    if (t) *t = result.t;
    if (p) *p = result.p;
  });
}

clarank_status clarank_pearson(const double* x, const double* y, size_t n, double* r, double* p) {
  return guarded([&] {
    if (n > 0) {
      require(x, "x");
      require(y, "y");
    }
    const auto result = clarank::pearson({x, n}, {y, n});
    if (r) *r = result.r;
    if (p) *p = result.p;
  });
}

}  // extern "C"
