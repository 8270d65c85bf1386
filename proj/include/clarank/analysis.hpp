#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "clarank/conversation.hpp"
#include "clarank/error.hpp"
#include "clarank/evaluation.hpp"
#include "clarank/stats.hpp"
#include "clarank/textproc.hpp"

namespace clarank {

/// Per-conversation NDCG under the four compositions.
struct DeltaRecord {
  std::string id;     // conversation id
  std::string facet;  // facet key
  AnswerType type;
  double ndcg_q0 = 0.0;
  double ndcg_q = 0.0;   // Q0 + Q
  double ndcg_a = 0.0;   // Q0 + A
  double ndcg_qa = 0.0;  // Q0 + Q + A
  std::size_t question_tokens = 0;  // after stopword removal
  std::size_t answer_tokens = 0;

  double delta_q() const { return ndcg_q - ndcg_q0; }
  double delta_a() const { return ndcg_a - ndcg_q0; }
  double delta_qa() const { return ndcg_qa - ndcg_q0; }
};

struct CompositionResults {
  const EvalResult* q0 = nullptr;
  const EvalResult* q = nullptr;
  const EvalResult* a = nullptr;
  const EvalResult* qa = nullptr;
};

struct DeltaRecordSet {
  std::vector<DeltaRecord> records;
  std::size_t unranked = 0;  // conversations absent from every run
};

/// Joins conversations with the four evaluations by conversation id. A
/// conversation present in some evaluations but not all is Error(kKeyMismatch).
DeltaRecordSet make_delta_records(const std::vector<ClarificationRound>& rounds,
                                  const CompositionResults& results, const Stoplist& stoplist);

// Table of NDCG per answer type -----------------------------------------------

struct CompositionComparison {
  double delta_percent = 0.0;  // NaN when the Q0 mean is 0
  std::optional<double> p_value;
  bool significant = false;  // p < 0.05
  std::string note;           // why p_value is absent, if it is
};

struct TypeRow {
  AnswerType type;
  std::size_t count = 0;
  double mean_q0 = 0.0;
  double mean_q = 0.0;
  double mean_a = 0.0;
  double mean_qa = 0.0;
  std::array<CompositionComparison, 3> vs_q0;  // +Q, +A, +Q+A
};

/// One row for every (polarity, length) cell, in the order P, N, O, idk with
/// single before multi. Throws Error(kInsufficientData) for no records.
std::vector<TypeRow> per_type_table(const std::vector<DeltaRecord>& records);
std::string per_type_table_csv(const std::vector<TypeRow>& rows);
std::string per_type_table_text(const std::vector<TypeRow>& rows);

// Correlations ------------------------------------------------------------------

struct CorrelationRow {
  std::string x;
  std::string y;
  std::optional<Correlation> value;
  ErrorCode error = ErrorCode::kOk;
  std::string message;
};

/// Correlates each facet's Q0 NDCG with the share of its answers that are P,
/// N, and anything else. Throws Error(kInsufficientData) below three facets.
std::vector<CorrelationRow> facet_polarity_correlation(const std::vector<DeltaRecord>& records);

/// The five length/delta pairings (#tokens Q vs delta +Q and +Q+A, #tokens A
/// vs +A and +Q+A, #tokens Q+A vs +Q+A). Throws Error(kInsufficientData)
/// below three records.
std::vector<CorrelationRow> length_delta_correlation(const std::vector<DeltaRecord>& records);

std::string correlation_csv(const std::vector<CorrelationRow>& rows);
std::string correlation_text(const std::vector<CorrelationRow>& rows);

// Delta scatter -------------------------------------------------------------------

enum class Quadrant { kBothImprove, kQuestionHarmsAnswerImproves, kBothHarm, kQuestionImprovesAnswerHarms, kAxis };

std::string_view to_string(Quadrant q);

struct ScatterPoint {
  std::string id;
  double dq = 0.0;
  double da = 0.0;
  double dqa = 0.0;
  Quadrant quadrant = Quadrant::kAxis;
};

struct ScatterData {
  std::vector<ScatterPoint> points;
  std::array<std::size_t, 5> counts{};  // indexed by Quadrant

  std::size_t count(Quadrant q) const { return counts[static_cast<std::size_t>(q)]; }
};

Quadrant quadrant_of(double dq, double da);

std::vector<DeltaRecord> filter_by_type(const std::vector<DeltaRecord>& records, AnswerType type);

/// Quadrants by the signs of (delta +Q, delta +A); a zero on either axis goes
/// to the axis bucket.
ScatterData delta_scatter(const std::vector<DeltaRecord>& records);
std::string scatter_csv(const ScatterData& data);  // key,dq,da,dqa,quadrant

// Answer openings -------------------------------------------------------------

struct NgramNode {
  std::string token;
  std::size_t count = 0;
  std::size_t ending = 0;           // sequences that stop at this node
  std::vector<NgramNode> children;  // sorted by token

  const NgramNode* child(std::string_view t) const;
};

/// Prefix tree over the first `depth` tokens of each answer (stopwords kept).
/// The root is "START" and counts the non-empty answers.
NgramNode answer_ngram_tree(const std::vector<std::string>& answers, std::size_t depth = 4);

/// Nested `{"token", "count", "children": [...]}`, children by descending
/// count then token, dropping nodes whose count is below min_count.
std::string ngram_tree_json(const NgramNode& root, std::size_t min_count = 1);

}  // namespace clarank
