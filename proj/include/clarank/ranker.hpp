#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clarank/conversation.hpp"
#include "clarank/index.hpp"
#include "clarank/textproc.hpp"

namespace clarank {

/// Which clarification parts are interpolated with Q0. Q0 is always used.
struct CompositionSpec {
  bool use_question = false;
  bool use_answer = false;

  friend bool operator==(const CompositionSpec&, const CompositionSpec&) = default;
};

inline constexpr CompositionSpec kQ0Only{false, false};
inline constexpr CompositionSpec kQ0Q{true, false};
inline constexpr CompositionSpec kQ0A{false, true};
inline constexpr CompositionSpec kQ0QA{true, true};

std::string_view mode_name(CompositionSpec spec);  // "q0", "q0q", "q0a", "q0qa"
std::optional<CompositionSpec> parse_mode(std::string_view name);

struct RankerConfig {
  double mu = 2000.0;
  double lambda = 0.5;  // weight of the Q0 component
  std::size_t depth = 1000;

  void validate() const;
};

struct RankedEntry {
  std::string doc_id;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
};

struct RankedList {
  std::string id;  // conversation id, or a plain facet key for external runs
  std::vector<RankedEntry> entries;
  std::vector<std::string> dropped_terms;  // query terms absent from the collection
};

struct ComposedQuery {
  TokenList q0;
  TokenList round;  // selected parts, question before answer; empty for Q0 only
};

ComposedQuery compose_query(const ClarificationRound& round, CompositionSpec spec,
                            const Stoplist& stoplist);

/// log P(w|D) with P(w|D) = (tf + mu * cf/|C|) / (|D| + mu).
/// Empty optional when the term does not occur in the collection.
/// Throws Error(kInvalidArgument) for an unknown document or mu <= 0.
std::optional<double> smoothed_log_prob(const Index& index, std::string_view term,
                                        std::string_view doc_id, double mu);

/// Mean of smoothed_log_prob over the query tokens that occur in the
/// collection. Throws Error(kEmptyQuery) when none do.
double ql_score(const Index& index, const TokenList& query, std::string_view doc_id, double mu);

/// final(d) = lambda * ql(q0, d) + (1 - lambda) * ql(round, d), or ql(q0, d)
/// alone when the round component has no usable terms. Returns the top
/// `depth` documents of the whole collection, ties broken by ascending doc_id.
RankedList rank_query(const Index& index, const TokenList& q0, const TokenList& round,
                      const RankerConfig& config);

RankedList interpolated_rank(const Index& index, const ClarificationRound& round,
                             CompositionSpec spec, const RankerConfig& config,
                             const Stoplist& stoplist);

/// `<id> Q0 <doc_id> <rank> <score> <tag>` lines, scores with 6 decimals.
std::string format_run(const std::vector<RankedList>& lists, std::string_view tag);

}  // namespace clarank
