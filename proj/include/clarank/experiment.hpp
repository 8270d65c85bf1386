#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "clarank/conversation.hpp"
#include "clarank/index.hpp"
#include "clarank/policy.hpp"
#include "clarank/ranker.hpp"

namespace clarank {

/// Settings shared by all pipeline commands. Populated from a key=value file
/// and then from command-line overrides through set().
struct ExperimentConfig {
  std::filesystem::path corpus;
  std::filesystem::path index;
  std::filesystem::path conversations;
  std::filesystem::path qrels;
  std::filesystem::path output_dir = ".";
  std::filesystem::path run_dir;  // where analyze looks for run.<mode>.txt; defaults to output_dir
  std::filesystem::path run_output;  // explicit run file path for rank
  std::filesystem::path stoplist;    // empty: bundled English list
  std::filesystem::path policy;      // empty: built-in heuristic table
  std::filesystem::path topics;      // optional topic filter, one id per line
  std::string reference;             // eval: run compared against the others

  double mu = 2000.0;
  double lambda = 0.5;
  std::size_t k = 20;
  std::size_t depth = 1000;
  std::uint64_t seed = 42;
  std::size_t test_topics = 40;
  std::string mode = "heuristic";
  unsigned threads = 1;
  std::size_t ngram_depth = 4;
  std::size_t min_count = 1;

  /// Throws Error(kConfig) for unknown keys or unparsable values. Keys use
  /// underscores or dashes interchangeably.
  void set(std::string_view key, std::string_view value);

  /// `key = value` lines; '#' starts a comment.
  void load_file(const std::filesystem::path& path);

  void validate() const;

  RankerConfig ranker() const { return {mu, lambda, depth}; }
  std::filesystem::path effective_run_dir() const { return run_dir.empty() ? output_dir : run_dir; }
};

// Topic split -------------------------------------------------------------------

/// Uniform integer in [0, bound) by rejection sampling, so the sequence is the
/// same on every platform (std::uniform_int_distribution is not).
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound);

struct TopicSplit {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

/// Deduplicates and sorts the topics, shuffles them with Fisher-Yates driven by
/// std::mt19937_64(seed) and holds out the first n_test. Both halves are
/// returned sorted. Throws Error(kConfig) unless n_test < number of topics.
TopicSplit split_topics(std::vector<std::string> topics, std::uint64_t seed, std::size_t n_test);

// Ranking ---------------------------------------------------------------------

struct RankMode {
  bool heuristic = false;
  CompositionSpec fixed;

  static RankMode parse(std::string_view name);  // q0|q0q|q0a|q0qa|heuristic
  std::string name() const;
};

struct ConversationRun {
  std::string id;
  std::optional<RankedList> list;  // empty when skipped
  CompositionSpec spec;
  std::string skip_reason;
};

/// Ranks every conversation. Heuristic mode classifies each answer and asks
/// the policy table for its composition. Conversations whose initial query
/// has no usable term are skipped, not dropped: they appear with an empty
/// list. Output order follows the input regardless of thread count.
std::vector<ConversationRun> rank_conversations(const Index& index,
                                                const std::vector<ClarificationRound>& rounds,
                                                RankMode mode, const PolicyTable& policy,
                                                const RankerConfig& config, const Stoplist& stoplist,
                                                unsigned threads = 1);

/// Sidecar log lines `<id>\tskipped\t<reason>` and `<id>\tdropped\t<term>`.
std::string format_rank_log(const std::vector<ConversationRun>& runs);

// Commands ----------------------------------------------------------------------
// Each writes its outputs atomically and returns a short human-readable summary.

std::string cmd_index_build(const ExperimentConfig& config);
std::string cmd_split(const ExperimentConfig& config);
std::string cmd_rank(const ExperimentConfig& config);
std::string cmd_eval(const ExperimentConfig& config, const std::vector<std::filesystem::path>& runs);
std::string cmd_analyze(const ExperimentConfig& config, std::string_view which);

std::filesystem::path run_path_for(const ExperimentConfig& config, std::string_view mode);

}  // namespace clarank
