#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "clarank/ranker.hpp"

namespace clarank {

/// Graded judgments per facet key ("<topic>-<facet>").
class Qrels {
 public:
  using Judgments = std::map<std::string, int, std::less<>>;  // doc_id -> grade >= 0

  /// Lines `<facet key> 0 <doc_id> <grade>`. Negative grades are stored as 0
  /// and counted in clamped_count(). A repeated (facet, doc) pair is an error.
  static Qrels load(const std::filesystem::path& path);
  static Qrels parse(std::string_view contents, std::string_view source = "<memory>");

  void set(const std::string& facet, const std::string& doc_id, int grade);
  const Judgments* find(std::string_view facet) const;
  std::size_t facet_count() const { return facets_.size(); }
  std::size_t clamped_count() const { return clamped_; }

 private:
  std::map<std::string, Judgments, std::less<>> facets_;
  std::size_t clamped_ = 0;
};

struct NdcgResult {
  double value = 0.0;
  bool judgeable = true;  // false when the facet has no positive grade
};

/// NDCG@k with gain 2^grade - 1 and discount log2(rank + 1). The facet is
/// taken from the list id (text before '#'). Throws Error(kMissingJudgments)
/// when qrels hold no entry for it.
NdcgResult ndcg_at_k(const RankedList& list, const Qrels& qrels, std::size_t k);

struct EvalResult {
  std::map<std::string, double> per_conversation;
  std::vector<std::string> unjudgeable;
  double mean = 0.0;
  std::size_t k = 20;
};

/// Throws Error(kMissingJudgments) naming every facet absent from qrels.
EvalResult evaluate(const std::vector<RankedList>& lists, const Qrels& qrels, std::size_t k);

std::string eval_csv(const EvalResult& result);  // "key,ndcg" rows

/// TREC run format. Lines with the same id form one list in file order; ranks
/// within a list must be exactly 1..n (Error(kRankGap) otherwise).
std::vector<RankedList> load_run(const std::filesystem::path& path);
std::vector<RankedList> parse_run(std::string_view contents, std::string_view source = "<memory>");

}  // namespace clarank
