#include "clarank/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "clarank/error.hpp"
#include "util.hpp"

namespace clarank {

namespace {

bool parse_int(const std::string& s, long long& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stoll(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stod(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size() && std::isfinite(out);
}

double gain(int grade) { return std::exp2(static_cast<double>(grade)) - 1.0; }

double discount(std::size_t rank) { return std::log2(static_cast<double>(rank) + 1.0); }

}  // namespace

void Qrels::set(const std::string& facet, const std::string& doc_id, int grade) {
  if (grade < 0) {
    ++clamped_;
    grade = 0;
  }
  facets_[facet][doc_id] = grade;
}

const Qrels::Judgments* Qrels::find(std::string_view facet) const {
  auto it = facets_.find(facet);
  return it == facets_.end() ? nullptr : &it->second;
}

Qrels Qrels::parse(std::string_view contents, std::string_view source) {
  Qrels qrels;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = detail::split_ws(line);
    if (fields.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    long long grade = 0;
    if (fields.size() != 4 || !parse_int(fields[3], grade)) {
      throw Error(ErrorCode::kParse, where + ": expected '<facet> 0 <doc_id> <grade>'");
    }
    if (grade > 30 || grade < -30) throw Error(ErrorCode::kParse, where + ": grade out of range");
    auto& judgments = qrels.facets_[fields[0]];
    if (judgments.count(fields[2])) {
      throw Error(ErrorCode::kParse, where + ": duplicate judgment for " + fields[0] + " " + fields[2]);
    }
    qrels.set(fields[0], fields[2], static_cast<int>(grade));
  }
  return qrels;
}

Qrels Qrels::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = detail::read_file(path);
  } catch (const Error&) {
    throw Error(ErrorCode::kIo, "cannot read qrels file: " + path.string());
  }
  return parse(text, path.string());
}

NdcgResult ndcg_at_k(const RankedList& list, const Qrels& qrels, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "NDCG cutoff must be at least 1");
  const auto facet = facet_of_conversation_id(list.id);
  const auto* judgments = qrels.find(facet);
  if (!judgments) {
    throw Error(ErrorCode::kMissingJudgments, "no judgments for facet '" + std::string(facet) + "'");
  }

  std::vector<int> grades;
  grades.reserve(judgments->size());
  for (const auto& [doc, grade] : *judgments) {
    if (grade > 0) grades.push_back(grade);
  }
  std::sort(grades.begin(), grades.end(), std::greater<>());
  double ideal = 0.0;
  for (std::size_t i = 0; i < std::min(k, grades.size()); ++i) ideal += gain(grades[i]) / discount(i + 1);
  if (ideal == 0.0) return {0.0, false};

  double dcg = 0.0;
  const std::size_t cutoff = std::min(k, list.entries.size());
  for (std::size_t i = 0; i < cutoff; ++i) {
    auto it = judgments->find(list.entries[i].doc_id);
    if (it != judgments->end() && it->second > 0) dcg += gain(it->second) / discount(i + 1);
  }
  return {std::clamp(dcg / ideal, 0.0, 1.0), true};
}

EvalResult evaluate(const std::vector<RankedList>& lists, const Qrels& qrels, std::size_t k) {
  std::vector<std::string> missing;
  for (const auto& list : lists) {
    const std::string facet(facet_of_conversation_id(list.id));
    if (!qrels.find(facet) && std::find(missing.begin(), missing.end(), facet) == missing.end()) {
      missing.push_back(facet);
    }
  }
  if (!missing.empty()) {
    std::string msg = "no judgments for " + std::to_string(missing.size()) + " facet(s):";
    for (const auto& m : missing) msg += " " + m;
    throw Error(ErrorCode::kMissingJudgments, msg);
  }

  EvalResult result;
  result.k = k;
  for (const auto& list : lists) {
    const auto ndcg = ndcg_at_k(list, qrels, k);
    if (!result.per_conversation.emplace(list.id, ndcg.value).second) {
      throw Error(ErrorCode::kDuplicateId, "ranked list id appears twice: " + list.id);
    }
    if (!ndcg.judgeable) result.unjudgeable.push_back(list.id);
  }
  double sum = 0.0;
  for (const auto& [id, value] : result.per_conversation) sum += value;
  result.mean = result.per_conversation.empty() ? 0.0 : sum / static_cast<double>(result.per_conversation.size());
  return result;
}

std::string eval_csv(const EvalResult& result) {
  std::string out = "key,ndcg\n";
  for (const auto& [key, value] : result.per_conversation) {
    out += key + "," + detail::format_fixed(value, 6) + "\n";
  }
  return out;
}

std::vector<RankedList> parse_run(std::string_view contents, std::string_view source) {
  std::vector<RankedList> lists;
  std::unordered_map<std::string, std::size_t> slot;
  std::unordered_map<std::string, std::unordered_set<std::string>> docs_seen;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = detail::split_ws(line);
    if (fields.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    long long rank = 0;
    double score = 0.0;
    if (fields.size() != 6 || !parse_int(fields[3], rank) || !parse_double(fields[4], score)) {
      throw Error(ErrorCode::kParse, where + ": expected '<id> Q0 <doc_id> <rank> <score> <tag>'");
    }
    auto [it, inserted] = slot.emplace(fields[0], lists.size());
    if (inserted) {
      lists.emplace_back();
      lists.back().id = fields[0];
    }
    auto& list = lists[it->second];
    if (rank != static_cast<long long>(list.entries.size()) + 1) {
      throw Error(ErrorCode::kRankGap, where + ": rank " + std::to_string(rank) + " for " + fields[0] +
                                           " breaks the contiguous sequence (expected " +
                                           std::to_string(list.entries.size() + 1) + ")");
    }
    if (!docs_seen[fields[0]].insert(fields[2]).second) {
      throw Error(ErrorCode::kParse, where + ": document " + fields[2] + " listed twice for " + fields[0]);
    }
    list.entries.push_back({fields[2], score, static_cast<std::size_t>(rank)});
  }
  return lists;
}

std::vector<RankedList> load_run(const std::filesystem::path& path) {
  std::string text;
  try {
    text = detail::read_file(path);
  } catch (const Error&) {
    throw Error(ErrorCode::kIo, "cannot read run file: " + path.string());
  }
  return parse_run(text, path.string());
}

}  // namespace clarank
