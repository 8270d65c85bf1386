#include "clarank/conversation.hpp"

#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "clarank/error.hpp"
#include "clarank/textproc.hpp"
#include "util.hpp"

namespace clarank {

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::kPositive: return "P";
    case Polarity::kNegative: return "N";
    case Polarity::kIdk: return "idk";
    case Polarity::kOther: return "O";
  }
  return "?";
}

std::string_view to_string(AnswerLength l) {
  return l == AnswerLength::kSingle ? "single" : "multi";
}

std::string to_string(AnswerType t) {
  return std::string(to_string(t.polarity)) + "," + std::string(to_string(t.length));
}

Polarity parse_polarity(std::string_view s) {
  for (auto p : kAllPolarities) {
    if (to_string(p) == s) return p;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown polarity '" + std::string(s) + "'");
}

AnswerLength parse_answer_length(std::string_view s) {
  for (auto l : kAllLengths) {
    if (to_string(l) == s) return l;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown answer length '" + std::string(s) + "'");
}

Polarity classify_polarity(std::string_view answer) {
  const auto tokens = tokenize(answer);
  for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
    if (tokens[i] == "i" && tokens[i + 1] == "dont" && tokens[i + 2] == "know") return Polarity::kIdk;
  }
  for (const auto& t : tokens) {
    if (t == "yes") return Polarity::kPositive;
    if (t == "no") return Polarity::kNegative;
  }
  return Polarity::kOther;
}

AnswerLength classify_length(std::string_view answer) {
  return tokenize(answer).size() > 1 ? AnswerLength::kMulti : AnswerLength::kSingle;
}

AnswerType classify(std::string_view answer) {
  return {classify_polarity(answer), classify_length(answer)};
}

std::string facet_key(std::string_view topic_id, std::string_view facet_id) {
  const std::string prefix = std::string(topic_id) + "-";
  if (facet_id.size() > prefix.size() && facet_id.substr(0, prefix.size()) == prefix) {
    return std::string(facet_id);
  }
  return prefix + std::string(facet_id);
}

std::string facet_key(const ClarificationRound& round) {
  return facet_key(round.topic_id, round.facet_id);
}

std::string question_hash(std::string_view question) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : question) {
    h ^= c;
    h *= 16777619u;
  }
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", h);
  return buf;
}

std::string conversation_id(const ClarificationRound& round) {
  return facet_key(round) + "#" + question_hash(round.question);
}

std::string_view facet_of_conversation_id(std::string_view id) {
  return id.substr(0, id.find('#'));
}

namespace {

std::string string_field(const nlohmann::json& obj, const char* field, const std::string& where,
                         bool allow_number) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) {
    throw Error(ErrorCode::kMissingField, where + ": missing field '" + field + "'");
  }
  if (it->is_string()) return it->get<std::string>();
  if (allow_number && it->is_number_integer()) return std::to_string(it->get<long long>());
  throw Error(ErrorCode::kParse, where + ": field '" + field + "' must be a string");
}

bool has_whitespace(const std::string& s) {
  return s.find_first_of(" \t\r\n\v\f") != std::string::npos;
}

}  // namespace

std::vector<ClarificationRound> parse_conversations_text(std::string_view contents,
                                                         std::string_view source) {
  std::vector<ClarificationRound> rounds;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, where + ": malformed JSON: " + e.what());
    }
    if (!obj.is_object()) throw Error(ErrorCode::kParse, where + ": expected a JSON object");

    ClarificationRound r;
    r.topic_id = string_field(obj, "topic_id", where, true);
    r.facet_id = string_field(obj, "facet_id", where, true);
    r.initial_query = string_field(obj, "initial_query", where, false);
    r.question = string_field(obj, "question", where, false);
    r.answer = string_field(obj, "answer", where, false);
    r.line = line_no;

    if (r.topic_id.empty() || r.facet_id.empty() || has_whitespace(r.topic_id) ||
        has_whitespace(r.facet_id)) {
      throw Error(ErrorCode::kParse, where + ": topic_id and facet_id must be non-empty without whitespace");
    }
    if (r.initial_query.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw Error(ErrorCode::kParse, where + ": initial_query is empty");
    }
    if (!seen.emplace(r.topic_id, r.facet_id, r.question).second) {
      throw Error(ErrorCode::kDuplicateId,
                  where + ": duplicate sample for topic " + r.topic_id + ", facet " + r.facet_id);
    }
    rounds.push_back(std::move(r));
  }
  return rounds;
}

std::vector<ClarificationRound> parse_conversations(const std::filesystem::path& path) {
  std::string contents;
  try {
    contents = detail::read_file(path);
  } catch (const Error&) {
    throw Error(ErrorCode::kIo, "cannot read conversations file: " + path.string());
  }
  return parse_conversations_text(contents, path.string());
}

}  // namespace clarank
