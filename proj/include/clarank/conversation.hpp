#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace clarank {

/// One single-round clarification sample: initial query, clarifying question
/// and the user's answer, for one facet of a topic.
struct ClarificationRound {
  std::string topic_id;
  std::string facet_id;
  std::string initial_query;
  std::string question;
  std::string answer;
  std::size_t line = 0;  // 1-based source line, 0 when built in memory
};

enum class Polarity : std::uint8_t { kPositive, kNegative, kIdk, kOther };
enum class AnswerLength : std::uint8_t { kSingle, kMulti };

struct AnswerType {
  Polarity polarity = Polarity::kOther;
  AnswerLength length = AnswerLength::kSingle;

  friend bool operator==(const AnswerType&, const AnswerType&) = default;
};

inline constexpr std::array<Polarity, 4> kAllPolarities = {Polarity::kPositive, Polarity::kNegative,
                                                          Polarity::kIdk, Polarity::kOther};
inline constexpr std::array<AnswerLength, 2> kAllLengths = {AnswerLength::kSingle,
                                                           AnswerLength::kMulti};

std::string_view to_string(Polarity p);     // "P", "N", "idk", "O"
std::string_view to_string(AnswerLength l); // "single", "multi"
std::string to_string(AnswerType t);        // "P,single"
Polarity parse_polarity(std::string_view s);
AnswerLength parse_answer_length(std::string_view s);

/// idk if the tokens contain "i dont know" contiguously; otherwise whichever of
/// "yes" / "no" occurs first decides P or N; otherwise O.
Polarity classify_polarity(std::string_view answer);

/// single iff the answer has at most one token (stopwords included).
AnswerLength classify_length(std::string_view answer);

AnswerType classify(std::string_view answer);

/// Qrels facet key. A facet_id that already carries its topic prefix
/// ("21-2" under topic "21") is used as is, otherwise "<topic>-<facet>".
std::string facet_key(std::string_view topic_id, std::string_view facet_id);
std::string facet_key(const ClarificationRound& round);

/// 8 hex digits of the FNV-1a 32-bit hash of the raw question text.
std::string question_hash(std::string_view question);

/// "<facet key>#<question hash>": the query id written to run files.
std::string conversation_id(const ClarificationRound& round);

/// The facet key part of a conversation id (everything before '#').
std::string_view facet_of_conversation_id(std::string_view id);

/// JSON-lines, one object per line with string fields topic_id, facet_id,
/// initial_query, question, answer. Numeric ids are accepted and converted.
std::vector<ClarificationRound> parse_conversations(const std::filesystem::path& path);
std::vector<ClarificationRound> parse_conversations_text(std::string_view contents,
                                                         std::string_view source = "<memory>");

}  // namespace clarank
