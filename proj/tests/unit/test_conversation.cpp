#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "clarank/conversation.hpp"
#include "clarank/error.hpp"
#include "clarank/textproc.hpp"
#include "support.hpp"

using namespace clarank;

TEST_CASE("polarity examples") {
  CHECK(classify_polarity("No") == Polarity::kNegative);
  CHECK(classify_polarity("Yes, but I need to find a recipe") == Polarity::kPositive);
  CHECK(classify_polarity("I don't know") == Polarity::kIdk);
  CHECK(classify_polarity("no i am looking for something else") == Polarity::kNegative);
  CHECK(classify_polarity("") == Polarity::kOther);
  CHECK(classify_polarity("yesterday nothing") == Polarity::kOther);
}

TEST_CASE("first of yes and no decides, idk wins over both") {
  CHECK(classify_polarity("no, yes") == Polarity::kNegative);
  CHECK(classify_polarity("yes and no") == Polarity::kPositive);
  CHECK(classify_polarity("I don't know, no") == Polarity::kIdk);
  CHECK(classify_polarity("i know dont") == Polarity::kOther);
  CHECK(classify_polarity("i dont really know") == Polarity::kOther);
}

TEST_CASE("length examples") {
  CHECK(classify_length("No.") == AnswerLength::kSingle);
  CHECK(classify_length("no i want something else") == AnswerLength::kMulti);
  CHECK(classify_length("Yes") == AnswerLength::kSingle);
  CHECK(classify_length("") == AnswerLength::kSingle);
  CHECK(classify_length("the") == AnswerLength::kSingle);
  CHECK(classify_length("the end") == AnswerLength::kMulti);
}

TEST_CASE("classification properties on random strings") {
  std::mt19937_64 rng(17);
  const std::vector<std::string> words{"yes", "no", "i", "dont", "don't", "know", "maybe", "the",
                                       "Yes,", "NO.", "recipe", "nope", "yesno"};
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<int> len(0, 8);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string answer;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) answer += words[pick(rng)] + " ";
    const auto tokens = tokenize(answer);
    const auto p = classify_polarity(answer);
    CHECK(classify_polarity(answer) == p);

    bool has_idk = false;
    for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
      has_idk |= tokens[i] == "i" && tokens[i + 1] == "dont" && tokens[i + 2] == "know";
    }
    bool has_yes_no = false;
    for (const auto& t : tokens) has_yes_no |= (t == "yes" || t == "no");
    if (!has_idk && !has_yes_no) CHECK(p == Polarity::kOther);
    if (has_idk) CHECK(p == Polarity::kIdk);

    CHECK((classify_length(answer) == AnswerLength::kSingle) == (tokens.size() <= 1));
  }
}

TEST_CASE("hand-labelled classifier fixture agrees completely") {
  std::ifstream in(testing_support::test_data_dir() / "classifier_fixture.tsv");
  REQUIRE(in);
  std::string line;
  std::size_t rows = 0;
  std::set<std::string> cells;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream s(line);
    std::string pol, len, answer;
    std::getline(s, pol, '\t');
    std::getline(s, len, '\t');
    std::getline(s, answer);
    const AnswerType expected{parse_polarity(pol), parse_answer_length(len)};
    CHECK_MESSAGE(classify(answer) == expected, answer);
    cells.insert(to_string(expected));
    ++rows;
  }
  CHECK(rows >= 20);
  CHECK(cells.size() == 7);
}

TEST_CASE("type names round-trip") {
  for (auto p : kAllPolarities) {
    CHECK(parse_polarity(to_string(p)) == p);
    for (auto l : kAllLengths) CHECK(parse_answer_length(to_string(l)) == l);
  }
  CHECK(to_string(AnswerType{Polarity::kNegative, AnswerLength::kMulti}) == "N,multi");
  CHECK_THROWS_AS((void)parse_polarity("maybe"), Error);
}

TEST_CASE("facet keys and conversation ids") {
  CHECK(facet_key("21", "21-2") == "21-2");
  CHECK(facet_key("21", "2") == "21-2");
  CHECK(facet_key("3", "31-1") == "3-31-1");
  // FNV-1a 32 of the empty string is the offset basis
  CHECK(question_hash("") == "811c9dc5");
  CHECK(question_hash("a") == "e40c292c");
  ClarificationRound r{"21", "21-2", "atari", "would you like to play atari arcade games online", "no", 0};
  const auto id = conversation_id(r);
  CHECK(id.rfind("21-2#", 0) == 0);
  CHECK(id.size() == std::string("21-2#").size() + 8);
  CHECK(facet_of_conversation_id(id) == "21-2");
  CHECK(facet_of_conversation_id("21-2") == "21-2");
}

TEST_CASE("parse conversations") {
  const auto rounds = parse_conversations_text(
      "{\"topic_id\":\"21\",\"facet_id\":\"21-2\",\"initial_query\":\"atari\","
      "\"question\":\"would you like to play atari arcade games online\",\"answer\":\"no\"}\n"
      "\n"
      "{\"topic_id\":21,\"facet_id\":3,\"initial_query\":\"atari\",\"question\":\"q\",\"answer\":\"\"}\n");
  REQUIRE(rounds.size() == 2);
  CHECK(rounds[0].initial_query == "atari");
  CHECK(rounds[0].line == 1);
  CHECK(rounds[1].topic_id == "21");
  CHECK(rounds[1].facet_id == "3");
  CHECK(rounds[1].line == 3);

  CHECK(parse_conversations_text("").empty());

  testing_support::TempDir dir;
  testing_support::write_text(dir / "empty.jsonl", "");
  CHECK(parse_conversations(dir / "empty.jsonl").empty());
}

TEST_CASE("conversation parse errors") {
  auto code_and_message = [](const std::string& text) {
    try {
      (void)parse_conversations_text(text, "conv.jsonl");
    } catch (const Error& e) {
      return std::make_pair(e.code(), std::string(e.what()));
    }
    return std::make_pair(ErrorCode::kOk, std::string());
  };
  const std::string good =
      "{\"topic_id\":\"1\",\"facet_id\":\"1\",\"initial_query\":\"x\",\"question\":\"q\",\"answer\":\"a\"}\n";

  auto [c1, m1] = code_and_message(good + "{\"topic_id\":\"1\",\"facet_id\":\"2\",\"initial_query\":\"x\",\"question\":\"q\"}\n");
  CHECK(c1 == ErrorCode::kMissingField);
  CHECK(m1.find("answer") != std::string::npos);
  CHECK(m1.find(":2") != std::string::npos);

  auto [c2, m2] = code_and_message(good + good + "{oops\n");
  CHECK(c2 == ErrorCode::kDuplicateId);

  auto [c3, m3] = code_and_message(good + "{oops\n");
  CHECK(c3 == ErrorCode::kParse);
  CHECK(m3.find(":2") != std::string::npos);

  auto [c4, m4] = code_and_message(
      "{\"topic_id\":\"1\",\"facet_id\":\"1\",\"initial_query\":\"\",\"question\":\"q\",\"answer\":\"a\"}\n");
  CHECK(c4 == ErrorCode::kParse);

  CHECK_THROWS_AS((void)parse_conversations("/nonexistent/conv.jsonl"), Error);
}
