#include <doctest.h>

#include <random>

#include "clarank/error.hpp"
#include "clarank/textproc.hpp"
#include "support.hpp"

using clarank::Stoplist;
using clarank::TokenList;
using clarank::tokenize;

TEST_CASE("tokenize splits on non-alphanumerics and lowercases") {
  CHECK(tokenize("No.") == TokenList{"no"});
  CHECK(tokenize("Yes, but I need to find a recipe") ==
        TokenList{"yes", "but", "i", "need", "to", "find", "a", "recipe"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("  ,,; ").empty());
  CHECK(tokenize("TREC 2009-2012 web_track") == TokenList{"trec", "2009", "2012", "web", "track"});
}

TEST_CASE("apostrophes inside words join the halves") {
  CHECK(tokenize("I don't know") == TokenList{"i", "dont", "know"});
  CHECK(tokenize("I don\xE2\x80\x99t know") == TokenList{"i", "dont", "know"});
  CHECK(tokenize("'quoted' words'") == TokenList{"quoted", "words"});
  CHECK(tokenize("rock 'n' roll") == TokenList{"rock", "n", "roll"});
  CHECK(tokenize("I do'nt know") == TokenList{"i", "dont", "know"});
}

TEST_CASE("non-ASCII bytes separate tokens") {
  CHECK(tokenize("caf\xC3\xA9 cr\xC3\xA8me") == TokenList{"caf", "cr", "me"});
}

TEST_CASE("tokenize is idempotent through a single-space join") {
  std::mt19937_64 rng(7);
  const std::string alphabet = "abcXYZ019 ,.'-!\t\xE2\x80\x99\xC3\xA9";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<std::size_t> len(0, 40);
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    const auto n = len(rng);
    for (std::size_t i = 0; i < n; ++i) s.push_back(alphabet[pick(rng)]);
    const auto once = tokenize(s);
    CHECK(tokenize(clarank::join_tokens(once)) == once);
    CHECK(tokenize(s) == once);
    for (const auto& t : once) {
      CHECK(!t.empty());
      CHECK(t.find_first_of(" \t\r\n") == std::string::npos);
    }
  }
}

TEST_CASE("remove_stopwords filters in order") {
  const Stoplist the({"the"});
  CHECK(remove_stopwords({"the", "atari"}, the) == TokenList{"atari"});
  CHECK(remove_stopwords({}, the).empty());

  const Stoplist small({"i", "am"});
  const TokenList input{"no", "i", "am", "looking"};
  // set-membership oracle
  TokenList expected;
  for (const auto& t : input) {
    if (!small.words().count(t)) expected.push_back(t);
  }
  CHECK(expected == TokenList{"no", "looking"});
  CHECK(remove_stopwords(input, small) == expected);
}

TEST_CASE("remove_stopwords never grows or reorders") {
  const auto& english = Stoplist::english();
  std::mt19937_64 rng(11);
  const TokenList pool{"the", "atari", "no", "yes", "games", "i", "am", "arcade", "of", "recipe"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    TokenList in;
    for (int i = 0; i < 12; ++i) in.push_back(pool[pick(rng)]);
    const auto out = remove_stopwords(in, english);
    CHECK(out.size() <= in.size());
    std::size_t j = 0;
    for (const auto& t : in) {
      if (j < out.size() && out[j] == t) ++j;
    }
    CHECK(j == out.size());  // out is a subsequence of in
  }
}

TEST_CASE("stoplist file format") {
  const auto list = Stoplist::parse("# comment\nthe\n\n  And \r\n#ignored\nof\n");
  CHECK(list.size() == 3);
  CHECK(list.contains("the"));
  CHECK(list.contains("and"));
  CHECK(list.contains("of"));
  CHECK_FALSE(list.contains("ignored"));
}

TEST_CASE("missing stoplist file is a configuration error") {
  try {
    (void)Stoplist::load("/nonexistent/stopwords.txt");
    FAIL("expected an error");
  } catch (const clarank::Error& e) {
    CHECK(e.code() == clarank::ErrorCode::kConfig);
  }
}

TEST_CASE("bundled stoplist matches the shipped file") {
  const auto from_file = Stoplist::load(testing_support::data_dir() / "stopwords.txt");
  CHECK(from_file.words() == Stoplist::english().words());
  CHECK(from_file.size() >= 250);
  CHECK_FALSE(from_file.contains("yes"));
  // every entry survives its own tokenization unchanged
  for (const auto& w : from_file.words()) CHECK(tokenize(w) == TokenList{w});
}
