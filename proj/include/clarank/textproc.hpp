#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace clarank {

using TokenList = std::vector<std::string>;

/// Lowercases ASCII letters and splits on every run of characters that are not
/// ASCII letters or digits. An apostrophe (ASCII ' or U+2019) between two
/// alphanumerics is dropped and the two halves are joined, so "don't" becomes
/// "dont". Bytes outside ASCII act as separators.
TokenList tokenize(std::string_view text);

std::string join_tokens(const TokenList& tokens);

class Stoplist {
 public:
  Stoplist() = default;
  explicit Stoplist(std::unordered_set<std::string> words) : words_(std::move(words)) {}

  /// One token per line, '#' starts a comment line, blank lines ignored.
  /// Throws Error(kConfig) when the file cannot be opened.
  static Stoplist load(const std::filesystem::path& path);
  static Stoplist parse(std::string_view contents);

  /// The bundled English list (data/stopwords.txt compiled in).
  static const Stoplist& english();

  bool contains(std::string_view token) const {
    return words_.find(std::string(token)) != words_.end();
  }
  std::size_t size() const { return words_.size(); }
  const std::unordered_set<std::string>& words() const { return words_; }

 private:
  std::unordered_set<std::string> words_;
};

TokenList remove_stopwords(const TokenList& tokens, const Stoplist& stoplist);

// tokenize + remove_stopwords
TokenList analyze_text(std::string_view text, const Stoplist& stoplist);

}  // namespace clarank
