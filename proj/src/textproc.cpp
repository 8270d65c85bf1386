#include "clarank/textproc.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "clarank/error.hpp"

namespace clarank {

namespace {

bool is_alnum_ascii(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char lower_ascii(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

// Length of an apostrophe starting at text[i], or 0.
std::size_t apostrophe_width(std::string_view text, std::size_t i) {
  if (text[i] == '\'') return 1;
  // U+2019 RIGHT SINGLE QUOTATION MARK
  if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
      static_cast<unsigned char>(text[i + 1]) == 0x80 &&
      static_cast<unsigned char>(text[i + 2]) == 0x99) {
    return 3;
  }
  return 0;
}

}  // namespace

TokenList tokenize(std::string_view text) {
  TokenList tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_alnum_ascii(c)) {
      current.push_back(lower_ascii(c));
      ++i;
      continue;
    }
    if (!current.empty()) {
      const std::size_t width = apostrophe_width(text, i);
      if (width > 0 && i + width < text.size() &&
          is_alnum_ascii(static_cast<unsigned char>(text[i + width]))) {
        i += width;
        continue;
      }
      tokens.push_back(std::move(current));
      current.clear();
    }
    ++i;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string join_tokens(const TokenList& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

Stoplist Stoplist::parse(std::string_view contents) {
  std::unordered_set<std::string> words;
  std::istringstream in{std::string(contents)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::string word = line.substr(first, last - first + 1);
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return lower_ascii(c); });
    words.insert(std::move(word));
  }
  return Stoplist(std::move(words));
}

Stoplist Stoplist::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open stoplist file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

TokenList remove_stopwords(const TokenList& tokens, const Stoplist& stoplist) {
  TokenList out;
  out.reserve(tokens.size());
  std::copy_if(tokens.begin(), tokens.end(), std::back_inserter(out),
               [&](const std::string& t) { return !stoplist.contains(t); });
  return out;
}

TokenList analyze_text(std::string_view text, const Stoplist& stoplist) {
  return remove_stopwords(tokenize(text), stoplist);
}

}  // namespace clarank
