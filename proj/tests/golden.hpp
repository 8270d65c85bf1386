#pragma once
// Reference run-file writer for the golden fixture. Reads the JSON files
// directly and scores with the exhaustive oracle; compositions come from a
// hand-labelled list rather than the classifier and policy.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "oracle.hpp"

namespace golden {

inline std::string fnv1a_hex(const std::string& s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", h);
  return buf;
}

inline std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<nlohmann::json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

inline std::string reference_run(const std::filesystem::path& dir, const std::string& tag) {
  std::vector<clarank::Document> docs;
  for (const auto& j : read_jsonl(dir / "corpus.jsonl")) docs.push_back({j["doc_id"], j["text"]});
  const auto& stop = clarank::Stoplist::english();
  const oracle::BruteCorpus corpus(docs, stop);

  std::ifstream modes_in(dir / "expected_modes.txt");
  std::string out;
  for (const auto& conv : read_jsonl(dir / "conversations.jsonl")) {
    std::string mode;
    modes_in >> mode;
    const std::string q = conv["question"], a = conv["answer"];
    std::string parts;
    if (mode == "q0q" || mode == "q0qa") parts += q + " ";
    if (mode == "q0a" || mode == "q0qa") parts += a;
    const auto q0 = clarank::analyze_text(conv["initial_query"].get<std::string>(), stop);
    const auto round = clarank::analyze_text(parts, stop);
    const auto ranked = oracle::exhaustive_rank(corpus, q0, round, 0.5L, 2000.0L, 1000);
    const std::string facet = conv["facet_id"];
    const std::string id = facet + "#" + fnv1a_hex(q);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      char score[64];
      std::snprintf(score, sizeof score, "%.6f", static_cast<double>(ranked[i].score));
      out += id + " Q0 " + ranked[i].doc_id + " " + std::to_string(i + 1) + " " + score + " " + tag + "\n";
    }
  }
  return out;
}

}  // namespace golden
